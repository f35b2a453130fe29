//! JSON forms: states and effects are the matrix form plus `"dims"` and
//! a `"kind"` tag (`"state"` or `"effect"`, optional on input); channels
//! are `{"in_dims", "out_dims", "blocks", "unital"}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Effect, QChannel, QState};
use crate::error::Error;
use crate::matkernel::{CMatrix, DimList};

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    #[serde(flatten)]
    mat: CMatrix,
    dims: DimList,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
}

impl OperatorRepr {
    fn check_kind<E: serde::de::Error>(&self, expected: &str) -> Result<(), E> {
        match &self.kind {
            Some(k) if k != expected => Err(E::custom(Error::Parse(format!(
                "expected kind {expected:?}, found {k:?}"
            )))),
            _ => Ok(()),
        }
    }
}

impl Serialize for QState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorRepr {
            mat: self.mat.clone(),
            dims: self.dims.clone(),
            kind: Some("state".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = OperatorRepr::deserialize(d)?;
        r.check_kind("state")?;
        QState::new(r.mat, r.dims).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Effect {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorRepr {
            mat: self.mat.clone(),
            dims: self.dims.clone(),
            kind: Some("effect".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Effect {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = OperatorRepr::deserialize(d)?;
        r.check_kind("effect")?;
        Effect::new(r.mat, r.dims).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    in_dims: DimList,
    out_dims: DimList,
    blocks: Vec<Vec<CMatrix>>,
    unital: bool,
}

impl Serialize for QChannel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChannelRepr {
            in_dims: self.in_dims().clone(),
            out_dims: self.out_dims().clone(),
            blocks: self.grid(),
            unital: self.is_unital(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QChannel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ChannelRepr::deserialize(d)?;
        let c = QChannel::new(r.in_dims, r.out_dims, r.blocks).map_err(serde::de::Error::custom)?;
        if c.is_unital() != r.unital {
            return Err(serde::de::Error::custom(Error::InvalidChannel(format!(
                "declared unital = {} but the blocks say {}",
                r.unital,
                c.is_unital()
            ))));
        }
        Ok(c)
    }
}
