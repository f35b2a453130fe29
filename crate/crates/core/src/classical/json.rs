//! JSON forms:
//! `Dist {"labels": [["t","t"], ...], "probs": [...]}` and
//! `StochChannel {"dom": [...], "cod": [...], "rows": [[...]]}`.
//!
//! Labels are written as tuples; a bare string is accepted on input for
//! single-component spaces. A label list must enumerate the full product in
//! row-major order.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Dist, FinSet, FuzzyPred, Space, StochChannel};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Tuple(Vec<String>),
    One(String),
}

impl LabelRepr {
    fn into_tuple(self) -> Vec<String> {
        match self {
            LabelRepr::Tuple(t) => t,
            LabelRepr::One(s) => vec![s],
        }
    }
}

fn labels_of(space: &Space) -> Vec<LabelRepr> {
    (0..space.size())
        .map(|i| LabelRepr::Tuple(space.label(i).into_iter().map(String::from).collect()))
        .collect()
}

fn space_from_labels(labels: Vec<LabelRepr>) -> Result<Space> {
    let tuples: Vec<Vec<String>> = labels.into_iter().map(LabelRepr::into_tuple).collect();
    let arity = tuples
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::Parse("empty label list".into()))?;
    if arity == 0 || tuples.iter().any(|t| t.len() != arity) {
        return Err(Error::Parse(
            "label tuples must share one non-zero length".into(),
        ));
    }
    let mut components = Vec::with_capacity(arity);
    for c in 0..arity {
        let mut seen: Vec<String> = Vec::new();
        for t in &tuples {
            if !seen.contains(&t[c]) {
                seen.push(t[c].clone());
            }
        }
        components.push(FinSet::new(seen)?);
    }
    let space = Space::new(components)?;
    if space.size() != tuples.len() {
        return Err(Error::Parse(format!(
            "{} labels do not form a full product of size {}",
            tuples.len(),
            space.size()
        )));
    }
    for (i, t) in tuples.iter().enumerate() {
        if space.label(i) != t.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::Parse(format!(
                "label {t:?} is out of row-major order"
            )));
        }
    }
    Ok(space)
}

#[derive(Serialize, Deserialize)]
struct DistRepr {
    labels: Vec<LabelRepr>,
    probs: Vec<f64>,
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DistRepr {
            labels: labels_of(&self.space),
            probs: self.probs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DistRepr::deserialize(d)?;
        let space = space_from_labels(r.labels).map_err(serde::de::Error::custom)?;
        Dist::new(space, r.probs).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PredRepr {
    labels: Vec<LabelRepr>,
    values: Vec<f64>,
}

impl Serialize for FuzzyPred {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PredRepr {
            labels: labels_of(&self.space),
            values: self.values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FuzzyPred {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PredRepr::deserialize(d)?;
        let space = space_from_labels(r.labels).map_err(serde::de::Error::custom)?;
        FuzzyPred::new(space, r.values).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    dom: Vec<LabelRepr>,
    cod: Vec<LabelRepr>,
    rows: Vec<Vec<f64>>,
}

impl Serialize for StochChannel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChannelRepr {
            dom: labels_of(&self.dom),
            cod: labels_of(&self.cod),
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StochChannel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ChannelRepr::deserialize(d)?;
        let dom = space_from_labels(r.dom).map_err(serde::de::Error::custom)?;
        let cod = space_from_labels(r.cod).map_err(serde::de::Error::custom)?;
        StochChannel::new(dom, cod, r.rows).map_err(serde::de::Error::custom)
    }
}
