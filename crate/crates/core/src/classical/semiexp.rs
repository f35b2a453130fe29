//! Semi-exponentials in the category of finite stochastic channels.
//!
//! The exponent `X ⊸ Y` is the set of joint states on `X × Y` whose first
//! marginal has full support. Evaluation disintegrates such a state, and
//! abstraction pairs the uniform distribution on `X` with a family of
//! channels. The β-law and naturality hold; the η-law does not.

use super::{pair, Dist, Space, StochChannel};
use crate::error::{Error, Result};

/// `ev(τ, x) = extr(τ)(x)` for a joint state whose first `x_arity`
/// components form `X`.
pub fn ev(tau: &Dist, x_arity: usize, x: usize) -> Result<Dist> {
    let c = tau.extract_at(x_arity)?;
    if x >= c.dom().size() {
        return Err(Error::Dimension(format!("point {x} outside X")));
    }
    Ok(c.at(x))
}

/// `Λ(f)` for `f : Z × X → D(Y)`: a deterministic map sending each `z` to
/// the joint state `pair(uniform_X, f(z, -))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Abstraction {
    z: Space,
    x: Space,
    joints: Vec<Dist>,
}

impl Abstraction {
    /// `f`'s domain must be `Z × X` with `Z` its first `z_arity` components.
    pub fn new(f: &StochChannel, z_arity: usize) -> Result<Self> {
        let dom = f.dom();
        if z_arity == 0 || z_arity >= dom.arity() {
            return Err(Error::InvalidSpace(format!(
                "cannot split a {}-component domain into a non-empty Z of arity {z_arity} and X",
                dom.arity()
            )));
        }
        let z = dom.slice(0, z_arity)?;
        let x = dom.slice(z_arity, dom.arity())?;
        let nx = x.size();
        let uniform = Dist::uniform(x.clone());
        let joints = (0..z.size())
            .map(|zi| {
                let rows = (0..nx).map(|xi| f.row(zi * nx + xi).to_vec()).collect();
                let section = StochChannel::new(x.clone(), f.cod().clone(), rows)?;
                pair(&uniform, &section)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Abstraction { z, x, joints })
    }

    pub fn z_space(&self) -> &Space {
        &self.z
    }

    pub fn x_space(&self) -> &Space {
        &self.x
    }

    /// `Λ(f)(z)`
    pub fn at(&self, z: usize) -> &Dist {
        &self.joints[z]
    }

    pub fn joints(&self) -> &[Dist] {
        &self.joints
    }

    /// `Λ(f) • g` for `g : W → D(Z)`: each `w` goes to the `g(w)`-average of
    /// the joint states `Λ(f)(z)`.
    pub fn after(&self, g: &StochChannel) -> Result<Vec<Dist>> {
        if g.cod() != &self.z {
            return Err(Error::SpaceMismatch(format!(
                "channel codomain {} is not Z = {}",
                g.cod().describe(),
                self.z.describe()
            )));
        }
        (0..g.dom().size())
            .map(|w| Dist::mixture(g.row(w), &self.joints))
            .collect()
    }

    /// `ev • (Λ(f) ⊗ id)` as a channel `Z × X → D(Y)`; equals `f` by the β-law.
    pub fn evaluate(&self) -> Result<StochChannel> {
        let x_arity = self.x.arity();
        let mut rows = Vec::with_capacity(self.z.size() * self.x.size());
        let mut cod = None;
        for joint in &self.joints {
            let c = joint.extract_at(x_arity)?;
            cod.get_or_insert_with(|| c.cod().clone());
            rows.extend(c.rows());
        }
        let cod = cod.expect("Z is non-empty");
        StochChannel::new(self.z.product(&self.x), cod, rows)
    }
}

/// `Λ(ev)(τ) = pair(uniform_X, extr(τ))`. The η-law would require this to
/// return `τ`; it does so only when `τ`'s first marginal is uniform.
pub fn eta_image(tau: &Dist, x_arity: usize) -> Result<Dist> {
    let c = tau.extract_at(x_arity)?;
    pair(&Dist::uniform(c.dom().clone()), &c)
}
