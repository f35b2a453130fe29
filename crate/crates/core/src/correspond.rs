//! Joint quantum states versus a state paired with a channel.
//!
//! A joint state `τ` on `H ⊗ K` (dims `[n, m]`, basis `|i k>` flattened as
//! `i·m + k`) corresponds to the pair `(proj(τ), extr(τ))` of a state on
//! `H` and a unital channel `H → K`, provided the first marginal is
//! invertible. Conditioning one side of `τ` can then be computed either
//! directly on the joint (crossover) or through that pair (inference).

use std::fmt;

use crate::error::{Error, Result};
use crate::matkernel::{CMatrix, DimList};
use crate::quantum::{Effect, QChannel, QState};

/// Unitality tolerance for extracted channels.
pub const EXTRACT_UNITAL_TOL: f64 = 1e-8;

/// A state on a two-component space.
#[derive(Clone, Debug, PartialEq)]
pub struct JointQState {
    state: QState,
}

impl JointQState {
    pub fn new(state: QState) -> Result<Self> {
        if state.dims().len() != 2 {
            return Err(Error::Dimension(format!(
                "a joint state needs exactly two components, got dims {}",
                state.dims()
            )));
        }
        Ok(JointQState { state })
    }

    pub fn state(&self) -> &QState {
        &self.state
    }

    pub fn into_state(self) -> QState {
        self.state
    }

    /// `(n, m)`
    pub fn split(&self) -> (usize, usize) {
        let d = self.state.dims().as_slice();
        (d[0], d[1])
    }

    fn first_dims(&self) -> DimList {
        DimList::single(self.split().0).expect("component dims are positive")
    }

    fn second_dims(&self) -> DimList {
        DimList::single(self.split().1).expect("component dims are positive")
    }

    pub fn first_marginal(&self) -> QState {
        self.state.marginal(&[true, false]).expect("two components")
    }

    pub fn second_marginal(&self) -> QState {
        self.state.marginal(&[false, true]).expect("two components")
    }

    pub fn dist(&self, other: &JointQState) -> f64 {
        self.state.dist(&other.state)
    }
}

impl fmt::Display for JointQState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.state, f)
    }
}

fn single_dims(dims: &DimList, what: &str) -> Result<usize> {
    if dims.len() != 1 {
        return Err(Error::Dimension(format!(
            "{what} must live on a single component, got dims {dims}"
        )));
    }
    Ok(dims.flat())
}

fn require_unital(c: &QChannel) -> Result<()> {
    if !c.is_unital() {
        return Err(Error::InvalidChannel(
            "pairing needs a unital channel".into(),
        ));
    }
    Ok(())
}

/// `<ik| pair(σ, c) |jl> = conj((√σ c_kl √σ)_ij)`
pub fn pair(sigma: &QState, c: &QChannel) -> Result<JointQState> {
    if sigma.dims() != c.in_dims() {
        return Err(Error::Dimension(format!(
            "state dims {} vs channel input dims {}",
            sigma.dims(),
            c.in_dims()
        )));
    }
    single_dims(sigma.dims(), "the paired state")?;
    let m = single_dims(c.out_dims(), "the channel output")?;
    require_unital(c)?;
    let n = sigma.dim();
    let s = sigma.mat().psd_sqrt()?;
    let mut sandwiched = Vec::with_capacity(m * m);
    for k in 0..m {
        for l in 0..m {
            sandwiched.push(&(&s * c.block(k, l)) * &s);
        }
    }
    let mat = CMatrix::from_fn(n * m, n * m, |r, t| {
        let (i, k) = (r / m, r % m);
        let (j, l) = (t / m, t % m);
        sandwiched[k * m + l][(i, j)].conj()
    });
    let dims = DimList::new(vec![n, m])?;
    JointQState::new(QState::new(mat, dims)?)
}

/// The same joint state built as `(asrt_{σ^T} ⊗ c) ≫ cup`, rescaled by
/// `n` because the cup state here carries weight `1/n`.
pub fn pair_via_cup(sigma: &QState, c: &QChannel) -> Result<JointQState> {
    let n = single_dims(sigma.dims(), "the paired state")?;
    single_dims(c.out_dims(), "the channel output")?;
    require_unital(c)?;
    let a = QChannel::asrt(&sigma.transpose().as_effect())?;
    let image = a.tensor(c).push_operator(&QState::cup(n)?)?;
    let mat = image.mat.scale_real(n as f64);
    JointQState::new(QState::new(mat, image.dims)?)
}

/// `proj(τ) = M₁(τ)^T`
pub fn proj(tau: &JointQState) -> QState {
    tau.first_marginal().transpose()
}

/// `extr(τ)_kl = Σ_ij conj(<ik|τ|jl>) R|i><j|R` with `R = proj(τ)^{-1/2}`.
///
/// Fails with [`Error::Singular`] when `proj(τ)` is not invertible.
pub fn extract(tau: &JointQState) -> Result<QChannel> {
    let (n, m) = tau.split();
    let r = proj(tau).mat().psd_inv_sqrt()?;
    let t = tau.state().mat();
    let mut grid = Vec::with_capacity(m);
    for k in 0..m {
        let mut row = Vec::with_capacity(m);
        for l in 0..m {
            let b = CMatrix::from_fn(n, n, |i, j| t[(i * m + k, j * m + l)].conj());
            row.push(&(&r * &b) * &r);
        }
        grid.push(row);
    }
    let blocks = grid.into_iter().flatten().collect();
    let c = QChannel::assemble(
        tau.first_dims(),
        tau.second_dims(),
        blocks,
        EXTRACT_UNITAL_TOL,
    )?;
    if !c.is_unital() {
        return Err(Error::InvalidChannel(
            "extracted channel is not unital; the first marginal is badly conditioned".into(),
        ));
    }
    Ok(c)
}

/// Everything recoverable from a joint state: its projected state, the
/// extracted channel and the second marginal computed as `extr ≫ proj`.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub state: QState,
    pub channel: QChannel,
    pub second: QState,
}

pub fn recover(tau: &JointQState) -> Result<Recovery> {
    let state = proj(tau);
    let channel = extract(tau)?;
    let second = channel.push(&state)?;
    Ok(Recovery {
        state,
        channel,
        second,
    })
}

fn check_effect(p: &Effect, n: usize, side: &str) -> Result<()> {
    if p.dims().len() != 1 || p.dim() != n {
        return Err(Error::Dimension(format!(
            "evidence on the {side} component must have dims [{n}], got {}",
            p.dims()
        )));
    }
    Ok(())
}

/// `M₂(τ|_{p⊗1})`: lower-condition the joint state by evidence on the
/// first component and look at the second.
pub fn crossover_second(tau: &JointQState, p: &Effect) -> Result<QState> {
    let (n, _) = tau.split();
    check_effect(p, n, "first")?;
    let evidence = p.tensor(&Effect::truth(tau.second_dims()));
    let conditioned = tau.state().cond_lower(&evidence)?;
    Ok(JointQState::new(conditioned)?.second_marginal())
}

/// `extr(τ) ≫ (proj(τ)|^{p^T})`
pub fn inference_forward(tau: &JointQState, p: &Effect) -> Result<QState> {
    let (n, _) = tau.split();
    check_effect(p, n, "first")?;
    let updated = proj(tau).cond_upper(&p.transpose())?;
    extract(tau)?.push(&updated)
}

/// `M₁(τ|_{1⊗q})`
pub fn crossover_first(tau: &JointQState, q: &Effect) -> Result<QState> {
    let (_, m) = tau.split();
    check_effect(q, m, "second")?;
    let evidence = Effect::truth(tau.first_dims()).tensor(q);
    let conditioned = tau.state().cond_lower(&evidence)?;
    Ok(JointQState::new(conditioned)?.first_marginal())
}

/// `(proj(τ)|^{extr(τ) ≪ q})^T`
pub fn inference_backward(tau: &JointQState, q: &Effect) -> Result<QState> {
    let (_, m) = tau.split();
    check_effect(q, m, "second")?;
    let pulled = extract(tau)?.pull(q)?;
    Ok(proj(tau).cond_upper(&pulled)?.transpose())
}
