//! Random generators for every object kind.
//!
//! Quantum states are Ginibre draws, effects are norm-scaled positive
//! matrices and channels come from isometries. Each is full rank with
//! probability one, which extraction needs.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::classical::{Dist, FuzzyPred, Space, StochChannel};
use crate::matkernel::{CMatrix, DimList, C64};
use crate::quantum::{Effect, QChannel, QState};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with independent complex standard-normal entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// `G G† / tr(G G†)` for a square Ginibre `G`.
pub fn random_qstate<R: Rng + ?Sized>(dims: &DimList, rng: &mut R) -> QState {
    let n = dims.flat();
    let g = ginibre(n, n, rng);
    let p = &g * &g.adjoint();
    let tr = p.trace().expect("square").re;
    QState::new(p.scale_real(1.0 / tr), dims.clone()).expect("Ginibre draws are valid states")
}

/// `u · P / ‖P‖` with `P = G G†` and `u` uniform on `(0, 1)`.
pub fn random_effect<R: Rng + ?Sized>(dims: &DimList, rng: &mut R) -> Effect {
    let n = dims.flat();
    let g = ginibre(n, n, rng);
    let p = &g * &g.adjoint();
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    Effect::new(p.scale_real(u / p.op_norm()), dims.clone())
        .expect("scaled draws are valid effects")
}

/// A random unital channel `in → out`.
///
/// Uses `r = max(m, ⌈n/m⌉)` Kraus operators (`m × n` each) cut from the
/// orthonormalized columns of an `(r·m) × n` Ginibre matrix, so that
/// `Σ K_r† K_r = I`.
pub fn random_qchannel<R: Rng + ?Sized>(
    in_dims: &DimList,
    out_dims: &DimList,
    rng: &mut R,
) -> QChannel {
    let n = in_dims.flat();
    let m = out_dims.flat();
    let r = m.max(n.div_ceil(m));
    let g = ginibre(r * m, n, rng);
    let q = DMatrix::from_row_slice(r * m, n, g.as_slice()).qr().q();
    let q = CMatrix::from_nalgebra(&q);
    let kraus: Vec<CMatrix> = (0..r)
        .map(|t| CMatrix::from_fn(m, n, |i, j| q[(t * m + i, j)]))
        .collect();
    QChannel::from_kraus(in_dims.clone(), out_dims.clone(), &kraus)
        .expect("isometry Kraus operators")
}

fn positive_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(1e-3..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Normalized uniform weights; every point gets positive mass.
pub fn random_dist<R: Rng + ?Sized>(space: &Space, rng: &mut R) -> Dist {
    Dist::new(space.clone(), positive_weights(space.size(), rng)).expect("normalized weights")
}

pub fn random_fuzzy_pred<R: Rng + ?Sized>(space: &Space, rng: &mut R) -> FuzzyPred {
    let values = (0..space.size()).map(|_| rng.random::<f64>()).collect();
    FuzzyPred::new(space.clone(), values).expect("values in [0, 1)")
}

pub fn random_stoch_channel<R: Rng + ?Sized>(
    dom: &Space,
    cod: &Space,
    rng: &mut R,
) -> StochChannel {
    let rows = (0..dom.size())
        .map(|_| positive_weights(cod.size(), rng))
        .collect();
    StochChannel::new(dom.clone(), cod.clone(), rows).expect("normalized rows")
}
