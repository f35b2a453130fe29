//! The diagonal embedding of classical probability into quantum
//! probability. Component sizes of the classical space become the dims.

use super::{Effect, QChannel, QState};
use crate::classical::{Dist, FuzzyPred, Space, StochChannel};
use crate::matkernel::{CMatrix, DimList};

fn dims_of(space: &Space) -> DimList {
    DimList::new(space.dims()).expect("finite sets are non-empty")
}

/// `ω̂ = Σ_i ω(x_i) |i><i|`
pub fn hat_state(omega: &Dist) -> QState {
    QState {
        mat: CMatrix::diag_real(omega.probs()),
        dims: dims_of(omega.space()),
    }
}

/// `p̂ = Σ_i p(x_i) |i><i|`
pub fn hat_effect(p: &FuzzyPred) -> Effect {
    Effect {
        mat: CMatrix::diag_real(p.values()),
        dims: dims_of(p.space()),
    }
}

/// Diagonal blocks `ĉ_kk = diag_i c(x_i)(y_k)` and zero off-diagonal
/// blocks. Unital because the rows of `c` sum to one.
pub fn hat_channel(c: &StochChannel) -> QChannel {
    let n = c.dom().size();
    let m = c.cod().size();
    let mut blocks = Vec::with_capacity(m * m);
    for k in 0..m {
        for l in 0..m {
            if k == l {
                let column: Vec<f64> = (0..n).map(|x| c.row(x)[k]).collect();
                blocks.push(CMatrix::diag_real(&column));
            } else {
                blocks.push(CMatrix::zeros(n, n));
            }
        }
    }
    QChannel::assemble(
        dims_of(c.dom()),
        dims_of(c.cod()),
        blocks,
        super::channel::UNITAL_TOL,
    )
    .expect("stochastic rows give a unital map")
}
