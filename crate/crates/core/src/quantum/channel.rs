use std::fmt;

use super::{require_dims, Effect, QState, STATE_TOL};
use crate::error::{Error, Result};
use crate::matkernel::{CMatrix, DimList, C64};

/// Tolerance for `Σ_k c_kk = I` and for the sub-unitality check.
pub const UNITAL_TOL: f64 = 1e-9;
/// Smallest eigenvalue accepted for the block-assembled Choi matrix.
pub const CP_TOL: f64 = 1e-8;

/// A completely positive map `H → K` in Heisenberg form, i.e. a linear map
/// `B(K) → B(H)`.
///
/// With `dim H = n` and `dim K = m` it is stored as an `m × m` grid of
/// `n × n` blocks, block `(k, l)` being the image of `|k><l|`. Predicates
/// transform by linear extension, `c ≪ q = Σ q_kl c_kl`, and states by
/// `(c ≫ σ)_kl = tr(c_lk σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QChannel {
    in_dims: DimList,
    out_dims: DimList,
    blocks: Vec<CMatrix>,
    unital: bool,
}

/// Result of pushing a state through a possibly non-unital map.
#[derive(Clone, Debug, PartialEq)]
pub struct StateImage {
    pub mat: CMatrix,
    pub dims: DimList,
    pub trace: f64,
    /// Set when the trace differs from one by more than the state tolerance.
    pub subnormalized: bool,
}

impl StateImage {
    /// Rescales to unit trace.
    pub fn normalize(&self) -> Result<QState> {
        if self.trace <= super::MIN_VALIDITY {
            return Err(Error::ZeroValidity(self.trace));
        }
        QState::new(self.mat.scale_real(1.0 / self.trace), self.dims.clone())
    }
}

impl QChannel {
    /// Validates the block grid: shapes, the Hermiticity pattern
    /// `c_lk = c_kl†`, sub-unitality and complete positivity.
    pub fn new(in_dims: DimList, out_dims: DimList, grid: Vec<Vec<CMatrix>>) -> Result<Self> {
        let m = out_dims.flat();
        let n = in_dims.flat();
        if grid.len() != m || grid.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidChannel(format!(
                "expected a {m}x{m} grid of blocks"
            )));
        }
        let blocks: Vec<CMatrix> = grid.into_iter().flatten().collect();
        if blocks.iter().any(|b| b.rows() != n || b.cols() != n) {
            return Err(Error::InvalidChannel(format!(
                "every block must be {n}x{n}"
            )));
        }
        for k in 0..m {
            for l in k..m {
                let dev = blocks[k * m + l].dist(&blocks[l * m + k].adjoint())?;
                if dev > STATE_TOL {
                    return Err(Error::InvalidChannel(format!(
                        "blocks ({k},{l}) and ({l},{k}) are not adjoint (deviation {dev:.3e})"
                    )));
                }
            }
        }
        let channel = Self::assemble(in_dims, out_dims, blocks, UNITAL_TOL)?;
        let min = channel.choi().min_eigenvalue()?;
        if min < -CP_TOL {
            return Err(Error::InvalidChannel(format!(
                "not completely positive (Choi eigenvalue {min:.3e})"
            )));
        }
        Ok(channel)
    }

    /// Builds `A ↦ Σ_r K_r† A K_r` from Kraus operators `K_r : H → K`
    /// (each `m × n`). Complete positivity holds by construction.
    pub fn from_kraus(in_dims: DimList, out_dims: DimList, kraus: &[CMatrix]) -> Result<Self> {
        let n = in_dims.flat();
        let m = out_dims.flat();
        if kraus.iter().any(|k| k.rows() != m || k.cols() != n) {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators must be {m}x{n}"
            )));
        }
        let adjoints: Vec<CMatrix> = kraus.iter().map(CMatrix::adjoint).collect();
        let mut blocks = Vec::with_capacity(m * m);
        for k in 0..m {
            for l in 0..m {
                // K† |k><l| K = (row k of K)† (row l of K)
                let block = CMatrix::from_fn(n, n, |i, j| {
                    adjoints.iter().map(|a| a[(i, k)] * a[(j, l)].conj()).sum()
                });
                blocks.push(block);
            }
        }
        Self::assemble(in_dims, out_dims, blocks, UNITAL_TOL)
    }

    /// Stores blocks known to form a CP map, checking sub-unitality and
    /// setting the unital flag at tolerance `unital_tol`.
    pub(crate) fn assemble(
        in_dims: DimList,
        out_dims: DimList,
        blocks: Vec<CMatrix>,
        unital_tol: f64,
    ) -> Result<Self> {
        let n = in_dims.flat();
        let m = out_dims.flat();
        let mut unit_image = CMatrix::zeros(n, n);
        for k in 0..m {
            unit_image = &unit_image + &blocks[k * m + k];
        }
        let defect = &CMatrix::identity(n) - &unit_image;
        let unital = defect.max_abs() <= unital_tol;
        if !unital {
            let min = defect.min_eigenvalue()?;
            if min < -unital_tol {
                return Err(Error::InvalidChannel(format!(
                    "image of the identity exceeds the identity (eigenvalue {min:.3e} of I - c(I))"
                )));
            }
        }
        Ok(QChannel {
            in_dims,
            out_dims,
            blocks,
            unital,
        })
    }

    pub fn identity(dims: DimList) -> Self {
        let n = dims.flat();
        let blocks = (0..n * n)
            .map(|kl| CMatrix::unit(n, kl / n, kl % n))
            .collect();
        QChannel {
            in_dims: dims.clone(),
            out_dims: dims,
            blocks,
            unital: true,
        }
    }

    /// The assert map `A ↦ √p A √p`, a subchannel that is unital only for
    /// `p = I`.
    pub fn asrt(p: &Effect) -> Result<Self> {
        let sp = p.mat().psd_sqrt()?;
        let n = p.dim();
        let blocks = (0..n * n)
            .map(|kl| CMatrix::from_fn(n, n, |i, j| sp[(i, kl / n)] * sp[(kl % n, j)]))
            .collect();
        Self::assemble(p.dims().clone(), p.dims().clone(), blocks, UNITAL_TOL)
    }

    /// The unital channel `A ↦ tr(ρ A)` from the scalars to `ρ`'s space,
    /// so that pushing the trivial state yields `ρ`.
    pub fn preparation(rho: &QState) -> Self {
        let m = rho.dim();
        // c_kl = tr(ρ |k><l|) = ρ_lk, a 1x1 block
        let blocks = (0..m * m)
            .map(|kl| CMatrix::from_fn(1, 1, |_, _| rho.mat()[(kl % m, kl / m)]))
            .collect();
        QChannel {
            in_dims: DimList::single(1).expect("1 is a valid dimension"),
            out_dims: rho.dims().clone(),
            blocks,
            unital: true,
        }
    }

    /// The constant channel `σ ↦ ρ` on `dims`: blocks `ρ_lk · I`.
    pub fn constant(dims: DimList, rho: &QState) -> Self {
        let n = dims.flat();
        let m = rho.dim();
        let blocks = (0..m * m)
            .map(|kl| CMatrix::identity(n).scale(rho.mat()[(kl % m, kl / m)]))
            .collect();
        QChannel {
            in_dims: dims,
            out_dims: rho.dims().clone(),
            blocks,
            unital: true,
        }
    }

    pub fn in_dims(&self) -> &DimList {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &DimList {
        &self.out_dims
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// Block `c_kl`, the image of `|k><l|`.
    pub fn block(&self, k: usize, l: usize) -> &CMatrix {
        let m = self.out_dims.flat();
        &self.blocks[k * m + l]
    }

    pub fn grid(&self) -> Vec<Vec<CMatrix>> {
        let m = self.out_dims.flat();
        self.blocks.chunks(m).map(<[CMatrix]>::to_vec).collect()
    }

    /// Linear extension to an arbitrary operator on the output space.
    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        let m = self.out_dims.flat();
        let n = self.in_dims.flat();
        if a.rows() != m || a.cols() != m {
            return Err(Error::Dimension(format!(
                "channel acts on {m}x{m} operators, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let mut out = CMatrix::zeros(n, n);
        for (kl, block) in self.blocks.iter().enumerate() {
            let coeff = a[(kl / m, kl % m)];
            if coeff != C64::new(0.0, 0.0) {
                out = &out + &block.scale(coeff);
            }
        }
        Ok(out)
    }

    /// Predicate transformation `c ≪ q = Σ q_kl c_kl`.
    pub fn pull(&self, q: &Effect) -> Result<Effect> {
        require_dims(&self.out_dims, q.dims(), "predicate transformation")?;
        Effect::new(self.apply(q.mat())?, self.in_dims.clone())
    }

    /// `(c ≫ σ)_kl = tr(c_lk σ)` without normalization.
    pub fn push_operator(&self, sigma: &QState) -> Result<StateImage> {
        require_dims(&self.in_dims, sigma.dims(), "state transformation")?;
        let m = self.out_dims.flat();
        let sigma_t = sigma.mat().transpose();
        // tr(c_lk σ) = Σ_ij (c_lk)_ij σ_ji = <conj(c_lk), σ^T>
        let mat = CMatrix::from_fn(m, m, |k, l| {
            self.block(l, k)
                .conj()
                .hs_inner(&sigma_t)
                .expect("block and state have equal shape")
        });
        let trace = mat.trace()?.re;
        Ok(StateImage {
            mat,
            dims: self.out_dims.clone(),
            trace,
            subnormalized: (trace - 1.0).abs() > STATE_TOL,
        })
    }

    /// State transformation `c ≫ σ`. Fails with [`Error::Subnormalized`]
    /// when the image does not have unit trace, which happens for
    /// non-unital maps; use [`push_operator`](Self::push_operator) for those.
    pub fn push(&self, sigma: &QState) -> Result<QState> {
        let image = self.push_operator(sigma)?;
        if image.subnormalized {
            return Err(Error::Subnormalized { trace: image.trace });
        }
        QState::new(image.mat, image.dims)
    }

    /// Sequential composite `self • first`: run `first : H → K`, then
    /// `self : K → L`. In Heisenberg form its blocks are `first` applied
    /// to the blocks of `self`.
    pub fn after(&self, first: &QChannel) -> Result<QChannel> {
        require_dims(&first.out_dims, &self.in_dims, "composition")?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| first.apply(b))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(
            first.in_dims.clone(),
            self.out_dims.clone(),
            blocks,
            UNITAL_TOL,
        )
    }

    /// Parallel composition: block `((k1,k2),(l1,l2))` is `c1_{k1 l1} ⊗ c2_{k2 l2}`.
    pub fn tensor(&self, other: &QChannel) -> QChannel {
        let m1 = self.out_dims.flat();
        let m2 = other.out_dims.flat();
        let m = m1 * m2;
        let mut blocks = Vec::with_capacity(m * m);
        for k in 0..m {
            for l in 0..m {
                let (k1, k2) = (k / m2, k % m2);
                let (l1, l2) = (l / m2, l % m2);
                blocks.push(self.block(k1, l1).kron(other.block(k2, l2)));
            }
        }
        QChannel {
            in_dims: self.in_dims.concat(&other.in_dims),
            out_dims: self.out_dims.concat(&other.out_dims),
            blocks,
            unital: self.unital && other.unital,
        }
    }

    /// `Σ_kl |k><l| ⊗ c_kl`, positive semidefinite exactly when the map is
    /// completely positive.
    pub fn choi(&self) -> CMatrix {
        let n = self.in_dims.flat();
        let m = self.out_dims.flat();
        CMatrix::from_fn(m * n, m * n, |r, s| {
            self.block(r / n, s / n)[(r % n, s % n)]
        })
    }

    /// Frobenius distance over all blocks; infinite on a type mismatch.
    pub fn dist(&self, other: &QChannel) -> f64 {
        if self.in_dims != other.in_dims || self.out_dims != other.out_dims {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                let d = a.dist(b).unwrap_or(f64::INFINITY);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

impl fmt::Display for QChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.unital { "channel" } else { "subchannel" };
        writeln!(f, "{kind} {} -> {}", self.in_dims, self.out_dims)?;
        let m = self.out_dims.flat();
        for k in 0..m {
            for l in 0..m {
                writeln!(f, "block ({k},{l}):")?;
                fmt::Display::fmt(self.block(k, l), f)?;
            }
        }
        Ok(())
    }
}
