//! Finite-dimensional quantum probability.
//!
//! States are density matrices, predicates are effects `0 ≤ p ≤ I`, and
//! channels are completely positive maps stored in Heisenberg form (see
//! [`QChannel`]). Validity is the Born rule `tr(σ p)`. There are two ways
//! to condition a state on an effect:
//!
//! * lower, `σ|_p = √p σ √p / (σ ⊨ p)`, which satisfies the product rule;
//! * upper, `σ|^p = √σ p √σ / (σ ⊨ p)`, which satisfies Bayes' rule.
//!
//! On diagonal (classical) data both coincide with classical conditioning.

mod channel;
mod embed;
mod json;

pub use channel::{QChannel, StateImage};
pub use embed::{hat_channel, hat_effect, hat_state};

use std::fmt;

use crate::error::{Error, Result};
use crate::matkernel::{CMatrix, DimList, C64, PSD_CLIP_TOL};

/// Hermiticity and unit-trace tolerance for states and effects.
pub const STATE_TOL: f64 = 1e-9;
/// Validities at or below this cannot be conditioned on.
pub const MIN_VALIDITY: f64 = 1e-12;

fn check_operator(mat: &CMatrix, dims: &DimList) -> Result<()> {
    if !mat.is_square() || mat.rows() != dims.flat() {
        return Err(Error::Dimension(format!(
            "a {}x{} matrix does not live on a space with dims {dims}",
            mat.rows(),
            mat.cols()
        )));
    }
    let deviation = mat.hermitian_deviation();
    if deviation > STATE_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn require_dims(a: &DimList, b: &DimList, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("{what}: dims {a} vs {b}")));
    }
    Ok(())
}

/// A density matrix: Hermitian, positive semidefinite, trace one.
#[derive(Clone, Debug, PartialEq)]
pub struct QState {
    mat: CMatrix,
    dims: DimList,
}

impl QState {
    pub fn new(mat: CMatrix, dims: DimList) -> Result<Self> {
        check_operator(&mat, &dims)?;
        let trace = mat.trace()?;
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}")));
        }
        let min = mat.min_eigenvalue()?;
        if min < -PSD_CLIP_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(QState {
            mat: mat.hermitian_part(),
            dims,
        })
    }

    /// `|v><v| / <v|v>` on a single component.
    pub fn pure(v: &[C64]) -> Result<Self> {
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(
            CMatrix::outer(v).scale_real(1.0 / norm2),
            DimList::single(v.len())?,
        )
    }

    /// `I / n`
    pub fn maximally_mixed(dims: DimList) -> Self {
        let n = dims.flat();
        QState {
            mat: CMatrix::identity(n).scale_real(1.0 / n as f64),
            dims,
        }
    }

    /// The maximally entangled state `(1/n) Σ_{i,j} |ii><jj|` on `C^n ⊗ C^n`.
    pub fn cup(n: usize) -> Result<Self> {
        let dims = DimList::new(vec![n, n])?;
        Ok(QState {
            mat: cup_matrix(n),
            dims,
        })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Born rule `σ ⊨ p = tr(σ p)`, clamped to `[0, 1]`.
    pub fn validity(&self, p: &Effect) -> Result<f64> {
        require_dims(&self.dims, &p.dims, "validity")?;
        // tr(σp) = Σ_ij σ_ij p_ji = <σ†, p> and σ is Hermitian.
        let v = self.mat.hs_inner(&p.mat)?;
        Ok(v.re.clamp(0.0, 1.0))
    }

    fn checked_validity(&self, p: &Effect) -> Result<f64> {
        let v = self.validity(p)?;
        if v <= MIN_VALIDITY {
            return Err(Error::ZeroValidity(v));
        }
        Ok(v)
    }

    /// Lower conditioning `√p σ √p / (σ ⊨ p)`.
    pub fn cond_lower(&self, p: &Effect) -> Result<QState> {
        let v = self.checked_validity(p)?;
        let sp = p.mat.psd_sqrt()?;
        let m = &(&sp * &self.mat) * &sp;
        QState::new(m.scale_real(1.0 / v), self.dims.clone())
    }

    /// Upper conditioning `√σ p √σ / (σ ⊨ p)`.
    pub fn cond_upper(&self, p: &Effect) -> Result<QState> {
        let v = self.checked_validity(p)?;
        let ss = self.mat.psd_sqrt()?;
        let m = &(&ss * &p.mat) * &ss;
        QState::new(m.scale_real(1.0 / v), self.dims.clone())
    }

    pub fn tensor(&self, other: &QState) -> QState {
        QState {
            mat: self.mat.kron(&other.mat),
            dims: self.dims.concat(&other.dims),
        }
    }

    /// Partial trace over every component whose mask bit is `false`.
    pub fn marginal(&self, mask: &[bool]) -> Result<QState> {
        let dims = self.dims.select(mask)?;
        let mat = self.mat.partial_trace(&self.dims, mask)?;
        if dims.is_empty() {
            return Err(Error::Dimension(
                "a marginal must keep at least one component".into(),
            ));
        }
        Ok(QState { mat, dims })
    }

    /// Plain transpose in the computational basis.
    pub fn transpose(&self) -> QState {
        QState {
            mat: self.mat.transpose(),
            dims: self.dims.clone(),
        }
    }

    /// The same matrix with a different component split of equal flat size.
    pub fn with_dims(&self, dims: DimList) -> Result<QState> {
        if dims.flat() != self.dim() {
            return Err(Error::Dimension(format!(
                "cannot regroup dimension {} as {dims}",
                self.dim()
            )));
        }
        Ok(QState {
            mat: self.mat.clone(),
            dims,
        })
    }

    /// Frobenius distance between the matrices.
    pub fn dist(&self, other: &QState) -> f64 {
        self.mat.dist(&other.mat).unwrap_or(f64::INFINITY)
    }

    /// A state is also an effect.
    pub fn as_effect(&self) -> Effect {
        Effect {
            mat: self.mat.clone(),
            dims: self.dims.clone(),
        }
    }
}

pub(crate) fn cup_matrix(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n * n, n * n);
    let w = C64::new(1.0 / n as f64, 0.0);
    for i in 0..n {
        for j in 0..n {
            m[(i * n + i, j * n + j)] = w;
        }
    }
    m
}

/// A quantum predicate: Hermitian with spectrum in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    mat: CMatrix,
    dims: DimList,
}

impl Effect {
    pub fn new(mat: CMatrix, dims: DimList) -> Result<Self> {
        check_operator(&mat, &dims)?;
        let (values, _) = mat.eigh()?;
        let min = values.first().copied().unwrap_or(0.0);
        let max = values.last().copied().unwrap_or(0.0);
        if min < -PSD_CLIP_TOL || max > 1.0 + PSD_CLIP_TOL {
            return Err(Error::InvalidEffect(format!(
                "spectrum [{min:.3e}, {max:.3e}] is not inside [0, 1]"
            )));
        }
        Ok(Effect {
            mat: mat.hermitian_part(),
            dims,
        })
    }

    /// The identity effect.
    pub fn truth(dims: DimList) -> Self {
        Effect {
            mat: CMatrix::identity(dims.flat()),
            dims,
        }
    }

    pub fn falsum(dims: DimList) -> Self {
        let n = dims.flat();
        Effect {
            mat: CMatrix::zeros(n, n),
            dims,
        }
    }

    /// Projector onto the line spanned by `v`.
    pub fn projector(v: &[C64]) -> Result<Self> {
        Ok(QState::pure(v)?.as_effect())
    }

    /// `Σ_{i,j} |ii><jj| / n`, the cup matrix read as a predicate. It is a
    /// rank-one projection and therefore a valid effect.
    pub fn cap(n: usize) -> Result<Self> {
        Ok(Effect {
            mat: cup_matrix(n),
            dims: DimList::new(vec![n, n])?,
        })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// `p^⊥ = I − p`
    pub fn orthosupplement(&self) -> Effect {
        Effect {
            mat: &CMatrix::identity(self.dim()) - &self.mat,
            dims: self.dims.clone(),
        }
    }

    /// Sequential conjunction `p & q = √p q √p`.
    pub fn and_then(&self, q: &Effect) -> Result<Effect> {
        require_dims(&self.dims, &q.dims, "sequential conjunction")?;
        let sp = self.mat.psd_sqrt()?;
        Effect::new(&(&sp * &q.mat) * &sp, self.dims.clone())
    }

    pub fn tensor(&self, other: &Effect) -> Effect {
        Effect {
            mat: self.mat.kron(&other.mat),
            dims: self.dims.concat(&other.dims),
        }
    }

    /// Plain transpose in the computational basis.
    pub fn transpose(&self) -> Effect {
        Effect {
            mat: self.mat.transpose(),
            dims: self.dims.clone(),
        }
    }

    pub fn dist(&self, other: &Effect) -> f64 {
        self.mat.dist(&other.mat).unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for QState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "state on {}", self.dims)?;
        fmt::Display::fmt(&self.mat, f)
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "effect on {}", self.dims)?;
        fmt::Display::fmt(&self.mat, f)
    }
}
