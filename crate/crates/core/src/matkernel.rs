//! Dense complex matrices and the handful of linear-algebra primitives the
//! probability layers are built from.
//!
//! Composite spaces use row-major flattening: the basis vector `|i,k>` of
//! `H ⊗ K` sits at flat index `i * dim(K) + k`, which is the same order
//! [`CMatrix::kron`] produces. Every index formula elsewhere in the crate
//! assumes this convention.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum entrywise deviation from `A = A†` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues in `[-PSD_CLIP_TOL, 0)` are treated as round-off and clipped.
pub const PSD_CLIP_TOL: f64 = 1e-10;
/// Smallest admissible ratio `λ_min / λ_max` for an inverse square root.
pub const INV_SQRT_COND: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Component dimensions of a composite space, e.g. `[3, 5]` for `C^3 ⊗ C^5`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Dimension(format!("component {pos} has dimension 0")));
        }
        Ok(DimList(dims))
    }

    /// A single component of dimension `n`.
    pub fn single(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Product of the component dimensions.
    pub fn flat(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Concatenation, the dimension list of a tensor product.
    pub fn concat(&self, other: &DimList) -> DimList {
        let mut dims = self.0.clone();
        dims.extend_from_slice(&other.0);
        DimList(dims)
    }

    /// The dimensions whose mask bit is set.
    pub fn select(&self, mask: &[bool]) -> Result<DimList> {
        check_mask(self.len(), mask)?;
        Ok(DimList(
            self.0
                .iter()
                .zip(mask)
                .filter(|(_, &keep)| keep)
                .map(|(&d, _)| d)
                .collect(),
        ))
    }
}

impl TryFrom<Vec<usize>> for DimList {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        DimList::new(dims)
    }
}

impl From<DimList> for Vec<usize> {
    fn from(d: DimList) -> Self {
        d.0
    }
}

impl fmt::Display for DimList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub(crate) fn check_mask(len: usize, mask: &[bool]) -> Result<()> {
    if mask.len() != len {
        return Err(Error::Dimension(format!(
            "mask has {} entries but there are {} components",
            mask.len(),
            len
        )));
    }
    Ok(())
}

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrixRepr", into = "CMatrixRepr")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v><v|`
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    /// `|i><j|` in dimension `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    fn require_same_shape(&self, other: &CMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(C64, C64) -> C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        self.scale(C64::new(s, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose, no conjugation.
    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Result<C64> {
        self.require_square("trace")?;
        Ok(self.diagonal().into_iter().sum())
    }

    /// Hilbert–Schmidt inner product `tr(A† B)`.
    pub fn hs_inner(&self, other: &CMatrix) -> Result<C64> {
        self.require_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let gram = &self.adjoint() * self;
        let eig = gram.to_nalgebra().symmetric_eigen();
        eig.eigenvalues
            .iter()
            .copied()
            .fold(0.0, f64::max)
            .max(0.0)
            .sqrt()
    }

    /// Frobenius distance `‖A − B‖_F`.
    pub fn dist(&self, other: &CMatrix) -> Result<f64> {
        Ok(self.try_sub(other)?.frobenius_norm())
    }

    /// Kronecker product with `(a⊗b)[i·rb + k, j·cb + l] = a[i,j]·b[k,l]`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = CMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise deviation from `A = A†`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(A + A†) / 2`
    pub fn hermitian_part(&self) -> CMatrix {
        self.zip_with(&self.adjoint(), |a, b| (a + b) * 0.5)
    }

    fn require_hermitian(&self) -> Result<()> {
        self.require_square("Hermitian decomposition")?;
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and a
    /// unitary whose columns are the matching eigenvectors.
    pub fn eigh(&self) -> Result<(Vec<f64>, CMatrix)> {
        self.require_hermitian()?;
        let eig = self.hermitian_part().to_nalgebra().symmetric_eigen();
        let n = self.rows;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (values, _) = self.eigh()?;
        Ok(values.first().copied().unwrap_or(0.0))
    }

    /// `U f(D) U†` for a Hermitian matrix `U D U†`.
    fn spectral_map(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = values.len();
        let mapped: Vec<f64> = values.iter().map(|&v| f(v)).collect();
        let out = CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| vectors[(i, k)] * mapped[k] * vectors[(j, k)].conj())
                .sum()
        });
        out.hermitian_part()
    }

    /// Square root of a positive semidefinite matrix.
    ///
    /// Eigenvalues in `[-1e-10, 0)` are clipped to zero; anything more
    /// negative is rejected.
    pub fn psd_sqrt(&self) -> Result<CMatrix> {
        let (values, vectors) = self.eigh()?;
        if let Some(&min) = values.first() {
            if min < -PSD_CLIP_TOL {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                });
            }
        }
        Ok(Self::spectral_map(&values, &vectors, |v| v.max(0.0).sqrt()))
    }

    /// Inverse square root of a positive definite matrix; errors when the
    /// smallest eigenvalue is below `1e-8` times the largest.
    pub fn psd_inv_sqrt(&self) -> Result<CMatrix> {
        let (values, vectors) = self.eigh()?;
        let (Some(&min), Some(&max)) = (values.first(), values.last()) else {
            return Ok(CMatrix::zeros(0, 0));
        };
        if min < -PSD_CLIP_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        if ratio <= INV_SQRT_COND {
            return Err(Error::Singular { ratio });
        }
        Ok(Self::spectral_map(&values, &vectors, |v| 1.0 / v.sqrt()))
    }

    /// Traces out every component whose mask bit is `false`.
    ///
    /// `dims` describes the component structure of this (square) matrix.
    pub fn partial_trace(&self, dims: &DimList, mask: &[bool]) -> Result<CMatrix> {
        check_mask(dims.len(), mask)?;
        self.require_square("partial trace")?;
        if dims.flat() != self.rows {
            return Err(Error::Dimension(format!(
                "dims {dims} describe a space of dimension {} but the matrix is {}x{}",
                dims.flat(),
                self.rows,
                self.cols
            )));
        }
        let d = dims.as_slice();
        let mut strides = vec![1usize; d.len()];
        for c in (0..d.len().saturating_sub(1)).rev() {
            strides[c] = strides[c + 1] * d[c + 1];
        }
        let offsets = |keep: bool| -> Vec<usize> {
            let mut offs = vec![0usize];
            for c in 0..d.len() {
                if mask[c] != keep {
                    continue;
                }
                offs = offs
                    .iter()
                    .flat_map(|&o| {
                        let stride = strides[c];
                        (0..d[c]).map(move |x| o + x * stride)
                    })
                    .collect();
            }
            offs
        };
        let kept = offsets(true);
        let traced = offsets(false);
        let n = kept.len();
        Ok(CMatrix::from_fn(n, n, |a, b| {
            traced
                .iter()
                .map(|&t| self[(kept[a] + t, kept[b] + t)])
                .sum()
        }))
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use the `try_*` methods when the
// shapes are not already known to agree.
impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                if z.im.abs() < 0.5 * 10f64.powi(-(prec as i32)) {
                    write!(f, "{:>w$.prec$}", z.re, w = prec + 3)?;
                } else {
                    let sign = if z.im < 0.0 { '-' } else { '+' };
                    write!(f, "{:.prec$}{sign}{:.prec$}i", z.re, z.im.abs())?;
                }
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CMatrixRepr {
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<CMatrixRepr> for CMatrix {
    type Error = Error;

    fn try_from(r: CMatrixRepr) -> Result<Self> {
        let shape_ok = |parts: &Vec<Vec<f64>>| {
            parts.len() == r.rows && parts.iter().all(|row| row.len() == r.cols)
        };
        if !shape_ok(&r.re) || !shape_ok(&r.im) {
            return Err(Error::Parse(format!(
                "re/im arrays do not match declared shape {}x{}",
                r.rows, r.cols
            )));
        }
        let data =
            r.re.iter()
                .flatten()
                .zip(r.im.iter().flatten())
                .map(|(&re, &im)| C64::new(re, im))
                .collect();
        CMatrix::new(r.rows, r.cols, data)
    }
}

impl From<CMatrix> for CMatrixRepr {
    fn from(m: CMatrix) -> Self {
        let part = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.rows)
                .map(|i| (0..m.cols).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        CMatrixRepr {
            rows: m.rows,
            cols: m.cols,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }
}
