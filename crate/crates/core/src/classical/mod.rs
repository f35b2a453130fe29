//! Finite discrete probability: distributions, fuzzy predicates and
//! stochastic channels over labelled sample spaces.
//!
//! Every object lives on a [`Space`], an ordered product of [`FinSet`]s.
//! Joint distributions keep their component structure so that marginal
//! masks such as `[1, 0, 0]` are unambiguous.

mod format;
pub use format::format_prob;
mod json;
pub mod semiexp;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matkernel::check_mask;

/// Sum-to-one tolerance for distributions and channel rows.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Negative probabilities down to `-CLAMP_TOL` are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;
/// Validities at or below this cannot be conditioned on.
pub const MIN_VALIDITY: f64 = 1e-12;
/// Marginal masses at or below this count as outside the support.
pub const MIN_SUPPORT: f64 = 1e-12;

/// A finite, non-empty set of distinct labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSet {
    labels: Vec<String>,
}

impl FinSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidSpace(
                "a sample space needs at least one label".into(),
            ));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate label {l:?}")));
            }
        }
        Ok(FinSet { labels })
    }

    /// The two-element space `{t, f}`.
    pub fn boolean() -> Self {
        FinSet {
            labels: vec!["t".into(), "f".into()],
        }
    }

    /// Labels `"0"`, `"1"`, ..., `"n-1"`.
    pub fn range(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// An ordered product of finite sets, flattened row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    components: Vec<FinSet>,
}

impl Space {
    pub fn new(components: Vec<FinSet>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidSpace(
                "a space needs at least one component".into(),
            ));
        }
        Ok(Space { components })
    }

    pub fn single(set: FinSet) -> Self {
        Space {
            components: vec![set],
        }
    }

    pub fn boolean() -> Self {
        Self::single(FinSet::boolean())
    }

    pub fn components(&self) -> &[FinSet] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    /// Number of points, the product of the component sizes.
    pub fn size(&self) -> usize {
        self.components.iter().map(FinSet::len).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(FinSet::len).collect()
    }

    /// The product space `self × other`.
    pub fn product(&self, other: &Space) -> Space {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Space { components }
    }

    /// Components `[from, to)`.
    pub fn slice(&self, from: usize, to: usize) -> Result<Space> {
        if from >= to || to > self.arity() {
            return Err(Error::InvalidSpace(format!(
                "component range {from}..{to} is empty or exceeds arity {}",
                self.arity()
            )));
        }
        Ok(Space {
            components: self.components[from..to].to_vec(),
        })
    }

    /// Per-component indices of a flat index.
    pub fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.arity()];
        for (c, set) in self.components.iter().enumerate().rev() {
            out[c] = flat % set.len();
            flat /= set.len();
        }
        out
    }

    /// Flat index of per-component indices.
    pub fn flat_index(&self, digits: &[usize]) -> usize {
        self.components
            .iter()
            .zip(digits)
            .fold(0, |acc, (set, &d)| acc * set.len() + d)
    }

    /// Label tuple of a flat index.
    pub fn label(&self, flat: usize) -> Vec<&str> {
        self.digits(flat)
            .into_iter()
            .zip(&self.components)
            .map(|(d, set)| set.labels[d].as_str())
            .collect()
    }

    /// Flat index of a label tuple.
    pub fn index_of(&self, labels: &[&str]) -> Option<usize> {
        if labels.len() != self.arity() {
            return None;
        }
        let digits: Option<Vec<usize>> = self
            .components
            .iter()
            .zip(labels)
            .map(|(set, l)| set.index_of(l))
            .collect();
        digits.map(|d| self.flat_index(&d))
    }

    fn require_same(&self, other: &Space, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch(format!(
                "{what}: {} vs {}",
                self.describe(),
                other.describe()
            )));
        }
        Ok(())
    }

    pub(crate) fn describe(&self) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|s| format!("{{{}}}", s.labels.join(",")))
            .collect();
        parts.join("×")
    }
}

/// A finite probability distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Dist {
    space: Space,
    probs: Vec<f64>,
}

impl Dist {
    /// Validates and stores `probs`, clamping tiny negatives to zero. Sums
    /// outside `1 ± 1e-9` are rejected, never renormalized.
    pub fn new(space: Space, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != space.size() {
            return Err(Error::InvalidState(format!(
                "{} probabilities for a space of size {}",
                probs.len(),
                space.size()
            )));
        }
        let mut probs = probs;
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -CLAMP_TOL {
                return Err(Error::InvalidState(format!(
                    "probability {p} at {:?}",
                    space.label(i)
                )));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(Dist { space, probs })
    }

    pub fn uniform(space: Space) -> Self {
        let n = space.size();
        Dist {
            space,
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// The point mass at a flat index.
    pub fn point(space: Space, index: usize) -> Result<Self> {
        let mut probs = vec![0.0; space.size()];
        *probs
            .get_mut(index)
            .ok_or_else(|| Error::InvalidState(format!("index {index} out of range")))? = 1.0;
        Ok(Dist { space, probs })
    }

    /// Convenience for a single-component distribution.
    pub fn on<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        probs: Vec<f64>,
    ) -> Result<Self> {
        Self::new(Space::single(FinSet::new(labels)?), probs)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, labels: &[&str]) -> Option<f64> {
        self.space.index_of(labels).map(|i| self.probs[i])
    }

    /// `ω ⊨ p`, the expected value of `p` under `ω`.
    pub fn validity(&self, p: &FuzzyPred) -> Result<f64> {
        self.space.require_same(&p.space, "validity")?;
        Ok(self.probs.iter().zip(&p.values).map(|(w, v)| w * v).sum())
    }

    /// `ω|_p`, Bayesian update by a fuzzy predicate.
    pub fn condition(&self, p: &FuzzyPred) -> Result<Dist> {
        let v = self.validity(p)?;
        if v <= MIN_VALIDITY {
            return Err(Error::ZeroValidity(v));
        }
        let probs = self
            .probs
            .iter()
            .zip(&p.values)
            .map(|(w, q)| w * q / v)
            .collect();
        Dist::new(self.space.clone(), probs)
    }

    /// Product state `ω₁ ⊗ ω₂`.
    pub fn tensor(&self, other: &Dist) -> Dist {
        let probs = self
            .probs
            .iter()
            .flat_map(|a| other.probs.iter().map(move |b| a * b))
            .collect();
        Dist {
            space: self.space.product(&other.space),
            probs,
        }
    }

    /// Sums out every component whose mask bit is `false`.
    pub fn marginal(&self, mask: &[bool]) -> Result<Dist> {
        check_mask(self.space.arity(), mask)?;
        let kept: Vec<FinSet> = self
            .space
            .components
            .iter()
            .zip(mask)
            .filter(|(_, &k)| k)
            .map(|(s, _)| s.clone())
            .collect();
        let out_space = Space::new(kept)
            .map_err(|_| Error::Dimension("a marginal must keep at least one component".into()))?;
        let mut probs = vec![0.0; out_space.size()];
        for (i, &p) in self.probs.iter().enumerate() {
            let digits: Vec<usize> = self
                .space
                .digits(i)
                .into_iter()
                .zip(mask)
                .filter(|(_, &k)| k)
                .map(|(d, _)| d)
                .collect();
            probs[out_space.flat_index(&digits)] += p;
        }
        Dist::new(out_space, probs)
    }

    /// Disintegrates a joint state on `X × Y` where `X` is the first
    /// component and `Y` the rest.
    pub fn extract(&self) -> Result<StochChannel> {
        self.extract_at(1)
    }

    /// Disintegration with `X` made of the first `split` components.
    ///
    /// Requires every point of `X` to carry marginal mass above `1e-12`.
    pub fn extract_at(&self, split: usize) -> Result<StochChannel> {
        let dom = self.space.slice(0, split)?;
        let cod = self.space.slice(split, self.space.arity())?;
        let m = cod.size();
        let mut rows = Vec::with_capacity(dom.size());
        for x in 0..dom.size() {
            let block = &self.probs[x * m..(x + 1) * m];
            let mass: f64 = block.iter().sum();
            if mass <= MIN_SUPPORT {
                return Err(Error::Support {
                    label: dom.label(x).join(","),
                });
            }
            rows.push(block.iter().map(|p| p / mass).collect());
        }
        StochChannel::new(dom, cod, rows)
    }

    /// Largest absolute probability difference; infinite on a space mismatch.
    pub fn max_deviation(&self, other: &Dist) -> f64 {
        if self.space != other.space {
            return f64::INFINITY;
        }
        max_abs_diff(&self.probs, &other.probs)
    }

    /// Convex combination `Σ_k weights[k] · dists[k]` over a common space.
    pub fn mixture(weights: &[f64], dists: &[Dist]) -> Result<Dist> {
        let first = dists
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        if weights.len() != dists.len() {
            return Err(Error::Dimension(
                "mixture weights and components differ in length".into(),
            ));
        }
        let mut probs = vec![0.0; first.probs.len()];
        for (w, d) in weights.iter().zip(dists) {
            first.space.require_same(&d.space, "mixture")?;
            for (acc, p) in probs.iter_mut().zip(&d.probs) {
                *acc += w * p;
            }
        }
        Dist::new(first.space.clone(), probs)
    }
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// A `[0, 1]`-valued function on a space.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyPred {
    space: Space,
    values: Vec<f64>,
}

impl FuzzyPred {
    /// Values within `1e-12` outside `[0, 1]` are clamped; others rejected.
    pub fn new(space: Space, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::InvalidEffect(format!(
                "{} values for a space of size {}",
                values.len(),
                space.size()
            )));
        }
        let mut values = values;
        for v in values.iter_mut() {
            if !v.is_finite() || *v < -CLAMP_TOL || *v > 1.0 + CLAMP_TOL {
                return Err(Error::InvalidEffect(format!("value {v} outside [0, 1]")));
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(FuzzyPred { space, values })
    }

    pub fn on<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        values: Vec<f64>,
    ) -> Result<Self> {
        Self::new(Space::single(FinSet::new(labels)?), values)
    }

    /// The constant-one predicate.
    pub fn truth(space: Space) -> Self {
        let n = space.size();
        FuzzyPred {
            space,
            values: vec![1.0; n],
        }
    }

    pub fn falsum(space: Space) -> Self {
        let n = space.size();
        FuzzyPred {
            space,
            values: vec![0.0; n],
        }
    }

    /// Sharp predicate holding exactly at one flat index.
    pub fn point(space: Space, index: usize) -> Result<Self> {
        let mut values = vec![0.0; space.size()];
        *values
            .get_mut(index)
            .ok_or_else(|| Error::InvalidEffect(format!("index {index} out of range")))? = 1.0;
        Ok(FuzzyPred { space, values })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pointwise product `p & q`.
    pub fn and_then(&self, other: &FuzzyPred) -> Result<FuzzyPred> {
        self.space
            .require_same(&other.space, "sequential conjunction")?;
        Ok(FuzzyPred {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `p^⊥ = 1 − p`
    pub fn orthosupplement(&self) -> FuzzyPred {
        FuzzyPred {
            space: self.space.clone(),
            values: self.values.iter().map(|v| 1.0 - v).collect(),
        }
    }

    /// Parallel conjunction `(p ⊗ q)(x, y) = p(x)·q(y)`.
    pub fn tensor(&self, other: &FuzzyPred) -> FuzzyPred {
        FuzzyPred {
            space: self.space.product(&other.space),
            values: self
                .values
                .iter()
                .flat_map(|a| other.values.iter().map(move |b| a * b))
                .collect(),
        }
    }

    pub fn max_deviation(&self, other: &FuzzyPred) -> f64 {
        if self.space != other.space {
            return f64::INFINITY;
        }
        max_abs_diff(&self.values, &other.values)
    }
}

/// A row-stochastic matrix `dom → D(cod)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochChannel {
    dom: Space,
    cod: Space,
    matrix: Vec<f64>,
}

impl StochChannel {
    pub fn new(dom: Space, cod: Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != dom.size() || rows.iter().any(|r| r.len() != cod.size()) {
            return Err(Error::InvalidChannel(format!(
                "expected {} rows of length {}",
                dom.size(),
                cod.size()
            )));
        }
        let mut matrix = Vec::with_capacity(dom.size() * cod.size());
        for (x, row) in rows.into_iter().enumerate() {
            let mut total = 0.0;
            for p in row {
                if !p.is_finite() || p < -CLAMP_TOL {
                    return Err(Error::InvalidChannel(format!(
                        "entry {p} in row {:?}",
                        dom.label(x)
                    )));
                }
                total += p;
                matrix.push(p.max(0.0));
            }
            if (total - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::InvalidChannel(format!(
                    "row {:?} sums to {total}",
                    dom.label(x)
                )));
            }
        }
        Ok(StochChannel { dom, cod, matrix })
    }

    /// A channel on a single `{t, f}` codomain from `P(t | x)` per input.
    pub fn from_truth_probs(dom: Space, p_true: &[f64]) -> Result<Self> {
        let rows = p_true.iter().map(|&p| vec![p, 1.0 - p]).collect();
        Self::new(dom, Space::boolean(), rows)
    }

    pub fn identity(space: Space) -> Self {
        let n = space.size();
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1.0;
        }
        StochChannel {
            dom: space.clone(),
            cod: space,
            matrix,
        }
    }

    /// `x ↦ ρ` for every `x`.
    pub fn constant(dom: Space, rho: &Dist) -> Self {
        let matrix = (0..dom.size())
            .flat_map(|_| rho.probs.iter().copied())
            .collect();
        StochChannel {
            dom,
            cod: rho.space.clone(),
            matrix,
        }
    }

    /// The copier `x ↦ 1|x, …, x>` with `copies` outputs.
    pub fn copy(space: Space, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::InvalidChannel(
                "copier needs at least one output".into(),
            ));
        }
        let mut cod = space.clone();
        for _ in 1..copies {
            cod = cod.product(&space);
        }
        let n = space.size();
        let m = cod.size();
        let mut matrix = vec![0.0; n * m];
        for x in 0..n {
            let digits: Vec<usize> = (0..copies).flat_map(|_| space.digits(x)).collect();
            matrix[x * m + cod.flat_index(&digits)] = 1.0;
        }
        Ok(StochChannel {
            dom: space,
            cod,
            matrix,
        })
    }

    pub fn dom(&self) -> &Space {
        &self.dom
    }

    pub fn cod(&self) -> &Space {
        &self.cod
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let m = self.cod.size();
        &self.matrix[x * m..(x + 1) * m]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dom.size()).map(|x| self.row(x).to_vec()).collect()
    }

    /// `c(x)` as a distribution.
    pub fn at(&self, x: usize) -> Dist {
        Dist {
            space: self.cod.clone(),
            probs: self.row(x).to_vec(),
        }
    }

    /// State transformation `c ≫ ω`.
    pub fn push(&self, omega: &Dist) -> Result<Dist> {
        self.dom
            .require_same(&omega.space, "state transformation")?;
        let m = self.cod.size();
        let mut probs = vec![0.0; m];
        for (x, &w) in omega.probs.iter().enumerate() {
            for (acc, &c) in probs.iter_mut().zip(self.row(x)) {
                *acc += w * c;
            }
        }
        Dist::new(self.cod.clone(), probs)
    }

    /// Predicate transformation `c ≪ q`.
    pub fn pull(&self, q: &FuzzyPred) -> Result<FuzzyPred> {
        self.cod
            .require_same(&q.space, "predicate transformation")?;
        let values = (0..self.dom.size())
            .map(|x| self.row(x).iter().zip(&q.values).map(|(c, v)| c * v).sum())
            .collect();
        FuzzyPred::new(self.dom.clone(), values)
    }

    /// Kleisli composite `self • first`: run `first`, then `self`.
    pub fn after(&self, first: &StochChannel) -> Result<StochChannel> {
        first.cod.require_same(&self.dom, "composition")?;
        let rows = (0..first.dom.size())
            .map(|x| self.push(&first.at(x)).map(|d| d.probs))
            .collect::<Result<Vec<_>>>()?;
        StochChannel::new(first.dom.clone(), self.cod.clone(), rows)
    }

    /// Parallel product `(c₁ ⊗ c₂)(x₁, x₂) = c₁(x₁) ⊗ c₂(x₂)`.
    pub fn tensor(&self, other: &StochChannel) -> StochChannel {
        let dom = self.dom.product(&other.dom);
        let cod = self.cod.product(&other.cod);
        let mut matrix = Vec::with_capacity(dom.size() * cod.size());
        for x1 in 0..self.dom.size() {
            for x2 in 0..other.dom.size() {
                for &a in self.row(x1) {
                    for &b in other.row(x2) {
                        matrix.push(a * b);
                    }
                }
            }
        }
        StochChannel { dom, cod, matrix }
    }

    /// Tupling `⟨c₁, …, c_k⟩ = (c₁ ⊗ … ⊗ c_k) • copy`, all on a common domain.
    pub fn tuple(channels: &[&StochChannel]) -> Result<StochChannel> {
        let (first, rest) = channels
            .split_first()
            .ok_or_else(|| Error::InvalidChannel("tupling needs at least one channel".into()))?;
        let mut product = (*first).clone();
        for c in rest {
            first.dom.require_same(&c.dom, "tupling")?;
            product = product.tensor(c);
        }
        product.after(&StochChannel::copy(first.dom.clone(), channels.len())?)
    }

    pub fn max_deviation(&self, other: &StochChannel) -> f64 {
        if self.dom != other.dom || self.cod != other.cod {
            return f64::INFINITY;
        }
        max_abs_diff(&self.matrix, &other.matrix)
    }
}

/// `pair(ω, c)(x, y) = ω(x)·c(x)(y)`, the joint state on `dom × cod`.
pub fn pair(omega: &Dist, c: &StochChannel) -> Result<Dist> {
    c.dom.require_same(&omega.space, "pairing")?;
    let probs = omega
        .probs
        .iter()
        .enumerate()
        .flat_map(|(x, &w)| c.row(x).iter().map(move |&p| w * p))
        .collect();
    Dist::new(c.dom.product(&c.cod), probs)
}

#[cfg(test)]
mod tests;
