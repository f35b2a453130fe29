//! Randomized checking of the algebraic laws.
//!
//! [`run_suite`] draws `trials` independent instances, evaluates both sides
//! of every equation in the suite and keeps the largest deviation. Trial `t`
//! uses its own ChaCha stream derived from `(seed, t)`, so the report does
//! not depend on how trials are scheduled. Inequalities are checked by
//! searching for the instance with the largest gap.

pub mod gen;
mod suites;

pub use suites::{fixed_witness_inputs, WITNESS_THRESHOLD};

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// A named group of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    ClassicalBayes,
    Semiexp,
    QuantumBayes,
    QuantumDuality,
    PairExtract,
    Inference,
    Witnesses,
    Embedding,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::ClassicalBayes,
        Suite::Semiexp,
        Suite::QuantumBayes,
        Suite::QuantumDuality,
        Suite::PairExtract,
        Suite::Inference,
        Suite::Witnesses,
        Suite::Embedding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClassicalBayes => "classical-bayes",
            Suite::Semiexp => "semiexp",
            Suite::QuantumBayes => "quantum-bayes",
            Suite::QuantumDuality => "quantum-duality",
            Suite::PairExtract => "pair-extract",
            Suite::Inference => "inference",
            Suite::Witnesses => "witnesses",
            Suite::Embedding => "embedding",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Parse(format!(
                    "unknown suite {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Outcome of one equation over all trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationResult {
    pub name: String,
    /// Infinite (serialized as `null`) when no trial evaluated it.
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
    /// Trials that produced a value for this equation.
    pub evaluated: usize,
}

/// Best instance found for an inequality, with its inputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub name: String,
    pub deviation: f64,
    /// The claim counts as witnessed when `deviation > threshold`.
    pub threshold: f64,
    pub found: bool,
    /// `None` for fixed analytic witnesses.
    pub trial: Option<usize>,
    pub inputs: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub equations: Vec<EquationResult>,
    pub witnesses: Vec<Witness>,
    pub trial_errors: usize,
    pub first_error: Option<String>,
    pub pass: bool,
}

impl TrialReport {
    pub fn failures(&self) -> Vec<String> {
        let eqs = self
            .equations
            .iter()
            .filter(|e| !e.pass)
            .map(|e| e.name.clone());
        let ws = self
            .witnesses
            .iter()
            .filter(|w| !w.found)
            .map(|w| w.name.clone());
        eqs.chain(ws).collect()
    }

    pub fn equation(&self, name: &str) -> Option<&EquationResult> {
        self.equations.iter().find(|e| e.name == name)
    }

    pub fn witness(&self, name: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.name == name)
    }
}

impl fmt::Display for TrialReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        writeln!(
            f,
            "suite {}  seed {}  trials {}  dims [{}]",
            self.suite,
            self.seed,
            self.trials,
            dims.join(",")
        )?;
        for e in &self.equations {
            let mark = if e.pass { "ok  " } else { "FAIL" };
            writeln!(
                f,
                "  {mark} {:<40} max_dev {:.3e}  tol {:.0e}",
                e.name, e.max_dev, e.tol
            )?;
        }
        for w in &self.witnesses {
            let mark = if w.found { "ok  " } else { "FAIL" };
            writeln!(
                f,
                "  {mark} {:<40} deviation {:.6}  threshold {}",
                w.name, w.deviation, w.threshold
            )?;
        }
        if self.trial_errors > 0 {
            writeln!(f, "  {} trial(s) errored", self.trial_errors)?;
            if let Some(e) = &self.first_error {
                writeln!(f, "  first error: {e}")?;
            }
        }
        write!(f, "{}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Equation name and tolerance.
pub(crate) type EquationDef = (&'static str, f64);
/// Inequality name and the gap it must exceed.
pub(crate) type WitnessDef = (&'static str, f64);

/// What one trial produces: a deviation per equation (`None` where the
/// trial could not evaluate it) and a candidate per inequality.
pub(crate) struct TrialOutput {
    pub deviations: Vec<Option<f64>>,
    pub candidates: Vec<(f64, serde_json::Value)>,
}

/// Runs `trials` random instances of `suite`.
///
/// `dims` is the `(n, m)` split used by the two-component quantum suites.
/// `tol` overrides every equation's tolerance.
pub fn run_suite(
    suite: Suite,
    trials: usize,
    seed: u64,
    dims: (usize, usize),
    tol: Option<f64>,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::Parse("a suite needs at least one trial".into()));
    }
    if dims.0 == 0 || dims.1 == 0 {
        return Err(Error::Dimension("dims must be positive".into()));
    }
    let plan = suites::plan(suite, dims);
    let outputs: Vec<Result<TrialOutput>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            (plan.trial)(t, &mut rng)
        })
        .collect();

    let mut max_dev = vec![f64::NEG_INFINITY; plan.equations.len()];
    let mut evaluated = vec![0usize; plan.equations.len()];
    let mut best: Vec<Option<(f64, usize, serde_json::Value)>> = vec![None; plan.witnesses.len()];
    let mut trial_errors = 0;
    let mut first_error = None;
    for (t, out) in outputs.into_iter().enumerate() {
        let out = match out {
            Ok(out) => out,
            Err(e) => {
                trial_errors += 1;
                first_error.get_or_insert_with(|| format!("trial {t}: {e}"));
                continue;
            }
        };
        for (i, dev) in out.deviations.into_iter().enumerate() {
            if let Some(dev) = dev {
                let dev = if dev.is_nan() { f64::INFINITY } else { dev };
                max_dev[i] = max_dev[i].max(dev);
                evaluated[i] += 1;
            }
        }
        for (i, (dev, inputs)) in out.candidates.into_iter().enumerate() {
            if best[i].as_ref().is_none_or(|(b, _, _)| dev > *b) {
                best[i] = Some((dev, t, inputs));
            }
        }
    }

    let equations: Vec<EquationResult> = plan
        .equations
        .iter()
        .zip(max_dev)
        .zip(evaluated)
        .map(|((&(name, default_tol), dev), n)| {
            let tol = tol.unwrap_or(default_tol);
            let dev = if n == 0 { f64::INFINITY } else { dev };
            EquationResult {
                name: name.to_string(),
                max_dev: dev,
                tol,
                pass: dev < tol,
                evaluated: n,
            }
        })
        .collect();

    let mut witnesses = plan.fixed_witnesses;
    for (&(name, threshold), b) in plan.witnesses.iter().zip(best) {
        let (deviation, trial, inputs) = match b {
            Some((d, t, v)) => (d, Some(t), v),
            None => (0.0, None, serde_json::Value::Null),
        };
        witnesses.push(Witness {
            name: name.to_string(),
            deviation,
            threshold,
            found: deviation > threshold,
            trial,
            inputs,
        });
    }

    let pass = equations.iter().all(|e| e.pass) && witnesses.iter().all(|w| w.found);
    Ok(TrialReport {
        suite: suite.name().to_string(),
        seed,
        trials,
        dims: plan.dims,
        equations,
        witnesses,
        trial_errors,
        first_error,
        pass,
    })
}
