//! Exact Bayesian inference for finite classical and quantum probability.
//!
//! Classical states, fuzzy predicates and stochastic channels live in
//! [`classical`]; density matrices, effects and completely positive maps in
//! [`quantum`]. [`correspond`] turns joint quantum states into a state plus
//! a channel and back, and computes crossover inference both ways.
//! [`verify`] checks the algebraic laws on random instances.

pub mod classical;
pub mod correspond;
pub mod error;
pub mod matkernel;
pub mod quantum;
pub mod smoking;
pub mod verify;

pub use classical::{Dist, FinSet, FuzzyPred, Space, StochChannel};
pub use correspond::JointQState;
pub use error::{Error, Result};
pub use matkernel::{CMatrix, DimList, C64};
pub use quantum::{Effect, QChannel, QState};
pub use verify::{run_suite, Suite, TrialReport};
