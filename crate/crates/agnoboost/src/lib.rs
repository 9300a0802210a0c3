//! Agnostic boosting with recency-weighted sample reuse.
//!
//! The centerpiece is a potential-based booster that redraws only a small
//! fresh batch each round and reconstructs the rest of its training
//! distribution by relabeling examples stored in earlier rounds, so the
//! feature marginal fed to the weak learner never changes. Around it sit:
//!
//! - [`potential`]: the smooth piecewise potential and its derivatives;
//! - [`resampler`]: the recursive relabeled sampling distribution, in
//!   stochastic and fractional forms;
//! - [`booster`]: the round loop, branching rule, and parameter presets;
//! - [`weak_learners`]: decision stumps, degree-limited parity ERM, and
//!   exhaustive finite-class ERM;
//! - [`baselines`]: two prior-art agnostic boosters used as comparators;
//! - [`oracles`]: exact population functionals on small finite
//!   distributions plus empirical checks of the analysis identities;
//! - [`data`]: CSV ingestion, label noise, cross-validation folds, and
//!   synthetic generators;
//! - [`rl_sim`]: binary-action tabular MDPs, the trajectory sampler, and
//!   the policy-boosting outer loop.
//!
//! Scalar-generic core math (the potential, the pseudo-label probability,
//! the round-selection weights) is written against `num_traits` so exact
//! rational arithmetic can cross-check the floating-point paths; everything
//! else uses the crate-wide [`Real`] alias.

// Negated comparisons like `!(x > 0.0)` are used deliberately throughout:
// they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

/// The concrete scalar every non-generic code path uses.
pub type Real = f64;

pub mod baselines;
pub mod booster;
pub mod data;
pub mod oracles;
pub mod potential;
pub mod resampler;
pub mod rl_sim;
pub mod types;
pub mod weak_learners;

pub use booster::{boost, BoostConfig, BoostResult, Ensemble};
pub use types::{Classifier, LabeledExample, WeightedData};
