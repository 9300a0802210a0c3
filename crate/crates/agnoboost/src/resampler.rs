//! The recursive relabeled sampling distribution that reuses examples across
//! boosting rounds, in both stochastic and fractional (deterministic,
//! weighted) forms.
//!
//! Round 1 stores a fresh batch and resamples it uniformly with original
//! labels. Every later round `t` stores a fresh batch together with cached
//! margins of the previous ensemble and of the previous direction; a draw
//! first selects a round by geometric recency weights, then either replays a
//! stored example (round 1) or emits a pseudo-labeled copy whose label
//! distribution tracks the potential's first two derivatives.
//!
//! The geometric round-selection weights are `(1-sigma)^{t-1}` for round 1
//! and `sigma (1-sigma)^{t-s}` for round `s >= 2`, which is the fully
//! unrolled form of the recursion "with probability `1-sigma` defer to the
//! previous round's distribution".

use num_traits::One;
use rand::Rng;
use thiserror::Error;

use crate::potential::{phi_prime, phi_second, PotentialError, Scalar};
use crate::types::LabeledExample;
use crate::Real;

#[derive(Debug, Error)]
pub enum ResampleError {
    #[error("mixing parameter must be in (0, 1], got {0}")]
    InvalidMix(Real),
    #[error("step size must be finite and >= 0, got {0}")]
    InvalidStep(Real),
    #[error("eta_prime {eta_prime} outside [0, eta] with eta = {eta}")]
    InvalidEtaPrime { eta: Real, eta_prime: Real },
    #[error("round batch is empty")]
    EmptyBatch,
    #[error("reuse distribution has no rounds")]
    EmptyDistribution,
    #[error("snapshot length {margins} does not match batch length {batch}")]
    MismatchedSnapshot { batch: usize, margins: usize },
    #[error("cached margin is not finite")]
    NonFiniteMargin,
    #[error("first round must be raw (no relabeling at t = 1)")]
    FirstRoundMustBeRaw,
    #[error("raw rounds are only valid as the first round")]
    RawAfterFirstRound,
    #[error("pseudo-label probability {p} outside [0, 1]; sigma/eta/|h| misconfigured")]
    ProbabilityOutOfRange { p: Real },
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// Parameters of the pseudo-label probability: the step `eta`, the mixing
/// weight `sigma`, and the interpolation point `eta_prime` in `[0, eta]`.
#[derive(Clone, Copy, Debug)]
pub struct PseudoLabelParams<T> {
    pub eta: T,
    pub sigma: T,
    pub eta_prime: T,
}

impl<T: Scalar> PseudoLabelParams<T> {
    pub fn new(eta: T, sigma: T, eta_prime: T) -> Result<Self, ResampleError> {
        let to_real = |v: T| v.to_f64().unwrap_or(Real::NAN);
        if !(sigma > T::zero() && sigma <= T::one()) || !sigma.is_finite() {
            return Err(ResampleError::InvalidMix(to_real(sigma)));
        }
        if !(eta >= T::zero()) || !eta.is_finite() {
            return Err(ResampleError::InvalidStep(to_real(eta)));
        }
        if !(eta_prime >= T::zero() && eta_prime <= eta) {
            return Err(ResampleError::InvalidEtaPrime {
                eta: to_real(eta),
                eta_prime: to_real(eta_prime),
            });
        }
        Ok(Self {
            eta,
            sigma,
            eta_prime,
        })
    }
}

/// Probability that the pseudo label is `+1` for a stored example with
/// original label `y`, cached previous-ensemble margin `h_prev_margin`
/// and cached direction value `dir_value`:
///
/// ```text
/// p = 1/2 - [ sigma phi'(y H) y + eta phi''(y (H + eta' h)) h ] / (2 (eta + sigma))
/// ```
///
/// The result is a valid probability whenever `|dir_value|` is within the
/// range the boosting presets guarantee; anything outside `[0, 1]` is
/// reported as an invariant violation, never clamped.
pub fn pseudo_label_prob<T: Scalar>(
    y: i8,
    h_prev_margin: T,
    dir_value: T,
    params: &PseudoLabelParams<T>,
) -> Result<T, ResampleError> {
    debug_assert!(y == 1 || y == -1);
    let ys = T::from_i8(y).unwrap();
    let half = T::from_f64(0.5).unwrap();
    let two = T::one() + T::one();

    let first = params.sigma * phi_prime(ys * h_prev_margin)? * ys;
    let shifted = ys * (h_prev_margin + params.eta_prime * dir_value);
    let second = params.eta * phi_second(shifted)? * dir_value;
    let p = half - (first + second) / (two * (params.eta + params.sigma));

    if p >= T::zero() && p <= T::one() {
        Ok(p)
    } else {
        Err(ResampleError::ProbabilityOutOfRange {
            p: p.to_f64().unwrap_or(Real::NAN),
        })
    }
}

/// Unrolls the round-selection recursion over the given per-round mixing
/// weights (`mixes[i]` is the mix of round `i + 2`) and returns one weight
/// per round. Generic over the scalar so exact rational arithmetic can
/// cross-check the floating-point path.
pub fn unrolled_selection_weights<T>(mixes: &[T]) -> Vec<T>
where
    T: Clone + One + core::ops::Sub<Output = T> + core::ops::Mul<Output = T>,
{
    let mut weights = vec![T::one()];
    for mix in mixes {
        let keep = T::one() - mix.clone();
        for w in weights.iter_mut() {
            *w = w.clone() * keep.clone();
        }
        weights.push(mix.clone());
    }
    weights
}

/// Cached relabeling state for one round: margins of the previous ensemble
/// and values of the previous direction on every stored example, plus the
/// step that direction was applied with and the mixing weight.
#[derive(Clone, Debug)]
pub struct RelabelSnapshot {
    pub prev_margins: Vec<Real>,
    pub dir_values: Vec<Real>,
    pub step: Real,
    pub mix: Real,
}

/// One stored round: a fresh batch plus (for rounds after the first) its
/// relabeling snapshot.
#[derive(Clone, Debug)]
pub struct RoundRecord {
    pub round_index: usize,
    pub batch: Vec<LabeledExample>,
    pub relabel: Option<RelabelSnapshot>,
}

/// The reuse distribution: all stored rounds with geometric selection
/// weights. Immutable between round pushes; sampling takes a caller-owned
/// random stream, so concurrent sampling with independent streams is safe.
#[derive(Clone, Debug)]
pub struct ReuseDistribution {
    sigma: Real,
    rounds: Vec<RoundRecord>,
    weights: Vec<Real>,
    cdf: Vec<Real>,
}

impl ReuseDistribution {
    /// `sigma` is the per-round probability of relabeling a fresh example
    /// instead of deferring to the previous round. `sigma = 0` would make
    /// the round weights degenerate and is rejected.
    pub fn new(sigma: Real) -> Result<Self, ResampleError> {
        if !(sigma > 0.0 && sigma <= 1.0) || !sigma.is_finite() {
            return Err(ResampleError::InvalidMix(sigma));
        }
        Ok(Self {
            sigma,
            rounds: Vec::new(),
            weights: Vec::new(),
            cdf: Vec::new(),
        })
    }

    pub fn sigma(&self) -> Real {
        self.sigma
    }

    pub fn current_round(&self) -> usize {
        self.rounds.len()
    }

    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Per-round selection weights; they always sum to 1 by the telescoping
    /// of the geometric recursion.
    pub fn selection_weights(&self) -> &[Real] {
        &self.weights
    }

    /// Stores the first round's batch; it is resampled with original labels.
    pub fn push_raw_round(&mut self, batch: Vec<LabeledExample>) -> Result<(), ResampleError> {
        if !self.rounds.is_empty() {
            return Err(ResampleError::RawAfterFirstRound);
        }
        if batch.is_empty() {
            return Err(ResampleError::EmptyBatch);
        }
        self.rounds.push(RoundRecord {
            round_index: 1,
            batch,
            relabel: None,
        });
        self.weights = vec![1.0];
        self.rebuild_cdf();
        Ok(())
    }

    /// Stores a later round's batch with its cached margins. `prev_margins`
    /// holds the previous ensemble's value and `dir_values` the previous
    /// direction's value on each batch example; `step` is the step size the
    /// direction was applied with.
    pub fn push_relabel_round(
        &mut self,
        batch: Vec<LabeledExample>,
        prev_margins: Vec<Real>,
        dir_values: Vec<Real>,
        step: Real,
    ) -> Result<(), ResampleError> {
        if self.rounds.is_empty() {
            return Err(ResampleError::FirstRoundMustBeRaw);
        }
        if batch.is_empty() {
            return Err(ResampleError::EmptyBatch);
        }
        if prev_margins.len() != batch.len() || dir_values.len() != batch.len() {
            return Err(ResampleError::MismatchedSnapshot {
                batch: batch.len(),
                margins: prev_margins.len().min(dir_values.len()),
            });
        }
        if !(step >= 0.0) || !step.is_finite() {
            return Err(ResampleError::InvalidStep(step));
        }
        if prev_margins
            .iter()
            .chain(dir_values.iter())
            .any(|v| !v.is_finite())
        {
            return Err(ResampleError::NonFiniteMargin);
        }
        self.rounds.push(RoundRecord {
            round_index: self.rounds.len() + 1,
            batch,
            relabel: Some(RelabelSnapshot {
                prev_margins,
                dir_values,
                step,
                mix: self.sigma,
            }),
        });
        for w in self.weights.iter_mut() {
            *w *= 1.0 - self.sigma;
        }
        self.weights.push(self.sigma);
        self.rebuild_cdf();
        debug_assert!((self.weights.iter().sum::<Real>() - 1.0).abs() < 1e-12);
        Ok(())
    }

    fn rebuild_cdf(&mut self) {
        self.cdf.clear();
        let mut acc = 0.0;
        for w in &self.weights {
            acc += w;
            self.cdf.push(acc);
        }
    }

    fn select_round<R: Rng>(&self, rng: &mut R) -> usize {
        let u: Real = rng.gen();
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.rounds.len() - 1)
    }

    /// Draws one example: pick a round by the geometric weights, then either
    /// replay a stored example (round 1) or pseudo-label a fresh pick.
    pub fn sample_one<R: Rng>(&self, rng: &mut R) -> Result<LabeledExample, ResampleError> {
        if self.rounds.is_empty() {
            return Err(ResampleError::EmptyDistribution);
        }
        let round = &self.rounds[self.select_round(rng)];
        let i = rng.gen_range(0..round.batch.len());
        let ex = &round.batch[i];
        match &round.relabel {
            None => Ok(ex.clone()),
            Some(snap) => {
                let eta_prime = if snap.step > 0.0 {
                    rng.gen_range(0.0..snap.step)
                } else {
                    0.0
                };
                let params = PseudoLabelParams::new(snap.step, snap.mix, eta_prime)?;
                let p = pseudo_label_prob(ex.label, snap.prev_margins[i], snap.dir_values[i], &params)?;
                let label = if rng.gen::<Real>() < p { 1 } else { -1 };
                Ok(LabeledExample {
                    features: ex.features.clone(),
                    label,
                })
            }
        }
    }

    pub fn sample<R: Rng>(
        &self,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<LabeledExample>, ResampleError> {
        (0..count).map(|_| self.sample_one(rng)).collect()
    }

    /// Deterministic weighted expansion: every stored `(x, y)` contributes
    /// `(x, y)` and `(x, -y)` with weights `(1 + w)/2` and `(1 - w)/2`,
    /// where
    ///
    /// ```text
    /// w = (1 - sigma) phi'(y H_prev(x)) - phi'(y H_curr(x))
    /// ```
    ///
    /// is the eta'-integrated relabeling weight (`w = 1` for the raw first
    /// round), everything scaled by the round-selection weight and the batch
    /// size. Total mass is exactly 1.
    pub fn fractional_expand(&self) -> Result<Vec<(LabeledExample, Real)>, ResampleError> {
        if self.rounds.is_empty() {
            return Err(ResampleError::EmptyDistribution);
        }
        let mut out = Vec::new();
        for (round, &g) in self.rounds.iter().zip(&self.weights) {
            let per_example = g / round.batch.len() as Real;
            match &round.relabel {
                None => {
                    for ex in &round.batch {
                        out.push((ex.clone(), per_example));
                        out.push((ex.flipped(), 0.0));
                    }
                }
                Some(snap) => {
                    for (i, ex) in round.batch.iter().enumerate() {
                        let y = Real::from(ex.label);
                        let curr_margin = snap.prev_margins[i] + snap.step * snap.dir_values[i];
                        let w = (1.0 - snap.mix) * phi_prime(y * snap.prev_margins[i])?
                            - phi_prime(y * curr_margin)?;
                        out.push((ex.clone(), per_example * (1.0 + w) / 2.0));
                        out.push((ex.flipped(), per_example * (1.0 - w) / 2.0));
                    }
                }
            }
        }
        Ok(out)
    }
}
