//! The sample-reuse agnostic booster: the round loop that draws a small
//! fresh batch, extends the reuse distribution, fits a weak hypothesis on
//! resampled (or fractionally expanded) data, branches between the scaled
//! weak hypothesis and the negated sign of the current ensemble, and
//! post-selects the best ensemble prefix on a fresh holdout.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::resampler::{ResampleError, ReuseDistribution};
use crate::types::{sign, Classifier, CountingSource, ExampleSource, SourceError, WeightedData};
use crate::weak_learners::{WeakLearner, WeakLearnError};
use crate::Real;

#[derive(Debug, Error)]
pub enum BoostError {
    #[error("invalid config: {field} = {value}")]
    InvalidConfig { field: &'static str, value: Real },
    #[error("weak learner failed at round {round}: {source}")]
    Learner {
        round: usize,
        source: WeakLearnError,
    },
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Resample(#[from] ResampleError),
}

/// One summand of the ensemble.
#[derive(Clone)]
pub enum ComponentKind {
    /// A base-class hypothesis scaled by `1/gamma`.
    ScaledWeak {
        hypothesis: Arc<dyn Classifier>,
        scale: Real,
    },
    /// Evaluates to minus the sign of the ensemble prefix strictly before it.
    NegSign,
}

impl std::fmt::Debug for ComponentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComponentKind::ScaledWeak { scale, .. } => write!(f, "ScaledWeak(scale={scale})"),
            ComponentKind::NegSign => write!(f, "NegSign"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleComponent {
    pub kind: ComponentKind,
    pub step: Real,
}

/// The real-valued running hypothesis: an ordered list of stepped
/// components. The empty ensemble evaluates to 0 everywhere.
#[derive(Clone, Debug, Default)]
pub struct Ensemble {
    pub components: Vec<EnsembleComponent>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Value of the first `len` components at `x`.
    pub fn prefix_value(&self, x: &[Real], len: usize) -> Real {
        let mut h = 0.0;
        for c in &self.components[..len] {
            h += c.step * Self::direction(&c.kind, h, x);
        }
        h
    }

    /// Full ensemble value at `x`.
    pub fn value(&self, x: &[Real]) -> Real {
        self.prefix_value(x, self.components.len())
    }

    /// All prefix values at `x` in one pass: entry `t` is the value of the
    /// first `t` components, starting with 0 for the empty prefix.
    pub fn prefix_values(&self, x: &[Real]) -> Vec<Real> {
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut h = 0.0;
        out.push(h);
        for c in &self.components {
            h += c.step * Self::direction(&c.kind, h, x);
            out.push(h);
        }
        out
    }

    /// Value of the prefix before the last component, and the last
    /// component's direction there. Panics on an empty ensemble.
    pub fn split_last_at(&self, x: &[Real]) -> (Real, Real) {
        let n = self.components.len();
        assert!(n > 0, "split_last_at on empty ensemble");
        let prev = self.prefix_value(x, n - 1);
        let dir = Self::direction(&self.components[n - 1].kind, prev, x);
        (prev, dir)
    }

    fn direction(kind: &ComponentKind, prefix_value: Real, x: &[Real]) -> Real {
        match kind {
            ComponentKind::ScaledWeak { hypothesis, scale } => {
                Real::from(hypothesis.predict(x)) * scale
            }
            ComponentKind::NegSign => -Real::from(sign(prefix_value)),
        }
    }
}

/// The sign of an ensemble prefix, packaged as a classifier. This is the
/// form of every post-selection candidate and of the final hypothesis.
#[derive(Clone)]
pub struct PrefixSignClassifier {
    pub ensemble: Arc<Ensemble>,
    pub prefix_len: usize,
}

impl Classifier for PrefixSignClassifier {
    fn predict(&self, x: &[Real]) -> i8 {
        sign(self.ensemble.prefix_value(x, self.prefix_len))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelabelMode {
    /// Draw `weak_batch` pseudo-labeled samples from the reuse distribution.
    Stochastic,
    /// Hand the learner the full deterministic weighted expansion.
    Fractional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepMode {
    Fixed,
    /// Step proportional to the chosen component's empirical correlation.
    AdaptiveCorrelation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchMode {
    /// Take the weak hypothesis iff its measured correlation exceeds the
    /// branching tolerance, strictly.
    Threshold,
    /// Take whichever of the scaled weak hypothesis and the negated ensemble
    /// sign measures better on the resampled batch.
    EmpiricalBest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentChoice {
    ScaledWeak,
    NegSign,
}

/// Explicit constants for every asymptotic parameter in the presets.
#[derive(Clone, Copy, Debug)]
pub struct ConstMultipliers {
    pub rounds: Real,
    pub step: Real,
    pub branch: Real,
    pub fresh: Real,
    pub holdout: Real,
    pub weak: Real,
}

impl Default for ConstMultipliers {
    fn default() -> Self {
        Self {
            rounds: 1.0,
            step: 1.0,
            branch: 1.0,
            fresh: 1.0,
            holdout: 1.0,
            weak: 1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoostConfig {
    pub gamma: Real,
    pub epsilon: Real,
    pub delta: Real,
    /// Number of boosting rounds `T`.
    pub rounds: usize,
    /// Base step size `eta`.
    pub step: Real,
    /// Mixing weight `sigma` of the reuse distribution.
    pub mix: Real,
    /// Branching tolerance `tau`.
    pub branch_threshold: Real,
    /// Fresh examples drawn per round `S`.
    pub fresh_per_round: usize,
    /// Examples resampled for the weak learner per round `m`
    /// (stochastic mode only).
    pub weak_batch: usize,
    /// Post-selection holdout size `S0`.
    pub final_holdout: usize,
    pub relabel_mode: RelabelMode,
    pub step_mode: StepMode,
    pub branch_mode: BranchMode,
}

impl BoostConfig {
    pub fn validate(&self) -> Result<(), BoostError> {
        let bad = |field, value| Err(BoostError::InvalidConfig { field, value });
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return bad("gamma", self.gamma);
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return bad("epsilon", self.epsilon);
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad("delta", self.delta);
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return bad("step", self.step);
        }
        if !(self.mix > 0.0 && self.mix <= 1.0) {
            return bad("mix", self.mix);
        }
        if !(self.branch_threshold >= 0.0) {
            return bad("branch_threshold", self.branch_threshold);
        }
        for (field, v) in [
            ("rounds", self.rounds),
            ("fresh_per_round", self.fresh_per_round),
            ("weak_batch", self.weak_batch),
            ("final_holdout", self.final_holdout),
        ] {
            if v == 0 {
                return bad(field, 0.0);
            }
        }
        Ok(())
    }

    /// Sample-optimal preset: rounds and step scale with the log class size,
    /// so one round needs only `O(1/(gamma epsilon))` fresh examples.
    ///
    /// With all multipliers at 1:
    /// `T = log_b / (g^2 e^2)`, `eta = g^2 e / log_b`, `sigma = eta / g`,
    /// `tau = g e`, `S = 1 / (g e)`, `S0 = 1 / e^2`, `m = 1 / (g^2 e^2)`.
    pub fn sample_optimal_with(
        gamma: Real,
        epsilon: Real,
        delta: Real,
        log_base_size: Real,
        consts: ConstMultipliers,
    ) -> Result<Self, BoostError> {
        Self::check_preset_inputs(gamma, epsilon, delta, log_base_size)?;
        let step = consts.step * gamma * gamma * epsilon / log_base_size;
        let cfg = Self {
            gamma,
            epsilon,
            delta,
            rounds: ceil_count(consts.rounds * log_base_size / (gamma * gamma * epsilon * epsilon)),
            step,
            mix: step / gamma,
            branch_threshold: consts.branch * gamma * epsilon,
            fresh_per_round: ceil_count(consts.fresh / (gamma * epsilon)),
            weak_batch: ceil_count(consts.weak / (gamma * gamma * epsilon * epsilon)),
            final_holdout: ceil_count(consts.holdout / (epsilon * epsilon)),
            relabel_mode: RelabelMode::Stochastic,
            step_mode: StepMode::Fixed,
            branch_mode: BranchMode::Threshold,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn sample_optimal(
        gamma: Real,
        epsilon: Real,
        delta: Real,
        log_base_size: Real,
    ) -> Result<Self, BoostError> {
        Self::sample_optimal_with(gamma, epsilon, delta, log_base_size, ConstMultipliers::default())
    }

    /// Oracle-efficient preset: fewer weak-learner calls at the cost of a
    /// larger per-round batch.
    ///
    /// With all multipliers at 1:
    /// `T = 1 / (g^2 e^2)`, `eta = g^2 e`, `sigma = eta / g`,
    /// `tau = g e`, `S = log_b / (g e) + log_b^3`, `S0 = 1 / e^2`,
    /// `m = 1 / (g^2 e^2)`.
    pub fn oracle_efficient_with(
        gamma: Real,
        epsilon: Real,
        delta: Real,
        log_base_size: Real,
        consts: ConstMultipliers,
    ) -> Result<Self, BoostError> {
        Self::check_preset_inputs(gamma, epsilon, delta, log_base_size)?;
        let step = consts.step * gamma * gamma * epsilon;
        let cfg = Self {
            gamma,
            epsilon,
            delta,
            rounds: ceil_count(consts.rounds / (gamma * gamma * epsilon * epsilon)),
            step,
            mix: step / gamma,
            branch_threshold: consts.branch * gamma * epsilon,
            fresh_per_round: ceil_count(
                consts.fresh * (log_base_size / (gamma * epsilon) + log_base_size.powi(3)),
            ),
            weak_batch: ceil_count(consts.weak / (gamma * gamma * epsilon * epsilon)),
            final_holdout: ceil_count(consts.holdout / (epsilon * epsilon)),
            relabel_mode: RelabelMode::Stochastic,
            step_mode: StepMode::Fixed,
            branch_mode: BranchMode::Threshold,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn oracle_efficient(
        gamma: Real,
        epsilon: Real,
        delta: Real,
        log_base_size: Real,
    ) -> Result<Self, BoostError> {
        Self::oracle_efficient_with(gamma, epsilon, delta, log_base_size, ConstMultipliers::default())
    }

    fn check_preset_inputs(
        gamma: Real,
        epsilon: Real,
        delta: Real,
        log_base_size: Real,
    ) -> Result<(), BoostError> {
        let bad = |field, value| Err(BoostError::InvalidConfig { field, value });
        if !(gamma > 0.0 && gamma <= 1.0) {
            return bad("gamma", gamma);
        }
        if !(epsilon > 0.0) {
            return bad("epsilon", epsilon);
        }
        if !(delta > 0.0 && delta < 1.0) {
            return bad("delta", delta);
        }
        if !(log_base_size > 0.0) {
            return bad("log_base_size", log_base_size);
        }
        Ok(())
    }
}

fn ceil_count(v: Real) -> usize {
    v.ceil().max(1.0) as usize
}

/// Branching rule: in `Threshold` mode the weak hypothesis is taken iff its
/// measured correlation strictly exceeds the tolerance; in `EmpiricalBest`
/// mode whichever of the scaled weak hypothesis and the negated ensemble
/// sign measured better wins (ties go to the weak hypothesis).
pub fn branch(corr_weak: Real, corr_neg_sign: Real, cfg: &BoostConfig) -> ComponentChoice {
    match cfg.branch_mode {
        BranchMode::Threshold => {
            if corr_weak > cfg.branch_threshold {
                ComponentChoice::ScaledWeak
            } else {
                ComponentChoice::NegSign
            }
        }
        BranchMode::EmpiricalBest => {
            if corr_weak / cfg.gamma >= corr_neg_sign {
                ComponentChoice::ScaledWeak
            } else {
                ComponentChoice::NegSign
            }
        }
    }
}

/// Step-size rule: the base step, or the base scaled by the (clamped)
/// empirical correlation of the chosen component.
pub fn adaptive_step(corr_hat: Real, base: Real, mode: StepMode) -> Real {
    match mode {
        StepMode::Fixed => base,
        StepMode::AdaptiveCorrelation => base * corr_hat.max(0.0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundTrace {
    pub round: usize,
    pub choice: ComponentChoice,
    /// Empirical correlation of the weak hypothesis on the round's batch.
    pub weak_corr: Real,
    /// Empirical correlation of `-sign(H_t)` on the same batch.
    pub neg_sign_corr: Real,
    pub step_used: Real,
    /// Training-set correlation after the update, where the algorithm has a
    /// fixed training set (baselines); `None` otherwise.
    pub train_corr: Option<Real>,
}

/// Mutable mid-run state: the ensemble so far and the reuse distribution.
/// Cloneable so verification code can replay rounds from a snapshot.
#[derive(Clone, Debug)]
pub struct BoostState {
    pub ensemble: Ensemble,
    pub reuse: ReuseDistribution,
    pub rounds_done: usize,
    pub trace: Vec<RoundTrace>,
}

#[derive(Clone)]
pub struct BoostResult {
    /// The post-selected classifier `sign(H_t)`.
    pub final_hypothesis: Arc<dyn Classifier>,
    /// Index `t` of the selected ensemble prefix (1-based; `t = 1` is the
    /// zero ensemble, `t = T + 1` the full one).
    pub chosen_round: usize,
    pub ensemble: Ensemble,
    pub trace: Vec<RoundTrace>,
    /// Holdout correlation of every candidate prefix sign, index `t - 1`.
    pub holdout_correlations: Vec<Real>,
    /// Total fresh examples drawn from the population source.
    pub samples_drawn: usize,
}

impl std::fmt::Debug for BoostResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoostResult")
            .field("chosen_round", &self.chosen_round)
            .field("rounds", &self.trace.len())
            .field("samples_drawn", &self.samples_drawn)
            .finish_non_exhaustive()
    }
}

/// A stepping run of the booster; `step` executes one round, `finish` runs
/// the rest plus holdout post-selection.
pub struct BoostRun<'a, S: ExampleSource, W: WeakLearner + ?Sized, R: Rng> {
    cfg: BoostConfig,
    source: CountingSource<'a, S>,
    learner: &'a W,
    rng: &'a mut R,
    state: BoostState,
}

impl<'a, S: ExampleSource, W: WeakLearner + ?Sized, R: Rng> BoostRun<'a, S, W, R> {
    pub fn new(
        cfg: BoostConfig,
        source: &'a mut S,
        learner: &'a W,
        rng: &'a mut R,
    ) -> Result<Self, BoostError> {
        cfg.validate()?;
        let reuse = ReuseDistribution::new(cfg.mix)?;
        Ok(Self {
            cfg,
            source: CountingSource::new(source),
            learner,
            rng,
            state: BoostState {
                ensemble: Ensemble::default(),
                reuse,
                rounds_done: 0,
                trace: Vec::new(),
            },
        })
    }

    pub fn state(&self) -> &BoostState {
        &self.state
    }

    pub fn config(&self) -> &BoostConfig {
        &self.cfg
    }

    /// Executes one boosting round.
    pub fn step(&mut self) -> Result<&RoundTrace, BoostError> {
        let t = self.state.rounds_done + 1;
        let batch = self.source.draw(self.cfg.fresh_per_round, self.rng)?;

        if t == 1 {
            self.state.reuse.push_raw_round(batch)?;
        } else {
            let mut prev_margins = Vec::with_capacity(batch.len());
            let mut dir_values = Vec::with_capacity(batch.len());
            for ex in &batch {
                let (prev, dir) = self.state.ensemble.split_last_at(&ex.features);
                prev_margins.push(prev);
                dir_values.push(dir);
            }
            let step = self.state.ensemble.components.last().unwrap().step;
            self.state
                .reuse
                .push_relabel_round(batch, prev_margins, dir_values, step)?;
        }

        let round_data = match self.cfg.relabel_mode {
            RelabelMode::Stochastic => {
                WeightedData::uniform(self.state.reuse.sample(self.cfg.weak_batch, self.rng)?)
            }
            RelabelMode::Fractional => {
                let expansion = self.state.reuse.fractional_expand()?;
                let (examples, weights) = expansion.into_iter().unzip();
                WeightedData::weighted(examples, weights)
            }
        };

        let weak = self
            .learner
            .fit(&round_data)
            .map_err(|source| BoostError::Learner { round: t, source })?;
        let weak_corr = round_data.correlation(weak.as_ref());
        let ensemble = &self.state.ensemble;
        let neg_sign_corr =
            round_data.correlation_real(|x| -Real::from(sign(ensemble.value(x))));

        let choice = branch(weak_corr, neg_sign_corr, &self.cfg);
        let (kind, chosen_corr) = match choice {
            ComponentChoice::ScaledWeak => (
                ComponentKind::ScaledWeak {
                    hypothesis: weak,
                    scale: 1.0 / self.cfg.gamma,
                },
                weak_corr,
            ),
            ComponentChoice::NegSign => (ComponentKind::NegSign, neg_sign_corr),
        };
        let step_used = adaptive_step(chosen_corr, self.cfg.step, self.cfg.step_mode);
        self.state.ensemble.components.push(EnsembleComponent { kind, step: step_used });

        self.state.trace.push(RoundTrace {
            round: t,
            choice,
            weak_corr,
            neg_sign_corr,
            step_used,
            train_corr: None,
        });
        self.state.rounds_done = t;
        Ok(self.state.trace.last().unwrap())
    }

    /// Runs any remaining rounds, draws the holdout, and post-selects the
    /// best ensemble prefix sign (smallest index on ties).
    pub fn finish(mut self) -> Result<BoostResult, BoostError> {
        while self.state.rounds_done < self.cfg.rounds {
            self.step()?;
        }
        let holdout = self.source.draw(self.cfg.final_holdout, self.rng)?;
        let samples_drawn = self.source.drawn();
        Ok(post_select(self.state, &holdout, samples_drawn))
    }
}

/// Holdout correlations of every prefix sign and the argmax choice.
pub(crate) fn post_select(
    state: BoostState,
    holdout: &[crate::types::LabeledExample],
    samples_drawn: usize,
) -> BoostResult {
    let n_candidates = state.ensemble.components.len() + 1;
    let mut corr_sums = vec![0.0; n_candidates];
    for ex in holdout {
        let prefixes = state.ensemble.prefix_values(&ex.features);
        for (c, &v) in corr_sums.iter_mut().zip(&prefixes) {
            *c += Real::from(ex.label) * Real::from(sign(v));
        }
    }
    let holdout_correlations: Vec<Real> = corr_sums
        .iter()
        .map(|c| c / holdout.len() as Real)
        .collect();

    let mut best = 0usize;
    for (i, &c) in holdout_correlations.iter().enumerate() {
        if c > holdout_correlations[best] {
            best = i;
        }
    }

    let ensemble_arc = Arc::new(state.ensemble.clone());
    BoostResult {
        final_hypothesis: Arc::new(PrefixSignClassifier {
            ensemble: Arc::clone(&ensemble_arc),
            prefix_len: best,
        }),
        chosen_round: best + 1,
        ensemble: state.ensemble,
        trace: state.trace,
        holdout_correlations,
        samples_drawn,
    }
}

/// End-to-end run: all rounds plus holdout post-selection.
pub fn boost<S: ExampleSource, W: WeakLearner + ?Sized, R: Rng>(
    source: &mut S,
    learner: &W,
    cfg: &BoostConfig,
    rng: &mut R,
) -> Result<BoostResult, BoostError> {
    BoostRun::new(cfg.clone(), source, learner, rng)?.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::LabeledExample;
    use crate::weak_learners::StumpLearner;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Separable1D;
    impl ExampleSource for Separable1D {
        fn draw<R: Rng>(
            &mut self,
            n: usize,
            rng: &mut R,
        ) -> Result<Vec<LabeledExample>, SourceError> {
            Ok((0..n)
                .map(|_| {
                    let x: Real = rng.gen_range(-1.0..1.0);
                    LabeledExample::new(vec![x], sign(x))
                })
                .collect())
        }
    }

    struct CoinFlip;
    impl ExampleSource for CoinFlip {
        fn draw<R: Rng>(
            &mut self,
            n: usize,
            rng: &mut R,
        ) -> Result<Vec<LabeledExample>, SourceError> {
            Ok((0..n)
                .map(|_| {
                    LabeledExample::new(
                        vec![rng.gen_range(-1.0..1.0)],
                        if rng.gen::<bool>() { 1 } else { -1 },
                    )
                })
                .collect())
        }
    }

    fn small_cfg() -> BoostConfig {
        BoostConfig {
            gamma: 1.0,
            epsilon: 0.1,
            delta: 0.05,
            rounds: 1,
            step: 0.5,
            mix: 0.5,
            branch_threshold: 0.05,
            fresh_per_round: 40,
            weak_batch: 40,
            final_holdout: 200,
            relabel_mode: RelabelMode::Stochastic,
            step_mode: StepMode::Fixed,
            branch_mode: BranchMode::Threshold,
        }
    }

    #[test]
    fn one_round_on_separable_data_is_perfect() {
        let cfg = small_cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let result = boost(&mut Separable1D, &StumpLearner, &cfg, &mut rng).unwrap();
        // training correlation of the selected hypothesis on fresh data
        let mut rng2 = ChaCha8Rng::seed_from_u64(2);
        let train = Separable1D.draw(500, &mut rng2).unwrap();
        let corr: Real = train
            .iter()
            .map(|e| Real::from(e.label) * Real::from(result.final_hypothesis.predict(&e.features)))
            .sum::<Real>()
            / train.len() as Real;
        assert!((corr - 1.0).abs() < 1e-12, "corr = {corr}");
        assert_eq!(result.chosen_round, 2, "post-selection must pick the stump");
    }

    #[test]
    fn coin_flip_labels_give_near_zero_holdout_correlation() {
        let mut cfg = small_cfg();
        cfg.rounds = 12;
        cfg.final_holdout = 4000;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let result = boost(&mut CoinFlip, &StumpLearner, &cfg, &mut rng).unwrap();
        let bound = 3.0 / (cfg.final_holdout as Real).sqrt();
        let best = result.holdout_correlations[result.chosen_round - 1];
        assert!(best.abs() <= bound, "picked corr {best} vs bound {bound}");
    }

    #[test]
    fn budget_is_exactly_rounds_times_fresh_plus_holdout() {
        for (rounds, fresh, holdout) in [(1usize, 7usize, 13usize), (9, 3, 40), (20, 11, 1)] {
            let mut cfg = small_cfg();
            cfg.rounds = rounds;
            cfg.fresh_per_round = fresh;
            cfg.final_holdout = holdout;
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let result = boost(&mut CoinFlip, &StumpLearner, &cfg, &mut rng).unwrap();
            assert_eq!(result.samples_drawn, rounds * fresh + holdout);
        }
    }

    #[test]
    fn prefix_recursion_is_consistent() {
        let mut cfg = small_cfg();
        cfg.rounds = 10;
        cfg.branch_threshold = 0.9; // force NegSign rounds into the mix
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let result = boost(&mut CoinFlip, &StumpLearner, &cfg, &mut rng).unwrap();
        let mut rng2 = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let x = vec![rng2.gen_range(-1.0..1.0)];
            let prefixes = result.ensemble.prefix_values(&x);
            for (t, c) in result.ensemble.components.iter().enumerate() {
                // recompute from scratch: H_{t+1}(x) = H_t(x) + step * dir
                let from_scratch = result.ensemble.prefix_value(&x, t + 1);
                assert!((from_scratch - prefixes[t + 1]).abs() < 1e-12);
                let dir = (prefixes[t + 1] - prefixes[t]) / c.step;
                assert!(dir.abs() <= 1.0 / cfg.gamma + 1e-12);
            }
        }
    }

    #[test]
    fn post_selection_dominates_all_candidates() {
        let mut cfg = small_cfg();
        cfg.rounds = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let result = boost(&mut CoinFlip, &StumpLearner, &cfg, &mut rng).unwrap();
        let chosen = result.holdout_correlations[result.chosen_round - 1];
        for (i, &c) in result.holdout_correlations.iter().enumerate() {
            assert!(chosen >= c, "candidate {i} beats the chosen one");
            if c == chosen {
                assert!(result.chosen_round - 1 <= i, "ties must go to the smallest index");
                break;
            }
        }
    }

    #[test]
    fn identical_seeds_give_identical_traces() {
        let mut cfg = small_cfg();
        cfg.rounds = 6;
        let run = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            boost(&mut CoinFlip, &StumpLearner, &cfg, &mut rng).unwrap()
        };
        let a = run(42);
        let b = run(42);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.holdout_correlations, b.holdout_correlations);
        assert_eq!(a.chosen_round, b.chosen_round);
        let c = run(43);
        assert!(a.trace != c.trace || a.holdout_correlations != c.holdout_correlations);
    }

    #[test]
    fn branch_boundary_cases() {
        let cfg = small_cfg();
        assert_eq!(
            branch(cfg.branch_threshold, 0.0, &cfg),
            ComponentChoice::NegSign,
            "corr equal to the threshold must not pass the strict test"
        );
        assert_eq!(branch(1.0, 0.0, &cfg), ComponentChoice::ScaledWeak);
        assert_eq!(branch(-0.3, -1.0, &cfg), ComponentChoice::NegSign);

        let mut eb = small_cfg();
        eb.branch_mode = BranchMode::EmpiricalBest;
        eb.gamma = 0.5;
        assert_eq!(branch(0.2, 0.3, &eb), ComponentChoice::ScaledWeak); // 0.4 vs 0.3
        assert_eq!(branch(0.1, 0.3, &eb), ComponentChoice::NegSign); // 0.2 vs 0.3
    }

    #[test]
    fn adaptive_step_values() {
        assert_eq!(adaptive_step(0.0, 0.2, StepMode::AdaptiveCorrelation), 0.0);
        assert_eq!(adaptive_step(1.0, 0.2, StepMode::AdaptiveCorrelation), 0.2);
        assert_eq!(adaptive_step(0.5, 0.2, StepMode::AdaptiveCorrelation), 0.1);
        assert_eq!(adaptive_step(-0.4, 0.2, StepMode::AdaptiveCorrelation), 0.0);
        assert_eq!(adaptive_step(-0.4, 0.2, StepMode::Fixed), 0.2);
    }

    #[test]
    fn adaptive_steps_track_the_chosen_component() {
        let mut cfg = small_cfg();
        cfg.rounds = 10;
        cfg.step = 0.8;
        cfg.step_mode = StepMode::AdaptiveCorrelation;
        cfg.branch_threshold = 0.9; // force NegSign rounds with negative correlation
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let result = boost(&mut CoinFlip, &StumpLearner, &cfg, &mut rng).unwrap();
        for t in &result.trace {
            let chosen = match t.choice {
                ComponentChoice::ScaledWeak => t.weak_corr,
                ComponentChoice::NegSign => t.neg_sign_corr,
            };
            assert!((t.step_used - cfg.step * chosen.max(0.0)).abs() < 1e-15);
        }
        // coin-flip labels force some nonpositive correlations, so this
        // run also exercises zero-step records in the reuse distribution
        assert!(result.trace.iter().any(|t| t.step_used == 0.0));
    }

    #[test]
    fn oracle_efficient_preset_boosts_separable_data() {
        let cfg = BoostConfig::oracle_efficient(1.0, 0.25, 0.1, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let result = boost(&mut Separable1D, &StumpLearner, &cfg, &mut rng).unwrap();
        assert_eq!(
            result.samples_drawn,
            cfg.rounds * cfg.fresh_per_round + cfg.final_holdout
        );
        let mut rng2 = ChaCha8Rng::seed_from_u64(3);
        let fresh = Separable1D.draw(1000, &mut rng2).unwrap();
        let corr: Real = fresh
            .iter()
            .map(|e| Real::from(e.label) * Real::from(result.final_hypothesis.predict(&e.features)))
            .sum::<Real>()
            / fresh.len() as Real;
        assert!(corr > 0.95, "oracle-efficient preset reached corr {corr}");
    }

    #[test]
    fn preset_unit_scaling() {
        let cfg = BoostConfig::sample_optimal(1.0, 1.0, 0.1, 1.0).unwrap();
        assert_eq!(cfg.rounds, 1);
        assert_eq!(cfg.step, 1.0);
        assert_eq!(cfg.mix, 1.0);
        assert_eq!(cfg.branch_threshold, 1.0);
        assert_eq!(cfg.fresh_per_round, 1);
        assert_eq!(cfg.final_holdout, 1);
        assert_eq!(cfg.weak_batch, 1);
    }

    #[test]
    fn preset_formula_evaluation() {
        let cfg = BoostConfig::sample_optimal(0.5, 0.1, 0.1, 4.0).unwrap();
        assert_eq!(cfg.rounds, 1600);
        assert_eq!(cfg.fresh_per_round, 20);
        assert!((cfg.step - 0.5 * 0.5 * 0.1 / 4.0).abs() < 1e-15);
        assert!((cfg.mix - cfg.step / 0.5).abs() < 1e-15);
    }

    #[test]
    fn preset_scaling_laws() {
        let a = BoostConfig::sample_optimal(1.0, 0.1, 0.1, 1.0).unwrap();
        let b = BoostConfig::sample_optimal(1.0, 0.2, 0.1, 1.0).unwrap();
        assert_eq!(a.fresh_per_round, 2 * b.fresh_per_round);
        assert_eq!(a.rounds, 4 * b.rounds);
        assert_eq!(a.final_holdout, 4 * b.final_holdout);
    }

    #[test]
    fn oracle_efficient_preset_shape() {
        let log_b = 2.0;
        let cfg = BoostConfig::oracle_efficient(0.5, 0.1, 0.1, log_b).unwrap();
        assert_eq!(cfg.rounds, 400); // 1 / (0.25 * 0.01)
        let expected_fresh = (log_b / (0.5 * 0.1) + log_b.powi(3)).ceil() as usize;
        assert_eq!(cfg.fresh_per_round, expected_fresh);
        assert!((cfg.step - 0.5 * 0.5 * 0.1).abs() < 1e-15);
    }

    #[test]
    fn invalid_preset_inputs_error() {
        assert!(BoostConfig::sample_optimal(0.0, 0.1, 0.1, 1.0).is_err());
        assert!(BoostConfig::sample_optimal(1.0, -0.1, 0.1, 1.0).is_err());
        assert!(BoostConfig::sample_optimal(1.0, 0.1, 0.1, 0.0).is_err());
        // sigma = eta / gamma > 1 must be rejected by validation
        assert!(BoostConfig::sample_optimal(1.0, 2.0, 0.1, 1.0).is_err());
    }

    #[test]
    fn source_exhaustion_propagates() {
        let cfg = small_cfg();
        let mut pool = crate::types::PoolSource::new(vec![LabeledExample::new(vec![0.0], 1); 5]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = boost(&mut pool, &StumpLearner, &cfg, &mut rng).unwrap_err();
        assert!(matches!(err, BoostError::Source(SourceError::Exhausted { .. })));
    }
}
