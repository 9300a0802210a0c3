//! Prior-art agnostic boosters used as experimental comparators.
//!
//! Both relabel fractionally with the MadaBoost weight
//! `w = min(1, e^{-H(x) y})` and branch by comparing the empirical
//! correlations of the scaled weak hypothesis and the negated ensemble sign
//! on held-out data. They differ in how they spend samples:
//!
//! - [`boost_kk09`] draws a fresh learning batch and a fresh branching batch
//!   every round (the corrected per-round resampling), for a total budget of
//!   `T (m + s) + S0`;
//! - [`boost_bhs20`] draws one dataset up front and reuses the same learning
//!   and branching splits across all rounds, for a total budget of
//!   `N = m + s + S0`.
//!
//! At `T = 1` the two coincide exactly for the same source and seed.

use std::sync::Arc;

use rand::Rng;

use crate::booster::{
    adaptive_step, post_select, BoostConfig, BoostError, BoostResult, BoostState, ComponentChoice,
    ComponentKind, Ensemble, EnsembleComponent, RoundTrace,
};
use crate::potential::PotentialKind;
use crate::resampler::ReuseDistribution;
use crate::types::{sign, CountingSource, ExampleSource, LabeledExample, WeightedData};
use crate::weak_learners::WeakLearner;
use crate::Real;

/// MadaBoost fractional relabeling of a batch against the current ensemble:
/// each `(x, y)` becomes `(x, y)` with weight `(1 + w)/2` and `(x, -y)` with
/// weight `(1 - w)/2`, `w = min(1, e^{-H(x) y})`.
fn madaboost_relabel(batch: &[LabeledExample], ensemble: &Ensemble) -> Result<WeightedData, BoostError> {
    let mut examples = Vec::with_capacity(batch.len() * 2);
    let mut weights = Vec::with_capacity(batch.len() * 2);
    for ex in batch {
        let margin = ensemble.value(&ex.features) * Real::from(ex.label);
        let w = PotentialKind::MadaBoost
            .weight(margin)
            .map_err(crate::resampler::ResampleError::from)?;
        examples.push(ex.clone());
        weights.push((1.0 + w) / 2.0);
        examples.push(ex.flipped());
        weights.push((1.0 - w) / 2.0);
    }
    Ok(WeightedData::weighted(examples, weights))
}

fn empirical_corr_real<F: Fn(&[Real]) -> Real>(batch: &[LabeledExample], h: F) -> Real {
    batch
        .iter()
        .map(|ex| Real::from(ex.label) * h(&ex.features))
        .sum::<Real>()
        / batch.len() as Real
}

/// One shared baseline round: fit on the MadaBoost-relabeled learning data,
/// choose between the scaled weak hypothesis and `-sign(H)` by empirical
/// correlation on the branching batch, and append the winner.
fn baseline_round<W: WeakLearner + ?Sized>(
    state: &mut BoostState,
    cfg: &BoostConfig,
    learner: &W,
    learn_batch: &[LabeledExample],
    branch_batch: &[LabeledExample],
    train_pool: Option<&[LabeledExample]>,
) -> Result<(), BoostError> {
    let t = state.rounds_done + 1;
    let data = madaboost_relabel(learn_batch, &state.ensemble)?;
    let weak = learner
        .fit(&data)
        .map_err(|source| BoostError::Learner { round: t, source })?;

    let scale = 1.0 / cfg.gamma;
    let weak_corr = empirical_corr_real(branch_batch, |x| Real::from(weak.predict(x)) * scale);
    let ensemble = &state.ensemble;
    let neg_sign_corr = empirical_corr_real(branch_batch, |x| -Real::from(sign(ensemble.value(x))));

    let (choice, kind, chosen_corr) = if weak_corr >= neg_sign_corr {
        (
            ComponentChoice::ScaledWeak,
            ComponentKind::ScaledWeak { hypothesis: weak, scale },
            weak_corr,
        )
    } else {
        (ComponentChoice::NegSign, ComponentKind::NegSign, neg_sign_corr)
    };
    let step_used = adaptive_step(chosen_corr, cfg.step, cfg.step_mode);
    state.ensemble.components.push(EnsembleComponent { kind, step: step_used });
    state.rounds_done = t;

    let train_corr = train_pool.map(|pool| {
        let ens = &state.ensemble;
        empirical_corr_real(pool, |x| Real::from(sign(ens.value(x))))
    });
    state.trace.push(RoundTrace {
        round: t,
        choice,
        weak_corr,
        neg_sign_corr,
        step_used,
        train_corr,
    });
    Ok(())
}

fn empty_state(cfg: &BoostConfig) -> Result<BoostState, BoostError> {
    Ok(BoostState {
        ensemble: Ensemble::default(),
        // unused by the baselines; kept so traces share one state type
        reuse: ReuseDistribution::new(cfg.mix)?,
        rounds_done: 0,
        trace: Vec::new(),
    })
}

/// Fresh-samples-every-round baseline: per round, `weak_batch` fresh
/// examples are MadaBoost-relabeled for the learner and `fresh_per_round`
/// fresh examples decide the branch; post-selection draws `final_holdout`
/// more. Total fresh draws: `T (m + s) + S0`.
pub fn boost_kk09<S: ExampleSource, W: WeakLearner + ?Sized, R: Rng>(
    source: &mut S,
    learner: &W,
    cfg: &BoostConfig,
    rng: &mut R,
) -> Result<BoostResult, BoostError> {
    cfg.validate()?;
    let mut counting = CountingSource::new(source);
    let mut state = empty_state(cfg)?;
    for _ in 0..cfg.rounds {
        let learn_batch = counting.draw(cfg.weak_batch, rng)?;
        let branch_batch = counting.draw(cfg.fresh_per_round, rng)?;
        baseline_round(&mut state, cfg, learner, &learn_batch, &branch_batch, None)?;
    }
    let holdout = counting.draw(cfg.final_holdout, rng)?;
    let drawn = counting.drawn();
    Ok(post_select(state, &holdout, drawn))
}

/// Reuse-everything baseline: one dataset of `m + s + S0` examples is drawn
/// up front and split into fixed learning, branching, and post-selection
/// parts used by every round. Total fresh draws: `N = m + s + S0`.
pub fn boost_bhs20<S: ExampleSource, W: WeakLearner + ?Sized, R: Rng>(
    source: &mut S,
    learner: &W,
    cfg: &BoostConfig,
    rng: &mut R,
) -> Result<BoostResult, BoostError> {
    cfg.validate()?;
    let mut counting = CountingSource::new(source);
    let learn_pool = counting.draw(cfg.weak_batch, rng)?;
    let branch_pool = counting.draw(cfg.fresh_per_round, rng)?;
    let holdout = counting.draw(cfg.final_holdout, rng)?;
    let drawn = counting.drawn();

    let mut state = empty_state(cfg)?;
    for _ in 0..cfg.rounds {
        baseline_round(
            &mut state,
            cfg,
            learner,
            &learn_pool,
            &branch_pool,
            Some(&learn_pool),
        )?;
    }
    Ok(post_select(state, &holdout, drawn))
}

/// Total fresh-sample budget of [`boost_kk09`] for a given config.
pub fn kk09_budget(cfg: &BoostConfig) -> usize {
    cfg.rounds * (cfg.weak_batch + cfg.fresh_per_round) + cfg.final_holdout
}

/// Total fresh-sample budget of [`boost_bhs20`] for a given config.
pub fn bhs20_budget(cfg: &BoostConfig) -> usize {
    cfg.weak_batch + cfg.fresh_per_round + cfg.final_holdout
}

/// A classifier handle used in tests to compare final hypotheses
/// structurally: evaluates both on the given points.
pub fn agree_on<C: ?Sized + crate::types::Classifier>(
    a: &C,
    b: &C,
    points: &[Vec<Real>],
) -> bool {
    points.iter().all(|x| a.predict(x) == b.predict(x))
}

#[allow(unused)]
fn _assert_object_safe(_: &Arc<dyn WeakLearner>) {}
