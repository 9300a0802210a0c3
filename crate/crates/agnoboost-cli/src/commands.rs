//! Implementations behind the CLI subcommands: single-run boosting on a
//! dataset, the halfspace study, and the RL policy-boosting study.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use agnoboost::booster::{boost, BoostConfig, BranchMode, RelabelMode, StepMode};
use agnoboost::data::{inject_noise, Dataset, NoisePlan};
use agnoboost::oracles::FiniteDistribution;
use agnoboost::rl_sim::{
    boost_policy, exact_value_from, AccessMode, PolicyBoostResult, StepSchedule, TabularMDP,
};
use agnoboost::types::Classifier;
use agnoboost::weak_learners::{ErmLearner, FiniteClass, Parity, ParityLearner};
use agnoboost::Real;

use crate::bench::{run_fold, Algo, BenchParams};
use crate::table::derive_seed;

/// A single training run on a dataset: noise on the training copy, fit with
/// the chosen algorithm, measure accuracy against the original labels.
pub struct BoostRunOutcome {
    pub rounds_run: usize,
    pub chosen_round: usize,
    pub train_accuracy: Real,
    pub noisy_accuracy: Real,
    pub samples_drawn: usize,
}

pub fn cmd_boost(
    dataset: &Dataset,
    algo: Algo,
    noise: Real,
    rounds: usize,
    sigma: Real,
    params: &BenchParams,
    seed: u64,
) -> Result<BoostRunOutcome, String> {
    let train = if noise > 0.0 {
        let plan = NoisePlan::new(noise, derive_seed(seed, &[0xB0])).map_err(|e| e.to_string())?;
        inject_noise(dataset, &plan)
    } else {
        dataset.clone()
    };
    let result = run_fold(algo, &train.examples, rounds, sigma, params, derive_seed(seed, &[0xB1]));
    Ok(BoostRunOutcome {
        rounds_run: result.trace.len(),
        chosen_round: result.chosen_round,
        train_accuracy: dataset.accuracy(result.final_hypothesis.as_ref()),
        noisy_accuracy: train.accuracy(result.final_hypothesis.as_ref()),
        samples_drawn: result.samples_drawn,
    })
}

pub struct HalfspaceOutcome {
    pub best_single_accuracy: Real,
    pub boosted_accuracy: Real,
    pub samples_drawn: usize,
}

fn for_each_subset(n: usize, d: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(n: usize, d: usize, start: usize, prefix: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        visit(prefix);
        if prefix.len() == d {
            return;
        }
        for i in start..n {
            prefix.push(i);
            rec(n, d, i + 1, prefix, visit);
            prefix.pop();
        }
    }
    rec(n, d, 0, &mut Vec::new(), visit);
}

/// Boosts degree-limited parities against a label-corrupted majority
/// function on the hypercube and compares with the exhaustively enumerated
/// best single parity.
pub fn cmd_halfspace(
    dist: &FiniteDistribution,
    n: usize,
    degree: usize,
    epsilon: Real,
    rounds: usize,
    seed: u64,
) -> Result<HalfspaceOutcome, String> {
    let mut best_single: Real = 0.0;
    for_each_subset(n, degree, &mut |subset| {
        for sign in [1i8, -1] {
            let p = Parity {
                subset: subset.to_vec(),
                sign,
            };
            best_single = best_single.max(dist.exact_accuracy(&p));
        }
    });

    let gamma = 0.25;
    let step = 0.02;
    let cfg = BoostConfig {
        gamma,
        epsilon,
        delta: 0.05,
        rounds,
        step,
        mix: step / gamma,
        branch_threshold: 0.1 * gamma * epsilon,
        fresh_per_round: 150,
        weak_batch: 400,
        final_holdout: 600,
        relabel_mode: RelabelMode::Stochastic,
        step_mode: StepMode::Fixed,
        branch_mode: BranchMode::Threshold,
    };
    let learner = ParityLearner { max_degree: degree };
    let mut source = dist.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = boost(&mut source, &learner, &cfg, &mut rng).map_err(|e| e.to_string())?;
    Ok(HalfspaceOutcome {
        best_single_accuracy: best_single,
        boosted_accuracy: dist.exact_accuracy(result.final_hypothesis.as_ref()),
        samples_drawn: result.samples_drawn,
    })
}

pub struct RlOutcome {
    pub result: PolicyBoostResult,
    pub final_exact_value: Real,
    pub uniform_value: Real,
}

/// Policy class for tabular MDPs: both constant policies plus every
/// "act +1 from state s onward" threshold policy.
fn threshold_policy_class(n_states: usize) -> FiniteClass {
    let mut hypotheses: Vec<Arc<dyn Classifier>> = vec![
        Arc::new(agnoboost::types::TableClassifier::new(vec![1; n_states])),
        Arc::new(agnoboost::types::TableClassifier::new(vec![-1; n_states])),
    ];
    for cut in 1..n_states {
        hypotheses.push(Arc::new(agnoboost::types::TableClassifier::new(
            (0..n_states).map(|s| if s >= cut { 1 } else { -1 }).collect(),
        )));
    }
    FiniteClass::new(hypotheses).expect("at least the constants")
}

pub fn cmd_rl(
    mdp: &TabularMDP,
    rounds: usize,
    post_rollouts: usize,
    seed: u64,
) -> Result<RlOutcome, String> {
    let inner_cfg = BoostConfig {
        gamma: 1.0,
        epsilon: 0.2,
        delta: 0.1,
        rounds: 6,
        step: 0.3,
        mix: 0.3,
        branch_threshold: 0.002,
        fresh_per_round: 100,
        weak_batch: 400,
        final_holdout: 2000,
        relabel_mode: RelabelMode::Stochastic,
        step_mode: StepMode::Fixed,
        branch_mode: BranchMode::Threshold,
    };
    let learner = ErmLearner {
        class: threshold_policy_class(mdp.n_states),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = boost_policy(
        mdp,
        &learner,
        AccessMode::Episodic,
        rounds,
        StepSchedule::Harmonic,
        post_rollouts,
        &inner_cfg,
        &mut rng,
    )
    .map_err(|e| e.to_string())?;
    let final_exact_value = exact_value_from(mdp, &result.policy, &mdp.start);
    let uniform_value =
        exact_value_from(mdp, &agnoboost::rl_sim::UniformPolicy, &mdp.start);
    Ok(RlOutcome {
        result,
        final_exact_value,
        uniform_value,
    })
}
