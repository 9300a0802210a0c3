//! The cross-validated benchmark harness: for every dataset, noise level,
//! and algorithm it grid-searches over the round count (and the mixing
//! weight, for the reuse booster), runs seeded k-fold cross validation,
//! and reports the winning cell's mean accuracy with its standard error.
//!
//! Noise is injected on training folds only; the per-fold noise seed
//! depends on the dataset, noise level, and fold — never on the algorithm
//! or grid point — so every contender sees identical corrupted folds.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use agnoboost::baselines::{boost_bhs20, boost_kk09};
use agnoboost::booster::{boost, BoostConfig, BoostResult, BranchMode, RelabelMode, StepMode};
use agnoboost::data::{inject_noise, kfold, Dataset, NoisePlan};
use agnoboost::types::{BootstrapSource, PoolSource};
use agnoboost::weak_learners::SortCachingStumpLearner;
use agnoboost::Real;

use crate::table::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Ours,
    Kk09,
    Bhs20,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::Ours, Algo::Kk09, Algo::Bhs20];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Ours => "ours",
            Algo::Kk09 => "kk09",
            Algo::Bhs20 => "bhs20",
        }
    }

}

#[derive(Clone, Debug)]
pub struct BenchParams {
    pub folds: usize,
    pub seed: u64,
    pub grid_t: Vec<usize>,
    pub grid_sigma: Vec<Real>,
    pub noise_rates: Vec<Real>,
    pub relabel: RelabelMode,
    pub branch: BranchMode,
    pub step: StepMode,
}

impl Default for BenchParams {
    fn default() -> Self {
        Self {
            folds: 30,
            seed: 42,
            grid_t: vec![25, 50, 100],
            grid_sigma: vec![0.1, 0.25, 0.5],
            noise_rates: vec![0.0, 0.05, 0.10, 0.20],
            relabel: RelabelMode::Fractional,
            branch: BranchMode::EmpiricalBest,
            step: StepMode::AdaptiveCorrelation,
        }
    }
}

/// The winning grid point of one (dataset, noise, algorithm) cell.
#[derive(Clone, Debug)]
pub struct CellOutcome {
    pub dataset: String,
    pub noise: Real,
    pub algo: Algo,
    pub rounds: usize,
    pub sigma: Option<Real>,
    pub mean_accuracy: Real,
    pub std_error: Real,
    pub samples_per_fold: usize,
}

fn base_config(algo: Algo, rounds: usize, sigma: Real, params: &BenchParams) -> BoostConfig {
    BoostConfig {
        gamma: 1.0,
        epsilon: 0.1,
        delta: 0.05,
        rounds,
        step: match params.step {
            StepMode::AdaptiveCorrelation => 1.0,
            StepMode::Fixed => 0.3,
        },
        mix: sigma,
        branch_threshold: 0.0,
        fresh_per_round: 1,
        weak_batch: 1,
        final_holdout: 1,
        relabel_mode: params.relabel,
        step_mode: params.step,
        branch_mode: match algo {
            Algo::Ours => params.branch,
            // the baselines branch by head-to-head correlation internally
            _ => BranchMode::EmpiricalBest,
        },
    }
}

/// Trains one algorithm on a training fold and returns the fitted result.
/// The fold is treated as the empirical population: the reuse booster and
/// bhs20 consume it once (without replacement), kk09 resamples it with
/// replacement to fill its larger fresh-sample budget.
pub fn run_fold(
    algo: Algo,
    train: &[agnoboost::LabeledExample],
    rounds: usize,
    sigma: Real,
    params: &BenchParams,
    run_seed: u64,
) -> BoostResult {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let mut shuffled = train.to_vec();
    shuffled.shuffle(&mut rng);
    let n = shuffled.len();
    let holdout = (n / 5).clamp(1, 200);
    let pool = n.saturating_sub(holdout).max(1);
    // boosting refits fixed or append-only expansions round after round;
    // sort-order caching makes those refits linear instead of sort-bound
    let learner = SortCachingStumpLearner::default();

    match algo {
        Algo::Ours => {
            let fresh = (pool / rounds).max(1);
            let rounds_eff = (pool / fresh).min(rounds).max(1);
            let mut cfg = base_config(algo, rounds_eff, sigma, params);
            cfg.fresh_per_round = fresh;
            cfg.weak_batch = (fresh * rounds_eff).max(32);
            cfg.final_holdout = holdout;
            let mut source = PoolSource::new(shuffled);
            boost(&mut source, &learner, &cfg, &mut rng).expect("pool sized to the budget")
        }
        Algo::Kk09 => {
            let per_round = (n / rounds).max(4);
            let mut cfg = base_config(algo, rounds, sigma, params);
            cfg.weak_batch = per_round;
            cfg.fresh_per_round = per_round;
            cfg.final_holdout = holdout;
            let mut source = BootstrapSource::new(shuffled);
            boost_kk09(&mut source, &learner, &cfg, &mut rng).expect("bootstrap never exhausts")
        }
        Algo::Bhs20 => {
            let branch = (n / 5).max(1);
            let learn = n.saturating_sub(holdout + branch).max(1);
            let mut cfg = base_config(algo, rounds, sigma, params);
            cfg.weak_batch = learn;
            cfg.fresh_per_round = branch;
            cfg.final_holdout = holdout;
            let mut source = PoolSource::new(shuffled);
            boost_bhs20(&mut source, &learner, &cfg, &mut rng).expect("pool sized to the budget")
        }
    }
}

/// Cross-validated accuracy of one grid point.
#[allow(clippy::too_many_arguments)]
fn evaluate_grid_point(
    dataset: &Dataset,
    dataset_idx: u64,
    noise: Real,
    algo: Algo,
    rounds: usize,
    sigma: Real,
    sigma_idx: u64,
    params: &BenchParams,
) -> (Real, Real, usize) {
    let plan = kfold(dataset.len(), params.folds, derive_seed(params.seed, &[dataset_idx]))
        .expect("folds <= examples");
    let noise_key = (noise * 1000.0).round() as u64;
    let mut accuracies = Vec::with_capacity(params.folds);
    let mut samples = 0usize;
    for fold in 0..params.folds {
        let (test_idx, train_idx) = plan.split(fold);
        let train: Vec<_> = train_idx.iter().map(|&i| dataset.examples[i].clone()).collect();
        let train = if noise > 0.0 {
            let plan = NoisePlan::new(
                noise,
                derive_seed(params.seed, &[dataset_idx, noise_key, fold as u64, 0xA0]),
            )
            .expect("rate validated upstream");
            inject_noise(&Dataset::new(train).expect("nonempty fold"), &plan).examples
        } else {
            train
        };
        let algo_key = algo.name().len() as u64 * 131 + algo.name().as_bytes()[0] as u64;
        let run_seed = derive_seed(
            params.seed,
            &[dataset_idx, noise_key, algo_key, rounds as u64, sigma_idx, fold as u64],
        );
        let result = run_fold(algo, &train, rounds, sigma, params, run_seed);
        samples += result.samples_drawn;
        let hits = test_idx
            .iter()
            .filter(|&&i| {
                let ex = &dataset.examples[i];
                result.final_hypothesis.predict(&ex.features) == ex.label
            })
            .count();
        accuracies.push(hits as Real / test_idx.len().max(1) as Real);
    }
    let k = accuracies.len() as Real;
    let mean = accuracies.iter().sum::<Real>() / k;
    let var = accuracies.iter().map(|a| (a - mean) * (a - mean)).sum::<Real>() / k;
    let stderr = (var / k).sqrt();
    (mean, stderr, samples / params.folds)
}

/// Runs the full grid for one (dataset, noise, algorithm) cell and returns
/// the winner: highest mean accuracy, ties to smaller round count, then
/// smaller mixing weight.
pub fn run_cell(
    dataset: &Dataset,
    dataset_name: &str,
    dataset_idx: u64,
    noise: Real,
    algo: Algo,
    params: &BenchParams,
) -> CellOutcome {
    let sigmas: Vec<Option<Real>> = match algo {
        Algo::Ours => params.grid_sigma.iter().map(|&s| Some(s)).collect(),
        _ => vec![None],
    };
    let mut best: Option<CellOutcome> = None;
    for &rounds in &params.grid_t {
        for (sigma_idx, &sigma) in sigmas.iter().enumerate() {
            let (mean, stderr, samples) = evaluate_grid_point(
                dataset,
                dataset_idx,
                noise,
                algo,
                rounds,
                sigma.unwrap_or(0.25),
                sigma_idx as u64,
                params,
            );
            let candidate = CellOutcome {
                dataset: dataset_name.to_string(),
                noise,
                algo,
                rounds,
                sigma,
                mean_accuracy: mean,
                std_error: stderr,
                samples_per_fold: samples,
            };
            let better = match &best {
                None => true,
                Some(b) => {
                    mean > b.mean_accuracy
                        || (mean == b.mean_accuracy
                            && (rounds < b.rounds
                                || (rounds == b.rounds
                                    && sigma.unwrap_or(Real::INFINITY)
                                        < b.sigma.unwrap_or(Real::INFINITY))))
                }
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best.expect("grid is nonempty")
}

/// The full benchmark: every dataset x noise x algorithm cell.
pub fn run_bench(datasets: &[(String, Dataset)], params: &BenchParams) -> Vec<CellOutcome> {
    let mut out = Vec::new();
    for (dataset_idx, (name, dataset)) in datasets.iter().enumerate() {
        for &noise in &params.noise_rates {
            for algo in Algo::ALL {
                out.push(run_cell(dataset, name, dataset_idx as u64, noise, algo, params));
            }
        }
    }
    out
}
