//! The verification suite behind `agnoboost verify`: every analytic
//! identity and behavioral invariant the library relies on, grouped and
//! reported one line per group. `Fast` trims sample counts to finish well
//! under a minute; `Full` runs the acceptance-level counts.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use agnoboost::booster::{
    boost, BoostConfig, BoostRun, BranchMode, RelabelMode, StepMode,
};
use agnoboost::oracles::{
    check_consistency_gap, check_martingale_recursion, check_taylor_identity, Atom,
    FiniteDistribution,
};
use agnoboost::potential::{phi, phi_prime, phi_second};
use agnoboost::resampler::{pseudo_label_prob, PseudoLabelParams, ReuseDistribution};
use agnoboost::rl_sim::{
    exact_q, exact_value, rollout_value, sample_trajectory, ClassifierPolicy, MixturePolicy,
    Policy, TabularMDP, UniformPolicy,
};
use agnoboost::types::{Classifier, ExampleSource, LabeledExample, TableClassifier};
use agnoboost::weak_learners::{ErmLearner, FiniteClass, StumpLearner};
use agnoboost::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl Level {
    fn pick(self, fast: usize, full: usize) -> usize {
        match self {
            Level::Fast => fast,
            Level::Full => full,
        }
    }
}

pub struct GroupReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type GroupFn = fn(Level, u64) -> Result<String, String>;

fn random_distribution(rng: &mut ChaCha8Rng, max_atoms: usize) -> FiniteDistribution {
    let n = rng.gen_range(2..=max_atoms);
    let mut raw: Vec<Real> = (0..n).map(|_| rng.gen_range(0.02..1.0)).collect();
    let total: Real = raw.iter().sum();
    for v in raw.iter_mut() {
        *v /= total;
    }
    FiniteDistribution::new(
        raw.iter()
            .enumerate()
            .map(|(i, &p)| Atom {
                example: LabeledExample::new(vec![i as Real], if rng.gen::<bool>() { 1 } else { -1 }),
                prob: p,
            })
            .collect(),
    )
    .expect("normalized probabilities")
}

fn random_table(rng: &mut ChaCha8Rng, size: usize) -> TableClassifier {
    TableClassifier::new((0..size).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect())
}

fn potential_grid(level: Level, _seed: u64) -> Result<String, String> {
    let points = level.pick(2_000, 10_000);
    let mut prev = Real::INFINITY;
    for i in 0..points {
        let z = -10.0 + 20.0 * (i as Real) / (points - 1) as Real;
        let v = phi(z).map_err(|e| e.to_string())?;
        let d1 = phi_prime(z).map_err(|e| e.to_string())?;
        let d2 = phi_second(z).map_err(|e| e.to_string())?;
        if v < 0.0 || !(-1.0..=0.0).contains(&d1) || !(0.0..=1.0).contains(&d2) {
            return Err(format!("bounds violated at z = {z}"));
        }
        if v > prev + 1e-12 {
            return Err(format!("phi not monotone at z = {z}"));
        }
        prev = v;
    }
    Ok(format!("{points} grid points: phi >= 0, phi' in [-1,0], phi'' in [0,1], monotone"))
}

fn potential_seam(_level: Level, _seed: u64) -> Result<String, String> {
    let h: Real = 1e-13;
    let checks = [
        (phi(h).unwrap() - phi(-h).unwrap()).abs(),
        (phi_prime(h).unwrap() - phi_prime(-h).unwrap()).abs(),
        (phi_second(h).unwrap() - phi_second(-h).unwrap()).abs(),
        (phi_second(1.0).unwrap() - (-1.0f64).exp()).abs(),
    ];
    let worst = checks.iter().cloned().fold(0.0, Real::max);
    if worst <= 1e-12 {
        Ok(format!("seam agreement and phi''(1) = 1/e to {worst:.1e}"))
    } else {
        Err(format!("seam mismatch {worst:.1e} > 1e-12"))
    }
}

fn potential_finite_diff(level: Level, _seed: u64) -> Result<String, String> {
    let points = level.pick(500, 10_000);
    let h = 1e-5;
    for i in 0..points {
        let z = -10.0 + 20.0 * (i as Real) / (points - 1) as Real;
        let fd1 = (phi(z + h).unwrap() - phi(z - h).unwrap()) / (2.0 * h);
        if (fd1 - phi_prime(z).unwrap()).abs() > 1e-6 {
            return Err(format!("phi' finite difference off at z = {z}"));
        }
        let fd2 = (phi_prime(z + h).unwrap() - phi_prime(z - h).unwrap()) / (2.0 * h);
        if (fd2 - phi_second(z).unwrap()).abs() > 1e-6 {
            return Err(format!("phi'' finite difference off at z = {z}"));
        }
    }
    Ok(format!("{points} central differences within 1e-6"))
}

fn selection_weights(_level: Level, _seed: u64) -> Result<String, String> {
    for sigma in [0.05, 0.3, 0.77, 1.0] {
        let mut dist = ReuseDistribution::new(sigma).unwrap();
        dist.push_raw_round(vec![LabeledExample::new(vec![0.0], 1)])
            .unwrap();
        for t in 2i32..=12 {
            dist.push_relabel_round(
                vec![LabeledExample::new(vec![t as Real], 1)],
                vec![0.0],
                vec![1.0],
                0.1,
            )
            .unwrap();
            let w = dist.selection_weights();
            if (w.iter().sum::<Real>() - 1.0).abs() > 1e-12 {
                return Err(format!("weights do not telescope at sigma = {sigma}, t = {t}"));
            }
            if (w[0] - (1.0 - sigma).powi(t - 1)).abs() > 1e-12 {
                return Err(format!("closed form mismatch at sigma = {sigma}, t = {t}"));
            }
        }
    }
    Ok("geometric weights telescope to 1 and match the closed form (1e-12)".into())
}

fn pseudo_label_range(level: Level, seed: u64) -> Result<String, String> {
    let draws = level.pick(5_000, 100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..draws {
        let gamma: Real = rng.gen_range(0.22..=1.0);
        let eta: Real = rng.gen_range(1e-4..0.5) * gamma;
        let sigma = (eta / gamma).min(1.0);
        let params = PseudoLabelParams::new(eta, sigma, rng.gen_range(0.0..eta))
            .map_err(|e| e.to_string())?;
        let dir_mag = if rng.gen::<bool>() { 1.0 } else { 1.0 / gamma };
        let dir = if rng.gen::<bool>() { dir_mag } else { -dir_mag };
        let y = if rng.gen::<bool>() { 1 } else { -1 };
        let p = pseudo_label_prob(y, rng.gen_range(-6.0..6.0), dir, &params)
            .map_err(|e| e.to_string())?;
        if !(0.0..=1.0).contains(&p) {
            return Err(format!("probability {p} escaped [0, 1]"));
        }
    }
    Ok(format!("{draws} preset-range draws stayed in [0, 1]"))
}

fn two_round_distribution(sigma: Real, eta: Real) -> ReuseDistribution {
    let mut dist = ReuseDistribution::new(sigma).unwrap();
    dist.push_raw_round(vec![
        LabeledExample::new(vec![0.0], 1),
        LabeledExample::new(vec![1.0], -1),
    ])
    .unwrap();
    dist.push_relabel_round(
        vec![
            LabeledExample::new(vec![1.0], 1),
            LabeledExample::new(vec![2.0], -1),
        ],
        vec![0.3, -0.7],
        vec![1.0, -1.0],
        eta,
    )
    .unwrap();
    dist.push_relabel_round(
        vec![
            LabeledExample::new(vec![0.0], -1),
            LabeledExample::new(vec![2.0], 1),
        ],
        vec![0.55, -0.45],
        vec![-1.0, 1.0],
        eta,
    )
    .unwrap();
    dist
}

fn relabel_marginal(level: Level, seed: u64) -> Result<String, String> {
    let n = level.pick(20_000, 100_000);
    let dist = two_round_distribution(0.35, 0.2);
    let w = dist.selection_weights().to_vec();
    let expected = [
        w[0] * 0.5 + w[2] * 0.5,
        w[0] * 0.5 + w[1] * 0.5,
        w[1] * 0.5 + w[2] * 0.5,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0usize; 3];
    for e in dist.sample(n, &mut rng).map_err(|e| e.to_string())? {
        counts[e.features[0] as usize] += 1;
    }
    let chi2: Real = (0..3)
        .map(|i| {
            let e = expected[i] * n as Real;
            (counts[i] as Real - e) * (counts[i] as Real - e) / e
        })
        .sum();
    if chi2 < 13.8155 {
        Ok(format!("feature marginal chi2 = {chi2:.2} < 13.82 (df 2, alpha 0.001)"))
    } else {
        Err(format!("feature marginal rejected: chi2 = {chi2:.2}"))
    }
}

fn fractional_mass(level: Level, seed: u64) -> Result<String, String> {
    // total mass always 1; at sigma + eta = 1 the expansion is exactly
    // calibrated to the stochastic sampler
    let dist = two_round_distribution(0.75, 0.25);
    let expansion = dist.fractional_expand().map_err(|e| e.to_string())?;
    let total: Real = expansion.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(format!("total mass {total} != 1"));
    }
    let h = |x: &[Real]| if x[0] >= 0.5 { 1.0 } else { -1.0 };
    let frac: Real = expansion
        .iter()
        .map(|(e, w)| w * Real::from(e.label) * h(&e.features))
        .sum();
    let n = level.pick(100_000, 1_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for e in dist.sample(n, &mut rng).map_err(|e| e.to_string())? {
        let v = Real::from(e.label) * h(&e.features);
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as Real;
    let stderr = (((sum_sq / n as Real - mean * mean).max(0.0)) / n as Real).sqrt();
    if (frac - mean).abs() <= 3.0 * stderr {
        Ok(format!(
            "mass = 1 to 1e-12; calibrated correlation {frac:.4} vs sampled {mean:.4} (3 stderr)"
        ))
    } else {
        Err(format!("fractional {frac} vs sampled {mean} +- {stderr}"))
    }
}

fn consistency_gap(level: Level, seed: u64) -> Result<String, String> {
    let instances = level.pick(200, 1000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_slack = Real::INFINITY;
    for _ in 0..instances {
        let dist = random_distribution(&mut rng, 8);
        let (a, b): (Real, Real) = (rng.gen_range(-1.5..1.5), rng.gen_range(-0.6..0.6));
        let ens = move |x: &[Real]| (a + b * x[0]).clamp(-3.0, 3.0);
        let h_star = random_table(&mut rng, 8);
        let slack = check_consistency_gap(&dist, ens, &h_star).map_err(|e| e.to_string())?;
        min_slack = min_slack.min(slack);
        if slack < -1e-12 {
            return Err(format!("slack {slack} < -1e-12"));
        }
    }
    Ok(format!("{instances} instances, min slack {min_slack:.1e} >= -1e-12"))
}

fn taylor_identity(level: Level, seed: u64) -> Result<String, String> {
    let instances = level.pick(30, 200);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Real = 0.0;
    for _ in 0..instances {
        let dist = random_distribution(&mut rng, 8);
        let (a, b): (Real, Real) = (rng.gen_range(-1.5..1.5), rng.gen_range(-0.6..0.6));
        let ens = move |x: &[Real]| (a + b * x[0]).clamp(-3.0, 3.0);
        let dir_table = random_table(&mut rng, 8);
        let scale: Real = rng.gen_range(0.5..3.0);
        let test_table = random_table(&mut rng, 8);
        let eta: Real = rng.gen_range(0.05..0.5);
        let residual = check_taylor_identity(
            &dist,
            ens,
            |x| scale * Real::from(dir_table.predict(x)),
            eta,
            |x| Real::from(test_table.predict(x)),
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(residual.abs());
        if residual.abs() > 1e-8 {
            return Err(format!("residual {residual:.2e} > 1e-8"));
        }
    }
    Ok(format!("{instances} instances, max |residual| {worst:.1e} <= 1e-8"))
}

fn martingale_recursion(level: Level, seed: u64) -> Result<String, String> {
    let configs = level.pick(3, 10);
    let replications = level.pick(20_000, 100_000);
    let mut seed_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_z: Real = 0.0;
    for idx in 0..configs as u64 {
        let mix: Real = seed_rng.gen_range(0.15..0.9);
        let step: Real = seed_rng.gen_range(0.02..1.0) * mix;
        let dist = random_distribution(&mut seed_rng, 6);
        let class = FiniteClass::new(
            (0..4)
                .map(|_| Arc::new(random_table(&mut seed_rng, 6)) as Arc<dyn Classifier>)
                .collect(),
        )
        .unwrap();
        let cfg = BoostConfig {
            gamma: 1.0,
            epsilon: 0.2,
            delta: 0.1,
            rounds: 3,
            step,
            mix,
            branch_threshold: 0.02,
            fresh_per_round: 10,
            weak_batch: 40,
            final_holdout: 50,
            relabel_mode: RelabelMode::Stochastic,
            step_mode: StepMode::Fixed,
            branch_mode: BranchMode::Threshold,
        };
        let learner = ErmLearner { class: class.clone() };
        let mut source = dist.clone();
        let mut run_rng = ChaCha8Rng::seed_from_u64(7000 + idx);
        let mut run =
            BoostRun::new(cfg.clone(), &mut source, &learner, &mut run_rng).map_err(|e| e.to_string())?;
        for _ in 0..2 {
            run.step().map_err(|e| e.to_string())?;
        }
        let state = run.state().clone();
        let h = Arc::clone(class.get(idx as usize % class.len()));
        let mut mc_rng = ChaCha8Rng::seed_from_u64(9000 + idx);
        let probe = check_martingale_recursion(
            &dist,
            &state,
            &cfg,
            |x| Real::from(h.predict(x)),
            replications,
            &mut mc_rng,
        )
        .map_err(|e| e.to_string())?;
        let gap = (probe.estimate - probe.target).abs();
        if gap > 3.0 * probe.stderr.max(1e-15) {
            return Err(format!(
                "config {idx}: estimate {} vs target {} (stderr {})",
                probe.estimate, probe.target, probe.stderr
            ));
        }
        if probe.stderr > 0.0 {
            worst_z = worst_z.max(gap / probe.stderr);
        }
    }
    Ok(format!(
        "{configs} replayed configs at M = {replications}, worst |z| = {worst_z:.2} <= 3"
    ))
}

fn smoothness_descent(level: Level, seed: u64) -> Result<String, String> {
    let instances = level.pick(200, 1000);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..instances {
        let dist = random_distribution(&mut rng, 8);
        let (a, b): (Real, Real) = (rng.gen_range(-1.5..1.5), rng.gen_range(-0.6..0.6));
        let ens = move |x: &[Real]| (a + b * x[0]).clamp(-3.0, 3.0);
        let scale: Real = rng.gen_range(0.3..3.0);
        let table = random_table(&mut rng, 8);
        let h = move |x: &[Real]| scale * Real::from(table.predict(x));
        let eta: Real = rng.gen_range(0.01..0.5);
        let before = dist.exact_potential(ens).map_err(|e| e.to_string())?;
        let after = dist
            .exact_potential(|x| ens(x) + eta * h(x))
            .map_err(|e| e.to_string())?;
        let slope = dist.exact_phi_prime(ens, h).map_err(|e| e.to_string())?;
        if after > before + eta * slope + eta * eta * scale * scale / 2.0 + 1e-12 {
            return Err("smoothness descent bound violated".into());
        }
    }
    Ok(format!("{instances} instances satisfy the 1-smoothness descent bound (1e-12)"))
}

struct CoinFlip;
impl ExampleSource for CoinFlip {
    fn draw<R: Rng>(
        &mut self,
        n: usize,
        rng: &mut R,
    ) -> Result<Vec<LabeledExample>, agnoboost::types::SourceError> {
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

fn boost_budget(_level: Level, seed: u64) -> Result<String, String> {
    for (rounds, fresh, holdout) in [(3usize, 7usize, 13usize), (9, 3, 40)] {
        let cfg = BoostConfig {
            gamma: 1.0,
            epsilon: 0.1,
            delta: 0.05,
            rounds,
            step: 0.5,
            mix: 0.5,
            branch_threshold: 0.05,
            fresh_per_round: fresh,
            weak_batch: 20,
            final_holdout: holdout,
            relabel_mode: RelabelMode::Stochastic,
            step_mode: StepMode::Fixed,
            branch_mode: BranchMode::Threshold,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let result =
            boost(&mut CoinFlip, &StumpLearner, &cfg, &mut rng).map_err(|e| e.to_string())?;
        if result.samples_drawn != rounds * fresh + holdout {
            return Err(format!(
                "budget {} != {} * {} + {}",
                result.samples_drawn, rounds, fresh, holdout
            ));
        }
    }
    Ok("fresh draws equal rounds * per-round + holdout, exactly".into())
}

fn boost_determinism(_level: Level, seed: u64) -> Result<String, String> {
    let cfg = BoostConfig {
        gamma: 1.0,
        epsilon: 0.1,
        delta: 0.05,
        rounds: 6,
        step: 0.5,
        mix: 0.5,
        branch_threshold: 0.05,
        fresh_per_round: 20,
        weak_batch: 30,
        final_holdout: 100,
        relabel_mode: RelabelMode::Stochastic,
        step_mode: StepMode::Fixed,
        branch_mode: BranchMode::Threshold,
    };
    let run = |s: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        boost(&mut CoinFlip, &StumpLearner, &cfg, &mut rng).map_err(|e| e.to_string())
    };
    let a = run(seed)?;
    let b = run(seed)?;
    if a.trace != b.trace || a.holdout_correlations != b.holdout_correlations {
        return Err("identical seeds produced different traces".into());
    }
    Ok("identical seed and config give bit-identical traces".into())
}

fn verify_mdp() -> TabularMDP {
    TabularMDP {
        n_states: 2,
        transition: vec![
            [vec![0.7, 0.3], vec![0.2, 0.8]],
            [vec![0.5, 0.5], vec![0.1, 0.9]],
        ],
        reward: vec![[0.1, 0.6], [0.3, 0.9]],
        discount: 0.8,
        start: vec![0.6, 0.4],
        reset: vec![0.5, 0.5],
    }
}

fn bellman_consistency(_level: Level, _seed: u64) -> Result<String, String> {
    let mdp = verify_mdp();
    for mix in [0.0, 0.35, 1.0] {
        let pol = MixturePolicy::single(Arc::new(UniformPolicy)).mixed_with(
            Arc::new(ClassifierPolicy {
                classifier: Arc::new(TableClassifier::new(vec![-1, 1])),
            }),
            mix,
        );
        let v = exact_value(&mdp, &pol);
        let q = exact_q(&mdp, &pol);
        for s in 0..mdp.n_states {
            let p = pol.prob_plus(s);
            if (v[s] - (p * q[s][1] + (1.0 - p) * q[s][0])).abs() > 1e-10 {
                return Err(format!("Bellman residual at state {s} exceeds 1e-10"));
            }
        }
    }
    Ok("V(s) = sum_a pi(a|s) Q(s,a) to 1e-10 across policies".into())
}

fn rl_pseudo_action_identity(level: Level, seed: u64) -> Result<String, String> {
    let n = level.pick(150_000, 1_000_000);
    let mdp = verify_mdp();
    let policy = MixturePolicy::single(Arc::new(UniformPolicy));
    let q = exact_q(&mdp, &policy);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = vec![(0.0, 0usize); mdp.n_states];
    for _ in 0..n {
        let t = sample_trajectory(&mdp, &policy, &mdp.start, &mut rng).map_err(|e| e.to_string())?;
        sums[t.state].0 += Real::from(t.pseudo_action);
        sums[t.state].1 += 1;
    }
    let mut detail = String::new();
    for s in 0..mdp.n_states {
        let (total, count) = sums[s];
        let mean = total / count as Real;
        let stderr = (1.0 / count as Real).sqrt();
        let expected = (1.0 - mdp.discount) / 2.0 * (q[s][1] - q[s][0]);
        let z = (mean - expected).abs() / stderr;
        if z > 3.0 {
            return Err(format!("state {s}: z = {z:.2} > 3"));
        }
        detail.push_str(&format!("state {s} z = {z:.2}; "));
    }
    Ok(format!("{detail}at {n} samples"))
}

fn mixture_sampling(level: Level, seed: u64) -> Result<String, String> {
    let n = level.pick(50_000, 100_000);
    let policy = MixturePolicy::single(Arc::new(UniformPolicy))
        .mixed_with(
            Arc::new(ClassifierPolicy {
                classifier: Arc::new(TableClassifier::new(vec![1])),
            }),
            0.4,
        )
        .mixed_with(
            Arc::new(ClassifierPolicy {
                classifier: Arc::new(TableClassifier::new(vec![-1])),
            }),
            0.25,
        );
    let marginal = policy.prob_plus(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plus = (0..n).filter(|_| policy.sample_action(0, &mut rng) == 1).count();
    let expect = marginal * n as Real;
    let d = plus as Real - expect;
    let chi2 = d * d / expect + d * d / (n as Real - expect);
    if chi2 < 10.83 {
        Ok(format!("component-then-action vs marginal: chi2 = {chi2:.2} < 10.83"))
    } else {
        Err(format!("mixture sampling rejected: chi2 = {chi2:.2}"))
    }
}

fn rollout_unbiasedness(level: Level, seed: u64) -> Result<String, String> {
    let episodes = level.pick(20_000, 100_000);
    let mdp = verify_mdp();
    let exact: Real = exact_value(&mdp, &UniformPolicy)
        .iter()
        .zip(&mdp.start)
        .map(|(v, p)| v * p)
        .sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut returns = Vec::with_capacity(episodes);
    for _ in 0..episodes {
        returns.push(rollout_value(&mdp, &UniformPolicy, 1, &mut rng).map_err(|e| e.to_string())?);
    }
    let mean: Real = returns.iter().sum::<Real>() / episodes as Real;
    let var: Real =
        returns.iter().map(|r| (r - mean) * (r - mean)).sum::<Real>() / episodes as Real;
    let stderr = (var / episodes as Real).sqrt();
    if (mean - exact).abs() <= 3.0 * stderr {
        Ok(format!("rollout mean {mean:.3} vs exact {exact:.3} within 3 stderr"))
    } else {
        Err(format!("rollout mean {mean} vs exact {exact} (stderr {stderr})"))
    }
}

pub const GROUPS: &[(&str, GroupFn)] = &[
    ("potential-grid", potential_grid),
    ("potential-seam", potential_seam),
    ("potential-finite-diff", potential_finite_diff),
    ("selection-weights", selection_weights),
    ("pseudo-label-range", pseudo_label_range),
    ("relabel-marginal", relabel_marginal),
    ("fractional-mass", fractional_mass),
    ("consistency-gap", consistency_gap),
    ("taylor-identity", taylor_identity),
    ("martingale-recursion", martingale_recursion),
    ("smoothness-descent", smoothness_descent),
    ("boost-budget", boost_budget),
    ("boost-determinism", boost_determinism),
    ("bellman-consistency", bellman_consistency),
    ("rl-pseudo-action-identity", rl_pseudo_action_identity),
    ("mixture-sampling", mixture_sampling),
    ("rollout-unbiasedness", rollout_unbiasedness),
];

/// Runs every invariant group at the given level.
pub fn run_all(level: Level, seed: u64) -> Vec<GroupReport> {
    GROUPS
        .iter()
        .map(|(name, f)| match f(level, seed) {
            Ok(detail) => GroupReport {
                name,
                passed: true,
                detail,
            },
            Err(detail) => GroupReport {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}
