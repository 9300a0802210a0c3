//! Exact computation of population functionals on small finite
//! distributions, plus empirical verification of the identities the
//! booster's guarantees rest on: the consistency gap, the second-order
//! expansion of the potential's directional derivative, and the martingale
//! recursion satisfied by the reuse distribution.
//!
//! All exact sums use compensated (Kahan) summation. The eta'-expectations
//! inside the reuse distribution's exact relabel probabilities are computed
//! by adaptive quadrature over the pseudo-label probability itself, so the
//! oracle never relies on the resampler's analytic shortcut.

use rand::Rng;
use thiserror::Error;

use crate::booster::{BoostConfig, BoostState, StepMode};
use crate::potential::{phi, phi_prime, phi_second, PotentialError};
use crate::resampler::{pseudo_label_prob, PseudoLabelParams, ResampleError, ReuseDistribution};
use crate::types::{sign, Classifier, ExampleSource, LabeledExample, SourceError};
use crate::weak_learners::FiniteClass;
use crate::Real;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("atom probabilities must be >= 0 and sum to 1 (sum = {sum})")]
    InvalidProbabilities { sum: Real },
    #[error("finite distribution has duplicate atoms")]
    DuplicateAtoms,
    #[error("finite distribution has no atoms")]
    EmptyDistribution,
    #[error("adaptive quadrature failed to reach tolerance {tolerance} (residual {residual})")]
    QuadratureNonConvergence { tolerance: Real, residual: Real },
    #[error("booster state unusable for replay: {0}")]
    UnusableState(&'static str),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Resample(#[from] ResampleError),
}

/// Compensated accumulator (Kahan-Neumaier).
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: Real,
    comp: Real,
}

impl KahanSum {
    pub fn add(&mut self, v: Real) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> Real {
        self.sum + self.comp
    }
}

/// One support point of a finite joint distribution over features and
/// labels.
#[derive(Clone, Debug)]
pub struct Atom {
    pub example: LabeledExample,
    pub prob: Real,
}

/// An exactly-enumerated population distribution. Powers every exact
/// functional and serves as an example source for the boosters.
#[derive(Clone, Debug)]
pub struct FiniteDistribution {
    atoms: Vec<Atom>,
    cdf: Vec<Real>,
}

impl FiniteDistribution {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, OracleError> {
        if atoms.is_empty() {
            return Err(OracleError::EmptyDistribution);
        }
        let mut sum = KahanSum::default();
        for a in &atoms {
            if !(a.prob >= 0.0) || !a.prob.is_finite() {
                return Err(OracleError::InvalidProbabilities { sum: a.prob });
            }
            sum.add(a.prob);
        }
        if (sum.value() - 1.0).abs() > 1e-12 {
            return Err(OracleError::InvalidProbabilities { sum: sum.value() });
        }
        let mut keys: Vec<(Vec<u64>, i8)> = atoms
            .iter()
            .map(|a| {
                (
                    a.example.features.iter().map(|v| v.to_bits()).collect(),
                    a.example.label,
                )
            })
            .collect();
        keys.sort();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(OracleError::DuplicateAtoms);
        }
        let mut cdf = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for a in &atoms {
            acc += a.prob;
            cdf.push(acc);
        }
        Ok(Self { atoms, cdf })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn sample_index<R: Rng>(&self, rng: &mut R) -> usize {
        let u: Real = rng.gen();
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.atoms.len() - 1)
    }

    /// `E[y h(x)]` for a real-valued hypothesis.
    pub fn exact_corr<F: Fn(&[Real]) -> Real>(&self, h: F) -> Real {
        let mut acc = KahanSum::default();
        for a in &self.atoms {
            acc.add(a.prob * Real::from(a.example.label) * h(&a.example.features));
        }
        acc.value()
    }

    /// Exact 0-1 loss of a binary hypothesis: `(1 - corr) / 2`.
    pub fn exact_loss<C: Classifier + ?Sized>(&self, h: &C) -> Real {
        let mut acc = KahanSum::default();
        for a in &self.atoms {
            if h.predict(&a.example.features) != a.example.label {
                acc.add(a.prob);
            }
        }
        acc.value()
    }

    /// Exact accuracy of a binary hypothesis.
    pub fn exact_accuracy<C: Classifier + ?Sized>(&self, h: &C) -> Real {
        1.0 - self.exact_loss(h)
    }

    /// `E[phi(y H(x))]`.
    pub fn exact_potential<F: Fn(&[Real]) -> Real>(&self, ensemble: F) -> Result<Real, OracleError> {
        let mut acc = KahanSum::default();
        for a in &self.atoms {
            let margin = Real::from(a.example.label) * ensemble(&a.example.features);
            acc.add(a.prob * phi(margin)?);
        }
        Ok(acc.value())
    }

    /// `E[phi'(y H(x)) y h(x)]`: the directional derivative of the
    /// potential at `H` along `h`.
    pub fn exact_phi_prime<F, G>(&self, ensemble: F, h: G) -> Result<Real, OracleError>
    where
        F: Fn(&[Real]) -> Real,
        G: Fn(&[Real]) -> Real,
    {
        let mut acc = KahanSum::default();
        for a in &self.atoms {
            let y = Real::from(a.example.label);
            let margin = y * ensemble(&a.example.features);
            acc.add(a.prob * phi_prime(margin)? * y * h(&a.example.features));
        }
        Ok(acc.value())
    }

    /// `E[phi''(y H(x)) h(x) g(x)]`.
    pub fn exact_phi_second<F, G, K>(&self, ensemble: F, h: G, g: K) -> Result<Real, OracleError>
    where
        F: Fn(&[Real]) -> Real,
        G: Fn(&[Real]) -> Real,
        K: Fn(&[Real]) -> Real,
    {
        let mut acc = KahanSum::default();
        for a in &self.atoms {
            let y = Real::from(a.example.label);
            let margin = y * ensemble(&a.example.features);
            acc.add(a.prob * phi_second(margin)? * h(&a.example.features) * g(&a.example.features));
        }
        Ok(acc.value())
    }

    /// Argmax of exact correlation over an explicit class.
    pub fn best_in_class(&self, class: &FiniteClass) -> (usize, Real) {
        let mut best = (0usize, Real::NEG_INFINITY);
        for (i, h) in class.iter().enumerate() {
            let c = self.exact_corr(|x| Real::from(h.predict(x)));
            if c > best.1 {
                best = (i, c);
            }
        }
        best
    }
}

impl ExampleSource for FiniteDistribution {
    fn draw<R: Rng>(&mut self, n: usize, rng: &mut R) -> Result<Vec<LabeledExample>, SourceError> {
        Ok((0..n)
            .map(|_| self.atoms[self.sample_index(rng)].example.clone())
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

const QUADRATURE_TOL: Real = 1e-10;
const QUADRATURE_MAX_DEPTH: usize = 48;

fn simpson(fa: Real, fm: Real, fb: Real, h: Real) -> Real {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson_rec<F: Fn(Real) -> Result<Real, OracleError>>(
    f: &F,
    a: Real,
    b: Real,
    fa: Real,
    fm: Real,
    fb: Real,
    whole: Real,
    tol: Real,
    depth: usize,
) -> Result<Real, OracleError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(OracleError::QuadratureNonConvergence {
            tolerance: tol,
            residual: delta.abs(),
        });
    }
    let l = adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?;
    let r = adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?;
    Ok(l + r)
}

/// Adaptive Simpson integral of `f` over `[a, b]` to absolute tolerance
/// `tol`. Errors out instead of returning a poor estimate.
pub fn integrate<F: Fn(Real) -> Result<Real, OracleError>>(
    f: F,
    a: Real,
    b: Real,
    tol: Real,
) -> Result<Real, OracleError> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let fm = f(0.5 * (a + b))?;
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_simpson_rec(&f, a, b, fa, fm, fb, whole, tol, QUADRATURE_MAX_DEPTH)
}

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

/// Slack of the consistency inequality
///
/// ```text
/// Phi'(H, sign(H)) - Phi'(H, h*) >= corr(h*) - corr(sign(H))
/// ```
///
/// Returns LHS - RHS, which must be >= -1e-12 for every distribution,
/// real-valued `H`, and binary `h*`.
pub fn check_consistency_gap<F, C>(
    dist: &FiniteDistribution,
    ensemble: F,
    h_star: &C,
) -> Result<Real, OracleError>
where
    F: Fn(&[Real]) -> Real,
    C: Classifier + ?Sized,
{
    let sign_h = |x: &[Real]| Real::from(sign(ensemble(x)));
    let lhs = dist.exact_phi_prime(&ensemble, sign_h)?
        - dist.exact_phi_prime(&ensemble, |x| Real::from(h_star.predict(x)))?;
    let rhs = dist.exact_corr(|x| Real::from(h_star.predict(x))) - dist.exact_corr(sign_h);
    Ok(lhs - rhs)
}

/// Residual of the second-order expansion
///
/// ```text
/// Phi'(H + eta h_dir, h) = Phi'(H, h) + eta E_{eta' ~ U[0, eta]}[Phi''(H + eta' h_dir, h, h_dir)]
/// ```
///
/// with the expectation computed by adaptive quadrature. The magnitude of
/// the returned residual is bounded by 1e-8 whenever the identity holds.
pub fn check_taylor_identity<F, G, K>(
    dist: &FiniteDistribution,
    ensemble_prev: F,
    h_dir: G,
    eta: Real,
    h_test: K,
) -> Result<Real, OracleError>
where
    F: Fn(&[Real]) -> Real,
    G: Fn(&[Real]) -> Real,
    K: Fn(&[Real]) -> Real,
{
    let shifted = dist.exact_phi_prime(|x| ensemble_prev(x) + eta * h_dir(x), &h_test)?;
    let base = dist.exact_phi_prime(&ensemble_prev, &h_test)?;
    let integral = integrate(
        |eta_prime| {
            dist.exact_phi_second(|x| ensemble_prev(x) + eta_prime * h_dir(x), &h_test, &h_dir)
        },
        0.0,
        eta,
        QUADRATURE_TOL,
    )?;
    Ok(shifted - base - integral)
}

/// Exact correlation of a hypothesis under a realized reuse distribution:
/// selection weights times exact per-example relabel expectations, with the
/// eta'-average computed by quadrature over the pseudo-label probability.
pub fn exact_reuse_correlation<F>(
    reuse: &ReuseDistribution,
    h: F,
) -> Result<Real, OracleError>
where
    F: Fn(&[Real]) -> Real,
{
    if reuse.is_empty() {
        return Err(OracleError::UnusableState("reuse distribution has no rounds"));
    }
    let mut total = KahanSum::default();
    for (round, &g) in reuse.rounds().iter().zip(reuse.selection_weights()) {
        let mut round_sum = KahanSum::default();
        match &round.relabel {
            None => {
                for ex in &round.batch {
                    round_sum.add(Real::from(ex.label) * h(&ex.features));
                }
            }
            Some(snap) => {
                for (i, ex) in round.batch.iter().enumerate() {
                    let expected_label = expected_relabel(
                        ex.label,
                        snap.prev_margins[i],
                        snap.dir_values[i],
                        snap.step,
                        snap.mix,
                    )?;
                    round_sum.add(expected_label * h(&ex.features));
                }
            }
        }
        total.add(g * round_sum.value() / round.batch.len() as Real);
    }
    Ok(total.value())
}

/// `E[y_hat]` for one stored example: `2 E_{eta'}[p] - 1` with the
/// eta'-average taken by quadrature (or a point evaluation when the step is
/// zero).
fn expected_relabel(
    y: i8,
    prev_margin: Real,
    dir_value: Real,
    step: Real,
    mix: Real,
) -> Result<Real, OracleError> {
    let p_bar = if step > 0.0 {
        integrate(
            |eta_prime| {
                let params = PseudoLabelParams::new(step, mix, eta_prime)?;
                Ok(pseudo_label_prob(y, prev_margin, dir_value, &params)?)
            },
            0.0,
            step,
            QUADRATURE_TOL,
        )? / step
    } else {
        let params = PseudoLabelParams::new(0.0, mix, 0.0)?;
        pseudo_label_prob(y, prev_margin, dir_value, &params)?
    };
    Ok(2.0 * p_bar - 1.0)
}

/// Result of the martingale recursion replay: the Monte Carlo estimate of
/// the conditional expectation of the tracking error, its standard error,
/// the exact target `(1 - sigma) Delta_{t-1}`, and the per-state values.
#[derive(Clone, Debug)]
pub struct MartingaleProbe {
    pub estimate: Real,
    pub stderr: Real,
    pub target: Real,
    pub delta_prev: Real,
    pub replications: usize,
}

/// Replays round `t` from a completed-round-`t-1` booster state `M` times
/// with fresh batches, computing `corr` under each realized reuse
/// distribution exactly, and estimates `E_{t-1}[Delta_t]` where
///
/// ```text
/// Delta_t = Phi'(H_t, h) + (1 + eta / sigma) corr_{D_t}(h)
/// ```
///
/// The recursion predicts `E_{t-1}[Delta_t] = (1 - sigma) Delta_{t-1}`, so
/// `|estimate - target| <= 3 stderr` is the pass condition.
pub fn check_martingale_recursion<F, R>(
    dist: &FiniteDistribution,
    state: &BoostState,
    cfg: &BoostConfig,
    h_test: F,
    replications: usize,
    rng: &mut R,
) -> Result<MartingaleProbe, OracleError>
where
    F: Fn(&[Real]) -> Real,
    R: Rng,
{
    if state.rounds_done == 0 || state.ensemble.is_empty() {
        return Err(OracleError::UnusableState("need at least one completed round"));
    }
    if cfg.step_mode != StepMode::Fixed {
        return Err(OracleError::UnusableState("replay requires a fixed step size"));
    }
    let sigma = cfg.mix;
    let eta = cfg.step;
    let factor = 1.0 + eta / sigma;

    // H_t is the current ensemble; H_{t-1} drops its last component.
    let n_comp = state.ensemble.len();
    let curr = |x: &[Real]| state.ensemble.value(x);
    let prev = |x: &[Real]| state.ensemble.prefix_value(x, n_comp - 1);

    let phi_prime_curr = dist.exact_phi_prime(curr, &h_test)?;
    let phi_prime_prev = dist.exact_phi_prime(prev, &h_test)?;
    let corr_prev_dist = exact_reuse_correlation(&state.reuse, &h_test)?;
    let delta_prev = phi_prime_prev + factor * corr_prev_dist;
    let target = (1.0 - sigma) * delta_prev;

    // Relabel expectations for the hypothetical round t, one per atom. The
    // snapshot (margins of H_{t-1}, the last direction, its step) is fixed
    // given the state, so these are exact per-atom constants.
    let last_step = state.ensemble.components[n_comp - 1].step;
    let mut atom_values = Vec::with_capacity(dist.atoms().len());
    for a in dist.atoms() {
        let (prev_margin, dir_value) = state.ensemble.split_last_at(&a.example.features);
        let e_label = expected_relabel(a.example.label, prev_margin, dir_value, last_step, sigma)?;
        atom_values.push(e_label * h_test(&a.example.features));
    }

    let constant = phi_prime_curr + factor * (1.0 - sigma) * corr_prev_dist;
    let s = cfg.fresh_per_round;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..replications {
        let mut batch_mean = 0.0;
        for _ in 0..s {
            batch_mean += atom_values[dist.sample_index(rng)];
        }
        batch_mean /= s as Real;
        let delta_t = constant + factor * sigma * batch_mean;
        sum += delta_t;
        sum_sq += delta_t * delta_t;
    }
    let m = replications as Real;
    let estimate = sum / m;
    let var = (sum_sq / m - estimate * estimate).max(0.0);
    let stderr = (var / m).sqrt();

    Ok(MartingaleProbe {
        estimate,
        stderr,
        target,
        delta_prev,
        replications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::booster::{BoostConfig, BoostRun, BranchMode, RelabelMode, StepMode};
    use crate::types::{ConstantClassifier, TableClassifier};
    use crate::weak_learners::ErmLearner;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn atom(x: Real, y: i8, prob: Real) -> Atom {
        Atom {
            example: LabeledExample::new(vec![x], y),
            prob,
        }
    }

    fn random_dist(rng: &mut ChaCha8Rng, max_atoms: usize) -> FiniteDistribution {
        let n = rng.gen_range(2..=max_atoms);
        let mut raw: Vec<Real> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: Real = raw.iter().sum();
        for w in raw.iter_mut() {
            *w /= total;
        }
        // make probabilities sum to exactly 1 within tolerance
        let atoms: Vec<Atom> = raw
            .iter()
            .enumerate()
            .map(|(i, &p)| atom(i as Real, if rng.gen::<bool>() { 1 } else { -1 }, p))
            .collect();
        FiniteDistribution::new(atoms).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(FiniteDistribution::new(vec![]).is_err());
        assert!(FiniteDistribution::new(vec![atom(0.0, 1, 0.7), atom(1.0, 1, 0.7)]).is_err());
        assert!(FiniteDistribution::new(vec![atom(0.0, 1, 0.5), atom(0.0, 1, 0.5)]).is_err());
        assert!(FiniteDistribution::new(vec![atom(0.0, 1, 0.5), atom(0.0, -1, 0.5)]).is_ok());
    }

    #[test]
    fn exact_corr_examples() {
        let all_pos = FiniteDistribution::new(vec![atom(0.0, 1, 0.4), atom(1.0, 1, 0.6)]).unwrap();
        assert!((all_pos.exact_corr(|_| 1.0) - 1.0).abs() < 1e-15);

        let balanced =
            FiniteDistribution::new(vec![atom(0.0, 1, 0.5), atom(1.0, -1, 0.5)]).unwrap();
        assert!(balanced.exact_corr(|_| 1.0).abs() < 1e-15);
    }

    #[test]
    fn loss_is_half_one_minus_corr() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let dist = random_dist(&mut rng, 8);
            let table: Vec<i8> = (0..8).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
            let h = TableClassifier::new(table);
            let corr = dist.exact_corr(|x| Real::from(h.predict(x)));
            let loss = dist.exact_loss(&h);
            assert!((loss - (1.0 - corr) / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn potential_at_zero_ensemble_is_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let dist = random_dist(&mut rng, 10);
            let v = dist.exact_potential(|_| 0.0).unwrap();
            assert!((v - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn phi_prime_functional_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let dist = random_dist(&mut rng, 8);
            let h = |x: &[Real]| if x[0] >= 3.0 { 1.0 } else { -1.0 };
            // zero ensemble: Phi'(0, h) = -corr(h)
            let v = dist.exact_phi_prime(|_| 0.0, h).unwrap();
            assert!((v + dist.exact_corr(h)).abs() < 1e-13);
            // zero direction
            let z = dist.exact_phi_prime(|x| x[0], |_| 0.0).unwrap();
            assert!(z.abs() < 1e-15);
            // linearity
            let ens = |x: &[Real]| 0.3 * x[0] - 1.0;
            let h2 = |x: &[Real]| if x[0] >= 1.0 { 1.0 } else { -1.0 };
            let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let combo = dist
                .exact_phi_prime(ens, |x| a * h(x) + b * h2(x))
                .unwrap();
            let parts = a * dist.exact_phi_prime(ens, h).unwrap()
                + b * dist.exact_phi_prime(ens, h2).unwrap();
            assert!((combo - parts).abs() < 1e-12);
        }
    }

    #[test]
    fn functional_bounds_and_smoothness() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let dist = random_dist(&mut rng, 8);
            let scale: Real = rng.gen_range(0.2..3.0);
            let h = move |x: &[Real]| scale * if x[0] >= 2.0 { 1.0 } else { -1.0 };
            let g = |x: &[Real]| if x[0] >= 4.0 { 1.0 } else { -1.0 };
            let ens = |x: &[Real]| 0.5 * x[0] - 1.5;
            assert!(dist.exact_phi_prime(ens, h).unwrap().abs() <= scale + 1e-12);
            assert!(dist.exact_phi_second(ens, h, g).unwrap().abs() <= scale + 1e-12);

            // 1-smoothness descent bound
            let eta: Real = rng.gen_range(0.01..0.5);
            let before = dist.exact_potential(ens).unwrap();
            let after = dist.exact_potential(|x| ens(x) + eta * h(x)).unwrap();
            let slope = dist.exact_phi_prime(ens, h).unwrap();
            assert!(
                after <= before + eta * slope + eta * eta * scale * scale / 2.0 + 1e-12,
                "smoothness bound violated"
            );
        }
    }

    #[test]
    fn consistency_gap_edge_cases() {
        let dist =
            FiniteDistribution::new(vec![atom(0.0, 1, 0.3), atom(1.0, -1, 0.7)]).unwrap();
        // h* = sign(H): slack is exactly 0
        let ens = |x: &[Real]| x[0] - 0.5;
        let h_star = move |x: &[Real]| sign(ens(x));
        let slack = check_consistency_gap(&dist, ens, &h_star).unwrap();
        assert!(slack.abs() < 1e-15);

        // H = 0: the inequality is tight for any h*
        let h_any = ConstantClassifier(-1);
        let slack = check_consistency_gap(&dist, |_| 0.0, &h_any).unwrap();
        assert!(slack.abs() < 1e-15);
    }

    #[test]
    fn consistency_gap_random_audit() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let dist = random_dist(&mut rng, 8);
            let w0: Real = rng.gen_range(-1.5..1.5);
            let w1: Real = rng.gen_range(-0.6..0.6);
            let ens = move |x: &[Real]| (w0 + w1 * x[0]).clamp(-3.0, 3.0);
            let table: Vec<i8> = (0..8).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
            let h_star = TableClassifier::new(table);
            let slack = check_consistency_gap(&dist, ens, &h_star).unwrap();
            assert!(slack >= -1e-12, "slack = {slack}");
        }
    }

    #[test]
    fn taylor_identity_degenerate_cases() {
        let dist =
            FiniteDistribution::new(vec![atom(0.0, 1, 0.5), atom(1.0, -1, 0.5)]).unwrap();
        let ens = |x: &[Real]| 0.4 * x[0];
        let h_test = |x: &[Real]| if x[0] >= 0.5 { 1.0 } else { -1.0 };
        // zero direction: residual exactly 0
        let r = check_taylor_identity(&dist, ens, |_| 0.0, 0.3, h_test).unwrap();
        assert!(r.abs() < 1e-15);
        // tiny eta: both sides collapse to Phi'(H, h)
        let r = check_taylor_identity(&dist, ens, |_| 1.0, 1e-9, h_test).unwrap();
        assert!(r.abs() < 1e-9);
    }

    #[test]
    fn taylor_identity_random_instance_with_riemann_cross_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let dist = random_dist(&mut rng, 6);
        let ens = |x: &[Real]| 0.7 * x[0] - 1.3;
        let dir = |x: &[Real]| if x[0] >= 2.0 { 1.0 } else { -1.0 };
        let h_test = |x: &[Real]| if x[0] >= 3.0 { 1.0 } else { -1.0 };
        let eta = 0.3;
        let residual = check_taylor_identity(&dist, ens, dir, eta, h_test).unwrap();
        assert!(residual.abs() <= 1e-8, "residual = {residual}");

        // Riemann-sum cross-check of the quadrature (1e6 midpoint cells)
        let n = 1_000_000usize;
        let mut riemann = 0.0;
        for k in 0..n {
            let ep = eta * (k as Real + 0.5) / n as Real;
            riemann += dist
                .exact_phi_second(|x| ens(x) + ep * dir(x), h_test, dir)
                .unwrap();
        }
        riemann *= eta / n as Real;
        let quad = integrate(
            |ep| dist.exact_phi_second(|x| ens(x) + ep * dir(x), h_test, dir),
            0.0,
            eta,
            1e-10,
        )
        .unwrap();
        assert!((riemann - quad).abs() < 1e-8);
    }

    fn planted_state(
        dist: &mut FiniteDistribution,
        cfg: &BoostConfig,
        class: &FiniteClass,
        rounds: usize,
        seed: u64,
    ) -> BoostState {
        let learner = ErmLearner { class: class.clone() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut run = BoostRun::new(cfg.clone(), dist, &learner, &mut rng).unwrap();
        for _ in 0..rounds {
            run.step().unwrap();
        }
        run.state().clone()
    }

    fn small_class() -> FiniteClass {
        FiniteClass::new(vec![
            Arc::new(TableClassifier::new(vec![1, 1, -1, -1])),
            Arc::new(TableClassifier::new(vec![1, -1, 1, -1])),
            Arc::new(TableClassifier::new(vec![-1, 1, 1, 1])),
        ])
        .unwrap()
    }

    fn martingale_cfg(mix: Real, step: Real) -> BoostConfig {
        BoostConfig {
            gamma: 1.0,
            epsilon: 0.2,
            delta: 0.1,
            rounds: 8,
            step,
            mix,
            branch_threshold: 0.02,
            fresh_per_round: 10,
            weak_batch: 30,
            final_holdout: 50,
            relabel_mode: RelabelMode::Stochastic,
            step_mode: StepMode::Fixed,
            branch_mode: BranchMode::Threshold,
        }
    }

    fn four_atom_dist() -> FiniteDistribution {
        FiniteDistribution::new(vec![
            atom(0.0, 1, 0.4),
            atom(1.0, -1, 0.3),
            atom(2.0, 1, 0.2),
            atom(3.0, -1, 0.1),
        ])
        .unwrap()
    }

    #[test]
    fn martingale_recursion_holds_on_replay() {
        let dist = four_atom_dist();
        let cfg = martingale_cfg(0.3, 0.15);
        let class = small_class();
        let state = planted_state(&mut dist.clone(), &cfg, &class, 2, 11);
        let h = class.get(1).clone();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let probe = check_martingale_recursion(
            &dist,
            &state,
            &cfg,
            |x| Real::from(h.predict(x)),
            20_000,
            &mut rng,
        )
        .unwrap();
        assert!(
            (probe.estimate - probe.target).abs() <= 3.0 * probe.stderr,
            "estimate {} vs target {} (stderr {})",
            probe.estimate,
            probe.target,
            probe.stderr
        );
    }

    #[test]
    fn martingale_recursion_sigma_one_targets_zero() {
        let dist = four_atom_dist();
        let cfg = martingale_cfg(1.0, 0.15);
        let class = small_class();
        let state = planted_state(&mut dist.clone(), &cfg, &class, 2, 4);
        let h = class.get(0).clone();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let probe = check_martingale_recursion(
            &dist,
            &state,
            &cfg,
            |x| Real::from(h.predict(x)),
            20_000,
            &mut rng,
        )
        .unwrap();
        assert_eq!(probe.target, 0.0);
        assert!(probe.estimate.abs() <= 3.0 * probe.stderr.max(1e-12));
    }

    #[test]
    fn martingale_zero_hypothesis_is_degenerate() {
        let dist = four_atom_dist();
        let cfg = martingale_cfg(0.5, 0.1);
        let class = small_class();
        let state = planted_state(&mut dist.clone(), &cfg, &class, 3, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let probe =
            check_martingale_recursion(&dist, &state, &cfg, |_| 0.0, 1_000, &mut rng).unwrap();
        assert_eq!(probe.estimate, 0.0);
        assert_eq!(probe.target, 0.0);
        assert_eq!(probe.stderr, 0.0);
    }

    #[test]
    fn best_in_class_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let dist = random_dist(&mut rng, 8);
        let class = FiniteClass::new(
            (0..12)
                .map(|_| {
                    Arc::new(TableClassifier::new(
                        (0..8).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect(),
                    )) as Arc<dyn Classifier>
                })
                .collect(),
        )
        .unwrap();
        let (idx, corr) = dist.best_in_class(&class);
        for (i, h) in class.iter().enumerate() {
            let c = dist.exact_corr(|x| Real::from(h.predict(x)));
            assert!(c <= corr + 1e-15, "member {i} beats best_in_class");
        }
        let again = dist.exact_corr(|x| Real::from(class.get(idx).predict(x)));
        assert!((again - corr).abs() < 1e-15);
    }
}
