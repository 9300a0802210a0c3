//! Binary-action discounted tabular MDPs with episodic and reset-based
//! access, the trajectory sampler that turns policy execution into labeled
//! examples for the booster, the policy-boosting outer loop, and exact
//! policy evaluation for testing.
//!
//! The trajectory sampler draws a state from the discounted occupancy
//! measure by geometric stopping, probes a uniformly random action there,
//! accumulates the discounted tail reward `R`, and emits a pseudo action
//! `y` that equals the probed action with probability `(1 - beta) R / 2`.
//! This makes the advantage identity
//!
//! ```text
//! E[y | s] = ((1 - beta) / 2) E[Q_hat(+1) - Q_hat(-1) | s]
//! ```
//!
//! hold exactly, with `Q_hat(a') = 2 R` an unbiased per-action estimate of
//! `Q(s, a')`, while the acceptance probability stays below 1/2 almost
//! surely since `R <= 1 / (1 - beta)`.

use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::booster::{boost, BoostConfig, BoostError};
use crate::types::{Classifier, ExampleSource, LabeledExample, SourceError};
use crate::weak_learners::WeakLearner;
use crate::Real;

/// Discount tail factors below this are truncated; the value contribution
/// is below 1e-12 / (1 - beta).
const TAIL_EPS: Real = 1e-12;
/// Hard safety cap on steps per sampled trajectory or rollout.
const STEP_CAP: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum RlError {
    #[error("invalid MDP: {0}")]
    InvalidMdp(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("trajectory exceeded the {cap}-step safety cap")]
    StepCap { cap: usize },
    #[error(transparent)]
    Boost(#[from] BoostError),
}

#[inline]
fn action_index(a: i8) -> usize {
    debug_assert!(a == 1 || a == -1);
    ((a + 1) / 2) as usize
}

const ACTIONS: [i8; 2] = [-1, 1];

/// A binary-action discounted MDP: transition rows `P(s' | s, a)`, rewards
/// `r(s, a)` in `[0, 1]`, discount `beta` in `[0, 1)`, a start distribution
/// and an exploratory reset distribution.
#[derive(Clone, Debug)]
pub struct TabularMDP {
    pub n_states: usize,
    /// `transition[s][action_index][s']`
    pub transition: Vec<[Vec<Real>; 2]>,
    /// `reward[s][action_index]`
    pub reward: Vec<[Real; 2]>,
    pub discount: Real,
    pub start: Vec<Real>,
    pub reset: Vec<Real>,
}

fn check_distribution(p: &[Real], n: usize, what: &str) -> Result<(), RlError> {
    if p.len() != n {
        return Err(RlError::InvalidMdp(format!(
            "{what} has {} entries, expected {n}",
            p.len()
        )));
    }
    if p.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(RlError::InvalidMdp(format!("{what} has negative entries")));
    }
    let sum: Real = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(RlError::InvalidMdp(format!("{what} sums to {sum}, not 1")));
    }
    Ok(())
}

impl TabularMDP {
    pub fn validate(&self) -> Result<(), RlError> {
        if self.n_states == 0 {
            return Err(RlError::InvalidMdp("zero states".into()));
        }
        if !(0.0..1.0).contains(&self.discount) {
            return Err(RlError::InvalidMdp(format!(
                "discount {} outside [0, 1)",
                self.discount
            )));
        }
        if self.transition.len() != self.n_states || self.reward.len() != self.n_states {
            return Err(RlError::InvalidMdp("transition/reward table size mismatch".into()));
        }
        for s in 0..self.n_states {
            for (ai, action) in ACTIONS.iter().enumerate() {
                check_distribution(
                    &self.transition[s][ai],
                    self.n_states,
                    &format!("transition row (s={s}, a={action})"),
                )?;
                let r = self.reward[s][ai];
                if !(0.0..=1.0).contains(&r) {
                    return Err(RlError::InvalidMdp(format!(
                        "reward r({s}, {action}) = {r} outside [0, 1]"
                    )));
                }
            }
        }
        check_distribution(&self.start, self.n_states, "start distribution")?;
        check_distribution(&self.reset, self.n_states, "reset distribution")?;
        Ok(())
    }

    fn sample_from<R: Rng>(p: &[Real], rng: &mut R) -> usize {
        let u: Real = rng.gen();
        let mut acc = 0.0;
        for (i, &v) in p.iter().enumerate() {
            acc += v;
            if u < acc {
                return i;
            }
        }
        p.len() - 1
    }

    pub fn sample_start<R: Rng>(&self, dist: &[Real], rng: &mut R) -> usize {
        Self::sample_from(dist, rng)
    }

    pub fn step<R: Rng>(&self, s: usize, a: i8, rng: &mut R) -> (usize, Real) {
        let ai = action_index(a);
        let next = Self::sample_from(&self.transition[s][ai], rng);
        (next, self.reward[s][ai])
    }
}

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

/// A Markov policy over a binary action set, described by the probability
/// of taking action `+1` in each state.
pub trait Policy: Send + Sync {
    fn prob_plus(&self, state: usize) -> Real;
}

/// Plays `+1` with probability 1/2 everywhere.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformPolicy;

impl Policy for UniformPolicy {
    fn prob_plus(&self, _state: usize) -> Real {
        0.5
    }
}

/// A deterministic policy given by a binary classifier over states; the
/// state is encoded as the single feature `x[0]`.
#[derive(Clone)]
pub struct ClassifierPolicy {
    pub classifier: Arc<dyn Classifier>,
}

impl Policy for ClassifierPolicy {
    fn prob_plus(&self, state: usize) -> Real {
        if self.classifier.predict(&[state as Real]) == 1 {
            1.0
        } else {
            0.0
        }
    }
}

/// A convex mixture of base policies. Action sampling draws a component by
/// weight and then queries it, which induces the same per-step action
/// distribution as the weight-averaged action probability.
#[derive(Clone)]
pub struct MixturePolicy {
    pub components: Vec<(Real, Arc<dyn Policy>)>,
}

impl MixturePolicy {
    pub fn single(policy: Arc<dyn Policy>) -> Self {
        Self {
            components: vec![(1.0, policy)],
        }
    }

    /// `(1 - eta) self + eta policy`, dropping zero-weight parts.
    pub fn mixed_with(&self, policy: Arc<dyn Policy>, eta: Real) -> Self {
        assert!((0.0..=1.0).contains(&eta));
        let mut components: Vec<(Real, Arc<dyn Policy>)> = self
            .components
            .iter()
            .map(|(w, p)| (w * (1.0 - eta), Arc::clone(p)))
            .filter(|(w, _)| *w > 0.0)
            .collect();
        if eta > 0.0 {
            components.push((eta, policy));
        }
        Self { components }
    }

    pub fn sample_action<R: Rng>(&self, state: usize, rng: &mut R) -> i8 {
        let u: Real = rng.gen();
        let mut acc = 0.0;
        let mut chosen = &self.components[self.components.len() - 1].1;
        for (w, p) in &self.components {
            acc += w;
            if u < acc {
                chosen = p;
                break;
            }
        }
        if rng.gen::<Real>() < chosen.prob_plus(state) {
            1
        } else {
            -1
        }
    }
}

impl Policy for MixturePolicy {
    fn prob_plus(&self, state: usize) -> Real {
        self.components
            .iter()
            .map(|(w, p)| w * p.prob_plus(state))
            .sum()
    }
}

// ---------------------------------------------------------------------------
// Trajectory sampling
// ---------------------------------------------------------------------------

/// The output of one trajectory probe: the occupancy-sampled state, the
/// one-hot scaled Q estimate, the pseudo action, and the steps consumed.
#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub state: usize,
    /// `q_hat[action_index(a)] = 2 R` for the probed action, 0 otherwise;
    /// bounded by `2 / (1 - beta)`.
    pub q_hat: [Real; 2],
    pub pseudo_action: i8,
    pub episode_length: usize,
}

/// Runs one probe episode under `policy` from `start_dist`:
/// walk to a state `s_h` accepted with probability `1 - beta` per step,
/// take a uniformly random action `a'` there, accumulate the discounted
/// tail reward `R` (truncated once the discount factor underflows), and
/// emit `y = a'` with probability `((1 - beta) / 2) R`, the flipped action
/// otherwise.
pub fn sample_trajectory<P: Policy + ?Sized, R: Rng>(
    mdp: &TabularMDP,
    policy: &P,
    start_dist: &[Real],
    rng: &mut R,
) -> Result<TrajectorySample, RlError> {
    let beta = mdp.discount;
    let mut steps = 0usize;
    let mut s = mdp.sample_start(start_dist, rng);

    // occupancy phase: accept the current state with probability 1 - beta
    while rng.gen::<Real>() < beta {
        let a = if rng.gen::<Real>() < policy.prob_plus(s) { 1 } else { -1 };
        let (next, _) = mdp.step(s, a, rng);
        s = next;
        steps += 1;
        if steps > STEP_CAP {
            return Err(RlError::StepCap { cap: STEP_CAP });
        }
    }

    let probe_action = if rng.gen::<bool>() { 1i8 } else { -1 };
    let (mut cursor, r0) = mdp.step(s, probe_action, rng);
    steps += 1;
    let mut tail = r0;
    let mut disc = beta;
    while disc >= TAIL_EPS {
        let a = if rng.gen::<Real>() < policy.prob_plus(cursor) { 1 } else { -1 };
        let (next, r) = mdp.step(cursor, a, rng);
        tail += disc * r;
        disc *= beta;
        cursor = next;
        steps += 1;
        if steps > STEP_CAP {
            return Err(RlError::StepCap { cap: STEP_CAP });
        }
    }

    let mut q_hat = [0.0, 0.0];
    q_hat[action_index(probe_action)] = 2.0 * tail;
    let accept = (1.0 - beta) / 2.0 * tail;
    debug_assert!(accept <= 0.5 + 1e-9);
    let pseudo_action = if rng.gen::<Real>() < accept {
        probe_action
    } else {
        -probe_action
    };
    Ok(TrajectorySample {
        state: s,
        q_hat,
        pseudo_action,
        episode_length: steps,
    })
}

/// Adapts trajectory probes into the booster's example stream: features are
/// the occupancy-sampled state, labels the pseudo action.
pub struct TrajectorySource<'a, P: Policy + ?Sized> {
    mdp: &'a TabularMDP,
    policy: &'a P,
    start_dist: Vec<Real>,
    episodes: usize,
}

impl<'a, P: Policy + ?Sized> TrajectorySource<'a, P> {
    pub fn new(mdp: &'a TabularMDP, policy: &'a P, start_dist: Vec<Real>) -> Self {
        Self {
            mdp,
            policy,
            start_dist,
            episodes: 0,
        }
    }

    pub fn episodes(&self) -> usize {
        self.episodes
    }
}

impl<P: Policy + ?Sized> ExampleSource for TrajectorySource<'_, P> {
    fn draw<R: Rng>(&mut self, n: usize, rng: &mut R) -> Result<Vec<LabeledExample>, SourceError> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let t = sample_trajectory(self.mdp, self.policy, &self.start_dist, rng)
                .map_err(|_| SourceError::StepCapExceeded { cap: STEP_CAP })?;
            self.episodes += 1;
            out.push(LabeledExample::new(vec![t.state as Real], t.pseudo_action));
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Exact evaluation
// ---------------------------------------------------------------------------

/// Gaussian elimination with partial pivoting; the systems here are
/// `(I - beta P_pi) V = r_pi`, nonsingular for any discount below 1.
fn solve_linear(mut a: Vec<Vec<Real>>, mut b: Vec<Real>) -> Vec<Real> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        assert!(a[pivot][col].abs() > 1e-14, "singular policy-evaluation system");
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let (pivot_rows, rest) = a.split_at_mut(row);
            let pivot = &pivot_rows[col];
            let target = &mut rest[0];
            let f = target[col] / pivot[col];
            if f == 0.0 {
                continue;
            }
            for (t, p) in target[col..].iter_mut().zip(&pivot[col..]) {
                *t -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

/// Exact per-state values `V(s)` of a policy, by direct linear solve.
pub fn exact_value<P: Policy + ?Sized>(mdp: &TabularMDP, policy: &P) -> Vec<Real> {
    let n = mdp.n_states;
    let beta = mdp.discount;
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for s in 0..n {
        let p_plus = policy.prob_plus(s);
        b[s] = p_plus * mdp.reward[s][1] + (1.0 - p_plus) * mdp.reward[s][0];
        for (sp, cell) in a[s].iter_mut().enumerate() {
            let p_trans =
                p_plus * mdp.transition[s][1][sp] + (1.0 - p_plus) * mdp.transition[s][0][sp];
            *cell = -beta * p_trans;
        }
        a[s][s] += 1.0;
    }
    solve_linear(a, b)
}

/// Exact state-action values `Q(s, a) = r(s, a) + beta sum P(s'|s,a) V(s')`.
pub fn exact_q<P: Policy + ?Sized>(mdp: &TabularMDP, policy: &P) -> Vec<[Real; 2]> {
    let v = exact_value(mdp, policy);
    (0..mdp.n_states)
        .map(|s| {
            let mut q = [0.0, 0.0];
            for (ai, slot) in q.iter_mut().enumerate() {
                let future: Real = mdp.transition[s][ai]
                    .iter()
                    .zip(&v)
                    .map(|(p, vv)| p * vv)
                    .sum();
                *slot = mdp.reward[s][ai] + mdp.discount * future;
            }
            q
        })
        .collect()
}

/// Value of a policy from a given state distribution.
pub fn exact_value_from<P: Policy + ?Sized>(mdp: &TabularMDP, policy: &P, dist: &[Real]) -> Real {
    exact_value(mdp, policy)
        .iter()
        .zip(dist)
        .map(|(v, p)| v * p)
        .sum()
}

/// Unbiased rollout estimate of the start-state value: the mean over
/// episodes of an undiscounted reward sum with geometric continuation
/// (continue with probability beta after each step).
pub fn rollout_value<P: Policy + ?Sized, R: Rng>(
    mdp: &TabularMDP,
    policy: &P,
    episodes: usize,
    rng: &mut R,
) -> Result<Real, RlError> {
    let beta = mdp.discount;
    let mut total = 0.0;
    for _ in 0..episodes {
        let mut s = mdp.sample_start(&mdp.start, rng);
        let mut ret = 0.0;
        let mut steps = 0usize;
        loop {
            let a = if rng.gen::<Real>() < policy.prob_plus(s) { 1 } else { -1 };
            let (next, r) = mdp.step(s, a, rng);
            ret += r;
            s = next;
            steps += 1;
            if steps > STEP_CAP {
                return Err(RlError::StepCap { cap: STEP_CAP });
            }
            if rng.gen::<Real>() >= beta {
                break;
            }
        }
        total += ret;
    }
    Ok(total / episodes as Real)
}

// ---------------------------------------------------------------------------
// Policy boosting
// ---------------------------------------------------------------------------

/// Which start distribution the trajectory sampler uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccessMode {
    /// Episodes start from the MDP's canonical start distribution.
    Episodic,
    /// Episodes start from the exploratory reset distribution.
    Reset,
}

/// Mixing step schedule for the conservative policy update.
#[derive(Clone, Copy, Debug)]
pub enum StepSchedule {
    /// `eta_t = 2 / (t + 1)`; the first update replaces the initial policy.
    Harmonic,
    Constant(Real),
}

impl StepSchedule {
    pub fn step(&self, t: usize) -> Real {
        match self {
            StepSchedule::Harmonic => 2.0 / (t as Real + 1.0),
            StepSchedule::Constant(eta) => *eta,
        }
    }
}

#[derive(Clone)]
pub struct PolicyBoostResult {
    pub policy: MixturePolicy,
    /// Rollout value estimate of each candidate mixture, index `t - 1`.
    pub value_estimates: Vec<Real>,
    /// 1-based index of the selected candidate.
    pub chosen_round: usize,
    /// Total episodes consumed (trajectory probes plus evaluation rollouts).
    pub episodes: usize,
}

/// The policy-boosting outer loop: each round runs the sample-reuse booster
/// on pseudo-labeled trajectory probes of the current mixture, mixes in the
/// resulting deterministic policy with the scheduled step, and finally
/// post-selects the best mixture by empirical return over `post_rollouts`
/// fresh episodes (ties to the earliest round).
#[allow(clippy::too_many_arguments)]
pub fn boost_policy<W: WeakLearner + ?Sized, R: Rng>(
    mdp: &TabularMDP,
    learner: &W,
    access: AccessMode,
    outer_rounds: usize,
    schedule: StepSchedule,
    post_rollouts: usize,
    booster_cfg: &BoostConfig,
    rng: &mut R,
) -> Result<PolicyBoostResult, RlError> {
    mdp.validate()?;
    let start_dist = match access {
        AccessMode::Episodic => mdp.start.clone(),
        AccessMode::Reset => mdp.reset.clone(),
    };

    let mut current = MixturePolicy::single(Arc::new(UniformPolicy));
    let mut candidates = Vec::with_capacity(outer_rounds);
    let mut episodes = 0usize;
    for t in 1..=outer_rounds {
        let improved = {
            let mut source = TrajectorySource::new(mdp, &current, start_dist.clone());
            let result = boost(&mut source, learner, booster_cfg, rng)?;
            episodes += source.episodes();
            Arc::new(ClassifierPolicy {
                classifier: result.final_hypothesis,
            }) as Arc<dyn Policy>
        };
        current = current.mixed_with(improved, schedule.step(t));
        candidates.push(current.clone());
    }

    let mut value_estimates = Vec::with_capacity(candidates.len());
    let mut best = 0usize;
    for (i, cand) in candidates.iter().enumerate() {
        let v = rollout_value(mdp, cand, post_rollouts, rng)?;
        episodes += post_rollouts;
        value_estimates.push(v);
        if v > value_estimates[best] {
            best = i;
        }
    }
    Ok(PolicyBoostResult {
        policy: candidates[best].clone(),
        value_estimates,
        chosen_round: best + 1,
        episodes,
    })
}

// ---------------------------------------------------------------------------
// MDP specification files
// ---------------------------------------------------------------------------

/// Parses the plain-text MDP format:
///
/// ```text
/// # comments and blank lines are ignored
/// states N
/// discount BETA
/// start p_0 ... p_{N-1}
/// reset p_0 ... p_{N-1}
/// reward S A R            # A is +1 or -1
/// transition S A p_0 ... p_{N-1}
/// ```
///
/// Every `(state, action)` pair needs one `reward` and one `transition`
/// line. Errors carry the offending line number.
pub fn parse_mdp(text: &str, path: &str) -> Result<TabularMDP, RlError> {
    let err = |line: usize, message: String| RlError::Parse {
        path: path.to_string(),
        line,
        message,
    };
    let mut n_states: Option<usize> = None;
    let mut discount: Option<Real> = None;
    let mut start: Option<Vec<Real>> = None;
    let mut reset: Option<Vec<Real>> = None;
    let mut rewards: Vec<Option<Real>> = Vec::new();
    let mut transitions: Vec<Option<Vec<Real>>> = Vec::new();

    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        let parse_real = |s: &str| -> Result<Real, RlError> {
            s.parse()
                .map_err(|_| err(line_no, format!("cannot parse '{s}' as a number")))
        };
        let parse_action = |s: &str| -> Result<i8, RlError> {
            match s {
                "+1" | "1" => Ok(1),
                "-1" => Ok(-1),
                _ => Err(err(line_no, format!("action must be +1 or -1, got '{s}'"))),
            }
        };
        let need_n = |n_states: &Option<usize>| -> Result<usize, RlError> {
            n_states.ok_or_else(|| err(line_no, "'states N' must come first".into()))
        };
        match keyword {
            "states" => {
                let n: usize = rest
                    .first()
                    .ok_or_else(|| err(line_no, "missing state count".into()))?
                    .parse()
                    .map_err(|_| err(line_no, "invalid state count".into()))?;
                if n == 0 {
                    return Err(err(line_no, "state count must be positive".into()));
                }
                n_states = Some(n);
                rewards = vec![None; n * 2];
                transitions = vec![None; n * 2];
            }
            "discount" => {
                discount = Some(parse_real(
                    rest.first()
                        .ok_or_else(|| err(line_no, "missing discount".into()))?,
                )?);
            }
            "start" | "reset" => {
                let n = need_n(&n_states)?;
                if rest.len() != n {
                    return Err(err(line_no, format!("expected {n} probabilities")));
                }
                let p = rest.iter().map(|s| parse_real(s)).collect::<Result<Vec<_>, _>>()?;
                if keyword == "start" {
                    start = Some(p);
                } else {
                    reset = Some(p);
                }
            }
            "reward" => {
                let n = need_n(&n_states)?;
                if rest.len() != 3 {
                    return Err(err(line_no, "expected: reward S A R".into()));
                }
                let s: usize = rest[0]
                    .parse()
                    .map_err(|_| err(line_no, "invalid state index".into()))?;
                if s >= n {
                    return Err(err(line_no, format!("state {s} out of range")));
                }
                let a = parse_action(rest[1])?;
                rewards[s * 2 + action_index(a)] = Some(parse_real(rest[2])?);
            }
            "transition" => {
                let n = need_n(&n_states)?;
                if rest.len() != 2 + n {
                    return Err(err(line_no, format!("expected: transition S A plus {n} probabilities")));
                }
                let s: usize = rest[0]
                    .parse()
                    .map_err(|_| err(line_no, "invalid state index".into()))?;
                if s >= n {
                    return Err(err(line_no, format!("state {s} out of range")));
                }
                let a = parse_action(rest[1])?;
                let row = rest[2..]
                    .iter()
                    .map(|x| parse_real(x))
                    .collect::<Result<Vec<_>, _>>()?;
                transitions[s * 2 + action_index(a)] = Some(row);
            }
            other => return Err(err(line_no, format!("unknown keyword '{other}'"))),
        }
    }

    let missing = |what: String| RlError::InvalidMdp(format!("{path}: missing {what}"));
    let n = n_states.ok_or_else(|| missing("'states' line".into()))?;
    let discount = discount.ok_or_else(|| missing("'discount' line".into()))?;
    let start = start.ok_or_else(|| missing("'start' line".into()))?;
    let reset = reset.ok_or_else(|| missing("'reset' line".into()))?;
    let mut reward = Vec::with_capacity(n);
    let mut transition = Vec::with_capacity(n);
    for s in 0..n {
        let mut r = [0.0; 2];
        let mut t: [Vec<Real>; 2] = [Vec::new(), Vec::new()];
        for ai in 0..2 {
            r[ai] = rewards[s * 2 + ai]
                .ok_or_else(|| missing(format!("reward for (s={s}, a={})", ACTIONS[ai])))?;
            t[ai] = transitions[s * 2 + ai]
                .clone()
                .ok_or_else(|| missing(format!("transition for (s={s}, a={})", ACTIONS[ai])))?;
        }
        reward.push(r);
        transition.push(t);
    }
    let mdp = TabularMDP {
        n_states: n,
        transition,
        reward,
        discount,
        start,
        reset,
    };
    mdp.validate()?;
    Ok(mdp)
}

pub fn load_mdp(path: impl AsRef<Path>) -> Result<TabularMDP, RlError> {
    let path_str = path.as_ref().display().to_string();
    let text = std::fs::read_to_string(path.as_ref()).map_err(|source| RlError::Io {
        path: path_str.clone(),
        source,
    })?;
    parse_mdp(&text, &path_str)
}

/// Single state, two actions: `+1` pays 1, `-1` pays 0. The optimal value
/// is `1 / (1 - beta)`.
pub fn single_state_mdp(beta: Real) -> TabularMDP {
    TabularMDP {
        n_states: 1,
        transition: vec![[vec![1.0], vec![1.0]]],
        reward: vec![[0.0, 1.0]],
        discount: beta,
        start: vec![1.0],
        reset: vec![1.0],
    }
}

/// A left-to-right chain: action `+1` advances toward the rewarding final
/// state, `-1` retreats; only the last state pays.
pub fn chain_mdp(n_states: usize, beta: Real) -> TabularMDP {
    let mut transition = Vec::with_capacity(n_states);
    let mut reward = Vec::with_capacity(n_states);
    for s in 0..n_states {
        let mut right = vec![0.0; n_states];
        right[(s + 1).min(n_states - 1)] = 1.0;
        let mut left = vec![0.0; n_states];
        left[s.saturating_sub(1)] = 1.0;
        transition.push([left, right]);
        let r = if s == n_states - 1 { 1.0 } else { 0.0 };
        reward.push([r, r]);
    }
    let mut start = vec![0.0; n_states];
    start[0] = 1.0;
    TabularMDP {
        n_states,
        transition,
        reward,
        discount: beta,
        start,
        reset: vec![1.0 / n_states as Real; n_states],
    }
}
