//! Concrete weak learners: decision stumps, degree-limited parity ERM over
//! the boolean hypercube, and exhaustive ERM over an explicit finite class.
//!
//! Every fit procedure consumes weighted data (uniform weights for
//! stochastic callers), maximizes weighted empirical correlation, and breaks
//! ties deterministically.

use std::sync::Arc;

use thiserror::Error;

use crate::types::{sign, Classifier, WeightedData};
use crate::Real;

#[derive(Debug, Error)]
pub enum WeakLearnError {
    #[error("cannot fit on empty data")]
    EmptyData,
    #[error("example weights must be >= 0 and sum to > 0")]
    ZeroTotalWeight,
    #[error("example {index} has a non-hypercube feature {value} at coordinate {coord}")]
    NonHypercubeFeature {
        index: usize,
        coord: usize,
        value: Real,
    },
    #[error("parity degree {degree} exceeds feature dimension {dim}")]
    DegreeExceedsDimension { degree: usize, dim: usize },
    #[error("hypothesis class is empty")]
    EmptyClass,
}

/// Fits hypotheses from some base class onto weighted labeled data.
pub trait WeakLearner: Send + Sync {
    fn fit(&self, data: &WeightedData) -> Result<Arc<dyn Classifier>, WeakLearnError>;
}

// ---------------------------------------------------------------------------
// Decision stumps
// ---------------------------------------------------------------------------

/// Axis-aligned threshold classifier: `polarity * sign(x[feature] - threshold)`
/// with `sign(0) = +1`. Thresholds sit at midpoints of consecutive distinct
/// feature values, with infinite sentinels for the constant classifiers.
#[derive(Clone, Debug, PartialEq)]
pub struct Stump {
    pub feature_index: usize,
    pub threshold: Real,
    pub polarity: i8,
}

impl Classifier for Stump {
    fn predict(&self, x: &[Real]) -> i8 {
        self.polarity * sign(x[self.feature_index] - self.threshold)
    }
}

fn validate_weights(data: &WeightedData) -> Result<Real, WeakLearnError> {
    if data.is_empty() {
        return Err(WeakLearnError::EmptyData);
    }
    let total = data.total_weight();
    if data.weights.iter().any(|&w| w < 0.0) || total <= 0.0 {
        return Err(WeakLearnError::ZeroTotalWeight);
    }
    Ok(total)
}

fn consider(best: &mut Option<(Real, Stump)>, corr: Real, stump: Stump) {
    match best {
        Some((b, _)) if corr <= *b => {}
        _ => *best = Some((corr, stump)),
    }
}

/// Candidate scan over one feature given its value-sorted example order.
/// Tie order among equal values is irrelevant: thresholds only fall between
/// distinct values, so the accumulated mass at each emitted candidate is
/// order-independent.
fn scan_sorted_feature(
    data: &WeightedData,
    total: Real,
    f: usize,
    order: &[u32],
    best: &mut Option<(Real, Stump)>,
) {
    let n = order.len();
    let signed = |i: u32| {
        data.weights[i as usize] * Real::from(data.examples[i as usize].label)
    };
    let all: Real = order.iter().map(|&i| signed(i)).sum();

    // threshold -inf: everything predicted +1 (for polarity +1)
    for (pol, corr) in [(-1i8, -all / total), (1i8, all / total)] {
        consider(best, corr, Stump { feature_index: f, threshold: Real::NEG_INFINITY, polarity: pol });
    }
    let mut below = 0.0;
    for k in 0..n {
        below += signed(order[k]);
        let here = data.examples[order[k] as usize].features[f];
        let next = if k + 1 < n {
            data.examples[order[k + 1] as usize].features[f]
        } else {
            Real::INFINITY
        };
        if here == next {
            continue;
        }
        let threshold = if next.is_finite() {
            0.5 * (here + next)
        } else {
            Real::INFINITY
        };
        let c = (all - 2.0 * below) / total;
        for (pol, corr) in [(-1i8, -c), (1i8, c)] {
            consider(best, corr, Stump { feature_index: f, threshold, polarity: pol });
        }
    }
}

fn sort_by_feature(data: &WeightedData, f: usize, indices: &mut [u32]) {
    indices.sort_by(|&a, &b| {
        data.examples[a as usize].features[f]
            .partial_cmp(&data.examples[b as usize].features[f])
            .expect("non-finite feature value")
    });
}

/// Returns the stump maximizing weighted empirical correlation, scanning all
/// features and all midpoints between consecutive distinct sorted values
/// plus infinite sentinels. Ties resolve to the lexicographically smallest
/// `(feature_index, threshold, polarity)`.
pub fn fit_stump(data: &WeightedData) -> Result<Stump, WeakLearnError> {
    let total = validate_weights(data)?;
    let dim = data.examples[0].features.len();

    let mut best: Option<(Real, Stump)> = None;
    let mut order: Vec<u32> = (0..data.len() as u32).collect();
    for f in 0..dim {
        sort_by_feature(data, f, &mut order);
        scan_sorted_feature(data, total, f, &order, &mut best);
    }
    Ok(best.expect("nonempty data produces at least one candidate").1)
}

/// Stateless stump learner for the boosters.
#[derive(Clone, Copy, Debug, Default)]
pub struct StumpLearner;

impl WeakLearner for StumpLearner {
    fn fit(&self, data: &WeightedData) -> Result<Arc<dyn Classifier>, WeakLearnError> {
        Ok(Arc::new(fit_stump(data)?))
    }
}

#[derive(Default)]
struct StumpOrderCache {
    /// Feature-buffer address per example of the set the orders were built
    /// for; relabeled copies share buffers, so this identifies feature
    /// content without comparing values.
    fingerprints: Vec<usize>,
    /// Per feature: example indices sorted by feature value.
    orders: Vec<Vec<u32>>,
}

fn fingerprint(data: &WeightedData, i: usize) -> usize {
    data.examples[i].features.as_ptr() as usize
}

/// Stump learner that reuses per-feature sorted orders across fits within
/// one boosting run. Boosting loops refit either a fixed relabeled pool or
/// an append-only expansion every round; detecting this via feature-buffer
/// identity lets each round sort only the new rows and merge, instead of
/// re-sorting everything. Results are identical to [`fit_stump`].
#[derive(Default)]
pub struct SortCachingStumpLearner {
    cache: std::sync::Mutex<StumpOrderCache>,
}

impl SortCachingStumpLearner {
    pub fn fit_stump(&self, data: &WeightedData) -> Result<Stump, WeakLearnError> {
        let total = validate_weights(data)?;
        let dim = data.examples[0].features.len();
        let n = data.len();
        let mut cache = self.cache.lock().expect("no panics while holding the lock");

        let cached = cache.fingerprints.len();
        let extends = cache.orders.len() == dim
            && cached <= n
            && (0..cached).all(|i| fingerprint(data, i) == cache.fingerprints[i]);

        if !extends {
            cache.fingerprints.clear();
            cache.orders = vec![Vec::new(); dim];
            let mut order: Vec<u32> = (0..n as u32).collect();
            for f in 0..dim {
                sort_by_feature(data, f, &mut order);
                cache.orders[f] = order.clone();
            }
        } else if cached < n {
            let mut fresh: Vec<u32> = (cached as u32..n as u32).collect();
            for f in 0..dim {
                sort_by_feature(data, f, &mut fresh);
                let old = &cache.orders[f];
                let mut merged = Vec::with_capacity(n);
                let value = |i: u32| data.examples[i as usize].features[f];
                let (mut a, mut b) = (0usize, 0usize);
                while a < old.len() && b < fresh.len() {
                    if value(old[a]) <= value(fresh[b]) {
                        merged.push(old[a]);
                        a += 1;
                    } else {
                        merged.push(fresh[b]);
                        b += 1;
                    }
                }
                merged.extend_from_slice(&old[a..]);
                merged.extend_from_slice(&fresh[b..]);
                cache.orders[f] = merged;
            }
        }
        cache.fingerprints = (0..n).map(|i| fingerprint(data, i)).collect();

        let mut best: Option<(Real, Stump)> = None;
        for f in 0..dim {
            scan_sorted_feature(data, total, f, &cache.orders[f], &mut best);
        }
        Ok(best.expect("nonempty data produces at least one candidate").1)
    }
}

impl WeakLearner for SortCachingStumpLearner {
    fn fit(&self, data: &WeightedData) -> Result<Arc<dyn Classifier>, WeakLearnError> {
        Ok(Arc::new(self.fit_stump(data)?))
    }
}

// ---------------------------------------------------------------------------
// Parities over the hypercube
// ---------------------------------------------------------------------------

/// Signed parity over a subset of coordinates of `{-1, +1}^n`; the empty
/// subset is the constant classifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parity {
    pub subset: Vec<usize>,
    pub sign: i8,
}

impl Classifier for Parity {
    fn predict(&self, x: &[Real]) -> i8 {
        let mut v = self.sign;
        for &i in &self.subset {
            if x[i] < 0.0 {
                v = -v;
            }
        }
        v
    }
}

fn check_hypercube(data: &WeightedData) -> Result<usize, WeakLearnError> {
    let dim = data.examples[0].features.len();
    for (index, ex) in data.examples.iter().enumerate() {
        for (coord, &value) in ex.features.iter().enumerate() {
            if value != 1.0 && value != -1.0 {
                return Err(WeakLearnError::NonHypercubeFeature { index, coord, value });
            }
        }
    }
    Ok(dim)
}

/// Enumerates all subsets of `{0, .., n-1}` of size at most `d` in
/// lexicographic order (as sorted index sequences), invoking `visit` on each.
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
    let mut prefix = Vec::with_capacity(d);
    rec(n, d, 0, &mut prefix, visit);
}

/// ERM over all signed parities of degree at most `d`. Ties resolve to the
/// lexicographically smallest subset, then to sign `+1`.
pub fn fit_parity(data: &WeightedData, d: usize) -> Result<Parity, WeakLearnError> {
    let total = validate_weights(data)?;
    let dim = check_hypercube(data)?;
    if d > dim {
        return Err(WeakLearnError::DegreeExceedsDimension { degree: d, dim });
    }

    let mut best: Option<(Real, Parity)> = None;
    for_each_subset(dim, d, &mut |subset| {
        let mut corr = 0.0;
        for (ex, w) in data.examples.iter().zip(&data.weights) {
            let mut prod = ex.label;
            for &i in subset {
                if ex.features[i] < 0.0 {
                    prod = -prod;
                }
            }
            corr += w * Real::from(prod);
        }
        corr /= total;
        for (sgn, c) in [(1i8, corr), (-1i8, -corr)] {
            match &best {
                Some((b, _)) if c <= *b => {}
                _ => {
                    best = Some((
                        c,
                        Parity {
                            subset: subset.to_vec(),
                            sign: sgn,
                        },
                    ))
                }
            }
        }
    });
    Ok(best.expect("constant parity always enumerated").1)
}

/// Number of candidates `fit_parity` enumerates: subsets of size <= d, two
/// signs each.
pub fn parity_candidate_count(n: usize, d: usize) -> usize {
    let mut subsets = 1usize; // the empty subset
    let mut binom = 1usize;
    for k in 1..=d.min(n) {
        binom = binom * (n - k + 1) / k;
        subsets += binom;
    }
    subsets * 2
}

/// Parity-ERM learner with a fixed maximum degree.
#[derive(Clone, Copy, Debug)]
pub struct ParityLearner {
    pub max_degree: usize,
}

impl WeakLearner for ParityLearner {
    fn fit(&self, data: &WeightedData) -> Result<Arc<dyn Classifier>, WeakLearnError> {
        Ok(Arc::new(fit_parity(data, self.max_degree)?))
    }
}

// ---------------------------------------------------------------------------
// Exhaustive ERM over an explicit finite class
// ---------------------------------------------------------------------------

/// An explicit, nonempty list of binary classifiers.
#[derive(Clone)]
pub struct FiniteClass {
    hypotheses: Vec<Arc<dyn Classifier>>,
}

impl FiniteClass {
    pub fn new(hypotheses: Vec<Arc<dyn Classifier>>) -> Result<Self, WeakLearnError> {
        if hypotheses.is_empty() {
            return Err(WeakLearnError::EmptyClass);
        }
        Ok(Self { hypotheses })
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn get(&self, index: usize) -> &Arc<dyn Classifier> {
        &self.hypotheses[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn Classifier>> {
        self.hypotheses.iter()
    }

    /// Natural log of the class size, the quantity the parameter presets
    /// scale with.
    pub fn log_size(&self) -> Real {
        (self.hypotheses.len() as Real).ln()
    }
}

/// Exhaustive ERM: the class member with the highest weighted empirical
/// correlation; ties resolve to the lowest index. This is a gamma = 1 weak
/// learner for the class itself.
pub fn fit_erm(
    data: &WeightedData,
    class: &FiniteClass,
) -> Result<(usize, Arc<dyn Classifier>), WeakLearnError> {
    validate_weights(data)?;
    if class.is_empty() {
        return Err(WeakLearnError::EmptyClass);
    }
    let mut best_idx = 0usize;
    let mut best_corr = Real::NEG_INFINITY;
    for (i, h) in class.iter().enumerate() {
        let corr = data.correlation(h.as_ref());
        if corr > best_corr {
            best_corr = corr;
            best_idx = i;
        }
    }
    Ok((best_idx, Arc::clone(class.get(best_idx))))
}

/// Exhaustive-ERM learner over a fixed finite class.
#[derive(Clone)]
pub struct ErmLearner {
    pub class: FiniteClass,
}

impl WeakLearner for ErmLearner {
    fn fit(&self, data: &WeightedData) -> Result<Arc<dyn Classifier>, WeakLearnError> {
        Ok(fit_erm(data, &self.class)?.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{LabeledExample, TableClassifier};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(rows: &[(&[Real], i8)]) -> WeightedData {
        WeightedData::uniform(
            rows.iter()
                .map(|(x, y)| LabeledExample::new(x.to_vec(), *y))
                .collect(),
        )
    }

    fn xor_data() -> WeightedData {
        uniform(&[
            (&[-1.0, -1.0], 1),
            (&[1.0, 1.0], 1),
            (&[-1.0, 1.0], -1),
            (&[1.0, -1.0], -1),
        ])
    }

    /// Brute-force stump search: all features, all midpoints and sentinels,
    /// correlation by direct loop. Independent of the prefix-sum scan.
    fn brute_force_stump(data: &WeightedData) -> (Real, Stump) {
        let dim = data.examples[0].features.len();
        let total = data.total_weight();
        let mut best: Option<(Real, Stump)> = None;
        for f in 0..dim {
            let mut vals: Vec<Real> = data.examples.iter().map(|e| e.features[f]).collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            vals.dedup();
            let mut thresholds = vec![Real::NEG_INFINITY];
            for w in vals.windows(2) {
                thresholds.push(0.5 * (w[0] + w[1]));
            }
            thresholds.push(Real::INFINITY);
            for &th in &thresholds {
                for pol in [-1i8, 1] {
                    let stump = Stump { feature_index: f, threshold: th, polarity: pol };
                    let mut corr = 0.0;
                    for (ex, w) in data.examples.iter().zip(&data.weights) {
                        corr += w * Real::from(ex.label) * Real::from(stump.predict(&ex.features));
                    }
                    corr /= total;
                    match &best {
                        Some((b, _)) if corr <= *b => {}
                        _ => best = Some((corr, stump)),
                    }
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn perfect_split_one_dimension() {
        let data = uniform(&[(&[-1.0], -1), (&[1.0], 1)]);
        let stump = fit_stump(&data).unwrap();
        assert_eq!(stump, Stump { feature_index: 0, threshold: 0.0, polarity: 1 });
        assert!((data.correlation(&stump) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn all_positive_labels_give_constant_stump() {
        let data = uniform(&[(&[0.3], 1), (&[-2.0], 1), (&[5.0], 1)]);
        let stump = fit_stump(&data).unwrap();
        assert_eq!(stump.feature_index, 0);
        assert_eq!(stump.threshold, Real::NEG_INFINITY);
        assert_eq!(stump.polarity, 1);
        assert!((data.correlation(&stump) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn xor_defeats_stumps() {
        let data = xor_data();
        let stump = fit_stump(&data).unwrap();
        let (brute_corr, _) = brute_force_stump(&data);
        assert!(brute_corr.abs() < 1e-15);
        assert!(data.correlation(&stump).abs() < 1e-15);
    }

    #[test]
    fn stump_matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for trial in 0..40 {
            let n = rng.gen_range(2..=50);
            let dim = rng.gen_range(1..=4);
            let examples: Vec<LabeledExample> = (0..n)
                .map(|_| {
                    LabeledExample::new(
                        (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect(),
                        if rng.gen::<bool>() { 1 } else { -1 },
                    )
                })
                .collect();
            let weights: Vec<Real> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
            let data = WeightedData::weighted(examples, weights);
            if data.total_weight() <= 0.0 {
                continue;
            }
            let fast = fit_stump(&data).unwrap();
            let (brute_corr, _) = brute_force_stump(&data);
            let fast_corr = data.correlation(&fast);
            assert!(
                (fast_corr - brute_corr).abs() < 1e-12,
                "trial {trial}: scan corr {fast_corr} != brute corr {brute_corr}"
            );
        }
    }

    #[test]
    fn caching_learner_matches_plain_fit_through_growth_and_rebuilds() {
        let mut rng = ChaCha8Rng::seed_from_u64(314);
        let learner = SortCachingStumpLearner::default();
        let mut examples: Vec<LabeledExample> = Vec::new();

        let grow = |examples: &mut Vec<LabeledExample>, rng: &mut ChaCha8Rng| {
            for _ in 0..rng.gen_range(3..20) {
                let ex = LabeledExample::new(
                    (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                    if rng.gen::<bool>() { 1 } else { -1 },
                );
                // append the pair form a fractional expansion would produce,
                // sharing the feature buffer
                examples.push(ex.clone());
                examples.push(ex.flipped());
            }
        };

        for step in 0..8 {
            grow(&mut examples, &mut rng);
            let weights: Vec<Real> = (0..examples.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let data = WeightedData::weighted(examples.clone(), weights);
            let cached = learner.fit_stump(&data).unwrap();
            let plain = fit_stump(&data).unwrap();
            assert_eq!(cached, plain, "divergence at growth step {step}");
        }

        // replacing the set entirely must trigger a rebuild, not a merge
        examples.clear();
        grow(&mut examples, &mut rng);
        let data = WeightedData::uniform(examples.clone());
        assert_eq!(learner.fit_stump(&data).unwrap(), fit_stump(&data).unwrap());

        // shrinking the set likewise
        examples.truncate(4);
        let data = WeightedData::uniform(examples);
        assert_eq!(learner.fit_stump(&data).unwrap(), fit_stump(&data).unwrap());
    }

    #[test]
    fn stump_errors() {
        assert!(matches!(
            fit_stump(&WeightedData::default()),
            Err(WeakLearnError::EmptyData)
        ));
        let data = WeightedData::weighted(vec![LabeledExample::new(vec![0.0], 1)], vec![0.0]);
        assert!(matches!(fit_stump(&data), Err(WeakLearnError::ZeroTotalWeight)));
    }

    #[test]
    fn parity_recovers_xor_at_degree_two() {
        let parity = fit_parity(&xor_data(), 2).unwrap();
        assert_eq!(parity, Parity { subset: vec![0, 1], sign: 1 });
        assert!((xor_data().correlation(&parity) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degree_one_parities_fail_on_xor() {
        let data = xor_data();
        let parity = fit_parity(&data, 1).unwrap();
        assert!(data.correlation(&parity).abs() < 1e-15);
        // direct enumeration of all 2(n+1) degree-<=1 candidates
        let mut best: Real = Real::NEG_INFINITY;
        for subset in [vec![], vec![0], vec![1]] {
            for sgn in [1i8, -1] {
                let p = Parity { subset: subset.clone(), sign: sgn };
                best = best.max(data.correlation(&p));
            }
        }
        assert!(best.abs() < 1e-15);
    }

    #[test]
    fn single_coordinate_label_is_found() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let examples: Vec<LabeledExample> = (0..64)
            .map(|_| {
                let x: Vec<Real> = (0..5)
                    .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                    .collect();
                let y = if x[3] > 0.0 { 1 } else { -1 };
                LabeledExample::new(x, y)
            })
            .collect();
        let data = WeightedData::uniform(examples);
        let parity = fit_parity(&data, 1).unwrap();
        assert_eq!(parity, Parity { subset: vec![3], sign: 1 });
        assert!((data.correlation(&parity) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parity_candidate_census() {
        assert_eq!(parity_candidate_count(7, 1), 16);
        assert_eq!(parity_candidate_count(5, 2), 2 * (1 + 5 + 10));
        let mut seen = 0usize;
        for_each_subset(5, 2, &mut |_| seen += 1);
        assert_eq!(seen * 2, parity_candidate_count(5, 2));
    }

    #[test]
    fn parity_rejects_non_hypercube() {
        let data = uniform(&[(&[0.5, 1.0], 1)]);
        assert!(matches!(
            fit_parity(&data, 1),
            Err(WeakLearnError::NonHypercubeFeature { index: 0, coord: 0, .. })
        ));
    }

    #[test]
    fn erm_symmetric_pair_never_negative() {
        let h = Arc::new(TableClassifier::new(vec![1, -1, 1, -1]));
        let neg = Arc::new(TableClassifier::new(vec![-1, 1, -1, 1]));
        let class = FiniteClass::new(vec![h, neg]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let examples: Vec<LabeledExample> = (0..10)
                .map(|_| {
                    LabeledExample::new(
                        vec![rng.gen_range(0..4) as Real],
                        if rng.gen::<bool>() { 1 } else { -1 },
                    )
                })
                .collect();
            let data = WeightedData::uniform(examples);
            let (_, best) = fit_erm(&data, &class).unwrap();
            assert!(data.correlation(best.as_ref()) >= 0.0);
        }
    }

    #[test]
    fn erm_finds_perfect_hypothesis() {
        let target = Arc::new(TableClassifier::new(vec![1, -1, -1, 1]));
        let other = Arc::new(TableClassifier::new(vec![1, 1, 1, 1]));
        let class = FiniteClass::new(vec![other, target.clone()]).unwrap();
        let examples: Vec<LabeledExample> = (0..4)
            .map(|i| LabeledExample::new(vec![i as Real], target.table[i]))
            .collect();
        let data = WeightedData::uniform(examples);
        let (idx, best) = fit_erm(&data, &class).unwrap();
        assert_eq!(idx, 1);
        assert!((data.correlation(best.as_ref()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn erm_matches_independent_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let class_tables: Vec<Vec<i8>> = (0..20)
            .map(|_| (0..8).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect())
            .collect();
        let class = FiniteClass::new(
            class_tables
                .iter()
                .map(|t| Arc::new(TableClassifier::new(t.clone())) as Arc<dyn Classifier>)
                .collect(),
        )
        .unwrap();
        let examples: Vec<LabeledExample> = (0..40)
            .map(|_| {
                LabeledExample::new(
                    vec![rng.gen_range(0..8) as Real],
                    if rng.gen::<bool>() { 1 } else { -1 },
                )
            })
            .collect();
        let data = WeightedData::uniform(examples);
        let (idx, _) = fit_erm(&data, &class).unwrap();

        // second, independently coded argmax
        let mut best_idx = 0;
        let mut best = Real::NEG_INFINITY;
        for (i, table) in class_tables.iter().enumerate() {
            let mut corr = 0.0;
            for ex in &data.examples {
                corr += Real::from(ex.label) * Real::from(table[ex.features[0] as usize]);
            }
            corr /= data.len() as Real;
            if corr > best {
                best = corr;
                best_idx = i;
            }
        }
        assert_eq!(idx, best_idx);
    }
}
