//! Dataset ingestion, label-noise injection, cross-validation folds, and
//! synthetic generators (corrupted halfspaces on the hypercube, planted
//! finite instances).

use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::oracles::{Atom, FiniteDistribution, OracleError};
use crate::types::{sign, Classifier, LabeledExample, SourceError, TableClassifier};
use crate::weak_learners::FiniteClass;
use crate::Real;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("dataset is empty")]
    Empty,
    #[error("noise rate {0} outside [0, 0.5]")]
    InvalidNoiseRate(Real),
    #[error("cannot split {examples} examples into {folds} folds")]
    TooManyFolds { examples: usize, folds: usize },
    #[error("hypercube dimension {0} too large for enumeration (max 24)")]
    DimensionTooLarge(usize),
    #[error("planted best correlation {0} outside [0, 1]")]
    InvalidBestCorr(Real),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A loaded dataset: uniformly-dimensioned feature vectors with signed
/// binary labels.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub examples: Vec<LabeledExample>,
    pub feature_dim: usize,
}

impl Dataset {
    pub fn new(examples: Vec<LabeledExample>) -> Result<Self, DataError> {
        if examples.is_empty() {
            return Err(DataError::Empty);
        }
        let feature_dim = examples[0].features.len();
        debug_assert!(examples.iter().all(|e| e.features.len() == feature_dim));
        Ok(Self {
            examples,
            feature_dim,
        })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Fraction of examples a classifier gets right.
    pub fn accuracy<C: Classifier + ?Sized>(&self, h: &C) -> Real {
        let hits = self
            .examples
            .iter()
            .filter(|e| h.predict(&e.features) == e.label)
            .count();
        hits as Real / self.len() as Real
    }
}

/// Which column holds the label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    First,
    Last,
    Index(usize),
}

/// Declared two-value label encoding: raw values that map to +1 and -1.
#[derive(Clone, Copy, Debug)]
pub struct LabelEncoding {
    pub positive: Real,
    pub negative: Real,
}

impl Default for LabelEncoding {
    fn default() -> Self {
        Self {
            positive: 1.0,
            negative: 0.0,
        }
    }
}

/// Parses a comma-separated dataset with numeric features. Accepts LF or
/// CRLF line endings and an optional header row; reports parse failures
/// with their line number; rejects ragged rows and labels outside the
/// declared encoding. Row order is preserved.
pub fn load_csv(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: LabelColumn,
    encoding: LabelEncoding,
) -> Result<Dataset, DataError> {
    let path_str = path.as_ref().display().to_string();
    let raw = std::fs::read_to_string(path.as_ref()).map_err(|source| DataError::Io {
        path: path_str.clone(),
        source,
    })?;
    parse_csv(&raw, &path_str, has_header, label_column, encoding)
}

fn parse_csv(
    raw: &str,
    path: &str,
    has_header: bool,
    label_column: LabelColumn,
    encoding: LabelEncoding,
) -> Result<Dataset, DataError> {
    let mut examples = Vec::new();
    let mut width: Option<usize> = None;
    let parse_err = |line: usize, message: String| DataError::Parse {
        path: path.to_string(),
        line,
        message,
    };

    for (i, line) in raw.lines().enumerate() {
        let line_no = i + 1;
        if has_header && i == 0 {
            continue;
        }
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() < 2 {
            return Err(parse_err(
                line_no,
                "need at least one feature column besides the label".into(),
            ));
        }
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(parse_err(
                    line_no,
                    format!("ragged row: expected {w} columns, found {}", cells.len()),
                ))
            }
            _ => {}
        }
        let label_idx = match label_column {
            LabelColumn::First => 0,
            LabelColumn::Last => cells.len() - 1,
            LabelColumn::Index(i) => {
                if i >= cells.len() {
                    return Err(parse_err(
                        line_no,
                        format!("label column {i} out of range for {} columns", cells.len()),
                    ));
                }
                i
            }
        };
        let mut features = Vec::with_capacity(cells.len() - 1);
        let mut label = 0i8;
        for (c, cell) in cells.iter().enumerate() {
            let v: Real = cell.trim().parse().map_err(|_| {
                parse_err(line_no, format!("cannot parse '{}' as a number", cell.trim()))
            })?;
            if c == label_idx {
                label = if v == encoding.positive {
                    1
                } else if v == encoding.negative {
                    -1
                } else {
                    return Err(parse_err(
                        line_no,
                        format!(
                            "label {v} is neither {} nor {}",
                            encoding.positive, encoding.negative
                        ),
                    ));
                };
            } else {
                features.push(v);
            }
        }
        examples.push(LabeledExample::new(features, label));
    }
    Dataset::new(examples)
}

/// Writes a dataset in the same format `load_csv` reads (label last,
/// encoded `1`/`0`). Used by tests and the benchmark tooling.
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<(), DataError> {
    let mut out = String::new();
    for ex in &dataset.examples {
        let mut row: Vec<String> = ex.features.iter().map(|v| format!("{v}")).collect();
        row.push(if ex.label == 1 { "1".into() } else { "0".into() });
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path.as_ref(), out).map_err(|source| DataError::Io {
        path: path.as_ref().display().to_string(),
        source,
    })
}

/// Seeded label-noise plan: each label flips independently with the given
/// rate. Meant for training splits only.
#[derive(Clone, Copy, Debug)]
pub struct NoisePlan {
    pub rate: Real,
    pub seed: u64,
}

impl NoisePlan {
    pub fn new(rate: Real, seed: u64) -> Result<Self, DataError> {
        if !(0.0..=0.5).contains(&rate) {
            return Err(DataError::InvalidNoiseRate(rate));
        }
        Ok(Self { rate, seed })
    }
}

/// Flips each label independently with probability `plan.rate` under the
/// plan's seeded stream; features are untouched.
pub fn inject_noise(data: &Dataset, plan: &NoisePlan) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let examples = data
        .examples
        .iter()
        .map(|ex| {
            if plan.rate > 0.0 && rng.gen::<Real>() < plan.rate {
                ex.flipped()
            } else {
                ex.clone()
            }
        })
        .collect();
    Dataset {
        examples,
        feature_dim: data.feature_dim,
    }
}

/// Exact seeded k-fold partition; fold sizes differ by at most one.
#[derive(Clone, Debug)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// `assignment[i]` is the fold of example `i`.
    pub assignment: Vec<usize>,
}

impl FoldPlan {
    /// Indices of the test fold and of its complement.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut test = Vec::new();
        let mut train = Vec::new();
        for (i, &f) in self.assignment.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (test, train)
    }
}

pub fn kfold(n_examples: usize, k: usize, seed: u64) -> Result<FoldPlan, DataError> {
    if k == 0 || k > n_examples {
        return Err(DataError::TooManyFolds {
            examples: n_examples,
            folds: k,
        });
    }
    let mut order: Vec<usize> = (0..n_examples).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut assignment = vec![0usize; n_examples];
    for (pos, &idx) in order.iter().enumerate() {
        assignment[idx] = pos % k;
    }
    Ok(FoldPlan { k, seed, assignment })
}

/// The halfspace `sign(w . x - theta)` as a classifier over `{-1, +1}^n`.
#[derive(Clone, Debug)]
pub struct Halfspace {
    pub weights: Vec<Real>,
    pub threshold: Real,
}

impl Classifier for Halfspace {
    fn predict(&self, x: &[Real]) -> i8 {
        let dot: Real = self.weights.iter().zip(x).map(|(w, v)| w * v).sum();
        sign(dot - self.threshold)
    }
}

fn hypercube_point(bits: usize, n: usize) -> Vec<Real> {
    (0..n)
        .map(|i| if bits >> i & 1 == 1 { 1.0 } else { -1.0 })
        .collect()
}

/// Exact distribution of a (possibly label-corrupted) halfspace with
/// uniform feature marginal on `{-1, +1}^n`, by full enumeration. Each
/// point contributes its true-label atom with mass `(1 - rho) 2^{-n}` and,
/// when `rho > 0`, a flipped atom with mass `rho 2^{-n}`.
pub fn gen_halfspace(
    n: usize,
    weights: &[Real],
    theta: Real,
    corrupt_rate: Real,
) -> Result<FiniteDistribution, DataError> {
    if n > 24 {
        return Err(DataError::DimensionTooLarge(n));
    }
    if !(0.0..=0.5).contains(&corrupt_rate) {
        return Err(DataError::InvalidNoiseRate(corrupt_rate));
    }
    assert_eq!(weights.len(), n);
    let halfspace = Halfspace {
        weights: weights.to_vec(),
        threshold: theta,
    };
    let base = 0.5f64.powi(n as i32);
    let mut atoms = Vec::with_capacity(1 << (n + 1));
    for bits in 0..(1usize << n) {
        let x = hypercube_point(bits, n);
        let label = halfspace.predict(&x);
        atoms.push(Atom {
            example: LabeledExample::new(x.clone(), label),
            prob: base * (1.0 - corrupt_rate),
        });
        if corrupt_rate > 0.0 {
            atoms.push(Atom {
                example: LabeledExample::new(x, -label),
                prob: base * corrupt_rate,
            });
        }
    }
    Ok(FiniteDistribution::new(atoms)?)
}

/// Streaming halfspace sampler for dimensions beyond enumeration range.
pub struct HalfspaceSource {
    pub halfspace: Halfspace,
    pub corrupt_rate: Real,
}

impl crate::types::ExampleSource for HalfspaceSource {
    fn draw<R: Rng>(&mut self, n: usize, rng: &mut R) -> Result<Vec<LabeledExample>, SourceError> {
        let dim = self.halfspace.weights.len();
        Ok((0..n)
            .map(|_| {
                let x: Vec<Real> = (0..dim)
                    .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                    .collect();
                let mut label = self.halfspace.predict(&x);
                if self.corrupt_rate > 0.0 && rng.gen::<Real>() < self.corrupt_rate {
                    label = -label;
                }
                LabeledExample::new(x, label)
            })
            .collect())
    }
}

/// A planted finite learning instance: a uniform domain of
/// `domain_size` points (encoded as the single feature `x[0] = index`), a
/// random class of `class_size` table classifiers containing the designated
/// target `h*` at index 0, and labels equal to `h*(x)` flipped with
/// probability `(1 - best_corr)/2`, so `corr(h*) = best_corr` exactly.
pub struct PlantedInstance {
    pub distribution: FiniteDistribution,
    pub class: FiniteClass,
    pub target_index: usize,
}

pub fn gen_planted(
    domain_size: usize,
    class_size: usize,
    best_corr: Real,
    seed: u64,
) -> Result<PlantedInstance, DataError> {
    if !(0.0..=1.0).contains(&best_corr) {
        return Err(DataError::InvalidBestCorr(best_corr));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'regenerate: for _attempt in 0..64 {
        let target_table: Vec<i8> = (0..domain_size)
            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
            .collect();
        let target = TableClassifier::new(target_table.clone());

        let mut hypotheses: Vec<Arc<dyn Classifier>> =
            vec![Arc::new(target.clone()) as Arc<dyn Classifier>];
        let mut tables = vec![target_table.clone()];
        for _ in 1..class_size {
            let table: Vec<i8> = (0..domain_size)
                .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
                .collect();
            tables.push(table.clone());
            hypotheses.push(Arc::new(TableClassifier::new(table)));
        }

        let base = 1.0 / domain_size as Real;
        let flip = (1.0 - best_corr) / 2.0;
        let mut atoms = Vec::with_capacity(domain_size * 2);
        for (i, &t) in target_table.iter().enumerate() {
            atoms.push(Atom {
                example: LabeledExample::new(vec![i as Real], t),
                prob: base * (1.0 - flip),
            });
            if flip > 0.0 {
                atoms.push(Atom {
                    example: LabeledExample::new(vec![i as Real], -t),
                    prob: base * flip,
                });
            }
        }
        let distribution = FiniteDistribution::new(atoms)?;

        // enumeration gate: no other member may beat the target
        for table in tables.iter().skip(1) {
            let h = TableClassifier::new(table.clone());
            let corr = distribution.exact_corr(|x| Real::from(h.predict(x)));
            if corr > best_corr + 1e-12 {
                continue 'regenerate;
            }
        }
        let class = FiniteClass::new(hypotheses).expect("class_size >= 1");
        return Ok(PlantedInstance {
            distribution,
            class,
            target_index: 0,
        });
    }
    unreachable!("no table can exceed the planted correlation; regeneration cannot exhaust")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn csv_two_row_example() {
        let data = parse_csv(
            "1,0,1\n0,1,0",
            "inline",
            false,
            LabelColumn::Last,
            LabelEncoding::default(),
        )
        .unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(data.feature_dim, 2);
        assert_eq!(data.examples[0].label, 1);
        assert_eq!(data.examples[1].label, -1);
        assert_eq!(&*data.examples[1].features, &[0.0, 1.0]);
    }

    #[test]
    fn csv_rejects_bad_inputs() {
        let enc = LabelEncoding::default();
        assert!(matches!(
            parse_csv("", "f", false, LabelColumn::Last, enc),
            Err(DataError::Empty)
        ));
        let err = parse_csv("1,2,1\n1,2", "f", false, LabelColumn::Last, enc).unwrap_err();
        assert!(matches!(err, DataError::Parse { line: 2, .. }), "{err}");
        let err = parse_csv("1,2,7", "f", false, LabelColumn::Last, enc).unwrap_err();
        assert!(matches!(err, DataError::Parse { line: 1, .. }), "{err}");
        let err = parse_csv("1,x,1", "f", false, LabelColumn::Last, enc).unwrap_err();
        assert!(matches!(err, DataError::Parse { line: 1, .. }), "{err}");
        let err = parse_csv("1\n0", "f", false, LabelColumn::Last, enc).unwrap_err();
        assert!(matches!(err, DataError::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn csv_handles_crlf_and_header() {
        let data = parse_csv(
            "a,b,label\r\n0.5,-2,1\r\n1.5,3,0\r\n",
            "inline",
            true,
            LabelColumn::Last,
            LabelEncoding::default(),
        )
        .unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(&*data.examples[0].features, &[0.5, -2.0]);
    }

    #[test]
    fn noise_rate_zero_is_identity() {
        let data = Dataset::new(vec![
            LabeledExample::new(vec![1.0], 1),
            LabeledExample::new(vec![2.0], -1),
        ])
        .unwrap();
        let plan = NoisePlan::new(0.0, 9).unwrap();
        let noisy = inject_noise(&data, &plan);
        for (a, b) in data.examples.iter().zip(&noisy.examples) {
            assert_eq!(a.label, b.label);
        }
        assert!(NoisePlan::new(0.6, 0).is_err());
        assert!(NoisePlan::new(0.5, 0).is_ok());
    }

    #[test]
    fn noise_flip_fraction_concentrates() {
        let n = 100_000;
        let data = Dataset::new(
            (0..n)
                .map(|i| LabeledExample::new(vec![i as Real], 1))
                .collect(),
        )
        .unwrap();
        let plan = NoisePlan::new(0.2, 3).unwrap();
        let noisy = inject_noise(&data, &plan);
        let flipped = noisy.examples.iter().filter(|e| e.label == -1).count();
        let frac = flipped as Real / n as Real;
        let tol = 3.0 * (0.16f64 / n as Real).sqrt();
        assert!((frac - 0.2).abs() <= tol, "flipped fraction {frac}");
    }

    #[test]
    fn kfold_partition_is_exact() {
        let plan = kfold(103, 30, 5).unwrap();
        let mut sizes = vec![0usize; 30];
        for &f in &plan.assignment {
            sizes[f] += 1;
        }
        let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        assert!(max - min <= 1);
        let (test, train) = plan.split(7);
        let mut all: Vec<usize> = test.iter().chain(train.iter()).copied().collect();
        all.sort();
        assert_eq!(all, (0..103).collect::<Vec<_>>());
        // leave-one-out
        let loo = kfold(10, 10, 0).unwrap();
        let mut sizes = [0usize; 10];
        for &f in &loo.assignment {
            sizes[f] += 1;
        }
        assert!(sizes.iter().all(|&s| s == 1));
        assert!(kfold(5, 6, 0).is_err());
    }

    #[test]
    fn kfold_is_seed_deterministic() {
        let a = kfold(50, 7, 42).unwrap();
        let b = kfold(50, 7, 42).unwrap();
        assert_eq!(a.assignment, b.assignment);
        let c = kfold(50, 7, 43).unwrap();
        assert_ne!(a.assignment, c.assignment);
    }

    #[test]
    fn one_dimensional_halfspace_enumeration() {
        let dist = gen_halfspace(1, &[1.0], 0.0, 0.0).unwrap();
        assert_eq!(dist.atoms().len(), 2);
        for a in dist.atoms() {
            assert_eq!(a.example.label, sign(a.example.features[0]));
            assert!((a.prob - 0.5).abs() < 1e-15);
        }
        assert!(gen_halfspace(25, &[1.0; 25], 0.0, 0.0).is_err());
    }

    #[test]
    fn majority_of_three_single_coordinate_correlation() {
        let dist = gen_halfspace(3, &[1.0, 1.0, 1.0], 0.0, 0.0).unwrap();
        // brute-force oracle over all 8 points: E[x0 * maj(x)] = 1/2
        let corr = dist.exact_corr(|x| x[0]);
        assert!((corr - 0.5).abs() < 1e-15);
        // uniform marginal: every atom has mass 2^{-3}
        assert!(dist.atoms().iter().all(|a| (a.prob - 0.125).abs() < 1e-15));
    }

    #[test]
    fn corruption_scales_every_correlation() {
        let clean = gen_halfspace(5, &[1.0; 5], 0.0, 0.0).unwrap();
        let rho = 0.15;
        let noisy = gen_halfspace(5, &[1.0; 5], 0.0, rho).unwrap();
        for h in [
            |x: &[Real]| x[0],
            |x: &[Real]| x[2] * x[3],
            |x: &[Real]| if x[1] + x[4] >= 0.0 { 1.0 } else { -1.0 },
        ] {
            let a = clean.exact_corr(h);
            let b = noisy.exact_corr(h);
            assert!((b - (1.0 - 2.0 * rho) * a).abs() < 1e-12);
        }
    }

    #[test]
    fn halfspace_source_labels_match_the_halfspace() {
        use crate::types::ExampleSource;
        let mut source = HalfspaceSource {
            halfspace: Halfspace {
                weights: vec![1.0; 30],
                threshold: 0.0,
            },
            corrupt_rate: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for ex in source.draw(50, &mut rng).unwrap() {
            assert!(ex.features.iter().all(|&v| v == 1.0 || v == -1.0));
            assert_eq!(ex.label, source.halfspace.predict(&ex.features));
        }
    }

    #[test]
    fn planted_instance_has_exact_target_correlation() {
        let planted = gen_planted(16, 32, 0.7, 1).unwrap();
        let target = planted.class.get(planted.target_index);
        let corr = planted
            .distribution
            .exact_corr(|x| Real::from(target.predict(x)));
        assert!((corr - 0.7).abs() < 1e-12);
        let (_best_idx, best_corr) = planted.distribution.best_in_class(&planted.class);
        assert!(best_corr <= 0.7 + 1e-12);
        assert!(gen_planted(8, 4, 1.5, 0).is_err());
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let data = Dataset::new(
            (0..100)
                .map(|_| {
                    LabeledExample::new(
                        (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect(),
                        if rng.gen::<bool>() { 1 } else { -1 },
                    )
                })
                .collect(),
        )
        .unwrap();
        let dir = std::env::temp_dir().join("agnoboost_csv_roundtrip.csv");
        write_csv(&data, &dir).unwrap();
        let back = load_csv(&dir, false, LabelColumn::Last, LabelEncoding::default()).unwrap();
        assert_eq!(back.len(), data.len());
        for (a, b) in data.examples.iter().zip(&back.examples) {
            assert_eq!(a.label, b.label);
            assert_eq!(&*a.features, &*b.features);
        }
        let _ = std::fs::remove_file(dir);
    }

    proptest! {
        #[test]
        fn kfold_reassembles_any_size(n in 1usize..200, k in 1usize..40, seed: u64) {
            prop_assume!(k <= n);
            let plan = kfold(n, k, seed).unwrap();
            let mut counts = vec![0usize; k];
            for &f in &plan.assignment {
                prop_assert!(f < k);
                counts[f] += 1;
            }
            let (min, max) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
            prop_assert!(max - min <= 1);
            prop_assert_eq!(plan.assignment.len(), n);
        }

        #[test]
        fn csv_parse_write_parse_stable(
            rows in proptest::collection::vec(
                (proptest::collection::vec(-100.0f64..100.0, 3), proptest::bool::ANY),
                1..30,
            )
        ) {
            let data = Dataset::new(
                rows.iter()
                    .map(|(x, y)| LabeledExample::new(x.clone(), if *y { 1 } else { -1 }))
                    .collect(),
            ).unwrap();
            let mut text = String::new();
            for ex in &data.examples {
                for v in ex.features.iter() {
                    text.push_str(&format!("{v},"));
                }
                text.push_str(if ex.label == 1 { "1\n" } else { "0\n" });
            }
            let back = parse_csv(&text, "prop", false, LabelColumn::Last, LabelEncoding::default()).unwrap();
            prop_assert_eq!(back.len(), data.len());
            for (a, b) in data.examples.iter().zip(&back.examples) {
                prop_assert_eq!(a.label, b.label);
                prop_assert_eq!(&*a.features, &*b.features);
            }
        }
    }
}
