//! Shared data types: labeled examples, weighted datasets, binary classifiers,
//! and the example-source abstraction every booster draws from.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::Real;

/// Sign convention used everywhere: `sign(0) = +1`.
#[inline]
pub fn sign(v: Real) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// A feature vector with a signed binary label. The unit of all sampling.
///
/// Features are shared behind an `Arc` so that resampling and relabeling
/// (which clone examples by the millions in tests) never copy feature data.
#[derive(Clone, Debug)]
pub struct LabeledExample {
    pub features: Arc<[Real]>,
    pub label: i8,
}

impl LabeledExample {
    pub fn new(features: Vec<Real>, label: i8) -> Self {
        assert!(label == 1 || label == -1, "label must be +1 or -1");
        Self {
            features: features.into(),
            label,
        }
    }

    /// Same features, opposite label.
    pub fn flipped(&self) -> Self {
        Self {
            features: Arc::clone(&self.features),
            label: -self.label,
        }
    }
}

/// A binary classifier over feature vectors; predictions are in `{-1, +1}`.
pub trait Classifier: Send + Sync {
    fn predict(&self, x: &[Real]) -> i8;
}

impl<F> Classifier for F
where
    F: Fn(&[Real]) -> i8 + Send + Sync,
{
    fn predict(&self, x: &[Real]) -> i8 {
        self(x)
    }
}

/// Constant classifier, used for `-sign(0)` style edge cases and tests.
#[derive(Clone, Debug)]
pub struct ConstantClassifier(pub i8);

impl Classifier for ConstantClassifier {
    fn predict(&self, _x: &[Real]) -> i8 {
        self.0
    }
}

/// A classifier given by an explicit prediction table over a finite domain.
///
/// The domain point is encoded in the first feature: `x[0]` holds the point
/// index. This is the representation used by exhaustive-ERM classes, the
/// planted-instance generator, and tabular policies.
#[derive(Clone, Debug, PartialEq)]
pub struct TableClassifier {
    pub table: Vec<i8>,
}

impl TableClassifier {
    pub fn new(table: Vec<i8>) -> Self {
        assert!(table.iter().all(|&v| v == 1 || v == -1));
        Self { table }
    }
}

impl Classifier for TableClassifier {
    fn predict(&self, x: &[Real]) -> i8 {
        let idx = x[0] as usize;
        self.table[idx]
    }
}

/// Labeled examples with nonnegative per-example weights.
///
/// Weak learners always consume this form; stochastic callers pass uniform
/// weights.
#[derive(Clone, Debug, Default)]
pub struct WeightedData {
    pub examples: Vec<LabeledExample>,
    pub weights: Vec<Real>,
}

impl WeightedData {
    pub fn uniform(examples: Vec<LabeledExample>) -> Self {
        let weights = vec![1.0; examples.len()];
        Self { examples, weights }
    }

    pub fn weighted(examples: Vec<LabeledExample>, weights: Vec<Real>) -> Self {
        assert_eq!(examples.len(), weights.len());
        Self { examples, weights }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn total_weight(&self) -> Real {
        self.weights.iter().sum()
    }

    /// Weighted empirical correlation of `h`, normalized by total weight.
    pub fn correlation<C: Classifier + ?Sized>(&self, h: &C) -> Real {
        let total = self.total_weight();
        if total <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for (ex, w) in self.examples.iter().zip(&self.weights) {
            acc += w * Real::from(ex.label) * Real::from(h.predict(&ex.features));
        }
        acc / total
    }

    /// Weighted empirical correlation of a real-valued hypothesis.
    pub fn correlation_real<F: Fn(&[Real]) -> Real>(&self, h: F) -> Real {
        let total = self.total_weight();
        if total <= 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for (ex, w) in self.examples.iter().zip(&self.weights) {
            acc += w * Real::from(ex.label) * h(&ex.features);
        }
        acc / total
    }
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("example source exhausted after {drawn} draws ({requested} more requested)")]
    Exhausted { drawn: usize, requested: usize },
    #[error("rollout step cap of {cap} exceeded")]
    StepCapExceeded { cap: usize },
}

/// A stream of IID labeled examples: the population distribution the
/// boosters sample from. Finite pools report exhaustion.
pub trait ExampleSource {
    fn draw<R: Rng>(&mut self, n: usize, rng: &mut R) -> Result<Vec<LabeledExample>, SourceError>;
}

/// Wraps a source and counts every fresh example drawn through it.
pub struct CountingSource<'a, S: ExampleSource> {
    inner: &'a mut S,
    drawn: usize,
}

impl<'a, S: ExampleSource> CountingSource<'a, S> {
    pub fn new(inner: &'a mut S) -> Self {
        Self { inner, drawn: 0 }
    }

    pub fn drawn(&self) -> usize {
        self.drawn
    }
}

impl<S: ExampleSource> ExampleSource for CountingSource<'_, S> {
    fn draw<R: Rng>(&mut self, n: usize, rng: &mut R) -> Result<Vec<LabeledExample>, SourceError> {
        let out = self.inner.draw(n, rng)?;
        self.drawn += out.len();
        Ok(out)
    }
}

/// A finite pool of examples handed out in order, without replacement.
pub struct PoolSource {
    examples: Vec<LabeledExample>,
    cursor: usize,
}

impl PoolSource {
    pub fn new(examples: Vec<LabeledExample>) -> Self {
        Self {
            examples,
            cursor: 0,
        }
    }

    pub fn remaining(&self) -> usize {
        self.examples.len() - self.cursor
    }
}

impl ExampleSource for PoolSource {
    fn draw<R: Rng>(&mut self, n: usize, _rng: &mut R) -> Result<Vec<LabeledExample>, SourceError> {
        if self.cursor + n > self.examples.len() {
            return Err(SourceError::Exhausted {
                drawn: self.cursor,
                requested: n,
            });
        }
        let out = self.examples[self.cursor..self.cursor + n].to_vec();
        self.cursor += n;
        Ok(out)
    }
}

/// Samples with replacement from a fixed set of examples (the empirical
/// distribution of a training fold, treated as the population).
pub struct BootstrapSource {
    examples: Vec<LabeledExample>,
}

impl BootstrapSource {
    pub fn new(examples: Vec<LabeledExample>) -> Self {
        assert!(!examples.is_empty());
        Self { examples }
    }
}

impl ExampleSource for BootstrapSource {
    fn draw<R: Rng>(&mut self, n: usize, rng: &mut R) -> Result<Vec<LabeledExample>, SourceError> {
        Ok((0..n)
            .map(|_| self.examples[rng.gen_range(0..self.examples.len())].clone())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_zero_is_positive() {
        assert_eq!(sign(0.0), 1);
        assert_eq!(sign(-0.0), 1);
        assert_eq!(sign(1e-300), 1);
        assert_eq!(sign(-1e-300), -1);
    }

    #[test]
    fn pool_source_exhausts() {
        let mut pool = PoolSource::new(vec![LabeledExample::new(vec![0.0], 1); 3]);
        let mut rng = rand::thread_rng();
        assert!(pool.draw(2, &mut rng).is_ok());
        assert!(matches!(
            pool.draw(2, &mut rng),
            Err(SourceError::Exhausted { drawn: 2, requested: 2 })
        ));
    }

    #[test]
    fn weighted_correlation_matches_manual_sum() {
        let data = WeightedData::weighted(
            vec![
                LabeledExample::new(vec![1.0], 1),
                LabeledExample::new(vec![-1.0], -1),
            ],
            vec![3.0, 1.0],
        );
        let h = ConstantClassifier(1);
        // (3*1 + 1*(-1)) / 4
        assert!((data.correlation(&h) - 0.5).abs() < 1e-15);
    }
}
