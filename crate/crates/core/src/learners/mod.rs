//! Defect classifiers.
//!
//! The planners only ever see a classifier through [`DefectClassifier`], so
//! another model family can replace the random forest without touching them.

mod forest;
mod logistic;

pub use forest::{fit_forest, DecisionTree, ForestConfig, ForestModel};
pub use logistic::{fit_univariate_logistic, FitStatus, LogisticFit};

use crate::error::{Error, Result};

/// A black-box probabilistic classifier over normalized metric vectors.
pub trait DefectClassifier: Send + Sync {
    fn n_features(&self) -> usize;

    /// Probability of the defective class. Callers guarantee the length.
    fn defect_probability(&self, instance: &[f64]) -> f64;

    /// `[P(clean), P(defective)]`, checking the instance dimensionality.
    fn predict_proba(&self, instance: &[f64]) -> Result<[f64; 2]> {
        if instance.len() != self.n_features() {
            return Err(Error::contract(format!(
                "expected {} features, got {}",
                self.n_features(),
                instance.len()
            )));
        }
        let p = self.defect_probability(instance);
        Ok([1.0 - p, p])
    }
}

/// Adapts a plain probability function into a [`DefectClassifier`].
pub struct ProbabilityFn<F> {
    n_features: usize,
    f: F,
}

impl<F> ProbabilityFn<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    pub fn new(n_features: usize, f: F) -> Self {
        Self { n_features, f }
    }
}

impl<F> DefectClassifier for ProbabilityFn<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn defect_probability(&self, instance: &[f64]) -> f64 {
        (self.f)(instance)
    }
}
