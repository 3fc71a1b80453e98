//! Tabular LIME over discretized features.
//!
//! Samples are drawn bin-by-bin from the training bin frequencies, compared
//! with the instance in binary "same bin" space, weighted by an exponential
//! kernel, and explained by a weighted linear model on the indicators.

use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::MetricRecord;
use crate::discretize::{BinScheme, Interval};
use crate::error::{Error, Result};
use crate::learners::DefectClassifier;
use crate::metrics::Metric;
use crate::seed::rng_from;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimeConfig {
    pub n_samples: usize,
    /// `None` means `0.75 * sqrt(n_features)`.
    pub kernel_width: Option<f64>,
    pub k_features: usize,
    pub seed: u64,
}

impl Default for LimeConfig {
    fn default() -> Self {
        Self {
            n_samples: 5000,
            kernel_width: None,
            k_features: crate::metrics::N_FEATURES,
            seed: 0,
        }
    }
}

impl LimeConfig {
    pub fn kernel_width_for(&self, n_features: usize) -> f64 {
        self.kernel_width
            .unwrap_or_else(|| 0.75 * (n_features as f64).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Config("LIME n_samples must be >= 1".into()));
        }
        if let Some(w) = self.kernel_width {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Config(format!("LIME kernel width must be > 0, got {w}")));
            }
        }
        if self.k_features == 0 {
            return Err(Error::Config("LIME k_features must be >= 1".into()));
        }
        Ok(())
    }
}

/// How often each bin of each feature occurs in the training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinFrequencies {
    counts: Vec<Vec<usize>>,
}

impl BinFrequencies {
    pub fn from_records(records: &[MetricRecord], bins: &BinScheme) -> Self {
        let counts = (0..bins.n_features())
            .map(|f| {
                let mut c = vec![0usize; bins.n_bins(f)];
                for r in records {
                    c[bins.bin_of(f, r.metrics[f])] += 1;
                }
                c
            })
            .collect();
        Self { counts }
    }

    pub fn counts(&self, feature: usize) -> &[usize] {
        &self.counts[feature]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplanationEntry {
    pub feature: usize,
    pub metric: Metric,
    pub weight: f64,
    /// The instance's current bin.
    pub interval: Interval,
    pub bin: usize,
    /// Position in the forward-selection order, 0 first; `None` when the
    /// feature was not selected (its weight is then 0).
    pub selection_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    /// One entry per explainable feature, in feature order.
    pub entries: Vec<ExplanationEntry>,
    pub instance: Vec<f64>,
    pub predicted_probability: f64,
    pub predicted_defective: bool,
    pub intercept: f64,
    /// Weighted R² of the surrogate on the perturbed sample.
    pub score: f64,
}

impl Explanation {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, feature: usize) -> Option<&ExplanationEntry> {
        self.entries.iter().find(|e| e.feature == feature)
    }

    pub fn weight(&self, feature: usize) -> Option<f64> {
        self.entry(feature).map(|e| e.weight)
    }
}

/// Explains `model`'s defect probability around `instance`.
pub fn explain_instance(
    model: &dyn DefectClassifier,
    instance: &[f64],
    bins: &BinScheme,
    train: &BinFrequencies,
    config: &LimeConfig,
) -> Result<Explanation> {
    config.validate()?;
    let n_features = instance.len();
    if model.n_features() != n_features || bins.n_features() != n_features {
        return Err(Error::contract(format!(
            "instance has {n_features} features, model {} and bins {}",
            model.n_features(),
            bins.n_features()
        )));
    }
    let predicted_probability = checked_probability(model, instance)?;
    let explainable: Vec<usize> = (0..n_features).filter(|&f| bins.is_explainable(f)).collect();
    if explainable.is_empty() {
        log::warn!("no explainable feature: every feature is constant");
        return Ok(Explanation {
            entries: Vec::new(),
            instance: instance.to_vec(),
            predicted_probability,
            predicted_defective: predicted_probability >= 0.5,
            intercept: predicted_probability,
            score: 0.0,
        });
    }
    let own_bin: Vec<usize> = (0..n_features).map(|f| bins.bin_of(f, instance[f])).collect();
    let samplers = explainable
        .iter()
        .map(|&f| {
            WeightedIndex::new(train.counts(f))
                .map_err(|e| Error::contract(format!("bin frequencies of feature {f}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = config.n_samples;
    let p = explainable.len();
    let mut rng = rng_from(config.seed);
    let mut indicators = DMatrix::<f64>::from_element(n, p, 1.0);
    let mut targets = DVector::<f64>::zeros(n);
    targets[0] = predicted_probability;
    let mut point = instance.to_vec();
    for s in 1..n {
        for (j, &f) in explainable.iter().enumerate() {
            let b = samplers[j].sample(&mut rng);
            let iv = bins.bin_interval(f, b);
            let u: f64 = rng.random();
            point[f] = iv.lo + u * iv.width();
            indicators[(s, j)] = if b == own_bin[f] { 1.0 } else { 0.0 };
        }
        targets[s] = checked_probability(model, &point)?;
    }

    let width = config.kernel_width_for(n_features);
    let kernel: Vec<f64> = (0..n)
        .map(|s| {
            let d2 = indicators.row(s).iter().filter(|&&v| v == 0.0).count() as f64;
            (-d2 / (width * width)).exp()
        })
        .collect();

    let fit = weighted_forward_fit(&indicators, &targets, &kernel, config.k_features.min(p));
    let entries = explainable
        .iter()
        .enumerate()
        .map(|(j, &f)| ExplanationEntry {
            feature: f,
            metric: Metric::from_index(f).unwrap_or(Metric::Wmc),
            weight: fit.weights[j],
            interval: bins.bin_interval(f, own_bin[f]),
            bin: own_bin[f],
            selection_rank: fit.order.iter().position(|&k| k == j),
        })
        .collect();
    Ok(Explanation {
        entries,
        instance: instance.to_vec(),
        predicted_probability,
        predicted_defective: predicted_probability >= 0.5,
        intercept: fit.intercept,
        score: fit.r2,
    })
}

fn checked_probability(model: &dyn DefectClassifier, x: &[f64]) -> Result<f64> {
    let p = model.defect_probability(x);
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("black box returned probability {p}")));
    }
    Ok(p)
}

struct SurrogateFit {
    weights: Vec<f64>,
    order: Vec<usize>,
    intercept: f64,
    r2: f64,
}

/// Forward selection of `k` columns by weighted R², then a weighted
/// least-squares fit with intercept on the selected columns.
fn weighted_forward_fit(x: &DMatrix<f64>, y: &DVector<f64>, w: &[f64], k: usize) -> SurrogateFit {
    let (n, p) = x.shape();
    let w_sum: f64 = w.iter().sum();
    let x_mean: Vec<f64> = (0..p)
        .map(|j| (0..n).map(|s| w[s] * x[(s, j)]).sum::<f64>() / w_sum)
        .collect();
    let y_mean = (0..n).map(|s| w[s] * y[s]).sum::<f64>() / w_sum;

    // Weighted, centered design and target.
    let xc = DMatrix::from_fn(n, p, |s, j| w[s].sqrt() * (x[(s, j)] - x_mean[j]));
    let yc = DVector::from_fn(n, |s, _| w[s].sqrt() * (y[s] - y_mean));
    let gram = xc.transpose() * &xc;
    let cross = xc.transpose() * &yc;
    let total = yc.dot(&yc);

    let solve = |cols: &[usize]| -> (Vec<f64>, f64) {
        let g = DMatrix::from_fn(cols.len(), cols.len(), |a, b| gram[(cols[a], cols[b])]);
        let c = DVector::from_fn(cols.len(), |a, _| cross[cols[a]]);
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let eps = scale.max(1.0) * 1e-10;
        let beta = g
            .svd(true, true)
            .solve(&c, eps)
            .unwrap_or_else(|_| DVector::zeros(cols.len()));
        let explained = beta.dot(&c);
        (beta.iter().copied().collect(), explained)
    };

    let mut order: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(usize, f64)> = None;
        for j in (0..p).filter(|j| !order.contains(j)) {
            let mut cols = order.clone();
            cols.push(j);
            let (_, explained) = solve(&cols);
            if best.is_none_or(|(_, e)| explained > e + 1e-12) {
                best = Some((j, explained));
            }
        }
        match best {
            Some((j, _)) => order.push(j),
            None => break,
        }
    }

    let mut weights = vec![0.0; p];
    let (beta, explained) = solve(&order);
    for (&j, b) in order.iter().zip(beta) {
        weights[j] = b;
    }
    let intercept = y_mean - (0..p).map(|j| weights[j] * x_mean[j]).sum::<f64>();
    let r2 = if total > 0.0 { (explained / total).clamp(0.0, 1.0) } else { 0.0 };
    SurrogateFit {
        weights,
        order,
        intercept,
        r2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::ProbabilityFn;

    fn uniform_bins(n: usize) -> BinScheme {
        BinScheme::new(vec![vec![0.25, 0.5, 0.75]; n]).unwrap()
    }

    fn flat_freq(n: usize) -> BinFrequencies {
        BinFrequencies {
            counts: vec![vec![1; 4]; n],
        }
    }

    #[test]
    fn constant_black_box_has_no_signal() {
        let m = ProbabilityFn::new(4, |_: &[f64]| 0.7);
        let cfg = LimeConfig {
            n_samples: 500,
            ..Default::default()
        };
        let e = explain_instance(&m, &[0.1, 0.6, 0.9, 0.3], &uniform_bins(4), &flat_freq(4), &cfg)
            .unwrap();
        assert_eq!(e.entries.len(), 4);
        assert!(e.entries.iter().all(|x| x.weight.abs() < 1e-6));
        assert!((e.intercept - 0.7).abs() < 1e-9);
    }

    #[test]
    fn indicator_black_box_is_recovered() {
        let bins = uniform_bins(5);
        let m = ProbabilityFn::new(5, |x: &[f64]| if x[3] > 0.5 && x[3] <= 0.75 { 0.9 } else { 0.1 });
        let cfg = LimeConfig {
            n_samples: 2000,
            seed: 4,
            ..Default::default()
        };
        let e = explain_instance(&m, &[0.2, 0.2, 0.2, 0.6, 0.2], &bins, &flat_freq(5), &cfg).unwrap();
        // Exact indicator model: weight 0.8 on feature 3, 0 elsewhere.
        assert!((e.weight(3).unwrap() - 0.8).abs() < 1e-9);
        for f in [0, 1, 2, 4] {
            assert!(e.weight(f).unwrap().abs() < 1e-9);
        }
        assert_eq!(e.entry(3).unwrap().selection_rank, Some(0));
    }

    #[test]
    fn intervals_contain_the_instance_and_seed_fixes_output() {
        let bins = uniform_bins(3);
        let m = ProbabilityFn::new(3, |x: &[f64]| x[0] * 0.5 + x[2] * 0.5);
        let cfg = LimeConfig {
            n_samples: 300,
            seed: 11,
            ..Default::default()
        };
        let inst = [0.33, 0.5, 1.0];
        let a = explain_instance(&m, &inst, &bins, &flat_freq(3), &cfg).unwrap();
        let b = explain_instance(&m, &inst, &bins, &flat_freq(3), &cfg).unwrap();
        assert_eq!(a, b);
        for e in &a.entries {
            assert!(e.interval.contains(inst[e.feature]));
        }
    }

    #[test]
    fn unexplainable_features_are_skipped() {
        let bins = BinScheme::new(vec![vec![0.5], vec![], vec![0.5]]).unwrap();
        let freq = BinFrequencies {
            counts: vec![vec![1, 1], vec![1], vec![1, 1]],
        };
        let m = ProbabilityFn::new(3, |x: &[f64]| x[0]);
        let cfg = LimeConfig {
            n_samples: 200,
            ..Default::default()
        };
        let e = explain_instance(&m, &[0.7, 0.3, 0.2], &bins, &freq, &cfg).unwrap();
        assert_eq!(e.entries.iter().map(|x| x.feature).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn out_of_range_black_box_is_rejected() {
        let m = ProbabilityFn::new(2, |_: &[f64]| 1.5);
        let bins = uniform_bins(2);
        let r = explain_instance(&m, &[0.1, 0.2], &bins, &flat_freq(2), &LimeConfig::default());
        assert!(matches!(r, Err(Error::Contract(_))));
    }
}
