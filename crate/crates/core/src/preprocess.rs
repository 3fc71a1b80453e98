//! SMOTE oversampling of the minority class before classifier training.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{FeatureVector, MetricRecord};
use crate::error::{Error, Result};
use crate::seed::rng_from;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoteConfig {
    pub k_neighbors: usize,
    /// Minority/majority ratio after balancing, in `(0, 1]`.
    pub target_ratio: f64,
    pub seed: u64,
}

impl Default for SmoteConfig {
    fn default() -> Self {
        Self {
            k_neighbors: 5,
            target_ratio: 1.0,
            seed: 0,
        }
    }
}

impl SmoteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 {
            return Err(Error::Config("SMOTE k_neighbors must be >= 1".into()));
        }
        if !(self.target_ratio > 0.0 && self.target_ratio <= 1.0) {
            return Err(Error::Config(format!(
                "SMOTE target_ratio must be in (0, 1], got {}",
                self.target_ratio
            )));
        }
        Ok(())
    }
}

fn sq_dist(a: &FeatureVector, b: &FeatureVector) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Oversamples the minority class until it holds
/// `round(target_ratio * majority)` records.
///
/// Originals are returned first and unmodified; synthetic records follow.
/// Each synthetic point is `a + u * (b - a)` with `a` a random minority
/// record, `b` one of its `k` nearest minority neighbours (Euclidean) and
/// `u` uniform in `[0, 1)`. If the minority already meets the target, the
/// input is returned unchanged.
pub fn smote(records: &[MetricRecord], config: &SmoteConfig) -> Result<Vec<MetricRecord>> {
    config.validate()?;
    let (defective, clean): (Vec<&MetricRecord>, Vec<&MetricRecord>) =
        records.iter().partition(|r| r.is_defective());
    if defective.is_empty() || clean.is_empty() {
        return Err(Error::Preprocess(
            "SMOTE needs both defective and non-defective records".into(),
        ));
    }
    let minority_is_defective = defective.len() <= clean.len();
    let (minority, majority) = if minority_is_defective {
        (defective, clean)
    } else {
        (clean, defective)
    };
    if minority.len() < 2 {
        return Err(Error::Preprocess(
            "SMOTE needs at least two minority records to interpolate".into(),
        ));
    }

    let target = (config.target_ratio * majority.len() as f64).round() as usize;
    let mut out: Vec<MetricRecord> = records.to_vec();
    if target <= minority.len() {
        return Ok(out);
    }
    let n_synthetic = target - minority.len();

    // k nearest minority neighbours of every minority record (ties by index).
    let k = config.k_neighbors.min(minority.len() - 1);
    let neighbours: Vec<Vec<usize>> = minority
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut d: Vec<(f64, usize)> = minority
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, b)| (sq_dist(&a.metrics, &b.metrics), j))
                .collect();
            d.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
            d.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect();

    let mut rng = rng_from(config.seed);
    let bug_count = u32::from(minority_is_defective);
    out.reserve(n_synthetic);
    for s in 0..n_synthetic {
        let ai = rng.random_range(0..minority.len());
        let bi = *neighbours[ai].choose(&mut rng).expect("k >= 1");
        let u: f64 = rng.random();
        let (a, b) = (&minority[ai].metrics, &minority[bi].metrics);
        let mut metrics = [0.0; crate::metrics::N_FEATURES];
        for f in 0..metrics.len() {
            metrics[f] = a[f] + u * (b[f] - a[f]);
        }
        out.push(MetricRecord::new(format!("<smote-{s}>"), metrics, bug_count));
    }
    Ok(out)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::metrics::N_FEATURES;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn smote_invariants(
            maj in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 3), 4..20),
            min in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 3), 2..4),
            ratio in 0.2f64..=1.0,
            seed in any::<u64>(),
        ) {
            let mk = |v: &Vec<f64>, name: String, bug| {
                let mut m = [0.0; N_FEATURES];
                m[..3].copy_from_slice(v);
                MetricRecord::new(name, m, bug)
            };
            let mut rs: Vec<_> = maj.iter().enumerate().map(|(i, v)| mk(v, format!("c{i}"), 0)).collect();
            rs.extend(min.iter().enumerate().map(|(i, v)| mk(v, format!("d{i}"), 1)));
            let cfg = SmoteConfig { k_neighbors: 5, target_ratio: ratio, seed };
            let out = smote(&rs, &cfg).unwrap();
            prop_assert_eq!(&out[..rs.len()], &rs[..]);
            let target = (ratio * maj.len() as f64).round() as usize;
            let n_def = out.iter().filter(|r| r.is_defective()).count();
            prop_assert_eq!(n_def, target.max(min.len()));
            for s in &out[rs.len()..] {
                for f in 0..3 {
                    let lo = min.iter().map(|v| v[f]).fold(f64::INFINITY, f64::min);
                    let hi = min.iter().map(|v| v[f]).fold(f64::NEG_INFINITY, f64::max);
                    prop_assert!(s.metrics[f] >= lo - 1e-12 && s.metrics[f] <= hi + 1e-12);
                }
            }
        }
    }
}
