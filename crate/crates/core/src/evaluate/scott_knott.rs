//! Scott-Knott ranking with a bootstrap significance test and a Cliff's
//! delta effect-size gate.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScottKnottConfig {
    pub resamples: usize,
    pub alpha: f64,
    /// Smallest `|delta|` that counts as a non-negligible effect.
    pub cliffs_delta: f64,
    pub seed: u64,
}

impl Default for ScottKnottConfig {
    fn default() -> Self {
        Self {
            resamples: 512,
            alpha: 0.05,
            cliffs_delta: 0.147,
            seed: 0,
        }
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn variance(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
}

fn welch_t(a: &[f64], b: &[f64]) -> f64 {
    let diff = mean(a) - mean(b);
    let se = (variance(a) / a.len() as f64 + variance(b) / b.len() as f64).sqrt();
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// Cliff's delta: `P(a > b) - P(a < b)` over all pairs.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> f64 {
    let mut gt = 0i64;
    let mut lt = 0i64;
    for x in a {
        for y in b {
            if x > y {
                gt += 1;
            } else if x < y {
                lt += 1;
            }
        }
    }
    (gt - lt) as f64 / (a.len() * b.len()) as f64
}

/// Two-sided bootstrap test of equal means on mean-shifted samples.
fn bootstrap_differs<R: Rng>(a: &[f64], b: &[f64], config: &ScottKnottConfig, rng: &mut R) -> bool {
    let t0 = welch_t(a, b).abs();
    if t0 == 0.0 {
        return false;
    }
    let grand = (a.iter().sum::<f64>() + b.iter().sum::<f64>()) / (a.len() + b.len()) as f64;
    let (ma, mb) = (mean(a), mean(b));
    let a0: Vec<f64> = a.iter().map(|x| x - ma + grand).collect();
    let b0: Vec<f64> = b.iter().map(|x| x - mb + grand).collect();
    let mut ra = vec![0.0; a.len()];
    let mut rb = vec![0.0; b.len()];
    let mut extreme = 0usize;
    for _ in 0..config.resamples {
        for slot in ra.iter_mut() {
            *slot = a0[rng.random_range(0..a0.len())];
        }
        for slot in rb.iter_mut() {
            *slot = b0[rng.random_range(0..b0.len())];
        }
        if welch_t(&ra, &rb).abs() >= t0 {
            extreme += 1;
        }
    }
    (extreme as f64 / config.resamples as f64) < config.alpha
}

/// Ranks groups of scores, 1 = best (highest mean). Groups are sorted by
/// mean and split recursively where the between-group sum of squares is
/// largest, as long as both halves differ significantly and non-trivially.
pub fn scott_knott_rank(groups: &[Vec<f64>], config: &ScottKnottConfig) -> Result<Vec<usize>> {
    if groups.is_empty() {
        return Err(Error::Statistics("Scott-Knott needs at least one group".into()));
    }
    if groups.iter().any(|g| g.is_empty() || g.iter().any(|v| !v.is_finite())) {
        return Err(Error::Statistics("Scott-Knott groups must be non-empty and finite".into()));
    }
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| mean(&groups[b]).total_cmp(&mean(&groups[a])).then(a.cmp(&b)));
    let sorted: Vec<&[f64]> = order.iter().map(|&i| groups[i].as_slice()).collect();

    let mut rng = rng_from(config.seed);
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    split(&sorted, 0, sorted.len(), config, &mut rng, &mut clusters);
    clusters.sort_unstable();

    let mut ranks = vec![0; groups.len()];
    for (rank, &(lo, hi)) in clusters.iter().enumerate() {
        for &g in &order[lo..hi] {
            ranks[g] = rank + 1;
        }
    }
    Ok(ranks)
}

fn split<R: Rng>(
    groups: &[&[f64]],
    lo: usize,
    hi: usize,
    config: &ScottKnottConfig,
    rng: &mut R,
    out: &mut Vec<(usize, usize)>,
) {
    if hi - lo < 2 {
        out.push((lo, hi));
        return;
    }
    let pooled = |a: usize, b: usize| -> Vec<f64> { groups[a..b].iter().flat_map(|g| g.iter().copied()).collect() };
    let all = pooled(lo, hi);
    let mu = mean(&all);
    let mut best: Option<(usize, f64)> = None;
    for cut in lo + 1..hi {
        let (l, r) = (pooled(lo, cut), pooled(cut, hi));
        let ss = l.len() as f64 * (mean(&l) - mu).powi(2) + r.len() as f64 * (mean(&r) - mu).powi(2);
        if best.is_none_or(|(_, b)| ss > b + 1e-12 * b.abs().max(1.0)) {
            best = Some((cut, ss));
        }
    }
    let (cut, _) = best.expect("at least one cut");
    let (l, r) = (pooled(lo, cut), pooled(cut, hi));
    if bootstrap_differs(&l, &r, config, rng) && cliffs_delta(&l, &r).abs() >= config.cliffs_delta {
        split(groups, lo, cut, config, rng, out);
        split(groups, cut, hi, config, rng, out);
    } else {
        out.push((lo, hi));
    }
}
