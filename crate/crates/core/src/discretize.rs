//! Supervised entropy (MDLP) discretization, a quartile fallback, and the
//! per-feature bin schemes shared by the explainer, XTREE and the scorer.

use serde::{Deserialize, Serialize};

use crate::data::MetricRecord;
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]`, usually inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::contract(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn entropy(pos: usize, n: usize) -> f64 {
    if n == 0 || pos == 0 || pos == n {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    let q = 1.0 - p;
    -(p * p.log2() + q * q.log2())
}

fn n_classes(pos: usize, n: usize) -> f64 {
    match (pos > 0, pos < n) {
        (true, true) => 2.0,
        _ => 1.0,
    }
}

/// Fayyad–Irani recursive minimum-description-length discretization of one
/// feature against binary labels. Returns sorted cut points.
///
/// Candidate cuts are midpoints between adjacent distinct values whose label
/// groups differ (boundary points). The best cut maximizes information gain;
/// among equal gains (within 1e-12) the smallest cut wins.
pub fn fayyad_irani(values: &[f64], labels: &[bool]) -> Result<Vec<f64>> {
    if values.len() != labels.len() {
        return Err(Error::contract("values and labels differ in length"));
    }
    if values.len() < 2 {
        return Err(Error::contract("discretization needs at least 2 values"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::contract("non-finite value in discretization input"));
    }
    let mut pairs: Vec<(f64, bool)> = values.iter().copied().zip(labels.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // Group equal values: (value, count, positives).
    let mut groups: Vec<(f64, usize, usize)> = Vec::new();
    for (v, y) in pairs {
        match groups.last_mut() {
            Some(g) if g.0 == v => {
                g.1 += 1;
                g.2 += usize::from(y);
            }
            _ => groups.push((v, 1, usize::from(y))),
        }
    }
    let mut cuts = Vec::new();
    split_range(&groups, 0, groups.len(), &mut cuts);
    cuts.sort_by(f64::total_cmp);
    Ok(cuts)
}

fn is_boundary(a: &(f64, usize, usize), b: &(f64, usize, usize)) -> bool {
    let pure = |g: &(f64, usize, usize)| g.2 == 0 || g.2 == g.1;
    !(pure(a) && pure(b) && (a.2 == 0) == (b.2 == 0))
}

fn split_range(groups: &[(f64, usize, usize)], lo: usize, hi: usize, cuts: &mut Vec<f64>) {
    if hi - lo < 2 {
        return;
    }
    let slice = &groups[lo..hi];
    let n: usize = slice.iter().map(|g| g.1).sum();
    let pos: usize = slice.iter().map(|g| g.2).sum();
    let ent = entropy(pos, n);
    if ent == 0.0 {
        return;
    }

    let mut best: Option<(usize, f64)> = None;
    let (mut n_left, mut pos_left) = (0usize, 0usize);
    for i in 0..slice.len() - 1 {
        n_left += slice[i].1;
        pos_left += slice[i].2;
        if !is_boundary(&slice[i], &slice[i + 1]) {
            continue;
        }
        let (n_right, pos_right) = (n - n_left, pos - pos_left);
        let weighted = (n_left as f64 * entropy(pos_left, n_left)
            + n_right as f64 * entropy(pos_right, n_right))
            / n as f64;
        let gain = ent - weighted;
        if best.is_none_or(|(_, g)| gain > g + 1e-12) {
            best = Some((i, gain));
        }
    }
    let Some((i, gain)) = best else { return };

    let n_left: usize = slice[..=i].iter().map(|g| g.1).sum();
    let pos_left: usize = slice[..=i].iter().map(|g| g.2).sum();
    let (n_right, pos_right) = (n - n_left, pos - pos_left);
    let (e1, e2) = (entropy(pos_left, n_left), entropy(pos_right, n_right));
    let k = n_classes(pos, n);
    let k1 = n_classes(pos_left, n_left);
    let k2 = n_classes(pos_right, n_right);
    let delta = (3f64.powf(k) - 2.0).log2() - (k * ent - k1 * e1 - k2 * e2);
    let threshold = (((n - 1) as f64).log2() + delta) / n as f64;
    if gain <= threshold {
        return;
    }
    cuts.push(0.5 * (slice[i].0 + slice[i + 1].0));
    split_range(groups, lo, lo + i + 1, cuts);
    split_range(groups, lo + i + 1, hi, cuts);
}

/// Linear-interpolation percentile (`q` in `[0, 100]`) of unsorted values.
pub fn percentile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(percentile_sorted(&sorted, q))
}

pub(crate) fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = (q / 100.0).clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Cuts at the 25th, 50th and 75th percentiles with duplicates collapsed.
/// Cuts equal to the maximum would leave an empty top bin and are dropped,
/// so a constant feature has no cuts.
pub fn quartile_cuts(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let max = sorted[sorted.len() - 1];
    let mut cuts: Vec<f64> = Vec::with_capacity(3);
    for q in [25.0, 50.0, 75.0] {
        let c = percentile_sorted(&sorted, q);
        if c < max && cuts.last().is_none_or(|&last| c > last) {
            cuts.push(c);
        }
    }
    cuts
}

/// Per-feature cut points. A value `v` falls in bin `#{c : c < v}`, so with
/// `c` cuts a feature has `c + 1` bins and bin `b` spans
/// `[cut[b-1], cut[b]]` (with `0` and `1` at the ends).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinScheme {
    cuts: Vec<Vec<f64>>,
}

impl BinScheme {
    pub fn new(cuts: Vec<Vec<f64>>) -> Result<Self> {
        for (f, c) in cuts.iter().enumerate() {
            if c.iter().any(|v| !v.is_finite()) || c.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::contract(format!(
                    "cuts of feature {f} are not strictly increasing"
                )));
            }
        }
        Ok(Self { cuts })
    }

    /// Fits one scheme per feature: MDLP first, quartiles when MDLP finds
    /// nothing. Constant features end up with no cuts.
    pub fn fit(records: &[MetricRecord]) -> Result<Self> {
        if records.len() < 2 {
            return Err(Error::Statistics("bin fitting needs at least 2 records".into()));
        }
        let labels: Vec<bool> = records.iter().map(MetricRecord::is_defective).collect();
        let n_features = records[0].metrics.len();
        let cuts = (0..n_features)
            .map(|f| {
                let values: Vec<f64> = records.iter().map(|r| r.metrics[f]).collect();
                let c = fayyad_irani(&values, &labels)?;
                Ok(if c.is_empty() { quartile_cuts(&values) } else { c })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cuts)
    }

    pub fn n_features(&self) -> usize {
        self.cuts.len()
    }

    pub fn cuts(&self, feature: usize) -> &[f64] {
        &self.cuts[feature]
    }

    pub fn n_bins(&self, feature: usize) -> usize {
        self.cuts[feature].len() + 1
    }

    /// A feature without cuts cannot be explained or planned.
    pub fn is_explainable(&self, feature: usize) -> bool {
        !self.cuts[feature].is_empty()
    }

    pub fn bin_of(&self, feature: usize, value: f64) -> usize {
        self.cuts[feature].partition_point(|&c| c < value)
    }

    pub fn bin_interval(&self, feature: usize, bin: usize) -> Interval {
        let c = &self.cuts[feature];
        let lo = if bin == 0 { 0.0 } else { c[bin - 1] };
        let hi = if bin >= c.len() { 1.0 } else { c[bin] };
        Interval { lo: lo.min(hi), hi }
    }

    pub fn interval_of(&self, feature: usize, value: f64) -> Interval {
        self.bin_interval(feature, self.bin_of(feature, value))
    }
}
