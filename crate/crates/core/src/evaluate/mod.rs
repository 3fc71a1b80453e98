//! Scoring plans against what developers changed in the next release.

mod ktest;
mod refactoring;
mod report;
mod scott_knott;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ktest::{ktest_run, FileReport, KTestConfig, PlannerReport, PlannerSummary, TrialContext};
pub use refactoring::{effect, map_changes, map_to_refactorings, refactoring_methods, Effect, RefactoringMethod};
pub use report::{
    file_report_csv, plan_dump, write_file_report_csv, DatasetSummary, FeatureDump, PlanDump, RunSummary,
};
pub use scott_knott::{cliffs_delta, scott_knott_rank, ScottKnottConfig};

use crate::discretize::{percentile, BinScheme};
use crate::error::{Error, Result};
use crate::planners::{Plan, PlanAction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// Planned move and the next release landed inside the target.
    TP,
    /// Planned keep and the bin did not change.
    TN,
    /// Planned move and the next release landed outside the target.
    FP,
    /// Planned keep but the bin changed.
    FN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::TP => self.tp += 1,
            Verdict::TN => self.tn += 1,
            Verdict::FP => self.fp += 1,
            Verdict::FN => self.fn_ += 1,
        }
    }

    pub fn merge(&mut self, other: &Confusion) {
        self.tp += other.tp;
        self.tn += other.tn;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// How per-feature verdicts become one overlap percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapMode {
    /// `(TP + TN) / features`.
    #[default]
    Matches,
    /// `TP / (TP + FP + FN)`, 100 when nothing was planned or changed.
    Jaccard,
}

impl FromStr for OverlapMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "matches" => Ok(OverlapMode::Matches),
            "jaccard" => Ok(OverlapMode::Jaccard),
            other => Err(Error::Config(format!("unknown overlap mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapScore {
    /// Percentage in `[0, 100]`.
    pub score: f64,
    pub verdicts: Vec<Verdict>,
    pub counts: Confusion,
}

pub fn verdict(action: &PlanAction, bins: &BinScheme, feature: usize, y: f64, z: f64) -> Verdict {
    match action {
        PlanAction::Move { interval, .. } => {
            if interval.contains(z) {
                Verdict::TP
            } else {
                Verdict::FP
            }
        }
        PlanAction::Keep => {
            if bins.bin_of(feature, y) == bins.bin_of(feature, z) {
                Verdict::TN
            } else {
                Verdict::FN
            }
        }
    }
}

/// Compares a plan for `y` with the file's values in `z` (both normalized).
pub fn overlap(plan: &Plan, y: &[f64], z: &[f64], bins: &BinScheme, mode: OverlapMode) -> Result<OverlapScore> {
    let n = plan.n_features();
    if y.len() != n || z.len() != n || bins.n_features() != n {
        return Err(Error::contract("plan, instances and bins differ in feature count"));
    }
    let verdicts: Vec<Verdict> = (0..n)
        .map(|f| verdict(&plan.actions[f], bins, f, y[f], z[f]))
        .collect();
    let mut counts = Confusion::default();
    for &v in &verdicts {
        counts.add(v);
    }
    let score = match mode {
        OverlapMode::Matches => 100.0 * (counts.tp + counts.tn) as f64 / n as f64,
        OverlapMode::Jaccard => {
            let denom = counts.tp + counts.fp + counts.fn_;
            if denom == 0 {
                100.0
            } else {
                100.0 * counts.tp as f64 / denom as f64
            }
        }
    };
    Ok(OverlapScore { score, verdicts, counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedScore {
    /// `S = sum(s_i * n_i)`.
    pub s: f64,
    /// `S / sum(n_i)`, absent when the NDPV sum is 0.
    pub s_scaled: Option<f64>,
}

/// Overlap-weighted NDPV over `(s_i, n_i)` pairs, `s_i` as a fraction.
pub fn weighted_scores(pairs: &[(f64, i64)]) -> Result<WeightedScore> {
    if pairs.is_empty() {
        return Err(Error::Statistics("weighted score needs at least one file".into()));
    }
    let s: f64 = pairs.iter().map(|&(si, ni)| si * ni as f64).sum();
    let total: i64 = pairs.iter().map(|p| p.1).sum();
    Ok(WeightedScore {
        s,
        s_scaled: (total != 0).then(|| s / total as f64),
    })
}

/// Precision and recall in percent; `None` for a zero denominator.
pub fn precision_recall(c: &Confusion) -> (Option<f64>, Option<f64>) {
    let ratio = |num: usize, den: usize| (den > 0).then(|| 100.0 * num as f64 / den as f64);
    (ratio(c.tp, c.tp + c.fp), ratio(c.tp, c.tp + c.fn_))
}

/// Median and interquartile range (linear-interpolation percentiles).
pub fn median_iqr(values: &[f64]) -> Option<(f64, f64)> {
    let med = percentile(values, 50.0)?;
    let iqr = percentile(values, 75.0)? - percentile(values, 25.0)?;
    Some((med, iqr))
}
