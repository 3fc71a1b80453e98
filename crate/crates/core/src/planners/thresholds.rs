//! Threshold planners: Alves (LOC-weighted percentile), Shatnawi (VARL)
//! and Oliveira (relative thresholds). Each learns one cap per feature on
//! raw training metrics and proposes `[0, cap]` for values above it.

use serde::{Deserialize, Serialize};

use super::{Direction, Plan, PlanAction, PlannerKind};
use crate::data::{NormalizationMap, Release};
use crate::discretize::{percentile_sorted, Interval};
use crate::error::{Error, Result};
use crate::learners::{fit_univariate_logistic, LogisticFit};
use crate::metrics::Metric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdStatus {
    Usable,
    /// Logistic p-value above the significance level.
    Insignificant,
    /// The logistic model could not be fitted.
    NoFit,
    /// `beta = 0`: VARL is undefined.
    ZeroSlope,
    /// VARL `<= 0` or `>=` the observed maximum.
    OutOfRange,
    Constant,
}

fn cap_plan(kind: PlannerKind, caps: impl Iterator<Item = (usize, Option<f64>)>, instance: &[f64]) -> Plan {
    let mut plan = Plan::keep_all(kind, instance.len());
    for (f, cap) in caps {
        if let Some(t) = cap {
            if instance[f] > t + 1e-12 {
                plan.actions[f] = PlanAction::Move {
                    interval: Interval { lo: 0.0, hi: t },
                    direction: Some(Direction::Decrease),
                };
            }
        }
    }
    plan
}

fn fit_logistics(train: &Release) -> Vec<Option<LogisticFit>> {
    let labels = train.labels();
    (0..train.records().first().map_or(0, |r| r.metrics.len()))
        .map(|f| match fit_univariate_logistic(&train.column(f), &labels) {
            Ok(fit) => Some(fit),
            Err(e) => {
                log::warn!("logistic fit failed for feature {f}: {e}");
                None
            }
        })
        .collect()
}

fn significant(fit: &LogisticFit, level: f64) -> bool {
    fit.is_separated() || fit.p_value <= level
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlvesRule {
    pub feature: usize,
    /// Raw-unit threshold `T`.
    pub threshold: f64,
    pub p_value: Option<f64>,
    pub status: ThresholdStatus,
    /// Normalized cap, present only for usable rules.
    pub cap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlvesRules {
    pub rules: Vec<AlvesRule>,
}

impl AlvesRules {
    pub fn apply(&self, instance: &[f64]) -> Plan {
        cap_plan(
            PlannerKind::Alves,
            self.rules.iter().map(|r| (r.feature, r.cap)),
            instance,
        )
    }
}

/// Smallest value whose LOC-weighted cumulative share reaches `fraction`.
pub(crate) fn weighted_threshold(values: &[f64], weights: &[f64], fraction: f64) -> Result<f64> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Weighting("LOC weights sum to zero".into()));
    }
    let mut pairs: Vec<(f64, f64)> = values.iter().copied().zip(weights.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cum = 0.0;
    for &(v, w) in &pairs {
        cum += w / total;
        if cum >= fraction - 1e-12 {
            return Ok(v);
        }
    }
    Ok(pairs[pairs.len() - 1].0)
}

/// Fits Alves thresholds at `threshold_pct` percent of LOC-weighted mass on
/// raw training metrics; metrics whose logistic p-value exceeds
/// `significance` are rejected (separated fits are kept).
pub fn fit_alves(
    train: &Release,
    map: &NormalizationMap,
    threshold_pct: f64,
    significance: f64,
) -> Result<AlvesRules> {
    if train.is_empty() {
        return Err(Error::Statistics("Alves thresholds need training records".into()));
    }
    if !(threshold_pct > 0.0 && threshold_pct <= 100.0) {
        return Err(Error::Config(format!("Alves percentage {threshold_pct} not in (0, 100]")));
    }
    let loc = train.column(Metric::Loc.index());
    let fits = fit_logistics(train);
    let mut rules = Vec::with_capacity(fits.len());
    for (f, fit) in fits.into_iter().enumerate() {
        let threshold = weighted_threshold(&train.column(f), &loc, threshold_pct / 100.0)?;
        let status = match &fit {
            None => ThresholdStatus::NoFit,
            Some(fit) if significant(fit, significance) => ThresholdStatus::Usable,
            Some(_) => ThresholdStatus::Insignificant,
        };
        rules.push(AlvesRule {
            feature: f,
            threshold,
            p_value: fit.map(|x| x.p_value),
            status,
            cap: (status == ThresholdStatus::Usable).then(|| map.apply_value(f, threshold)),
        });
    }
    Ok(AlvesRules { rules })
}

/// Value of acceptable risk level: `(ln(p0 / (1 - p0)) - alpha) / beta`.
pub fn varl(alpha: f64, beta: f64, p0: f64) -> Option<f64> {
    (beta != 0.0).then(|| ((p0 / (1.0 - p0)).ln() - alpha) / beta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShatnawiRule {
    pub feature: usize,
    pub varl: Option<f64>,
    pub p_value: Option<f64>,
    pub status: ThresholdStatus,
    pub cap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShatnawiRules {
    pub rules: Vec<ShatnawiRule>,
}

impl ShatnawiRules {
    pub fn apply(&self, instance: &[f64]) -> Plan {
        cap_plan(
            PlannerKind::Shatnawi,
            self.rules.iter().map(|r| (r.feature, r.cap)),
            instance,
        )
    }
}

pub fn fit_shatnawi(
    train: &Release,
    map: &NormalizationMap,
    p0: f64,
    significance: f64,
) -> Result<ShatnawiRules> {
    if train.is_empty() {
        return Err(Error::Statistics("VARL thresholds need training records".into()));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::Config(format!("p0 must be in (0, 1), got {p0}")));
    }
    let fits = fit_logistics(train);
    let rules = fits
        .into_iter()
        .enumerate()
        .map(|(f, fit)| {
            let max = train.column(f).into_iter().fold(f64::NEG_INFINITY, f64::max);
            let (v, status) = match &fit {
                None => (None, ThresholdStatus::NoFit),
                Some(fit) if !significant(fit, significance) => (None, ThresholdStatus::Insignificant),
                Some(fit) => match varl(fit.alpha, fit.beta, p0) {
                    None => (None, ThresholdStatus::ZeroSlope),
                    Some(v) if !(v > 0.0 && v < max) => (Some(v), ThresholdStatus::OutOfRange),
                    Some(v) => (Some(v), ThresholdStatus::Usable),
                },
            };
            if status != ThresholdStatus::Usable {
                log::debug!("VARL for feature {f} unusable: {status:?}");
            }
            ShatnawiRule {
                feature: f,
                varl: v,
                p_value: fit.map(|x| x.p_value),
                status,
                cap: v.filter(|_| status == ThresholdStatus::Usable).map(|v| map.apply_value(f, v)),
            }
        })
        .collect();
    Ok(ShatnawiRules { rules })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OliveiraConfig {
    /// Required share of classes at or below the threshold.
    pub compliance: f64,
    /// Percentile that starts the upper tail.
    pub tail_percentile: f64,
    /// Candidate percentages `p`.
    pub p_grid: Vec<u32>,
}

impl Default for OliveiraConfig {
    fn default() -> Self {
        Self {
            compliance: 0.9,
            tail_percentile: 90.0,
            p_grid: (1..=9).map(|i| i * 10).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OliveiraRule {
    pub feature: usize,
    pub p: u32,
    /// Raw-unit threshold `k`.
    pub k: f64,
    pub penalty: f64,
    pub cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OliveiraRules {
    /// `None` for constant features.
    pub rules: Vec<Option<OliveiraRule>>,
}

impl OliveiraRules {
    pub fn apply(&self, instance: &[f64]) -> Plan {
        cap_plan(
            PlannerKind::Oliveira,
            self.rules
                .iter()
                .enumerate()
                .map(|(f, r)| (f, r.as_ref().map(|r| r.cap))),
            instance,
        )
    }
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// `Penalty1 + Penalty2` for threshold `k` on ascending `sorted` values:
/// the compliance shortfall of the share of values `<= k`, plus the
/// range-normalized distance from `k` to the median of the upper tail.
/// The percentage `p` only breaks ties between equal penalties.
pub fn oliveira_penalty(sorted: &[f64], _p: u32, k: f64, config: &OliveiraConfig) -> f64 {
    let n = sorted.len() as f64;
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    let share = sorted.partition_point(|&v| v <= k) as f64 / n;
    let penalty1 = (config.compliance - share).max(0.0);
    let p90 = percentile_sorted(sorted, config.tail_percentile);
    let tail_start = sorted.partition_point(|&v| v < p90);
    let tail = median_sorted(&sorted[tail_start..]);
    let penalty2 = (k - tail).abs() / (max - min);
    penalty1 + penalty2
}

/// Grid search over `p` and the distinct observed values `k`: lowest
/// penalty, then highest `p`, then lowest `k`.
pub fn fit_oliveira(train: &Release, map: &NormalizationMap, config: &OliveiraConfig) -> Result<OliveiraRules> {
    if train.is_empty() {
        return Err(Error::Statistics("Oliveira thresholds need training records".into()));
    }
    if config.p_grid.is_empty() || config.p_grid.iter().any(|&p| p == 0 || p > 100) {
        return Err(Error::Config("Oliveira p grid must hold values in 1..=100".into()));
    }
    let n_features = train.records()[0].metrics.len();
    let rules = (0..n_features)
        .map(|f| {
            let mut sorted = train.column(f);
            sorted.sort_by(f64::total_cmp);
            if sorted[0] == sorted[sorted.len() - 1] {
                return None;
            }
            let mut ks = sorted.clone();
            ks.dedup();
            let mut best: Option<(f64, u32, f64)> = None;
            for &p in &config.p_grid {
                for &k in &ks {
                    let pen = oliveira_penalty(&sorted, p, k, config);
                    let better = match best {
                        None => true,
                        Some((bp, bpp, bk)) => {
                            pen < bp - 1e-12
                                || ((pen - bp).abs() <= 1e-12 && (p > bpp || (p == bpp && k < bk)))
                        }
                    };
                    if better {
                        best = Some((pen, p, k));
                    }
                }
            }
            best.map(|(penalty, p, k)| OliveiraRule {
                feature: f,
                p,
                k,
                penalty,
                cap: map.apply_value(f, k),
            })
        })
        .collect();
    Ok(OliveiraRules { rules })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::MetricRecord;
    use crate::metrics::N_FEATURES;

    #[test]
    fn varl_fixtures() {
        let a = (0.05f64 / 0.95).ln();
        assert!(varl(a, 1.0, 0.05).unwrap().abs() < 1e-12);
        let v = varl(0.0, -1.0, 0.05).unwrap();
        assert!((v - 2.944_438_979_166_440_5).abs() < 1e-12);
        assert_eq!(varl(1.0, 0.0, 0.05), None);
    }

    #[test]
    fn uniform_weights_give_plain_percentile() {
        let values: Vec<f64> = (1..=10).map(f64::from).collect();
        let t = weighted_threshold(&values, &[1.0; 10], 0.7).unwrap();
        assert_eq!(t, 7.0);
        assert!(matches!(
            weighted_threshold(&values, &[0.0; 10], 0.7),
            Err(Error::Weighting(_))
        ));
    }

    #[test]
    fn heavy_file_pulls_threshold_down() {
        let t = weighted_threshold(&[1.0, 2.0, 3.0, 4.0], &[80.0, 5.0, 5.0, 10.0], 0.7).unwrap();
        assert_eq!(t, 1.0);
    }

    fn release(rows: &[(f64, f64, u32)]) -> Release {
        let recs = rows
            .iter()
            .enumerate()
            .map(|(i, &(a, loc, bug))| {
                let mut m = [0.0; N_FEATURES];
                m[0] = a;
                m[Metric::Loc.index()] = loc;
                MetricRecord::new(format!("f{i}"), m, bug)
            })
            .collect();
        Release::new("r", recs).unwrap()
    }

    #[test]
    fn alves_plans_only_significant_features() {
        // wmc strongly tied to defects; loc constant 10 (insignificant).
        let rows: Vec<(f64, f64, u32)> = (0..40)
            .map(|i| {
                let v = f64::from(i);
                let bug = u32::from((i % 10) as f64 + v / 4.0 > 10.0);
                (v, 10.0, bug)
            })
            .collect();
        let train = release(&rows);
        let map = NormalizationMap::fit(&[&train]).unwrap();
        let rules = fit_alves(&train, &map, 70.0, 0.05).unwrap();
        assert_eq!(rules.rules[0].status, ThresholdStatus::Usable);
        assert_eq!(rules.rules[0].threshold, 27.0);
        assert_ne!(rules.rules[Metric::Loc.index()].status, ThresholdStatus::Usable);
        let mut inst = [0.0; N_FEATURES];
        inst[0] = 0.9;
        let plan = rules.apply(&inst);
        assert_eq!(plan.changed_features(), vec![0]);
        assert_eq!(plan.actions[0].interval().unwrap().hi, map.apply_value(0, 27.0));
        inst[0] = 0.1;
        assert_eq!(rules.apply(&inst).size(), 0);
    }

    #[test]
    fn oliveira_tie_prefers_high_p_then_low_k() {
        let values: Vec<f64> = (0..10).map(f64::from).collect();
        let rows: Vec<(f64, f64, u32)> = values.iter().map(|&v| (v, 1.0, 0)).collect();
        let train = release(&rows);
        let map = NormalizationMap::fit(&[&train]).unwrap();
        let rules = fit_oliveira(&train, &map, &OliveiraConfig::default()).unwrap();
        let r = rules.rules[0].as_ref().unwrap();
        assert_eq!(r.p, 90);
        // P90 = 8.1, tail {9}, median 9 -> k = 9 has zero penalty.
        assert_eq!(r.k, 9.0);
        assert!(rules.rules[1].is_none());
    }
}
