//! Report serialization: per-file CSV, aggregate summaries, plan dumps.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ktest::{PlannerReport, PlannerSummary};
use super::refactoring::map_to_refactorings;
use super::scott_knott::{scott_knott_rank, ScottKnottConfig};
use crate::data::NormalizationMap;
use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::planners::{Direction, Plan, PlanAction, PlannerKind};

/// Per-file CSV: `file,plan_size,overlap_pct,ndpv,tp,tn,fp,fn`.
pub fn file_report_csv(report: &PlannerReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Csv {
        path: format!("<{}/{}>", report.dataset, report.planner).into(),
        source: e,
    };
    for f in &report.files {
        w.serialize(f).map_err(csv_err)?;
    }
    if report.files.is_empty() {
        w.write_record(["file", "plan_size", "overlap_pct", "ndpv", "tp", "tn", "fp", "fn"])
            .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::contract(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_file_report_csv(path: &Path, report: &PlannerReport) -> Result<()> {
    let text = file_report_csv(report)?;
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerEntry {
    pub planner: PlannerKind,
    /// Scott-Knott rank of the overlap scores within the dataset, 1 = best.
    pub rank: Option<usize>,
    #[serde(flatten)]
    pub summary: PlannerSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub dataset: String,
    pub n_matched: usize,
    pub total_ndpv: i64,
    pub planners: Vec<PlannerEntry>,
}

impl DatasetSummary {
    /// Summarizes one dataset's planner reports, ranking planners by their
    /// per-file overlap scores.
    pub fn from_reports(dataset: &str, total_ndpv: i64, reports: &[PlannerReport], sk: &ScottKnottConfig) -> Result<Self> {
        let n_matched = reports.first().map_or(0, |r| r.files.len());
        let ranks = if reports.iter().all(|r| !r.files.is_empty()) && !reports.is_empty() {
            let groups: Vec<Vec<f64>> = reports
                .iter()
                .map(|r| r.files.iter().map(|f| f.overlap_pct).collect())
                .collect();
            scott_knott_rank(&groups, sk)?.into_iter().map(Some).collect()
        } else {
            vec![None; reports.len()]
        };
        Ok(Self {
            dataset: dataset.to_string(),
            n_matched,
            total_ndpv,
            planners: reports
                .iter()
                .zip(ranks)
                .map(|(r, rank)| PlannerEntry {
                    planner: r.planner,
                    rank,
                    summary: r.summary.clone(),
                })
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub datasets: Vec<DatasetSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDump {
    pub metric: Metric,
    pub action: String,
    /// Target interval in raw metric units.
    pub interval: Option<[f64; 2]>,
    /// Target interval in normalized units.
    pub normalized: Option<[f64; 2]>,
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDump {
    pub file: String,
    pub planner: PlannerKind,
    pub size: usize,
    pub support: usize,
    pub note: Option<String>,
    pub features: Vec<FeatureDump>,
    /// Ids of consistent refactoring methods.
    pub refactorings: Vec<u8>,
    /// Compact `+metric`/`-metric` list of the moves.
    pub changes: Vec<String>,
}

pub fn plan_dump(file: &str, plan: &Plan, map: &NormalizationMap) -> PlanDump {
    let features = plan
        .actions
        .iter()
        .enumerate()
        .map(|(f, a)| {
            let metric = Metric::from_index(f).unwrap_or(Metric::Wmc);
            match a {
                PlanAction::Keep => FeatureDump {
                    metric,
                    action: "keep".into(),
                    interval: None,
                    normalized: None,
                    direction: None,
                },
                PlanAction::Move { interval, direction } => FeatureDump {
                    metric,
                    action: "move".into(),
                    interval: Some([map.invert_value(f, interval.lo), map.invert_value(f, interval.hi)]),
                    normalized: Some([interval.lo, interval.hi]),
                    direction: *direction,
                },
            }
        })
        .collect::<Vec<_>>();
    let changes = features
        .iter()
        .filter_map(|d| d.direction.map(|dir| format!("{}{}", dir.sign(), d.metric)))
        .collect();
    PlanDump {
        file: file.to_string(),
        planner: plan.planner,
        size: plan.size(),
        support: plan.support,
        note: plan.note.clone(),
        features,
        refactorings: map_to_refactorings(plan),
        changes,
    }
}
