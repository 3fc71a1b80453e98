//! The three-release K-test: fit on `x`, plan for the defective files of
//! `y`, score the plans against `z`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{median_iqr, overlap, precision_recall, weighted_scores, Confusion, OverlapMode};
use crate::data::{normalize, NormalizationMap, Release, ReleaseTriple};
use crate::discretize::BinScheme;
use crate::error::{Error, Result};
use crate::explain::{explain_instance, BinFrequencies, Explanation, LimeConfig};
use crate::learners::{fit_forest, ForestConfig, ForestModel};
use crate::metrics::N_FEATURES;
use crate::planners::{
    classical_plan, fit_alves, fit_oliveira, fit_shatnawi, fit_xtree, precedented_features, random_plan,
    timelime_plan, AlvesRules, ChangeHistory, FeatureShift, FlipMode, OliveiraConfig, OliveiraRules, Plan,
    PlannerKind, ShatnawiRules, XTree, XTreeConfig,
};
use crate::preprocess::{smote, SmoteConfig};
use crate::seed::{derive_seed, label_stream};

const STREAM_SMOTE: u64 = 1;
const STREAM_FOREST: u64 = 2;
const STREAM_LIME: u64 = 3;
const STREAM_RANDOM: u64 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KTestConfig {
    /// Maximum number of precedented features (and TimeLIME plan size).
    pub m: usize,
    pub seed: u64,
    /// The `seed` fields of the component configs are replaced by seeds
    /// derived from the run seed.
    pub smote: SmoteConfig,
    pub forest: ForestConfig,
    pub lime: LimeConfig,
    pub flip: FlipMode,
    pub overlap: OverlapMode,
    pub alves_threshold_pct: f64,
    pub shatnawi_p0: f64,
    /// Logistic p-value cut-off used by Alves and Shatnawi.
    pub significance: f64,
    pub oliveira: OliveiraConfig,
    pub xtree: XTreeConfig,
}

impl Default for KTestConfig {
    fn default() -> Self {
        Self {
            m: 5,
            seed: 0,
            smote: SmoteConfig::default(),
            forest: ForestConfig::default(),
            lime: LimeConfig::default(),
            flip: FlipMode::Mirror,
            overlap: OverlapMode::Matches,
            alves_threshold_pct: 70.0,
            shatnawi_p0: 0.05,
            significance: 0.05,
            oliveira: OliveiraConfig::default(),
            xtree: XTreeConfig::default(),
        }
    }
}

impl KTestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Config("M must be >= 1".into()));
        }
        self.smote.validate()?;
        self.lime.validate()?;
        Ok(())
    }

    /// Seed handed to SMOTE.
    pub fn smote_seed(&self) -> u64 {
        derive_seed(self.seed, &[STREAM_SMOTE])
    }

    /// Seed handed to the random forest.
    pub fn forest_seed(&self) -> u64 {
        derive_seed(self.seed, &[STREAM_FOREST])
    }

    /// LIME seed for one file.
    pub fn lime_seed(&self, file: &str) -> u64 {
        derive_seed(self.seed, &[STREAM_LIME, label_stream(file)])
    }

    /// Random-planner seed for one file.
    pub fn random_seed(&self, file: &str) -> u64 {
        derive_seed(self.seed, &[STREAM_RANDOM, label_stream(file)])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileReport {
    pub file: String,
    pub plan_size: usize,
    pub overlap_pct: f64,
    pub ndpv: i64,
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerSummary {
    pub n_files: usize,
    pub median_overlap: Option<f64>,
    pub iqr_overlap: Option<f64>,
    pub mean_plan_size: Option<f64>,
    pub s: Option<f64>,
    pub s_scaled: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub confusion: Confusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerReport {
    pub dataset: String,
    pub planner: PlannerKind,
    pub files: Vec<FileReport>,
    #[serde(skip)]
    pub plans: Vec<Plan>,
    pub summary: PlannerSummary,
}

impl PlannerReport {
    fn new(dataset: &str, planner: PlannerKind, files: Vec<FileReport>, plans: Vec<Plan>) -> Result<Self> {
        let overlaps: Vec<f64> = files.iter().map(|f| f.overlap_pct).collect();
        let mut confusion = Confusion::default();
        for f in &files {
            confusion.merge(&Confusion {
                tp: f.tp,
                tn: f.tn,
                fp: f.fp,
                fn_: f.fn_,
            });
        }
        let (median_overlap, iqr_overlap) = match median_iqr(&overlaps) {
            Some((m, i)) => (Some(m), Some(i)),
            None => (None, None),
        };
        let weighted = if files.is_empty() {
            None
        } else {
            let pairs: Vec<(f64, i64)> = files.iter().map(|f| (f.overlap_pct / 100.0, f.ndpv)).collect();
            Some(weighted_scores(&pairs)?)
        };
        let (precision, recall) = precision_recall(&confusion);
        let summary = PlannerSummary {
            n_files: files.len(),
            median_overlap,
            iqr_overlap,
            mean_plan_size: (!files.is_empty())
                .then(|| files.iter().map(|f| f.plan_size as f64).sum::<f64>() / files.len() as f64),
            s: weighted.map(|w| w.s),
            s_scaled: weighted.and_then(|w| w.s_scaled),
            precision,
            recall,
            confusion,
        };
        Ok(Self {
            dataset: dataset.to_string(),
            planner,
            files,
            plans,
            summary,
        })
    }
}

/// Everything fitted once per triple and shared by all planners.
pub struct TrialContext {
    pub dataset: String,
    pub triple: ReleaseTriple,
    pub config: KTestConfig,
    pub map: NormalizationMap,
    pub x: Release,
    pub y: Release,
    pub z: Release,
    /// Bins fitted on normalized `x`.
    pub bins: BinScheme,
    pub forest: Option<ForestModel>,
    pub explanations: BTreeMap<String, Explanation>,
    pub shift: Option<FeatureShift>,
    pub precedented: Vec<usize>,
    pub history: Option<ChangeHistory>,
    pub alves: Option<AlvesRules>,
    pub shatnawi: Option<ShatnawiRules>,
    pub oliveira: Option<OliveiraRules>,
    pub xtree: Option<XTree>,
}

impl TrialContext {
    /// Fits the components the given planners need.
    pub fn prepare(
        dataset: &str,
        triple: ReleaseTriple,
        config: &KTestConfig,
        planners: &[PlannerKind],
    ) -> Result<Self> {
        config.validate()?;
        let needs = |k: &[PlannerKind]| planners.iter().any(|p| k.contains(p));
        let needs_lime = needs(&[PlannerKind::Lime, PlannerKind::TimeLime, PlannerKind::Random]);
        let needs_history = needs(&[PlannerKind::TimeLime, PlannerKind::Random]);

        let map = NormalizationMap::fit(&[&triple.oldest, &triple.newer])?;
        let x = normalize(&triple.oldest, &map);
        let y = normalize(&triple.newer, &map);
        let z = normalize(&triple.most_recent, &map);
        let bins = BinScheme::fit(x.records())?;

        let mut ctx = Self {
            dataset: dataset.to_string(),
            config: config.clone(),
            map,
            bins,
            forest: None,
            explanations: BTreeMap::new(),
            shift: None,
            precedented: Vec::new(),
            history: None,
            alves: None,
            shatnawi: None,
            oliveira: None,
            xtree: None,
            x,
            y,
            z,
            triple,
        };

        if needs_history {
            let shift = FeatureShift::between(&ctx.x, &ctx.y)?;
            ctx.precedented = precedented_features(&shift, config.m);
            ctx.shift = Some(shift);
            ctx.history = Some(ChangeHistory::build(&ctx.x, &ctx.y, &ctx.bins)?);
        }
        if needs_lime {
            let smote_cfg = SmoteConfig {
                seed: config.smote_seed(),
                ..config.smote
            };
            let balanced = smote(ctx.x.records(), &smote_cfg)?;
            let forest_cfg = ForestConfig {
                seed: config.forest_seed(),
                ..config.forest
            };
            let forest = fit_forest(&balanced, &forest_cfg)?;
            let freq = BinFrequencies::from_records(ctx.x.records(), &ctx.bins);
            let explanations = ctx
                .triple
                .matched_files()
                .par_iter()
                .map(|file| {
                    let lime = LimeConfig {
                        seed: config.lime_seed(file),
                        ..config.lime
                    };
                    let inst = ctx.y.get(file).expect("matched file is in y");
                    explain_instance(&forest, &inst.metrics, &ctx.bins, &freq, &lime).map(|e| (file.clone(), e))
                })
                .collect::<Result<Vec<_>>>()?;
            ctx.explanations = explanations.into_iter().collect();
            ctx.forest = Some(forest);
        }
        if needs(&[PlannerKind::Alves]) {
            ctx.alves = Some(fit_alves(
                &ctx.triple.oldest,
                &ctx.map,
                config.alves_threshold_pct,
                config.significance,
            )?);
        }
        if needs(&[PlannerKind::Shatnawi]) {
            ctx.shatnawi = Some(fit_shatnawi(
                &ctx.triple.oldest,
                &ctx.map,
                config.shatnawi_p0,
                config.significance,
            )?);
        }
        if needs(&[PlannerKind::Oliveira]) {
            ctx.oliveira = Some(fit_oliveira(&ctx.triple.oldest, &ctx.map, &config.oliveira)?);
        }
        if needs(&[PlannerKind::XTree]) {
            ctx.xtree = Some(fit_xtree(ctx.x.records(), &ctx.bins, &config.xtree)?);
        }
        Ok(ctx)
    }

    fn missing(planner: PlannerKind) -> Error {
        Error::Config(format!("trial context was not prepared for planner `{planner}`"))
    }

    pub fn explanation(&self, file: &str) -> Result<&Explanation> {
        if !self.triple.is_matched(file) {
            return Err(Error::UnmatchedFile(file.to_string()));
        }
        self.explanations
            .get(file)
            .ok_or_else(|| Self::missing(PlannerKind::Lime))
    }

    /// Normalized `y` metrics of a matched file.
    pub fn instance(&self, file: &str) -> Result<&[f64]> {
        if !self.triple.is_matched(file) {
            return Err(Error::UnmatchedFile(file.to_string()));
        }
        Ok(&self.y.get(file).expect("matched").metrics)
    }

    pub fn plan(&self, planner: PlannerKind, file: &str) -> Result<Plan> {
        let inst = self.instance(file)?;
        let cfg = &self.config;
        match planner {
            PlannerKind::Lime => Ok(classical_plan(self.explanation(file)?, N_FEATURES, cfg.flip)),
            PlannerKind::TimeLime => timelime_plan(
                self.explanation(file)?,
                N_FEATURES,
                &self.precedented,
                self.history.as_ref().ok_or_else(|| Self::missing(planner))?,
                cfg.m,
                cfg.flip,
            ),
            PlannerKind::Random => {
                let n = self.plan(PlannerKind::TimeLime, file)?.size();
                random_plan(inst, n, cfg.random_seed(file))
            }
            PlannerKind::Alves => Ok(self.alves.as_ref().ok_or_else(|| Self::missing(planner))?.apply(inst)),
            PlannerKind::Shatnawi => Ok(self
                .shatnawi
                .as_ref()
                .ok_or_else(|| Self::missing(planner))?
                .apply(inst)),
            PlannerKind::Oliveira => Ok(self
                .oliveira
                .as_ref()
                .ok_or_else(|| Self::missing(planner))?
                .apply(inst)),
            PlannerKind::XTree => Ok(self.xtree.as_ref().ok_or_else(|| Self::missing(planner))?.plan(inst)),
        }
    }

    /// Plans and scores every matched file.
    pub fn run(&self, planner: PlannerKind) -> Result<PlannerReport> {
        let rows = self
            .triple
            .matched_files()
            .par_iter()
            .map(|file| {
                let plan = self.plan(planner, file)?;
                let y = &self.y.get(file).expect("matched").metrics;
                let z = &self.z.get(file).expect("matched").metrics;
                let o = overlap(&plan, y, z, &self.bins, self.config.overlap)?;
                let report = FileReport {
                    file: file.clone(),
                    plan_size: plan.size(),
                    overlap_pct: o.score,
                    ndpv: self.triple.ndpv(file)?,
                    tp: o.counts.tp,
                    tn: o.counts.tn,
                    fp: o.counts.fp,
                    fn_: o.counts.fn_,
                };
                Ok((report, plan))
            })
            .collect::<Result<Vec<_>>>()?;
        let (files, plans) = rows.into_iter().unzip();
        PlannerReport::new(&self.dataset, planner, files, plans)
    }
}

/// Prepares a trial for one planner and runs it.
pub fn ktest_run(dataset: &str, triple: ReleaseTriple, planner: PlannerKind, config: &KTestConfig) -> Result<PlannerReport> {
    TrialContext::prepare(dataset, triple, config, &[planner])?.run(planner)
}
