use std::fs;
use std::path::{Path, PathBuf};

use defect_planning::data::{load_manifest, write_release_file, TrialSpec};
use defect_planning::evaluate::{
    plan_dump, write_file_report_csv, DatasetSummary, KTestConfig, PlanDump, PlannerReport, RunSummary,
    ScottKnottConfig, TrialContext,
};
use defect_planning::explain::LimeConfig;
use defect_planning::learners::ForestConfig;
use defect_planning::planners::PlannerKind;
use defect_planning::preprocess::SmoteConfig;
use defect_planning::synthetic::{synthetic_releases, SyntheticConfig};
use defect_planning::{Error, Metric};
use serde::Serialize;

use crate::ExperimentArgs;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Config(_)) => 1,
            CliError::Core(
                Error::Io { .. }
                | Error::Csv { .. }
                | Error::Schema { .. }
                | Error::Parse { .. }
                | Error::Manifest { .. }
                | Error::UnmatchedFile(_)
                | Error::Triple(_),
            ) => 2,
            CliError::Core(_) | CliError::Output { .. } => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn config_from(args: &ExperimentArgs) -> Result<KTestConfig> {
    let defaults = KTestConfig::default();
    let config = KTestConfig {
        m: args.m,
        seed: args.seed,
        flip: args.flip,
        overlap: args.overlap,
        lime: LimeConfig {
            n_samples: args.lime_samples.unwrap_or(defaults.lime.n_samples),
            kernel_width: args.kernel_width.or(defaults.lime.kernel_width),
            ..defaults.lime
        },
        smote: SmoteConfig {
            k_neighbors: args.smote_k.unwrap_or(defaults.smote.k_neighbors),
            target_ratio: args.smote_ratio.unwrap_or(defaults.smote.target_ratio),
            ..defaults.smote
        },
        forest: ForestConfig {
            n_trees: args.trees.unwrap_or(defaults.forest.n_trees),
            max_features: args.max_features.or(defaults.forest.max_features),
            ..defaults.forest
        },
        ..defaults
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if config.forest.n_trees == 0 {
        return Err(CliError::Usage("--trees must be >= 1".into()));
    }
    Ok(config)
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialize");
    v.push(b'\n');
    v
}

#[derive(Serialize)]
struct TrialMetadata {
    dataset: String,
    oldest: PathBuf,
    newer: PathBuf,
    most_recent: PathBuf,
    n_matched: usize,
    total_ndpv: i64,
}

#[derive(Serialize)]
struct DerivedSeeds {
    smote: u64,
    forest: u64,
    lime: &'static str,
    random: &'static str,
    scott_knott: u64,
}

#[derive(Serialize)]
struct RunMetadata {
    tool: &'static str,
    version: &'static str,
    manifest: PathBuf,
    planners: Vec<PlannerKind>,
    config: KTestConfig,
    seeds: DerivedSeeds,
    scott_knott: ScottKnottConfig,
    trials: Vec<TrialMetadata>,
    outputs: Vec<String>,
}

fn scott_knott_config(seed: u64) -> ScottKnottConfig {
    ScottKnottConfig {
        seed,
        ..Default::default()
    }
}

pub fn run(manifest: &Path, planners: &[PlannerKind], out: &Path, args: &ExperimentArgs) -> Result<()> {
    let config = config_from(args)?;
    let trials = load_manifest(manifest)?;
    if trials.is_empty() {
        return Err(CliError::Core(Error::Manifest {
            line: 0,
            message: "manifest declares no trials".into(),
        }));
    }
    // Load everything before writing anything.
    let triples = trials
        .iter()
        .map(|t| t.load().map(|triple| (t, triple)))
        .collect::<defect_planning::Result<Vec<_>>>()?;

    let sk = scott_knott_config(config.seed);
    let mut summaries = Vec::new();
    let mut trial_meta = Vec::new();
    let mut outputs = Vec::new();
    create_dir(out)?;
    for (spec, triple) in triples {
        log::info!("{}: {} matched files", spec.dataset, triple.matched_files().len());
        let total_ndpv = triple.total_ndpv();
        trial_meta.push(trial_metadata(spec, triple.matched_files().len(), total_ndpv));
        let ctx = TrialContext::prepare(&spec.dataset, triple, &config, planners)?;
        let reports = planners
            .iter()
            .map(|&p| ctx.run(p))
            .collect::<defect_planning::Result<Vec<PlannerReport>>>()?;
        let dir = out.join(&spec.dataset);
        create_dir(&dir)?;
        for r in &reports {
            let name = format!("{}.csv", r.planner);
            write_file_report_csv(&dir.join(&name), r)?;
            outputs.push(format!("{}/{name}", spec.dataset));
        }
        let plans: Vec<PlanDump> = reports
            .iter()
            .flat_map(|r| {
                ctx.triple
                    .matched_files()
                    .iter()
                    .zip(&r.plans)
                    .map(|(f, p)| plan_dump(f, p, &ctx.map))
            })
            .collect();
        write(&dir.join("plans.json"), &to_json(&plans))?;
        outputs.push(format!("{}/plans.json", spec.dataset));
        summaries.push(DatasetSummary::from_reports(&spec.dataset, total_ndpv, &reports, &sk)?);
    }
    write(&out.join("summary.json"), &to_json(&RunSummary { datasets: summaries }))?;
    outputs.push("summary.json".into());

    let meta = RunMetadata {
        tool: "defect-plan",
        version: env!("CARGO_PKG_VERSION"),
        manifest: manifest.to_path_buf(),
        planners: planners.to_vec(),
        seeds: DerivedSeeds {
            smote: config.smote_seed(),
            forest: config.forest_seed(),
            lime: "derive_seed(seed, [3, fnv1a(file name)])",
            random: "derive_seed(seed, [4, fnv1a(file name)])",
            scott_knott: sk.seed,
        },
        config,
        scott_knott: sk,
        trials: trial_meta,
        outputs,
    };
    write(&out.join("run_metadata.json"), &to_json(&meta))
}

fn trial_metadata(spec: &TrialSpec, n_matched: usize, total_ndpv: i64) -> TrialMetadata {
    TrialMetadata {
        dataset: spec.dataset.clone(),
        oldest: spec.oldest.clone(),
        newer: spec.newer.clone(),
        most_recent: spec.most_recent.clone(),
        n_matched,
        total_ndpv,
    }
}

#[derive(Serialize)]
struct WeightDump {
    metric: Metric,
    weight: f64,
    bin: usize,
    /// Current bin in raw metric units.
    interval: [f64; 2],
    normalized: [f64; 2],
    selection_rank: Option<usize>,
}

#[derive(Serialize)]
struct ExplainDump {
    dataset: String,
    file: String,
    predicted_probability: f64,
    predicted_defective: bool,
    intercept: f64,
    score: f64,
    ndpv: i64,
    weights: Vec<WeightDump>,
    plan: PlanDump,
}

pub fn explain(args: &ExperimentArgs, dataset: &str, file: &str, planner: PlannerKind) -> Result<()> {
    let config = config_from(args)?;
    let trials = load_manifest(&args.manifest)?;
    let spec = trials
        .iter()
        .find(|t| t.dataset == dataset)
        .ok_or_else(|| CliError::Usage(format!("dataset `{dataset}` is not in the manifest")))?;
    let triple = spec.load()?;
    if !triple.is_matched(file) {
        return Err(Error::UnmatchedFile(file.to_string()).into());
    }
    let mut needed = vec![PlannerKind::Lime];
    if planner != PlannerKind::Lime {
        needed.push(planner);
    }
    let ctx = TrialContext::prepare(dataset, triple, &config, &needed)?;
    let e = ctx.explanation(file)?;
    let plan = ctx.plan(planner, file)?;
    let raw = |f: usize, v: f64| ctx.map.invert_value(f, v);
    let dump = ExplainDump {
        dataset: dataset.to_string(),
        file: file.to_string(),
        predicted_probability: e.predicted_probability,
        predicted_defective: e.predicted_defective,
        intercept: e.intercept,
        score: e.score,
        ndpv: ctx.triple.ndpv(file)?,
        weights: e
            .entries
            .iter()
            .map(|x| WeightDump {
                metric: x.metric,
                weight: x.weight,
                bin: x.bin,
                interval: [raw(x.feature, x.interval.lo), raw(x.feature, x.interval.hi)],
                normalized: [x.interval.lo, x.interval.hi],
                selection_rank: x.selection_rank,
            })
            .collect(),
        plan: plan_dump(file, &plan, &ctx.map),
    };
    let text = String::from_utf8(to_json(&dump)).expect("json is utf-8");
    print!("{text}");
    Ok(())
}

pub fn synth(out: &Path, files: usize, seed: u64) -> Result<()> {
    let cfg = SyntheticConfig {
        n_files: files,
        seed,
        ..Default::default()
    };
    let releases = synthetic_releases(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    create_dir(out)?;
    let mut names = Vec::new();
    for r in &releases {
        let name = format!("{}.csv", r.version_id());
        write_release_file(r, out.join(&name))?;
        names.push(name);
    }
    let manifest = format!("synthetic: {}\n", names.join(" "));
    write(&out.join("trials.txt"), manifest.as_bytes())
}
