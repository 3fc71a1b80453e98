//! `defect-plan`: runs the planners over a manifest of release triples and
//! writes per-file and aggregate reports.
//!
//! Exit codes: 0 ok, 1 usage, 2 data, 3 internal.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use defect_planning::evaluate::OverlapMode;
use defect_planning::planners::{FlipMode, PlannerKind};

#[derive(Debug, Parser)]
#[command(name = "defect-plan", version, about = "Defect-reduction planning over CK metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the K-test for every trial and planner, writing reports to --out.
    Run(RunArgs),
    /// Print the explanation and plan of one matched file as JSON.
    Explain(ExplainArgs),
    /// Write a generated three-release triple and a manifest for it.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Manifest with one `dataset: x.csv y.csv z.csv` line per trial.
    #[arg(long)]
    manifest: PathBuf,
    /// Maximum number of precedented features and TimeLIME changes.
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How a LIME interval is turned into a target interval.
    #[arg(long, default_value = "mirror", value_parser = parse_flip)]
    flip: FlipMode,
    /// Overlap score: matches over all features, or TP over TP+FP+FN.
    #[arg(long, default_value = "matches", value_parser = parse_overlap)]
    overlap: OverlapMode,
    /// LIME perturbation samples per explanation.
    #[arg(long)]
    lime_samples: Option<usize>,
    /// LIME kernel width (default 0.75 * sqrt(20)).
    #[arg(long)]
    kernel_width: Option<f64>,
    /// SMOTE nearest neighbours.
    #[arg(long)]
    smote_k: Option<usize>,
    /// SMOTE minority/majority ratio after balancing.
    #[arg(long)]
    smote_ratio: Option<f64>,
    /// Trees in the random forest.
    #[arg(long)]
    trees: Option<usize>,
    /// Features tried per split (default ceil(sqrt(20))).
    #[arg(long)]
    max_features: Option<usize>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Comma-separated planners.
    #[arg(long, default_value = "random,lime,timelime,alves,shatnawi,oliveira,xtree")]
    planners: String,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExplainArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long)]
    dataset: String,
    /// File (class) name as it appears in the release CSVs.
    #[arg(long)]
    file: String,
    #[arg(long, default_value = "timelime")]
    planner: String,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 200)]
    files: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_flip(s: &str) -> Result<FlipMode, String> {
    s.parse().map_err(|e: defect_planning::Error| e.to_string())
}

fn parse_overlap(s: &str) -> Result<OverlapMode, String> {
    s.parse().map_err(|e: defect_planning::Error| e.to_string())
}

fn parse_planners(list: &str) -> Result<Vec<PlannerKind>, commands::CliError> {
    let mut out: Vec<PlannerKind> = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind: PlannerKind = name.parse().map_err(|e: defect_planning::Error| commands::CliError::Usage(e.to_string()))?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    if out.is_empty() {
        return Err(commands::CliError::Usage("no planners given".into()));
    }
    Ok(out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => parse_planners(&args.planners).and_then(|planners| {
            commands::run(&args.experiment.manifest, &planners, &args.out, &args.experiment)
        }),
        Command::Explain(args) => parse_planners(&args.planner).and_then(|p| {
            commands::explain(&args.experiment, &args.dataset, &args.file, p[0])
        }),
        Command::Synth(args) => commands::synth(&args.out, args.files, args.seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
