use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fakery::pipeline::{self, parse_models, FixtureOptions, RunConfig};
use fakery::Error;

#[derive(Parser)]
#[command(name = "fakery", version, about = "Real-vs-synthetic image detection from handcrafted features")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract feature caches for the train and test splits
    Extract(RunArgs),
    /// Fit models and tune their thresholds on a validation split
    Train(RunArgs),
    /// Score trained models on the test cache
    Evaluate(RunArgs),
    /// Write tables and plot-ready CSVs from saved metrics
    Report(RunArgs),
    /// extract, train, evaluate and report in one go
    RunAll(RunArgs),
    /// Write a synthetic dataset tree
    MakeFixture(FixtureArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; flags and FAKERY_* variables override it
    #[arg(long, env = "FAKERY_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "FAKERY_DATA_ROOT")]
    data_root: Option<PathBuf>,
    /// Comma-separated feature specs, e.g. `baseline,advanced,mixed` or `hog+lbp`
    #[arg(long, env = "FAKERY_FEATURES")]
    features: Option<String>,
    /// Comma-separated models: logreg, random_forest, extra_trees, gbdt_leafwise, gbdt_levelwise, voting
    #[arg(long, env = "FAKERY_MODELS")]
    models: Option<String>,
    /// Members of the voting ensemble
    #[arg(long, env = "FAKERY_VOTING_MEMBERS")]
    voting_members: Option<String>,
    #[arg(long, env = "FAKERY_SEED")]
    seed: Option<u64>,
    #[arg(long, env = "FAKERY_VAL_FRACTION")]
    val_fraction: Option<f64>,
    #[arg(long, env = "FAKERY_TRAIN_LIMIT")]
    train_limit: Option<usize>,
    #[arg(long, env = "FAKERY_TEST_LIMIT")]
    test_limit: Option<usize>,
    #[arg(long, env = "FAKERY_OUT")]
    out: Option<PathBuf>,
    #[arg(long, env = "FAKERY_GBDT_ROUNDS")]
    gbdt_rounds: Option<usize>,
    #[arg(long, env = "FAKERY_FOREST_TREES")]
    forest_trees: Option<usize>,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.data_root {
            c.data_root = v;
        }
        if let Some(v) = self.features {
            c.features = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        }
        if let Some(v) = self.models {
            c.models = parse_models(&v)?;
        }
        if let Some(v) = self.voting_members {
            c.voting_members = parse_models(&v)?;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.val_fraction {
            c.val_fraction = v;
        }
        if self.train_limit.is_some() {
            c.train_limit = self.train_limit;
        }
        if self.test_limit.is_some() {
            c.test_limit = self.test_limit;
        }
        if let Some(v) = self.out {
            c.out_dir = v;
        }
        if let Some(v) = self.gbdt_rounds {
            c.gbdt_rounds = v;
        }
        if let Some(v) = self.forest_trees {
            c.forest_trees = v;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
struct FixtureArgs {
    #[arg(long, env = "FAKERY_OUT")]
    out: PathBuf,
    #[arg(long, default_value_t = 50)]
    n_per_class: usize,
    #[arg(long, env = "FAKERY_SEED", default_value_t = 42)]
    seed: u64,
    /// Give both classes white noise (no learnable signal)
    #[arg(long)]
    null: bool,
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Extract(a) => {
            for o in pipeline::extract(&a.resolve()?)? {
                let state = if o.reused { "reused" } else { "written" };
                println!("{} {}x{} {state}", o.path.display(), o.rows, o.cols);
            }
        }
        Command::Train(a) => {
            for (spec, model, t) in pipeline::train(&a.resolve()?)? {
                println!("{spec} {model} tau={} val_f1={:.4}", t.tau_star, t.val_f1);
            }
        }
        Command::Evaluate(a) => {
            for (spec, model, m) in pipeline::evaluate_runs(&a.resolve()?)? {
                println!("{spec} {model} roc_auc={:.4} f1={:.4} brier={:.4}", m.roc_auc, m.f1, m.brier);
            }
        }
        Command::Report(a) => report(pipeline::write_report(&a.resolve()?.out_dir)?),
        Command::RunAll(a) => report(pipeline::run_all(&a.resolve()?)?),
        Command::MakeFixture(a) => {
            let opts = FixtureOptions { n_per_class: a.n_per_class, seed: a.seed, null_signal: a.null };
            let n = pipeline::make_fixture(&a.out, opts)?;
            println!("wrote {n} images to {}", a.out.display());
        }
    }
    Ok(())
}

fn report(files: pipeline::ReportFiles) {
    println!("{} results", files.n_results);
    for path in files.tables.iter().chain([&files.long_csv, &files.trend_csv]) {
        println!("{}", path.display());
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
