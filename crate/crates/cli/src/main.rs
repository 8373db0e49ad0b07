use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tvcnlab::experiment::{
    run_experiment, run_generate, run_metrics, run_routes, run_traffic, ExperimentError, ExperimentSpec, OutputFile,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tvcnlab",
    version,
    about = "Grow, measure and load time-varying communication networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write snapshot edge lists of every realization.
    Generate(Common),
    /// Write per-snapshot metrics and the final rich-club profile.
    Metrics(Common),
    /// Write the users' routes under each strategy.
    Routes(Common),
    /// Write one traffic row per realization and grid point.
    Traffic(Common),
    /// Run the experiment named in the config and write its summary table.
    Experiment(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment spec.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides `base_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; `TVCNLAB_JOBS` takes precedence.
    #[arg(long)]
    jobs: Option<usize>,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn jobs(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    match std::env::var("TVCNLAB_JOBS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Config(format!("TVCNLAB_JOBS must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(flag),
    }
}

fn load(common: &Common) -> Result<ExperimentSpec, Failure> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Failure::Config(format!("{}: {e}", common.config.display())))?;
    let mut spec = ExperimentSpec::from_json(&text)?;
    if let Some(seed) = common.seed {
        spec.base_seed = seed;
    }
    Ok(spec)
}

fn write_all(out: &Path, files: &[OutputFile]) -> Result<(), Failure> {
    for f in files {
        let path = out.join(&f.path);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
        }
        std::fs::write(&path, &f.contents).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}

type Runner = fn(&ExperimentSpec, Option<usize>) -> Result<Vec<OutputFile>, ExperimentError>;

fn run(cli: Cli) -> Result<(), Failure> {
    let (common, runner): (&Common, Runner) = match &cli.command {
        Command::Generate(c) => (c, run_generate),
        Command::Metrics(c) => (c, run_metrics),
        Command::Routes(c) => (c, run_routes),
        Command::Traffic(c) => (c, run_traffic),
        Command::Experiment(c) => (c, run_experiment),
    };
    let spec = load(common)?;
    let jobs = jobs(common.jobs)?;
    let files = runner(&spec, jobs)?;
    write_all(&common.out, &files)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("tvcnlab: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("tvcnlab: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
