use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dsub_cli::{cmd_check, cmd_choquet, cmd_dyadic, cmd_extend, render_text, CliError, CliResult, InstanceSpec, Overrides};
use dsub_core::numeric::{parse_scalar, Scalar};

/// Verify lattice-valued Dobrakov submeasures described by instance files.
#[derive(Parser)]
#[command(name = "dsub", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel sweeps (defaults to the number of cores).
    #[arg(long, env = "DSUB_WORKERS", global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the submeasure and run the property checks.
    Check {
        spec: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Build the outer extension and check the extension statements.
    Extend { spec: PathBuf },
    /// Integrate the instance's density over a set, e.g. `{0,1}`.
    Choquet { spec: PathBuf, set: String },
    /// Run the interval-model limit checks.
    Dyadic {
        spec: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
    },
}

#[derive(Args)]
struct Tuning {
    /// Extra epsilon values, comma separated rationals such as `1/3,1/5`.
    #[arg(long, value_parser = parse_grid)]
    eps_grid: Option<Grid>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_depth: Option<u32>,
    /// Seed for random sweeps.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone)]
struct Grid(Vec<Scalar>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.split(',')
        .map(|t| parse_scalar(t.trim()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(Grid)
}

impl From<&Tuning> for Overrides {
    fn from(t: &Tuning) -> Self {
        Overrides {
            eps_grid: t.eps_grid.clone().map(|g| g.0),
            tol: t.tol,
            max_depth: t.max_depth,
            seed: t.seed,
        }
    }
}

fn load(path: &Path) -> CliResult<InstanceSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    text.parse()
}

fn run(cli: &Cli) -> CliResult<dsub_cli::RunReport> {
    match &cli.command {
        Command::Check { spec, tuning } => cmd_check(&load(spec)?, &tuning.into()),
        Command::Extend { spec } => cmd_extend(&load(spec)?),
        Command::Choquet { spec, set } => cmd_choquet(&load(spec)?, set),
        Command::Dyadic { spec, tuning } => cmd_dyadic(&load(spec)?, &tuning.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("dsub: cannot configure {n} workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", render_text(&report));
            }
            ExitCode::from(report.exit_status as u8)
        }
        Err(e) => {
            eprintln!("dsub: {e}");
            ExitCode::from(2)
        }
    }
}
