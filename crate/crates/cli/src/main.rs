use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use contractible::harness::ALL_PROPERTIES;
use contractible_cli::{
    cmd_estimate, cmd_eval, cmd_reproduce, cmd_verify, exit, render_estimate, render_eval, render_golden,
    render_reports, CliError, JobSpec, OutputFormat,
};

/// Evaluate, bound and verify holomorphically contractible functions with weighted poles.
///
/// Set RAYON_NUM_THREADS to limit worker threads; output does not depend on it.
#[derive(Parser)]
#[command(name = "contractible", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format; overrides the job file's `output` field.
    #[arg(long, value_enum, global = true)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form value, with the formula used.
    Eval {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Certified lower and upper bounds from the variational search.
    Estimate {
        #[arg(long)]
        spec: PathBuf,
        /// Search seed; overrides the job file's `seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the extremal candidates behind each bound.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run property checks; exits with status 4 on any violation.
    Verify {
        /// Property identifiers; none given runs nothing.
        ids: Vec<String>,
        /// Run every property.
        #[arg(long, conflicts_with = "ids")]
        all: bool,
        /// Job file supplying `properties`, `seed` and `trials`.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Trials per property, replacing the per-property defaults.
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute the table of reference constants.
    Reproduce {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

fn load(path: &PathBuf) -> Result<JobSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::spec(format!("{}: {e}", path.display())))?;
    JobSpec::from_json(&text)
}

fn run(cli: Cli) -> Result<(String, i32), CliError> {
    match cli.command {
        Command::Eval { spec, common } => {
            let job = load(&spec)?;
            let v = cmd_eval(&job)?;
            Ok((render_eval(&v, common.format.unwrap_or(job.output)), exit::SUCCESS))
        }
        Command::Estimate { spec, seed, witness, common } => {
            let mut job = load(&spec)?;
            job.seed = seed.or(job.seed);
            let b = cmd_estimate(&job)?;
            Ok((render_estimate(&b, common.format.unwrap_or(job.output), witness), exit::SUCCESS))
        }
        Command::Verify { ids, all, spec, seed, trials, common } => {
            let job = spec.as_ref().map(load).transpose()?.unwrap_or_default();
            let ids = if all {
                ALL_PROPERTIES.iter().map(|s| s.to_string()).collect()
            } else if ids.is_empty() {
                job.properties.clone()
            } else {
                ids
            };
            let reports = cmd_verify(&ids, seed.or(job.seed).unwrap_or(0), trials.or(job.trials))?;
            let code = if reports.iter().all(|r| r.passed()) { exit::SUCCESS } else { exit::VERIFICATION_FAILURE };
            Ok((render_reports(&reports, common.format.unwrap_or(job.output)), code))
        }
        Command::Reproduce { seed, common } => {
            let rows = cmd_reproduce(seed)?;
            let code = if rows.iter().all(|r| r.passed) { exit::SUCCESS } else { exit::VERIFICATION_FAILURE };
            Ok((render_golden(&rows, common.format.unwrap_or_default()), code))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
