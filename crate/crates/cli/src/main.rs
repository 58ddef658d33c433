//! `dlb`: run, sweep, verify, and summarize DLB experiments.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dlb_core::harness::{
    read_runs_csv, read_trajectory_csv, run_experiment, summarize, write_outputs, write_summary_json,
    ExperimentConfig, Summary, SUMMARY_FILE, TRAJECTORY_FILE,
};
use dlb_core::oracles::verify::run_all;
use dlb_core::Error;

#[derive(Parser)]
#[command(name = "dlb", version, about = "Runtime experiments on the Deceptive Leading Blocks benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write runs.csv, trajectory.csv, and summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment over several problem sizes and print the scaling fit.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Monte Carlo and formula checks and print a JSON report.
    Verify {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Recompute summary.json from the CSV files in a directory.
    Summarize {
        #[arg(long = "in")]
        dir: PathBuf,
    },
}

fn execute(config: &ExperimentConfig, out: Option<PathBuf>) -> Result<Summary, Error> {
    let dir = out
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("results"));
    let output = run_experiment(config)?;
    let summary = summarize(&output.records, &output.trajectories)?;
    let files = write_outputs(&dir, &output, &summary)?;
    eprintln!(
        "wrote {} runs to {}",
        output.records.len(),
        files.runs.parent().unwrap_or(Path::new(".")).display()
    );
    Ok(summary)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run { config, seed, out } => {
            let mut config = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                config.master_seed = seed;
            }
            execute(&config, out)?;
        }
        Command::Sweep { config, out } => {
            let config = ExperimentConfig::load(&config)?;
            if config.sizes.len() < 3 {
                return Err(Error::Config("a sweep needs at least three problem sizes".into()));
            }
            let summary = execute(&config, out)?;
            println!("{}", to_json(&summary.scaling));
        }
        Command::Verify { trials, seed } => {
            let report = run_all(trials, seed)?;
            println!("{}", to_json(&report));
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Summarize { dir } => {
            let records = read_runs_csv(&dir.join("runs.csv"))?;
            let traj_path = dir.join(TRAJECTORY_FILE);
            let trajectories = if traj_path.exists() {
                read_trajectory_csv(&traj_path)?
            } else {
                Vec::new()
            };
            let summary = summarize(&records, &trajectories)?;
            write_summary_json(&dir.join(SUMMARY_FILE), &summary)?;
            println!("{}", to_json(&summary));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
