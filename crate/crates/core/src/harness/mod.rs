//! Experiment configuration, parallel repetitions, trajectory capture,
//! summary statistics, and CSV/JSON output.

mod config;
mod emit;
mod runner;
mod summary;

pub use config::{AlgorithmSpec, ExperimentConfig, PopulationSizes, SizeRule};
pub use emit::{
    parse_runs_csv, parse_trajectory_csv, read_runs_csv, read_trajectory_csv, write_outputs, write_runs_csv,
    write_summary_json, write_trajectory_csv, OutputFiles, RUNS_FILE, RUNS_HEADER, SUMMARY_FILE, TRAJECTORY_FILE,
    TRAJECTORY_HEADER,
};
pub use runner::{build_optimizer, run_experiment, run_single, ExperimentOutput, RunRecord, RunSpec, TrajectoryPoint, THREADS_ENV};
pub use summary::{fit_scaling, quantile_sorted, summarize, GroupSummary, MeanCi, Quantiles, ScalingEntry, ScalingFit, Summary, TrajectoryBucket};
