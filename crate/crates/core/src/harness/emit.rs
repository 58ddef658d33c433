use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::runner::{ExperimentOutput, RunRecord, TrajectoryPoint};
use super::summary::Summary;
use crate::error::{Error, Result};

pub const RUNS_FILE: &str = "runs.csv";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SUMMARY_FILE: &str = "summary.json";

pub const RUNS_HEADER: &str = "run_id,algorithm,fitness,n,mu,lambda,seed,evals_to_optimum,best_fitness,correct_blocks";
pub const TRAJECTORY_HEADER: &str = "run_id,t,correct_blocks,best_fitness,Z,Z_star";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn write_csv<T: Serialize>(path: &Path, header: &str, rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(BufWriter::new(file));
    w.write_record(header.split(',')).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_runs_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    write_csv(path, RUNS_HEADER, records)
}

pub fn write_trajectory_csv(path: &Path, points: &[TrajectoryPoint]) -> Result<()> {
    write_csv(path, TRAJECTORY_HEADER, points)
}

pub fn write_summary_json(path: &Path, summary: &Summary) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, summary).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

/// Paths of the files written by [`write_outputs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFiles {
    pub runs: PathBuf,
    pub trajectory: PathBuf,
    pub summary: PathBuf,
}

impl OutputFiles {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            runs: dir.join(RUNS_FILE),
            trajectory: dir.join(TRAJECTORY_FILE),
            summary: dir.join(SUMMARY_FILE),
        }
    }
}

/// Creates `dir` if needed and writes `runs.csv`, `trajectory.csv`, and
/// `summary.json`.
pub fn write_outputs(dir: &Path, output: &ExperimentOutput, summary: &Summary) -> Result<OutputFiles> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let files = OutputFiles::in_dir(dir);
    write_runs_csv(&files.runs, &output.records)?;
    write_trajectory_csv(&files.trajectory, &output.trajectories)?;
    write_summary_json(&files.summary, summary)?;
    Ok(files)
}

fn parse_csv<T: DeserializeOwned, R: Read>(reader: R, header: &str, origin: &Path) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let found = r.headers().map_err(csv_err(origin))?.clone();
    if found.iter().ne(header.split(',')) {
        return Err(Error::Parse(format!(
            "{}: expected header '{header}', found '{}'",
            origin.display(),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize()
        .map(|row| {
            row.map_err(|e| match e.kind() {
                csv::ErrorKind::Io(_) => csv_err(origin)(e),
                _ => Error::Parse(format!("{}: {e}", origin.display())),
            })
        })
        .collect()
}

/// Decodes `runs.csv` content; the header must match exactly.
pub fn parse_runs_csv<R: Read>(reader: R) -> Result<Vec<RunRecord>> {
    parse_csv(reader, RUNS_HEADER, Path::new("<input>"))
}

pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(io_err(path))?;
    parse_csv(file, RUNS_HEADER, path)
}

pub fn parse_trajectory_csv<R: Read>(reader: R) -> Result<Vec<TrajectoryPoint>> {
    parse_csv(reader, TRAJECTORY_HEADER, Path::new("<input>"))
}

pub fn read_trajectory_csv(path: &Path) -> Result<Vec<TrajectoryPoint>> {
    let file = File::open(path).map_err(io_err(path))?;
    parse_csv(file, TRAJECTORY_HEADER, path)
}
