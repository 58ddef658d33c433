use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{AlgorithmSpec, ExperimentConfig};
use crate::budget::Evaluator;
use crate::ea::{Ga, GaParams, MuCommaLambda, MuPlusOne, OnePlusLambda};
use crate::eda::{Mimic, Umda};
use crate::error::{Error, Result};
use crate::fitness::FitnessFn;
use crate::optimizer::Optimizer;
use crate::rng::RngStream;

/// Environment variable that caps the worker threads used for repetitions.
pub const THREADS_ENV: &str = "DLB_THREADS";

/// One row of `runs.csv`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: u64,
    pub algorithm: String,
    pub fitness: String,
    pub n: usize,
    pub mu: usize,
    pub lambda: usize,
    pub seed: u64,
    /// Index of the first optimal evaluation; empty when the budget ran out.
    pub evals_to_optimum: Option<u64>,
    pub best_fitness: u64,
    pub correct_blocks: u64,
}

/// One row of `trajectory.csv`. `Z` and `Z_star` are set for EDA runs on
/// width-2 DLB.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub run_id: u64,
    pub t: u64,
    pub correct_blocks: u64,
    pub best_fitness: u64,
    #[serde(rename = "Z")]
    pub z: Option<usize>,
    #[serde(rename = "Z_star")]
    pub z_star: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExperimentOutput {
    pub records: Vec<RunRecord>,
    pub trajectories: Vec<TrajectoryPoint>,
}

/// Builds the optimizer described by `spec`; this samples and evaluates the
/// initial population.
pub fn build_optimizer(
    spec: &AlgorithmSpec,
    n: usize,
    eval: &mut Evaluator,
    rng: &mut RngStream,
) -> Result<Box<dyn Optimizer>> {
    let sizes = spec.sizes(n);
    let rate = spec.mutation_rate(n).unwrap_or(0.0);
    Ok(match spec {
        AlgorithmSpec::OnePlusLambda { .. } => Box::new(OnePlusLambda::new(n, sizes.lambda, rate, eval, rng)?),
        AlgorithmSpec::MuPlusOne { .. } => Box::new(MuPlusOne::new(n, sizes.mu, rate, eval, rng)?),
        AlgorithmSpec::MuCommaLambda { .. } => {
            Box::new(MuCommaLambda::new(n, sizes.mu, sizes.lambda, rate, eval, rng)?)
        }
        AlgorithmSpec::Ga {
            p_c,
            selection,
            crossover,
            ..
        } => {
            let params = GaParams {
                mu: sizes.mu,
                lambda: sizes.lambda,
                rate,
                crossover_rate: *p_c,
                crossover: *crossover,
                selection: *selection,
            };
            Box::new(Ga::new(n, &params, eval, rng)?)
        }
        AlgorithmSpec::Umda { .. } => Box::new(Umda::new(n, sizes.mu, sizes.lambda, eval, rng)?),
        AlgorithmSpec::Mimic { clamp, .. } => {
            Box::new(Mimic::new(n, sizes.mu, sizes.lambda, *clamp, eval, rng)?)
        }
    })
}

/// Parameters of a single run.
#[derive(Clone, Debug)]
pub struct RunSpec<'a> {
    pub algorithm: &'a AlgorithmSpec,
    pub fitness: FitnessFn,
    pub n: usize,
    pub budget: u64,
    pub stride: u64,
    pub run_id: u64,
    pub master_seed: u64,
}

/// Executes one run on stream `(master_seed, run_id)`.
///
/// Trajectory points are taken at `t = stride, 2·stride, ... ≤ budget`; the
/// value at `t` is the state after the generation during which the `t`-th
/// evaluation happened. After the optimum is found the remaining points
/// repeat the final state.
pub fn run_single(spec: &RunSpec<'_>) -> Result<(RunRecord, Vec<TrajectoryPoint>)> {
    let mut rng = RngStream::new(spec.master_seed, spec.run_id);
    let mut eval = Evaluator::new(spec.fitness, spec.n, spec.budget);
    let mut opt = build_optimizer(spec.algorithm, spec.n, &mut eval, &mut rng)?;
    let points = spec.budget / spec.stride;
    let mut trajectory = Vec::with_capacity(points as usize);
    let snapshot = |opt: &dyn Optimizer, t: u64| {
        let best = opt.best();
        let stats = opt.block_stats();
        TrajectoryPoint {
            run_id: spec.run_id,
            t,
            correct_blocks: spec.fitness.correct_blocks(&best.genome),
            best_fitness: best.fitness,
            z: stats.map(|s| s.z),
            z_star: stats.map(|s| s.z_star),
        }
    };
    let mut next_t = spec.stride;
    let mut record_due = |opt: &dyn Optimizer, used: u64, trajectory: &mut Vec<TrajectoryPoint>| {
        while next_t <= spec.budget && next_t <= used {
            trajectory.push(snapshot(opt, next_t));
            next_t += spec.stride;
        }
    };
    record_due(opt.as_ref(), eval.budget().used(), &mut trajectory);
    while !eval.finished() {
        opt.step(&mut eval, &mut rng);
        record_due(opt.as_ref(), eval.budget().used(), &mut trajectory);
    }
    record_due(opt.as_ref(), u64::MAX, &mut trajectory);

    let sizes = spec.algorithm.sizes(spec.n);
    let best = opt.best();
    let record = RunRecord {
        run_id: spec.run_id,
        algorithm: spec.algorithm.id().to_string(),
        fitness: spec.fitness.to_string(),
        n: spec.n,
        mu: sizes.mu,
        lambda: sizes.lambda,
        seed: spec.master_seed,
        evals_to_optimum: eval.budget().runtime(),
        best_fitness: best.fitness,
        correct_blocks: spec.fitness.correct_blocks(&best.genome),
    };
    Ok((record, trajectory))
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::config(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| Error::config(e.to_string()))
}

/// Runs every repetition at every problem size. Run ids number the runs in
/// order of `(n, repetition)` and double as RNG stream ids, so results do not
/// depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let jobs: Vec<(u64, usize)> = config
        .sizes
        .iter()
        .flat_map(|&n| std::iter::repeat_n(n, config.repetitions))
        .enumerate()
        .map(|(id, n)| (id as u64, n))
        .collect();
    let run = || -> Result<Vec<(RunRecord, Vec<TrajectoryPoint>)>> {
        jobs.par_iter()
            .map(|&(run_id, n)| {
                run_single(&RunSpec {
                    algorithm: &config.algorithm,
                    fitness: config.fitness,
                    n,
                    budget: config.budget,
                    stride: config.trajectory_stride,
                    run_id,
                    master_seed: config.master_seed,
                })
            })
            .collect()
    };
    let results = match thread_pool()? {
        Some(pool) => pool.install(run)?,
        None => run()?,
    };
    let mut out = ExperimentOutput::default();
    for (record, points) in results {
        out.records.push(record);
        out.trajectories.extend(points);
    }
    Ok(out)
}
