use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::runner::{RunRecord, TrajectoryPoint};
use crate::error::{Error, Result};

/// Five-number summary using linear interpolation between order statistics
/// (Hyndman–Fan type 7).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Type-7 quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("cannot summarize an empty sample"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("sample contains NaN"));
        }
        let mut s = values.to_vec();
        s.sort_by(f64::total_cmp);
        Ok(Self {
            min: s[0],
            q1: quantile_sorted(&s, 0.25),
            median: quantile_sorted(&s, 0.5),
            q3: quantile_sorted(&s, 0.75),
            max: s[s.len() - 1],
        })
    }
}

/// Sample mean with a normal-approximation 95% confidence interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanCi {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl MeanCi {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("cannot summarize an empty sample"));
        }
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let std_dev = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        let half = 1.959_963_984_540_054 * std_dev / k.sqrt();
        Ok(Self {
            count: values.len(),
            mean,
            std_dev,
            ci_low: mean - half,
            ci_high: mean + half,
        })
    }
}

/// `log₂(y) = slope · log₂(n) + intercept`, fitted by least squares.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Fits a power law to `(n, mean runtime)` pairs; needs three distinct `n`.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.iter().any(|&(n, y)| !(n > 0.0 && y > 0.0 && n.is_finite() && y.is_finite())) {
        return Err(Error::invalid("scaling fit needs positive finite values"));
    }
    let mut distinct: Vec<f64> = points.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::invalid(format!("scaling fit needs 3 distinct sizes, got {}", distinct.len())));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(ScalingFit {
        slope,
        intercept: my - slope * mx,
        points: points.len(),
    })
}

/// Quantiles of the fittest individual's correct blocks at one time point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryBucket {
    pub t: u64,
    pub correct_blocks: Quantiles,
}

/// Runs sharing algorithm, fitness, and population sizes at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub algorithm: String,
    pub fitness: String,
    pub n: usize,
    pub mu: usize,
    pub lambda: usize,
    pub runs: usize,
    pub successes: usize,
    /// Over successful runs only.
    pub runtime: Option<Quantiles>,
    pub runtime_mean: Option<MeanCi>,
    pub correct_blocks: Quantiles,
    pub best_fitness: Quantiles,
    pub trajectory: Vec<TrajectoryBucket>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub groups: Vec<GroupSummary>,
    /// Mean runtime against `n` per algorithm and `λ`, over groups where
    /// every run succeeded, when at least three sizes qualify.
    pub scaling: Vec<ScalingEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingEntry {
    pub algorithm: String,
    pub fitness: String,
    pub fit: ScalingFit,
}

type GroupKey = (String, String, usize, usize, usize);

/// Groups records by `(algorithm, fitness, n, μ, λ)` in ascending key order
/// and summarizes each group; trajectories are matched by run id.
pub fn summarize(records: &[RunRecord], trajectories: &[TrajectoryPoint]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::invalid("no run records to summarize"));
    }
    let mut groups: BTreeMap<GroupKey, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.algorithm.clone(), r.fitness.clone(), r.n, r.mu, r.lambda))
            .or_default()
            .push(r);
    }
    let mut by_run: BTreeMap<u64, Vec<&TrajectoryPoint>> = BTreeMap::new();
    for p in trajectories {
        by_run.entry(p.run_id).or_default().push(p);
    }

    let mut out = Vec::with_capacity(groups.len());
    for ((algorithm, fitness, n, mu, lambda), runs) in groups {
        let runtimes: Vec<f64> = runs.iter().filter_map(|r| r.evals_to_optimum).map(|t| t as f64).collect();
        let blocks: Vec<f64> = runs.iter().map(|r| r.correct_blocks as f64).collect();
        let fitness_values: Vec<f64> = runs.iter().map(|r| r.best_fitness as f64).collect();
        let mut buckets: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
        for r in &runs {
            for p in by_run.get(&r.run_id).into_iter().flatten() {
                buckets.entry(p.t).or_default().push(p.correct_blocks as f64);
            }
        }
        let trajectory = buckets
            .into_iter()
            .map(|(t, v)| {
                Ok(TrajectoryBucket {
                    t,
                    correct_blocks: Quantiles::of(&v)?,
                })
            })
            .collect::<Result<_>>()?;
        out.push(GroupSummary {
            algorithm,
            fitness,
            n,
            mu,
            lambda,
            runs: runs.len(),
            successes: runtimes.len(),
            runtime: (!runtimes.is_empty()).then(|| Quantiles::of(&runtimes)).transpose()?,
            runtime_mean: (!runtimes.is_empty()).then(|| MeanCi::of(&runtimes)).transpose()?,
            correct_blocks: Quantiles::of(&blocks)?,
            best_fitness: Quantiles::of(&fitness_values)?,
            trajectory,
        });
    }

    let mut series: BTreeMap<(String, String), Vec<(f64, f64)>> = BTreeMap::new();
    for g in &out {
        if let (true, Some(m)) = (g.successes == g.runs, &g.runtime_mean) {
            series
                .entry((g.algorithm.clone(), g.fitness.clone()))
                .or_default()
                .push((g.n as f64, m.mean));
        }
    }
    let scaling = series
        .into_iter()
        .filter_map(|((algorithm, fitness), pts)| {
            fit_scaling(&pts).ok().map(|fit| ScalingEntry { algorithm, fitness, fit })
        })
        .collect();
    Ok(Summary { groups: out, scaling })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_number_examples() {
        let q = Quantiles::of(&[5.0, 1.0, 3.0, 2.0, 4.0]).unwrap();
        assert_eq!((q.min, q.q1, q.median, q.q3, q.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        let q = Quantiles::of(&[7.0]).unwrap();
        assert_eq!((q.min, q.q1, q.median, q.q3, q.max), (7.0, 7.0, 7.0, 7.0, 7.0));
        let q = Quantiles::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((q.q1, q.median, q.q3), (1.75, 2.5, 3.25));
        assert!(Quantiles::of(&[]).is_err());
        assert!(Quantiles::of(&[f64::NAN]).is_err());
    }

    #[test]
    fn mean_ci() {
        let m = MeanCi::of(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(m.mean, 3.0);
        assert!((m.std_dev - 2.5f64.sqrt()).abs() < 1e-12);
        assert!((m.ci_high - m.mean - 1.959_963_984_540_054 * (0.5f64).sqrt()).abs() < 1e-12);
        assert!(MeanCi::of(&[]).is_err());
        assert_eq!(MeanCi::of(&[4.0]).unwrap().ci_low, 4.0);
    }

    #[test]
    fn scaling_examples() {
        let cubic: Vec<(f64, f64)> = [10.0, 20.0, 35.0, 50.0].iter().map(|&n: &f64| (n, n.powi(3))).collect();
        let f = fit_scaling(&cubic).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-9);
        assert!(f.intercept.abs() < 1e-9);
        let linear: Vec<(f64, f64)> = [3.0, 9.0, 27.0].iter().map(|&n| (n, 5.0 * n)).collect();
        let f = fit_scaling(&linear).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert!((f.intercept - 5f64.log2()).abs() < 1e-12);
        assert!(fit_scaling(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_scaling(&[(1.0, 1.0), (2.0, 2.0), (2.0, 3.0)]).is_err());
        assert!(fit_scaling(&[(1.0, 1.0), (2.0, 0.0), (3.0, 3.0)]).is_err());
    }

    fn record(run_id: u64, n: usize, t: Option<u64>, blocks: u64) -> RunRecord {
        RunRecord {
            run_id,
            algorithm: "umda".into(),
            fitness: "dlb".into(),
            n,
            mu: 2,
            lambda: 4,
            seed: 0,
            evals_to_optimum: t,
            best_fitness: 2 * blocks,
            correct_blocks: blocks,
        }
    }

    #[test]
    fn grouping_and_scaling() {
        let recs = vec![
            record(0, 10, Some(100), 5),
            record(1, 10, Some(300), 5),
            record(2, 20, Some(800), 10),
            record(3, 40, Some(6400), 20),
            record(4, 80, None, 7),
        ];
        let traj = vec![
            TrajectoryPoint { run_id: 0, t: 50, correct_blocks: 1, best_fitness: 3, z: None, z_star: None },
            TrajectoryPoint { run_id: 1, t: 50, correct_blocks: 3, best_fitness: 7, z: None, z_star: None },
        ];
        let s = summarize(&recs, &traj).unwrap();
        assert_eq!(s.groups.len(), 4);
        let g = &s.groups[0];
        assert_eq!((g.n, g.runs, g.successes), (10, 2, 2));
        assert_eq!(g.runtime_mean.unwrap().mean, 200.0);
        assert_eq!(g.trajectory[0].correct_blocks.median, 2.0);
        let last = &s.groups[3];
        assert_eq!((last.successes, last.runtime), (0, None));
        assert_eq!(s.scaling.len(), 1);
        assert_eq!(s.scaling[0].fit.points, 3);
        assert!(summarize(&[], &[]).is_err());
    }
}
