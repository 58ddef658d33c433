//! Monte Carlo checks of the block-count and marginal-drift laws.
//!
//! Trials run in fixed-size chunks, each with its own stream, so reports do
//! not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use super::bounds::{theta, trap_tail_bound, z0_expectation_bound, level_based_bound};
use super::stats::block_stats;
use crate::budget::Evaluator;
use crate::bits::BitString;
use crate::eda::{clamp_to_margins, MarginalModel};
use crate::error::{Error, Result};
use crate::fitness::FitnessFn;
use crate::population::{sort_population, Individual};
use crate::rng::{binomial_second_moment, sample_binomial, RngStream};

const CHUNK: usize = 256;
const Z_LIMIT: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub z_score: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Compares a Monte Carlo mean against its exact expectation.
    pub fn mean(name: impl Into<String>, expected: f64, m: &Moments) -> Self {
        let observed = m.mean();
        let se = m.standard_error();
        let diff = observed - expected;
        let z = if se > 0.0 {
            diff / se
        } else if diff.abs() <= 1e-12 * expected.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        };
        Self {
            name: name.into(),
            expected,
            observed,
            z_score: Some(z),
            pass: z.abs() <= Z_LIMIT,
        }
    }

    /// Passes when `observed >= expected`.
    pub fn at_least(name: impl Into<String>, expected: f64, observed: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            observed,
            z_score: None,
            pass: observed >= expected,
        }
    }

    /// Passes when `observed <= expected`.
    pub fn at_most(name: impl Into<String>, expected: f64, observed: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            observed,
            z_score: None,
            pass: observed <= expected,
        }
    }

    /// Passes when the values agree to within `tol`.
    pub fn close(name: impl Into<String>, expected: f64, observed: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            observed,
            z_score: None,
            pass: (observed - expected).abs() <= tol,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

/// Sufficient statistics of a sample: count, sum, and sum of squares.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    count: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn standard_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

fn merge_all(parts: Vec<Vec<Moments>>, len: usize) -> Vec<Moments> {
    let mut out = vec![Moments::default(); len];
    for part in parts {
        for (o, p) in out.iter_mut().zip(&part) {
            o.merge(p);
        }
    }
    out
}

/// Runs `trials` trials in chunks; each chunk gets a stream derived from
/// `seed` and folds its trials into `len` accumulators.
fn chunked<F>(trials: usize, seed: u64, len: usize, f: F) -> Vec<Moments>
where
    F: Fn(&mut RngStream, &mut [Moments]) + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<Vec<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(seed, c as u64);
            let mut acc = vec![Moments::default(); len];
            for _ in 0..CHUNK.min(trials - c * CHUNK) {
                f(&mut rng, &mut acc);
            }
            acc
        })
        .collect();
    merge_all(parts, len)
}

/// Samples one population of `lambda` individuals from `model` and checks
/// per-block means of `C`, `D`, and `E` against their closed forms
/// `E[C_i] = λ Π_{k≤i} p_{2k-1} p_{2k}`,
/// `E[D_i] = λ Π_{k<i} p_{2k-1} p_{2k} (1 - p_{2i-1})(1 - p_{2i})`,
/// `E[E_i] = λ Π_{k<i} p_{2k-1} p_{2k} p_{2i-1}(1 - p_{2i})`.
///
/// It also checks that, given `Z`, the selected counts `Y_j` for
/// `j ≥ Z + 2` and `X_i` for `i ≥ 2Z + 3` follow `Bin(μ, ·)` in mean and
/// variance; residuals are summed per trial so the blocks of one population
/// need not be independent.
pub fn verify_block_distributions(
    model: &MarginalModel,
    mu: usize,
    lambda: usize,
    trials: usize,
    rng: &mut RngStream,
) -> Result<Report> {
    let n = model.n();
    if !n.is_multiple_of(2) {
        return Err(Error::invalid("block statistics need an even problem size"));
    }
    if mu == 0 || lambda < mu {
        return Err(Error::invalid(format!("need 1 <= mu <= lambda, got mu={mu}, lambda={lambda}")));
    }
    if trials < 2 {
        return Err(Error::invalid("at least two trials are needed"));
    }
    let m = n / 2;
    let p = model.marginals();
    let q: Vec<f64> = (0..m).map(|j| p[2 * j] * p[2 * j + 1]).collect();
    // layout: C_1..m, D_1..m, E_1..m, Y mean, Y var, X mean, X var
    let len = 3 * m + 4;
    let seed = rand::RngCore::next_u64(rng);
    let acc = chunked(trials, seed, len, |rng, acc| {
        let mut eval = Evaluator::unlimited(FitnessFn::DLB, n);
        let pop: Vec<Individual> = (0..lambda).map(|_| eval.evaluate(model.sample(rng))).collect();
        let sorted = sort_population(pop, rng);
        let s = block_stats(&sorted, mu, FitnessFn::DLB).expect("validated inputs");
        for i in 1..=m {
            acc[i - 1].push(s.c(i) as f64);
            acc[m + i - 1].push(s.d(i) as f64);
            acc[2 * m + i - 1].push(s.e(i) as f64);
        }
        let mu_f = mu as f64;
        let (mut ym, mut yv) = (0.0, 0.0);
        for j in (s.z + 2)..=m {
            let r = s.y(j) as f64 - mu_f * q[j - 1];
            ym += r;
            yv += r * r - mu_f * q[j - 1] * (1.0 - q[j - 1]);
        }
        let (mut xm, mut xv) = (0.0, 0.0);
        for i in (2 * s.z + 3)..=n {
            let r = s.x(i) as f64 - mu_f * p[i - 1];
            xm += r;
            xv += r * r - mu_f * p[i - 1] * (1.0 - p[i - 1]);
        }
        acc[3 * m].push(ym);
        acc[3 * m + 1].push(yv);
        acc[3 * m + 2].push(xm);
        acc[3 * m + 3].push(xv);
    });

    let lam = lambda as f64;
    let mut report = Report::default();
    let mut prefix = 1.0;
    for i in 1..=m {
        let (a, b) = (p[2 * i - 2], p[2 * i - 1]);
        report.checks.push(Check::mean(format!("C_{i}"), lam * prefix * a * b, &acc[i - 1]));
        report.checks.push(Check::mean(format!("D_{i}"), lam * prefix * (1.0 - a) * (1.0 - b), &acc[m + i - 1]));
        report.checks.push(Check::mean(format!("E_{i}"), lam * prefix * a * (1.0 - b), &acc[2 * m + i - 1]));
        prefix *= a * b;
    }
    report.checks.push(Check::mean("Y_j mean residual (j >= Z+2)", 0.0, &acc[3 * m]));
    report.checks.push(Check::mean("Y_j variance residual (j >= Z+2)", 0.0, &acc[3 * m + 1]));
    report.checks.push(Check::mean("X_i mean residual (i >= 2Z+3)", 0.0, &acc[3 * m + 2]));
    report.checks.push(Check::mean("X_i variance residual (i >= 2Z+3)", 0.0, &acc[3 * m + 3]));
    Ok(report)
}

/// Simulates one marginal outside the selected prefix:
/// `X_t ~ Bin(μ, p_t)`, `p_0 = 1/2`, `p_{t+1} = clamp(X_t / μ)` with
/// borders `[1/n, 1 - 1/n]`.
///
/// For each `t` in `record_at` it checks `E[p_t] = 1/2` and
/// `Var[X_t] ≥ 0.9 (μ²/4)(1 - (1 - 1/μ)^t)`; it also checks
/// `Var[X_0] = μ/4`.
pub fn verify_untouched_marginal_dynamics(
    mu: usize,
    n: usize,
    record_at: &[usize],
    trials: usize,
    rng: &mut RngStream,
) -> Result<Report> {
    if mu == 0 || n < 2 {
        return Err(Error::invalid("need mu >= 1 and n >= 2"));
    }
    if trials < 2 {
        return Err(Error::invalid("at least two trials are needed"));
    }
    let mut times: Vec<usize> = record_at.to_vec();
    times.push(0);
    times.sort_unstable();
    times.dedup();
    let horizon = *times.last().expect("non-empty");
    // layout per recorded time: p_t, X_t
    let len = 2 * times.len();
    let seed = rand::RngCore::next_u64(rng);
    let acc = chunked(trials, seed, len, |rng, acc| {
        let mut p = 0.5;
        let mut slot = 0;
        for t in 0..=horizon {
            let x = sample_binomial(mu as u64, p, rng).expect("clamped probability");
            if times[slot] == t {
                acc[2 * slot].push(p);
                acc[2 * slot + 1].push(x as f64);
                slot += 1;
            }
            p = clamp_to_margins(x as f64 / mu as f64, n);
        }
    });

    let mu_f = mu as f64;
    let mut report = Report::default();
    for (k, &t) in times.iter().enumerate() {
        report.checks.push(Check::mean(format!("E[p_{t}]"), 0.5, &acc[2 * k]));
        let var = acc[2 * k + 1].variance();
        if t == 0 {
            // sample variance of Bin(μ, 1/2): standard error ≈ σ² sqrt(2/(N-1))
            let exact = mu_f / 4.0;
            let se = exact * (2.0 / (trials as f64 - 1.0)).sqrt();
            let z = (var - exact) / se;
            report.checks.push(Check {
                name: "Var[X_0]".into(),
                expected: exact,
                observed: var,
                z_score: Some(z),
                pass: z.abs() <= Z_LIMIT,
            });
        } else {
            let bound = 0.9 * mu_f * mu_f / 4.0 * (1.0 - (1.0 - 1.0 / mu_f).powi(t as i32));
            report.checks.push(Check::at_least(format!("Var[X_{t}]"), bound, var));
        }
    }
    Ok(report)
}

/// `E[X²]` of `Bin(trials, p)` against `np(p(n-1)+1)`.
pub fn verify_binomial_second_moment(trials: u64, p: f64, draws: usize, rng: &mut RngStream) -> Result<Check> {
    sample_binomial(trials, p, rng)?;
    let seed = rand::RngCore::next_u64(rng);
    let acc = chunked(draws, seed, 1, |rng, acc| {
        let x = sample_binomial(trials, p, rng).expect("validated probability") as f64;
        acc[0].push(x * x);
    });
    Ok(Check::mean(
        format!("E[X^2] for Bin({trials}, {p})"),
        binomial_second_moment(trials, p),
        &acc[0],
    ))
}

/// Mean leading-11 count of the fittest of `lambda` uniform strings against
/// `(1 + ln λ) / ln 4`.
pub fn verify_z0_expectation(lambda: usize, n: usize, trials: usize, rng: &mut RngStream) -> Result<Check> {
    let bound = z0_expectation_bound(lambda)?;
    FitnessFn::DLB.validate(n)?;
    let seed = rand::RngCore::next_u64(rng);
    let acc = chunked(trials, seed, 1, |rng, acc| {
        let best = (0..lambda)
            .map(|_| {
                let g = BitString::random(n, rng).expect("n >= 2");
                g.genes().chunks_exact(2).take_while(|b| b[0] == 1 && b[1] == 1).count()
            })
            .max()
            .unwrap_or(0);
        acc[0].push(best as f64);
    });
    Ok(Check::at_most(format!("E[Z*_0] at lambda={lambda}"), bound, acc[0].mean()))
}

/// Spot checks of the closed-form calculators.
pub fn verify_formulas() -> Result<Report> {
    let mut r = Report::default();
    r.checks.push(Check::close("theta(200, 1000, 0.1)", 36.0, theta(200, 1000, 0.1), 1e-9));
    for c in [0.05, 0.1, 0.2365] {
        r.checks.push(Check::close(format!("trap_tail_bound({c}, 0.5)"), 2.0 * c, trap_tail_bound(c, 0.5)?, 1e-12));
    }
    r.checks.push(Check::close("z0_expectation_bound(1000)", 5.705, z0_expectation_bound(1000)?, 0.005));
    let lb = level_based_bound(&[0.5], 0.5, 1000, 0.5)?;
    r.checks.push(Check::close("level_based_bound([0.5], 0.5, 1000)", 79_073.065_620, lb.expected_runtime, 1e-5));
    Ok(r)
}

/// Every verifier at its reference parameters.
pub fn run_all(trials: usize, seed: u64) -> Result<Report> {
    let mut rng = RngStream::new(seed, 0);
    let mut report = Report::default();

    let uniform = MarginalModel::uniform(20)?;
    report.extend(prefixed("uniform model", verify_block_distributions(&uniform, 50, 200, trials, &mut rng)?));

    let n = 20;
    let hi = 1.0 - 1.0 / n as f64;
    let mut p = vec![0.5; n];
    p[0] = hi;
    p[1] = hi;
    let border = MarginalModel::with_marginals(p)?;
    let border_report = verify_block_distributions(&border, 50, 200, trials, &mut rng)?;
    report.checks.extend(
        border_report
            .checks
            .into_iter()
            .filter(|c| c.name == "E_1")
            .map(|mut c| {
                c.name = format!("border model: {}", c.name);
                c
            }),
    );

    report.extend(prefixed(
        "drift",
        verify_untouched_marginal_dynamics(100, 10_000, &[10, 100, 292], trials.max(2), &mut rng)?,
    ));
    report.checks.push(verify_binomial_second_moment(10, 0.5, trials * 100, &mut rng)?);
    report.checks.push(verify_z0_expectation(1000, 100, trials, &mut rng)?);
    report.extend(verify_formulas()?);
    Ok(report)
}

fn prefixed(prefix: &str, mut report: Report) -> Report {
    for c in &mut report.checks {
        c.name = format!("{prefix}: {}", c.name);
    }
    report
}
