use rand::RngCore;

use super::clamp_to_margins;
use crate::bits::BitString;
use crate::budget::Evaluator;
use crate::error::{Error, Result};
use crate::oracles::{block_stats, IterationStats};
use crate::optimizer::Optimizer;
use crate::population::{sort_population, Individual, SortedPopulation};
use crate::rng::RngStream;

/// Probability `p` as a 32-bit acceptance threshold: a uniform `u32` below
/// it is a success.
#[inline]
fn threshold(p: f64) -> u64 {
    (p * 4_294_967_296.0).round() as u64
}

/// Univariate model: one marginal probability per position.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalModel {
    p: Vec<f64>,
    thresholds: Vec<u64>,
    t: u64,
}

impl MarginalModel {
    /// The initial model `(1/2, ..., 1/2)`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("problem size must be positive"));
        }
        Ok(Self::from_parts(vec![0.5; n], 0))
    }

    /// A model with the given marginals, all within `[1/n, 1 - 1/n]`.
    pub fn with_marginals(p: Vec<f64>) -> Result<Self> {
        let n = p.len();
        if n == 0 {
            return Err(Error::invalid("problem size must be positive"));
        }
        if let Some(i) = p.iter().position(|&v| !(v.is_finite() && clamp_to_margins(v, n) == v)) {
            return Err(Error::invalid(format!("marginal p_{} = {} outside the borders", i + 1, p[i])));
        }
        Ok(Self::from_parts(p, 0))
    }

    fn from_parts(p: Vec<f64>, t: u64) -> Self {
        let thresholds = p.iter().map(|&v| threshold(v)).collect();
        Self { p, thresholds, t }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn marginals(&self) -> &[f64] {
        &self.p
    }

    /// Number of updates applied since initialization.
    pub fn iteration(&self) -> u64 {
        self.t
    }

    /// One sample with independent Bernoulli genes.
    pub fn sample(&self, rng: &mut RngStream) -> BitString {
        let genes = self
            .thresholds
            .iter()
            .map(|&th| u8::from((rng.next_u32() as u64) < th))
            .collect();
        BitString::from_genes_unchecked(genes)
    }

    fn updated(&self, counts: &[usize], mu: usize) -> Result<Self> {
        let mut next = umda_update(counts, mu, self.n())?;
        next.t = self.t + 1;
        Ok(next)
    }
}

/// Clamped frequencies `max(1/n, min(1 - 1/n, X_i / mu))`.
pub fn umda_update(counts: &[usize], mu: usize, n: usize) -> Result<MarginalModel> {
    if mu == 0 {
        return Err(Error::invalid("mu must be at least 1"));
    }
    if n == 0 || counts.len() != n {
        return Err(Error::invalid(format!("{} counts for problem size {n}", counts.len())));
    }
    if let Some(i) = counts.iter().position(|&x| x > mu) {
        return Err(Error::invalid(format!("count X_{} = {} exceeds mu = {mu}", i + 1, counts[i])));
    }
    let p = counts.iter().map(|&x| clamp_to_margins(x as f64 / mu as f64, n)).collect();
    Ok(MarginalModel::from_parts(p, 0))
}

/// Outcome of one UMDA iteration.
#[derive(Clone, Debug)]
pub struct UmdaGeneration {
    pub model: MarginalModel,
    pub population: SortedPopulation,
    /// Present for width-2 DLB only.
    pub stats: Option<IterationStats>,
}

/// Samples `lambda` individuals from `model`, sorts them, and learns the next
/// model from the `mu` fittest.
pub fn umda_step(
    model: &MarginalModel,
    mu: usize,
    lambda: usize,
    eval: &mut Evaluator,
    rng: &mut RngStream,
) -> Result<UmdaGeneration> {
    if mu == 0 || lambda < mu {
        return Err(Error::config(format!("need 1 <= mu <= lambda, got mu={mu}, lambda={lambda}")));
    }
    if eval.n() != model.n() {
        return Err(Error::invalid("model and fitness disagree on the problem size"));
    }
    let pop: Vec<Individual> = (0..lambda).map(|_| eval.evaluate(model.sample(rng))).collect();
    let population = sort_population(pop, rng);
    let mut counts = vec![0usize; model.n()];
    for ind in population.fittest(mu) {
        for (c, &g) in counts.iter_mut().zip(ind.genome.genes()) {
            *c += g as usize;
        }
    }
    let stats = if eval.fitness_fn().is_dlb2() {
        Some(block_stats(&population, mu, eval.fitness_fn())?)
    } else {
        None
    };
    Ok(UmdaGeneration {
        model: model.updated(&counts, mu)?,
        population,
        stats,
    })
}

/// UMDA with margins as an [`Optimizer`].
#[derive(Clone, Debug)]
pub struct Umda {
    mu: usize,
    lambda: usize,
    model: MarginalModel,
    population: SortedPopulation,
    stats: Option<IterationStats>,
}

impl Umda {
    /// Starts from the uniform model and performs the first iteration.
    pub fn new(n: usize, mu: usize, lambda: usize, eval: &mut Evaluator, rng: &mut RngStream) -> Result<Self> {
        let generation = umda_step(&MarginalModel::uniform(n)?, mu, lambda, eval, rng)?;
        Ok(Self {
            mu,
            lambda,
            model: generation.model,
            population: generation.population,
            stats: generation.stats,
        })
    }

    pub fn model(&self) -> &MarginalModel {
        &self.model
    }

    pub fn population(&self) -> &SortedPopulation {
        &self.population
    }
}

impl Optimizer for Umda {
    fn step(&mut self, eval: &mut Evaluator, rng: &mut RngStream) {
        let generation =
            umda_step(&self.model, self.mu, self.lambda, eval, rng).expect("parameters validated on construction");
        self.model = generation.model;
        self.population = generation.population;
        self.stats = generation.stats;
    }

    fn best(&self) -> &Individual {
        self.population.best().expect("lambda >= 1")
    }

    fn block_stats(&self) -> Option<&IterationStats> {
        self.stats.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::FitnessFn;

    #[test]
    fn update_examples() {
        let m = umda_update(&[0, 10, 7], 10, 3).unwrap();
        assert!((m.marginals()[0] - 1.0 / 3.0).abs() < 1e-15);
        let m = umda_update(&vec![0; 100], 10, 100).unwrap();
        assert_eq!(m.marginals()[0], 0.01);
        let m = umda_update(&vec![10; 100], 10, 100).unwrap();
        assert_eq!(m.marginals()[0], 0.99);
        let m = umda_update(&vec![7; 100], 10, 100).unwrap();
        assert_eq!(m.marginals()[0], 0.7);
        assert!(umda_update(&[11, 0], 10, 2).is_err());
        assert!(umda_update(&[1], 10, 2).is_err());
    }

    #[test]
    fn model_validation() {
        let m = MarginalModel::uniform(4).unwrap();
        assert_eq!(m.marginals(), &[0.5; 4]);
        assert_eq!(m.iteration(), 0);
        assert!(MarginalModel::with_marginals(vec![0.25, 0.75, 0.5, 0.5]).is_ok());
        assert!(MarginalModel::with_marginals(vec![0.1, 0.5, 0.5, 0.5]).is_err());
        assert!(MarginalModel::with_marginals(vec![0.25, 0.75]).is_err());
        assert!(MarginalModel::with_marginals(vec![f64::NAN, 0.5]).is_err());
        assert!(MarginalModel::uniform(0).is_err());
    }

    #[test]
    fn upper_border_optimum_rate() {
        // every marginal at 1 - 1/n: the all-ones string has probability (1-1/n)^n
        let n = 100;
        let model = MarginalModel::with_marginals(vec![1.0 - 1.0 / n as f64; n]).unwrap();
        let mut rng = RngStream::new(3, 0);
        let trials = 40_000;
        let hits = (0..trials).filter(|_| model.sample(&mut rng).count_ones() == n).count();
        let p = (1.0 - 1.0 / n as f64).powi(n as i32);
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        let observed = hits as f64 / trials as f64;
        assert!((observed - p).abs() <= 4.0 * sd, "{observed} vs {p}");
        assert!((p - (-1.0f64).exp()).abs() < 0.01);
    }

    #[test]
    fn full_truncation_learns_population_frequencies() {
        let n = 10;
        let mut eval = Evaluator::unlimited(FitnessFn::DLB, n);
        let mut rng = RngStream::new(8, 0);
        let model = MarginalModel::uniform(n).unwrap();
        let g = umda_step(&model, 20, 20, &mut eval, &mut rng).unwrap();
        for i in 0..n {
            let ones = g.population.members().iter().filter(|ind| ind.genome.get(i)).count();
            let expected = clamp_to_margins(ones as f64 / 20.0, n);
            assert_eq!(g.model.marginals()[i], expected);
        }
        assert_eq!(g.model.iteration(), 1);
        assert_eq!(eval.budget().used(), 20);
    }

    #[test]
    fn first_block_count_mean() {
        let (mu, lambda, n) = (50, 200, 20);
        let model = MarginalModel::uniform(n).unwrap();
        let mut eval = Evaluator::unlimited(FitnessFn::DLB, n);
        let mut rng = RngStream::new(11, 0);
        let iters = 2_000;
        let total: usize = (0..iters)
            .map(|_| umda_step(&model, mu, lambda, &mut eval, &mut rng).unwrap().stats.unwrap().c(1))
            .sum();
        let mean = total as f64 / iters as f64;
        let sd = (lambda as f64 * 0.25 * 0.75 / iters as f64).sqrt();
        assert!((mean - 50.0).abs() <= 4.0 * sd, "{mean}");
    }

    #[test]
    fn marginals_stay_within_borders() {
        let n = 30;
        let mut eval = Evaluator::unlimited(FitnessFn::DLB, n);
        let mut rng = RngStream::new(4, 0);
        let mut umda = Umda::new(n, 5, 50, &mut eval, &mut rng).unwrap();
        for _ in 0..200 {
            umda.step(&mut eval, &mut rng);
            let lo = 1.0 / n as f64;
            assert!(umda.model().marginals().iter().all(|&p| p >= lo && p <= 1.0 - lo));
            let stats = umda.block_stats().unwrap();
            assert!(stats.violations().is_empty(), "{:?}", stats.violations());
        }
    }

    #[test]
    fn non_dlb_has_no_stats() {
        let mut eval = Evaluator::unlimited(FitnessFn::OneMax, 8);
        let mut rng = RngStream::new(1, 0);
        let umda = Umda::new(8, 2, 4, &mut eval, &mut rng).unwrap();
        assert!(umda.block_stats().is_none());
        assert!(Umda::new(8, 5, 4, &mut eval, &mut rng).is_err());
    }

    #[test]
    fn solves_one_max() {
        let n = 30;
        let mut eval = Evaluator::new(FitnessFn::OneMax, n, 200_000);
        let mut rng = RngStream::new(2, 0);
        let mut umda = Umda::new(n, 20, 60, &mut eval, &mut rng).unwrap();
        while !eval.finished() {
            umda.step(&mut eval, &mut rng);
        }
        assert!(eval.budget().runtime().is_some());
    }
}
