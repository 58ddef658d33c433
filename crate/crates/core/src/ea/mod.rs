//! Mutation-based evolutionary algorithms and a generic genetic algorithm.

mod ga;
mod operators;
mod selection;

use crate::bits::BitString;
use crate::budget::Evaluator;
use crate::error::{Error, Result};
use crate::optimizer::Optimizer;
use crate::population::{sort_population, Individual, SortedPopulation};
use crate::rng::RngStream;

pub use ga::{Ga, GaParams};
pub use operators::{mutate_bitwise, Crossover};
pub use selection::{Selection, Selector};

/// The `(1+λ)` EA: `λ` mutants of a single incumbent, elitist replacement.
#[derive(Clone, Debug)]
pub struct OnePlusLambda {
    lambda: usize,
    rate: f64,
    incumbent: Individual,
}

impl OnePlusLambda {
    pub fn new(n: usize, lambda: usize, rate: f64, eval: &mut Evaluator, rng: &mut RngStream) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::config("lambda must be at least 1"));
        }
        let incumbent = eval.evaluate(BitString::random(n, rng)?);
        Ok(Self::from_incumbent(incumbent, lambda, rate))
    }

    pub fn from_incumbent(incumbent: Individual, lambda: usize, rate: f64) -> Self {
        Self {
            lambda,
            rate,
            incumbent,
        }
    }

    pub fn incumbent(&self) -> &Individual {
        &self.incumbent
    }
}

impl Optimizer for OnePlusLambda {
    /// The best mutant replaces the incumbent unless it is strictly worse;
    /// among equally fit mutants one is chosen uniformly.
    fn step(&mut self, eval: &mut Evaluator, rng: &mut RngStream) {
        let mutants: Vec<Individual> = (0..self.lambda)
            .map(|_| eval.evaluate(mutate_bitwise(&self.incumbent.genome, self.rate, rng)))
            .collect();
        let best = sort_population(mutants, rng).into_members().swap_remove(0);
        if best.fitness >= self.incumbent.fitness {
            self.incumbent = best;
        }
    }

    fn best(&self) -> &Individual {
        &self.incumbent
    }
}

/// The `(μ+1)` EA: one mutant of a uniformly chosen parent per generation;
/// one of the worst `μ+1` individuals, chosen uniformly, is removed.
#[derive(Clone, Debug)]
pub struct MuPlusOne {
    rate: f64,
    pop: Vec<Individual>,
}

impl MuPlusOne {
    pub fn new(n: usize, mu: usize, rate: f64, eval: &mut Evaluator, rng: &mut RngStream) -> Result<Self> {
        if mu == 0 {
            return Err(Error::config("mu must be at least 1"));
        }
        let pop = (0..mu)
            .map(|_| Ok(eval.evaluate(BitString::random(n, rng)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rate, pop })
    }

    pub fn from_population(pop: Vec<Individual>, rate: f64) -> Self {
        assert!(!pop.is_empty(), "population must not be empty");
        Self { rate, pop }
    }

    pub fn population(&self) -> &[Individual] {
        &self.pop
    }
}

impl Optimizer for MuPlusOne {
    fn step(&mut self, eval: &mut Evaluator, rng: &mut RngStream) {
        let parent = &self.pop[rng.index(self.pop.len())];
        let child = eval.evaluate(mutate_bitwise(&parent.genome, self.rate, rng));
        self.pop.push(child);
        let worst = self.pop.iter().map(|i| i.fitness).min().expect("non-empty");
        let candidates: Vec<usize> = (0..self.pop.len()).filter(|&i| self.pop[i].fitness == worst).collect();
        let victim = candidates[rng.index(candidates.len())];
        self.pop.remove(victim);
    }

    fn best(&self) -> &Individual {
        let top = self.pop.iter().map(|i| i.fitness).max().expect("non-empty");
        self.pop.iter().find(|i| i.fitness == top).expect("non-empty")
    }
}

/// The non-elitist `(μ,λ)` EA. The population always holds the `μ` fittest
/// of the latest `λ` offspring, fittest first.
#[derive(Clone, Debug)]
pub struct MuCommaLambda {
    mu: usize,
    lambda: usize,
    rate: f64,
    pop: Vec<Individual>,
}

impl MuCommaLambda {
    pub fn new(n: usize, mu: usize, lambda: usize, rate: f64, eval: &mut Evaluator, rng: &mut RngStream) -> Result<Self> {
        if mu == 0 || lambda < mu {
            return Err(Error::config(format!("need 1 <= mu <= lambda, got mu={mu}, lambda={lambda}")));
        }
        let pop = (0..mu)
            .map(|_| Ok(eval.evaluate(BitString::random(n, rng)?)))
            .collect::<Result<Vec<_>>>()?;
        let pop = sort_population(pop, rng).into_members();
        Ok(Self { mu, lambda, rate, pop })
    }

    pub fn from_population(pop: Vec<Individual>, lambda: usize, rate: f64) -> Self {
        assert!(!pop.is_empty() && lambda >= pop.len());
        Self {
            mu: pop.len(),
            lambda,
            rate,
            pop,
        }
    }

    pub fn population(&self) -> &[Individual] {
        &self.pop
    }

    /// Samples and sorts `λ` offspring, each a mutant of a uniform parent.
    pub fn offspring(&self, eval: &mut Evaluator, rng: &mut RngStream) -> SortedPopulation {
        let offspring: Vec<Individual> = (0..self.lambda)
            .map(|_| {
                let parent = &self.pop[rng.index(self.mu)];
                eval.evaluate(mutate_bitwise(&parent.genome, self.rate, rng))
            })
            .collect();
        sort_population(offspring, rng)
    }

    /// Comma replacement: the `μ` fittest offspring become the population.
    pub fn replace(&mut self, offspring: SortedPopulation) {
        let mut next = offspring.into_members();
        next.truncate(self.mu);
        self.pop = next;
    }
}

impl Optimizer for MuCommaLambda {
    fn step(&mut self, eval: &mut Evaluator, rng: &mut RngStream) {
        let offspring = self.offspring(eval, rng);
        self.replace(offspring);
    }

    fn best(&self) -> &Individual {
        &self.pop[0]
    }
}
