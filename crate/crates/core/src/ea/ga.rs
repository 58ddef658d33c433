use crate::bits::BitString;
use crate::budget::Evaluator;
use crate::error::{Error, Result};
use crate::optimizer::Optimizer;
use crate::population::{sort_population, Individual, SortedPopulation};
use crate::rng::RngStream;

use super::{mutate_bitwise, Crossover, Selection, Selector};

/// Non-elitist genetic algorithm.
///
/// Every generation produces `λ` offspring independently: with probability
/// `p_c` two parents are selected and recombined, otherwise one parent is
/// selected and copied; the result is then mutated bitwise. The offspring
/// replace the whole population.
#[derive(Clone, Debug)]
pub struct Ga {
    rate: f64,
    crossover_rate: f64,
    crossover: Crossover,
    selector: Selector,
    pop: SortedPopulation,
}

pub struct GaParams {
    pub mu: usize,
    pub lambda: usize,
    pub rate: f64,
    pub crossover_rate: f64,
    pub crossover: Crossover,
    pub selection: Selection,
}

impl Ga {
    pub fn new(n: usize, params: &GaParams, eval: &mut Evaluator, rng: &mut RngStream) -> Result<Self> {
        if params.lambda == 0 {
            return Err(Error::config("lambda must be at least 1"));
        }
        let pop = (0..params.lambda)
            .map(|_| Ok(eval.evaluate(BitString::random(n, rng)?)))
            .collect::<Result<Vec<_>>>()?;
        let pop = sort_population(pop, rng);
        Self::from_population(pop, params)
    }

    pub fn from_population(pop: SortedPopulation, params: &GaParams) -> Result<Self> {
        if !(0.0..=1.0).contains(&params.crossover_rate) {
            return Err(Error::config(format!("crossover rate {} outside [0, 1]", params.crossover_rate)));
        }
        if pop.len() != params.lambda {
            return Err(Error::invalid("population size must equal lambda"));
        }
        Ok(Self {
            rate: params.rate,
            crossover_rate: params.crossover_rate,
            crossover: params.crossover,
            selector: Selector::new(params.selection, params.lambda, params.mu),
            pop,
        })
    }

    pub fn population(&self) -> &SortedPopulation {
        &self.pop
    }

    fn select(&self, rng: &mut RngStream) -> &Individual {
        &self.pop.members()[self.selector.pick(rng)]
    }
}

impl Optimizer for Ga {
    fn step(&mut self, eval: &mut Evaluator, rng: &mut RngStream) {
        let lambda = self.pop.len();
        let offspring: Vec<Individual> = (0..lambda)
            .map(|_| {
                let child = if self.crossover_rate > 0.0 && rng.bernoulli(self.crossover_rate) {
                    let x = &self.select(rng).genome;
                    let y = &self.select(rng).genome;
                    self.crossover.apply(x, y, rng)
                } else {
                    self.select(rng).genome.clone()
                };
                eval.evaluate(mutate_bitwise(&child, self.rate, rng))
            })
            .collect();
        self.pop = sort_population(offspring, rng);
    }

    fn best(&self) -> &Individual {
        &self.pop.members()[0]
    }
}
