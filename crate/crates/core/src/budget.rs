use crate::bits::BitString;
use crate::fitness::FitnessFn;
use crate::population::Individual;

/// Evaluation accounting for one run.
///
/// Every sampled genome costs one evaluation. `hit_optimum_at` is the
/// one-based index of the first evaluation that returned an optimal genome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationBudget {
    used: u64,
    limit: u64,
    hit_optimum_at: Option<u64>,
}

impl EvaluationBudget {
    pub fn new(limit: u64) -> Self {
        Self {
            used: 0,
            limit,
            hit_optimum_at: None,
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn hit_optimum_at(&self) -> Option<u64> {
        self.hit_optimum_at
    }

    /// Charges one evaluation.
    pub fn charge(&mut self, optimal: bool) {
        self.used += 1;
        if optimal && self.hit_optimum_at.is_none() {
            self.hit_optimum_at = Some(self.used);
        }
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }

    /// The run should start no further generation.
    pub fn finished(&self) -> bool {
        self.hit_optimum_at.is_some() || self.exhausted()
    }

    /// The optimum hit, if it happened within the limit.
    pub fn runtime(&self) -> Option<u64> {
        self.hit_optimum_at.filter(|&t| t <= self.limit)
    }
}

/// A fitness function paired with its budget; the only way algorithms
/// obtain fitness values.
#[derive(Clone, Debug)]
pub struct Evaluator {
    fitness: FitnessFn,
    n: usize,
    optimum: u64,
    budget: EvaluationBudget,
}

impl Evaluator {
    pub fn new(fitness: FitnessFn, n: usize, limit: u64) -> Self {
        Self {
            fitness,
            n,
            optimum: fitness.optimum(n),
            budget: EvaluationBudget::new(limit),
        }
    }

    /// An evaluator that never runs out; used by unit tests and oracles.
    pub fn unlimited(fitness: FitnessFn, n: usize) -> Self {
        Self::new(fitness, n, u64::MAX)
    }

    pub fn fitness_fn(&self) -> FitnessFn {
        self.fitness
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn optimum(&self) -> u64 {
        self.optimum
    }

    pub fn budget(&self) -> &EvaluationBudget {
        &self.budget
    }

    pub fn evaluate(&mut self, genome: BitString) -> Individual {
        let fitness = self.fitness.evaluate_unchecked(&genome);
        self.budget.charge(fitness == self.optimum);
        Individual::new(genome, fitness)
    }

    pub fn finished(&self) -> bool {
        self.budget.finished()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hit_is_kept() {
        let mut b = EvaluationBudget::new(10);
        b.charge(false);
        b.charge(true);
        b.charge(true);
        assert_eq!(b.used(), 3);
        assert_eq!(b.hit_optimum_at(), Some(2));
        assert!(b.finished());
    }

    #[test]
    fn hit_past_the_limit_is_not_a_runtime() {
        let mut b = EvaluationBudget::new(2);
        b.charge(false);
        b.charge(false);
        assert!(b.exhausted());
        b.charge(true);
        assert_eq!(b.hit_optimum_at(), Some(3));
        assert_eq!(b.runtime(), None);
    }

    #[test]
    fn evaluator_counts_every_genome() {
        let mut ev = Evaluator::new(FitnessFn::OneMax, 4, 100);
        ev.evaluate("0000".parse().unwrap());
        let opt = ev.evaluate("1111".parse().unwrap());
        assert_eq!(opt.fitness, 4);
        assert_eq!(ev.budget().used(), 2);
        assert_eq!(ev.budget().runtime(), Some(2));
    }
}
