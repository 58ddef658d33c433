use rand::RngCore;

use crate::bits::BitString;
use crate::rng::RngStream;

pub type Fitness = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub genome: BitString,
    pub fitness: Fitness,
}

impl Individual {
    pub fn new(genome: BitString, fitness: Fitness) -> Self {
        Self { genome, fitness }
    }
}

/// Individuals in non-increasing fitness order, equal fitnesses in uniformly
/// random order.
#[derive(Clone, Debug, Default)]
pub struct SortedPopulation {
    members: Vec<Individual>,
    tiebreak_draws: usize,
}

impl SortedPopulation {
    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The first `mu` members, or all of them if there are fewer.
    pub fn fittest(&self, mu: usize) -> &[Individual] {
        &self.members[..mu.min(self.members.len())]
    }

    pub fn best(&self) -> Option<&Individual> {
        self.members.first()
    }

    /// Number of 64-bit words drawn to break ties.
    pub fn tiebreak_draws(&self) -> usize {
        self.tiebreak_draws
    }
}

/// Sorts by fitness, highest first, breaking ties uniformly at random.
///
/// One 64-bit key is drawn per individual in input order, then the population
/// is stably sorted by `(fitness desc, key asc)`. This consumes exactly
/// `pop.len()` words from `rng` regardless of the fitness values.
pub fn sort_population(pop: Vec<Individual>, rng: &mut RngStream) -> SortedPopulation {
    let draws = pop.len();
    let mut keyed: Vec<(u64, Individual)> = pop.into_iter().map(|ind| (rng.next_u64(), ind)).collect();
    keyed.sort_by(|(ka, a), (kb, b)| b.fitness.cmp(&a.fitness).then(ka.cmp(kb)));
    SortedPopulation {
        members: keyed.into_iter().map(|(_, ind)| ind).collect(),
        tiebreak_draws: draws,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ind(tag: usize, fitness: Fitness) -> Individual {
        // tag encoded in the genome so equal-fitness members stay distinguishable
        let genome = BitString::from_bools((0..8).map(|b| (tag >> b) & 1 == 1));
        Individual::new(genome, fitness)
    }

    #[test]
    fn strict_order() {
        let mut rng = RngStream::new(0, 0);
        let sorted = sort_population(vec![ind(0, 1), ind(1, 3), ind(2, 2)], &mut rng);
        let fits: Vec<_> = sorted.members().iter().map(|i| i.fitness).collect();
        assert_eq!(fits, vec![3, 2, 1]);
        assert_eq!(sorted.tiebreak_draws(), 3);
    }

    #[test]
    fn empty_input() {
        let mut rng = RngStream::new(0, 0);
        let sorted = sort_population(Vec::new(), &mut rng);
        assert!(sorted.is_empty());
        assert!(sorted.best().is_none());
    }

    #[test]
    fn ties_are_fair() {
        let mut rng = RngStream::new(3, 0);
        let trials = 10_000;
        let first_wins = (0..trials)
            .filter(|_| {
                let s = sort_population(vec![ind(0, 2), ind(1, 2)], &mut rng);
                s.members()[0] == ind(0, 2)
            })
            .count();
        let freq = first_wins as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= 0.02, "freq {freq}");
    }

    proptest! {
        #[test]
        fn sort_is_a_sorted_permutation(fits in proptest::collection::vec(0u64..5, 0..40), seed in any::<u64>()) {
            let pop: Vec<Individual> = fits.iter().enumerate().map(|(i, &f)| ind(i, f)).collect();
            let mut rng = RngStream::new(seed, 0);
            let sorted = sort_population(pop.clone(), &mut rng);
            let out = sorted.members();
            prop_assert!(out.windows(2).all(|w| w[0].fitness >= w[1].fitness));
            let mut a: Vec<_> = pop.iter().map(|i| (i.fitness, i.genome.clone())).collect();
            let mut b: Vec<_> = out.iter().map(|i| (i.fitness, i.genome.clone())).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
