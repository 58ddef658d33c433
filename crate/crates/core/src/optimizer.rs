use crate::budget::Evaluator;
use crate::oracles::IterationStats;
use crate::population::Individual;
use crate::rng::RngStream;

/// One running instance of a search heuristic.
///
/// Construction samples and evaluates the initial population; each call to
/// [`Optimizer::step`] performs one generation.
pub trait Optimizer: Send {
    fn step(&mut self, eval: &mut Evaluator, rng: &mut RngStream);

    /// The fittest individual of the current population.
    fn best(&self) -> &Individual;

    /// Block statistics of the latest generation, for EDAs on width-2 DLB.
    fn block_stats(&self) -> Option<&IterationStats> {
        None
    }
}
