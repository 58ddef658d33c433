use crate::error::{Error, Result};
use crate::fitness::FitnessFn;
use crate::population::SortedPopulation;

/// Block counts of one sampled population on width-2 DLB.
///
/// Block quantities are indexed `1..=m` to match the usual notation:
///
/// * `c(i)`: individuals with at least `i` leading 11 blocks; `c(0) = λ`
/// * `d(i)`: exactly `i-1` leading 11s followed by 00
/// * `e(i)`: exactly `i-1` leading 11s followed by 10
/// * `f(i)`: exactly `i-1` leading 11s followed by 01
/// * `x(i)`: ones at position `i` among the `μ` fittest (`i` in `1..=n`)
/// * `y(j)`: 11 blocks at block `j` among the `μ` fittest
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationStats {
    lambda: usize,
    mu: usize,
    c: Vec<usize>,
    d: Vec<usize>,
    e: Vec<usize>,
    f: Vec<usize>,
    x: Vec<usize>,
    y: Vec<usize>,
    /// `max { i : C_i >= μ }`
    pub z: usize,
    /// `max { i : C_i > 0 }`, the leading-11 count of the fittest individual
    pub z_star: usize,
}

impl IterationStats {
    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    /// Number of blocks `m`.
    pub fn blocks(&self) -> usize {
        self.c.len() - 1
    }

    pub fn c(&self, i: usize) -> usize {
        self.c[i]
    }

    pub fn d(&self, i: usize) -> usize {
        self.d[i - 1]
    }

    pub fn e(&self, i: usize) -> usize {
        self.e[i - 1]
    }

    pub fn f(&self, i: usize) -> usize {
        self.f[i - 1]
    }

    pub fn x(&self, i: usize) -> usize {
        self.x[i - 1]
    }

    pub fn y(&self, j: usize) -> usize {
        self.y[j - 1]
    }

    /// `C_0..=C_m`.
    pub fn c_all(&self) -> &[usize] {
        &self.c
    }

    pub fn x_all(&self) -> &[usize] {
        &self.x
    }

    pub fn y_all(&self) -> &[usize] {
        &self.y
    }

    /// Checks every structural identity; returns one message per violation.
    pub fn violations(&self) -> Vec<String> {
        let m = self.blocks();
        let mut out = Vec::new();
        if self.c[0] != self.lambda {
            out.push(format!("C_0 = {} != lambda = {}", self.c[0], self.lambda));
        }
        for i in 1..=m {
            if self.c[i] > self.c[i - 1] {
                out.push(format!("C_{i} = {} > C_{} = {}", self.c[i], i - 1, self.c[i - 1]));
            }
            let parts = self.c[i] + self.d(i) + self.e(i) + self.f(i);
            if parts != self.c[i - 1] {
                out.push(format!("C_{} = {} but C+D+E+F at block {i} = {parts}", i - 1, self.c[i - 1]));
            }
        }
        if self.c[self.z] < self.mu || (self.z < m && self.c[self.z + 1] >= self.mu) {
            out.push(format!("Z = {} does not satisfy its definition", self.z));
        }
        if self.c[self.z_star] == 0 || (self.z_star < m && self.c[self.z_star + 1] != 0) {
            out.push(format!("Z* = {} does not satisfy its definition", self.z_star));
        }
        if self.z > self.z_star {
            out.push(format!("Z = {} > Z* = {}", self.z, self.z_star));
        }
        if let Some(i) = self.x.iter().position(|&v| v > self.mu) {
            out.push(format!("X_{} = {} > mu", i + 1, self.x[i]));
        }
        if let Some(j) = self.y.iter().position(|&v| v > self.mu) {
            out.push(format!("Y_{} = {} > mu", j + 1, self.y[j]));
        }
        out
    }
}

/// Computes [`IterationStats`] for a population sorted under width-2 DLB.
pub fn block_stats(pop: &SortedPopulation, mu: usize, fitness: FitnessFn) -> Result<IterationStats> {
    if !fitness.is_dlb2() {
        return Err(Error::invalid(format!("block statistics need width-2 DLB, not {fitness}")));
    }
    let lambda = pop.len();
    if lambda == 0 || mu == 0 || mu > lambda {
        return Err(Error::invalid(format!("need 1 <= mu <= lambda, got mu={mu}, lambda={lambda}")));
    }
    let n = pop.members()[0].genome.len();
    if !n.is_multiple_of(2) || pop.members().iter().any(|i| i.genome.len() != n) {
        return Err(Error::invalid("population genomes must share one even length"));
    }
    let m = n / 2;
    // histogram of phi, then suffix sums give C
    let mut phi_hist = vec![0usize; m + 1];
    let mut d = vec![0usize; m];
    let mut e = vec![0usize; m];
    let mut f = vec![0usize; m];
    for ind in pop.members() {
        let g = ind.genome.genes();
        let phi = g.chunks_exact(2).take_while(|b| b[0] == 1 && b[1] == 1).count();
        phi_hist[phi] += 1;
        if phi < m {
            match (g[2 * phi], g[2 * phi + 1]) {
                (0, 0) => d[phi] += 1,
                (1, 0) => e[phi] += 1,
                _ => f[phi] += 1,
            }
        }
    }
    let mut c = vec![0usize; m + 1];
    let mut acc = 0;
    for i in (0..=m).rev() {
        acc += phi_hist[i];
        c[i] = acc;
    }
    let mut x = vec![0usize; n];
    let mut y = vec![0usize; m];
    for ind in pop.fittest(mu) {
        let g = ind.genome.genes();
        for (xi, &gi) in x.iter_mut().zip(g) {
            *xi += gi as usize;
        }
        for (yj, b) in y.iter_mut().zip(g.chunks_exact(2)) {
            *yj += usize::from(b[0] == 1 && b[1] == 1);
        }
    }
    let z = (1..=m).take_while(|&i| c[i] >= mu).count();
    let z_star = (1..=m).take_while(|&i| c[i] > 0).count();
    Ok(IterationStats {
        lambda,
        mu,
        c,
        d,
        e,
        f,
        x,
        y,
        z,
        z_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::{sort_population, Individual};
    use crate::rng::RngStream;

    fn population(strings: &[&str]) -> SortedPopulation {
        let pop = strings
            .iter()
            .map(|s| {
                let g: crate::bits::BitString = s.parse().unwrap();
                let f = FitnessFn::DLB.evaluate(&g).unwrap();
                Individual::new(g, f)
            })
            .collect();
        sort_population(pop, &mut RngStream::new(0, 0))
    }

    #[test]
    fn hand_counted_example() {
        let s = block_stats(&population(&["111111", "110011", "001111"]), 3, FitnessFn::DLB).unwrap();
        assert_eq!(&s.c_all()[1..], &[2, 1, 1]);
        assert_eq!(s.d(1), 1);
        assert_eq!(s.e(1), 0);
        assert_eq!(s.d(2), 1);
        assert_eq!(s.z, 0);
        assert_eq!(s.z_star, 3);
        assert_eq!(s.x_all(), &[2, 2, 2, 2, 3, 3]);
        assert_eq!(s.y_all(), &[2, 2, 3]);
        assert!(s.violations().is_empty());
    }

    #[test]
    fn all_optimal() {
        let s = block_stats(&population(&["1111", "1111"]), 1, FitnessFn::DLB).unwrap();
        assert_eq!(s.z, 2);
        assert_eq!(s.z_star, 2);
        assert!(s.violations().is_empty());
    }

    #[test]
    fn single_ten_block() {
        let s = block_stats(&population(&["100111"]), 1, FitnessFn::DLB).unwrap();
        assert_eq!(s.c(1), 0);
        assert_eq!(s.e(1), 1);
        assert_eq!(s.z, 0);
        assert_eq!(s.z_star, 0);
        assert!(s.violations().is_empty());
    }

    #[test]
    fn rejects_other_fitness() {
        let pop = population(&["1111"]);
        assert!(block_stats(&pop, 1, FitnessFn::OneMax).is_err());
        assert!(block_stats(&pop, 1, FitnessFn::Dlb { width: 4 }).is_err());
        assert!(block_stats(&pop, 2, FitnessFn::DLB).is_err());
    }

    #[test]
    fn identities_on_random_populations() {
        let mut rng = RngStream::new(3, 0);
        for _ in 0..200 {
            let n = 2 * (1 + rng.index(10));
            let lambda = 1 + rng.index(30);
            let mu = 1 + rng.index(lambda);
            let pop = (0..lambda)
                .map(|_| {
                    // bias towards ones so long prefixes occur
                    let g = crate::bits::BitString::from_bools((0..n).map(|_| rng.bernoulli(0.8)));
                    let f = FitnessFn::DLB.evaluate(&g).unwrap();
                    Individual::new(g, f)
                })
                .collect();
            let sorted = sort_population(pop, &mut rng);
            let s = block_stats(&sorted, mu, FitnessFn::DLB).unwrap();
            assert!(s.violations().is_empty(), "{:?}", s.violations());
        }
    }
}
