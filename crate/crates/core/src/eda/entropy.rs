use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EntropyBase {
    #[default]
    Bits,
    Nats,
}

impl EntropyBase {
    #[inline]
    fn log(self, v: f64) -> f64 {
        match self {
            EntropyBase::Bits => v.log2(),
            EntropyBase::Nats => v.ln(),
        }
    }
}

/// `-(k/t) log(k/t) - ((t-k)/t) log((t-k)/t)` with `0 log 0 = 0`.
///
/// The smaller count goes first so that `(k, t)` and `(t-k, t)` produce
/// bit-identical results.
pub(crate) fn entropy_of_counts(ones: f64, total: f64, base: EntropyBase) -> f64 {
    let zeros = total - ones;
    let (a, b) = if ones <= zeros { (ones, zeros) } else { (zeros, ones) };
    let term = |c: f64| if c > 0.0 { -(c / total) * base.log(c / total) } else { 0.0 };
    term(a) + term(b)
}

/// Binary entropy (in bits) of a variable observed `ones` times in `total`
/// samples.
pub fn empirical_entropy(ones: u64, total: u64) -> Result<f64> {
    if total == 0 {
        return Err(Error::invalid("entropy of an empty sample"));
    }
    if ones > total {
        return Err(Error::invalid(format!("{ones} ones out of {total} samples")));
    }
    Ok(entropy_of_counts(ones as f64, total as f64, EntropyBase::Bits))
}

/// Joint counts of two binary variables `(X_i, X_j)`; `counts[a][b]` is the
/// number of rows with `X_i = a` and `X_j = b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct JointCounts {
    pub counts: [[u64; 2]; 2],
}

impl JointCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Rows with `X_j = b`.
    pub fn given(&self, b: usize) -> u64 {
        self.counts[0][b] + self.counts[1][b]
    }

    pub fn from_rows<I: IntoIterator<Item = (bool, bool)>>(rows: I) -> Self {
        let mut counts = [[0u64; 2]; 2];
        for (a, b) in rows {
            counts[a as usize][b as usize] += 1;
        }
        Self { counts }
    }
}

/// Estimated `Pr(X_i = 1 | X_j = b)`: `p(1, b) / R(p(b))` with
/// `R(p) = max(p, 1/n)`.
pub(crate) fn conditional_one(ones_and_b: u64, b_count: u64, total: u64, n: usize) -> f64 {
    let denom = (b_count as f64).max(total as f64 / n as f64);
    if denom == 0.0 {
        0.0
    } else {
        ones_and_b as f64 / denom
    }
}

/// Entropy of `X_i = 1` given `X_j = b`, consistent with
/// [`conditional_one`]; exact counts are used whenever the floor is inactive.
pub(crate) fn branch_entropy(ones_and_b: u64, b_count: u64, total: u64, n: usize, base: EntropyBase) -> f64 {
    let floor = total as f64 / n as f64;
    if b_count as f64 >= floor {
        if b_count == 0 {
            return 0.0;
        }
        entropy_of_counts(ones_and_b as f64, b_count as f64, base)
    } else {
        let q = conditional_one(ones_and_b, b_count, total, n).clamp(0.0, 1.0);
        entropy_of_counts(q, 1.0, base)
    }
}

pub(crate) fn conditional_entropy_with(
    ones_given_0: u64,
    count_0: u64,
    ones_given_1: u64,
    count_1: u64,
    n: usize,
    base: EntropyBase,
) -> f64 {
    let total = count_0 + count_1;
    let t = total as f64;
    let w0 = count_0 as f64 / t * branch_entropy(ones_given_0, count_0, total, n, base);
    let w1 = count_1 as f64 / t * branch_entropy(ones_given_1, count_1, total, n, base);
    w0 + w1
}

/// Memoized `entropy_of_counts(k, c)` rows for `c <= total`; evaluates
/// [`conditional_entropy_with`] without logarithms when the `R` floor is
/// inactive, with identical results.
pub(crate) struct EntropyTable {
    total: u64,
    n: usize,
    base: EntropyBase,
    rows: Vec<Vec<f64>>,
}

impl EntropyTable {
    pub(crate) fn new(total: u64, n: usize, base: EntropyBase) -> Self {
        Self {
            total,
            n,
            base,
            rows: vec![Vec::new(); total as usize + 1],
        }
    }

    #[inline]
    fn lookup(&mut self, ones: u64, count: u64) -> f64 {
        let row = &mut self.rows[count as usize];
        if row.is_empty() {
            let base = self.base;
            row.extend((0..=count).map(|k| entropy_of_counts(k as f64, count as f64, base)));
        }
        row[ones as usize]
    }

    pub(crate) fn entropy(&mut self, ones: u64) -> f64 {
        self.lookup(ones, self.total)
    }

    #[inline]
    fn branch(&mut self, ones_and_b: u64, b_count: u64) -> f64 {
        if b_count == 0 {
            0.0
        } else if b_count as f64 >= self.total as f64 / self.n as f64 {
            self.lookup(ones_and_b, b_count)
        } else {
            branch_entropy(ones_and_b, b_count, self.total, self.n, self.base)
        }
    }

    /// `p(b) h(X_i | X_j = b)` for every possible count of ones in the
    /// branch of size `count`.
    pub(crate) fn weighted_branch(&mut self, count: u64) -> Vec<f64> {
        let w = count as f64 / self.total as f64;
        (0..=count).map(|k| w * self.branch(k, count)).collect()
    }

    #[cfg(test)]
    pub(crate) fn conditional(&mut self, ones_given_0: u64, count_0: u64, ones_given_1: u64, count_1: u64) -> f64 {
        self.weighted_branch(count_0)[ones_given_0 as usize] + self.weighted_branch(count_1)[ones_given_1 as usize]
    }
}

/// `h(X_i | X_j) = Σ_b p(b) h(X_i | X_j = b)` in bits, where the branch
/// conditionals divide by `R(p(b)) = max(p(b), 1/n)` so that unobserved
/// branches stay defined.
pub fn conditional_entropy(table: &JointCounts, n: usize) -> Result<f64> {
    if table.total() == 0 {
        return Err(Error::invalid("conditional entropy of an empty table"));
    }
    if n == 0 {
        return Err(Error::invalid("problem size must be positive"));
    }
    let c = &table.counts;
    Ok(conditional_entropy_with(
        c[1][0],
        table.given(0),
        c[1][1],
        table.given(1),
        n,
        EntropyBase::Bits,
    ))
}
