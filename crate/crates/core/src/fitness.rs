//! Pseudo-Boolean benchmark functions.
//!
//! Deceptive Leading Blocks partitions `x` into `m = n/w` blocks of width `w`.
//! `phi(x)` counts the leading all-ones blocks; the leftmost block that is not
//! all ones is the *active* block. Each leading all-ones block is worth `w`,
//! an all-zero active block earns a bonus of one, and any other active block
//! earns nothing:
//!
//! ```text
//! dlb(x) = n          if phi(x) = m
//!          w*phi + 1  if the active block is all zeros
//!          w*phi      otherwise
//! ```
//!
//! Only `w = 2` is the classical instance; for wider blocks the rule above is
//! a conservative extension that coincides with it at `w = 2`.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DlbInstance {
    n: usize,
    width: usize,
}

impl DlbInstance {
    pub fn new(n: usize, width: usize) -> Result<Self> {
        if width < 2 {
            return Err(Error::config(format!("block width must be at least 2, got {width}")));
        }
        if n == 0 || !n.is_multiple_of(width) {
            return Err(Error::config(format!("n = {n} is not a positive multiple of the block width {width}")));
        }
        Ok(Self { n, width })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of blocks `m`.
    pub fn blocks(&self) -> usize {
        self.n / self.width
    }

    pub fn evaluate(&self, x: &BitString) -> Result<u64> {
        self.check(x)?;
        Ok(dlb_unchecked(x.genes(), self.width))
    }

    pub fn levels(&self) -> LevelPartition {
        LevelPartition { instance: *self }
    }

    fn check(&self, x: &BitString) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::invalid(format!("bitstring has length {}, instance expects {}", x.len(), self.n)));
        }
        Ok(())
    }
}

/// The partition `A_i = { x : phi(x) = i }` for `i = 0..=m`.
#[derive(Clone, Copy, Debug)]
pub struct LevelPartition {
    instance: DlbInstance,
}

impl LevelPartition {
    /// Number of levels, `m + 1`.
    pub fn len(&self) -> usize {
        self.instance.blocks() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn level_of(&self, x: &BitString) -> Result<usize> {
        self.instance.check(x)?;
        Ok(phi_unchecked(x.genes(), self.instance.width))
    }

    /// `|A_i|`; `None` if it does not fit in a `u128`.
    pub fn level_size(&self, i: usize) -> Option<u128> {
        let (n, w, m) = (self.instance.n, self.instance.width, self.instance.blocks());
        if i > m {
            return Some(0);
        }
        if i == m {
            return Some(1);
        }
        // first i blocks fixed to ones, block i+1 any of 2^w - 1 non-ones, rest free
        let free = n - w * (i + 1);
        let rest = 1u128.checked_shl(free as u32)?;
        rest.checked_mul((1u128 << w) - 1)
    }
}

fn phi_unchecked(genes: &[u8], width: usize) -> usize {
    genes
        .chunks_exact(width)
        .take_while(|block| block.iter().all(|&g| g == 1))
        .count()
}

fn dlb_unchecked(genes: &[u8], width: usize) -> u64 {
    let m = genes.len() / width;
    let phi = phi_unchecked(genes, width);
    if phi == m {
        return genes.len() as u64;
    }
    let active = &genes[phi * width..(phi + 1) * width];
    let base = (width * phi) as u64;
    if active.iter().all(|&g| g == 0) {
        base + 1
    } else {
        base
    }
}

/// Number of leading all-ones blocks of width `width`.
pub fn phi(x: &BitString, width: usize) -> Result<usize> {
    if width == 0 || !x.len().is_multiple_of(width) {
        return Err(Error::invalid(format!("length {} is not a multiple of the block width {width}", x.len())));
    }
    Ok(phi_unchecked(x.genes(), width))
}

/// Deceptive Leading Blocks with block width `width`.
pub fn dlb(x: &BitString, width: usize) -> Result<u64> {
    DlbInstance::new(x.len(), width)?.evaluate(x)
}

/// Level index under the width-2 partition; equals `phi(x, 2)`.
pub fn level_of(x: &BitString) -> Result<usize> {
    phi(x, 2)
}

pub fn leading_ones(x: &BitString) -> u64 {
    x.genes().iter().take_while(|&&g| g == 1).count() as u64
}

pub fn one_max(x: &BitString) -> u64 {
    x.count_ones() as u64
}

/// A fitness function addressable by identifier: `dlb`, `dlb:<w>`,
/// `leading_ones`, `one_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitnessFn {
    Dlb { width: usize },
    LeadingOnes,
    OneMax,
}

impl FitnessFn {
    pub const DLB: FitnessFn = FitnessFn::Dlb { width: 2 };

    /// Checks that this function is defined on strings of length `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            FitnessFn::Dlb { width } => DlbInstance::new(n, width).map(|_| ()),
            _ if n == 0 => Err(Error::config("n must be at least 1")),
            _ => Ok(()),
        }
    }

    pub fn optimum(&self, n: usize) -> u64 {
        n as u64
    }

    pub fn evaluate(&self, x: &BitString) -> Result<u64> {
        self.validate(x.len())?;
        Ok(self.evaluate_unchecked(x))
    }

    /// Evaluates without validating the length; the caller has already
    /// called [`FitnessFn::validate`] for this length.
    #[inline]
    pub fn evaluate_unchecked(&self, x: &BitString) -> u64 {
        match *self {
            FitnessFn::Dlb { width } => dlb_unchecked(x.genes(), width),
            FitnessFn::LeadingOnes => leading_ones(x),
            FitnessFn::OneMax => one_max(x),
        }
    }

    /// Progress measure reported as "correct blocks": `phi` for DLB, the
    /// leading-ones count for LeadingOnes, the ones count for OneMax.
    pub fn correct_blocks(&self, x: &BitString) -> u64 {
        match *self {
            FitnessFn::Dlb { width } => phi_unchecked(x.genes(), width) as u64,
            FitnessFn::LeadingOnes => leading_ones(x),
            FitnessFn::OneMax => one_max(x),
        }
    }

    pub fn is_dlb2(&self) -> bool {
        *self == FitnessFn::DLB
    }
}

impl FromStr for FitnessFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dlb" => Ok(FitnessFn::DLB),
            "leading_ones" => Ok(FitnessFn::LeadingOnes),
            "one_max" => Ok(FitnessFn::OneMax),
            _ => {
                if let Some(w) = s.strip_prefix("dlb:") {
                    let width = w
                        .parse::<usize>()
                        .map_err(|_| Error::config(format!("bad DLB block width {w:?}")))?;
                    if width < 2 {
                        return Err(Error::config(format!("block width must be at least 2, got {width}")));
                    }
                    Ok(FitnessFn::Dlb { width })
                } else {
                    Err(Error::config(format!("unknown fitness function {s:?}")))
                }
            }
        }
    }
}

impl fmt::Display for FitnessFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitnessFn::Dlb { width: 2 } => f.write_str("dlb"),
            FitnessFn::Dlb { width } => write!(f, "dlb:{width}"),
            FitnessFn::LeadingOnes => f.write_str("leading_ones"),
            FitnessFn::OneMax => f.write_str("one_max"),
        }
    }
}
