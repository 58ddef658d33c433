use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the UMDA trap argument and the level-based bound, grouped
/// for reporting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams {
    pub epsilon: f64,
    pub delta: f64,
    pub gamma_0: f64,
    pub z: Vec<f64>,
    pub gamma_star: f64,
    pub c_var: f64,
    pub theta: f64,
}

/// Trap threshold `θ = (μ²/λ)(1-ε)`: below it the 11 count of the active
/// block shrinks in expectation.
pub fn theta(mu: usize, lambda: usize, epsilon: f64) -> f64 {
    let mu = mu as f64;
    mu * mu / lambda as f64 * (1.0 - epsilon)
}

/// Lower bound on `Pr(X <= θ)` for a symmetric `X` on `0..=μ` with
/// `Var[X] >= c μ²`:
///
/// `2(c - (1/2 - γ*)²) / (1 - 4(1/2 - γ*)²)`, floored at zero.
///
/// Fails when the denominator is not positive (`γ*` outside `(0, 1)`).
pub fn trap_tail_bound(c_var: f64, gamma_star: f64) -> Result<f64> {
    let s = (0.5 - gamma_star).powi(2);
    let denom = 1.0 - 4.0 * s;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::invalid(format!("trap tail bound inapplicable for gamma* = {gamma_star}")));
    }
    Ok((2.0 * (c_var - s) / denom).max(0.0))
}

/// Upper bound `(1 + ln λ)/ln 4` on the expected leading-11 count of the
/// fittest of `λ` uniform strings.
pub fn z0_expectation_bound(lambda: usize) -> Result<f64> {
    if lambda == 0 {
        return Err(Error::invalid("lambda must be at least 1"));
    }
    Ok((1.0 + (lambda as f64).ln()) / 4f64.ln())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelBound {
    /// `(8/δ²) Σ_j [λ ln(6δλ/(4 + z_j δλ)) + 1/z_j]`
    pub expected_runtime: f64,
    /// Smallest λ meeting the population-size condition,
    /// `(4/(γ₀δ²)) ln(128m/(z_* δ²))`.
    pub lambda_min: f64,
    pub g3_satisfied: bool,
}

/// Evaluates the level-based runtime bound for upgrade probabilities
/// `z = (z_1, ..., z_{m-1})`.
pub fn level_based_bound(z: &[f64], delta: f64, lambda: usize, gamma_0: f64) -> Result<LevelBound> {
    if z.is_empty() {
        return Err(Error::invalid("need at least one upgrade probability"));
    }
    if let Some(bad) = z.iter().find(|&&zj| !(zj > 0.0 && zj <= 1.0)) {
        return Err(Error::invalid(format!("upgrade probability {bad} outside (0, 1]")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("delta {delta} outside (0, 1]")));
    }
    if !(gamma_0 > 0.0 && gamma_0 < 1.0) {
        return Err(Error::invalid(format!("gamma_0 {gamma_0} outside (0, 1)")));
    }
    let l = lambda as f64;
    let m = (z.len() + 1) as f64;
    let z_min = z.iter().copied().fold(f64::INFINITY, f64::min);
    let sum: f64 = z
        .iter()
        .map(|&zj| l * (6.0 * delta * l / (4.0 + zj * delta * l)).ln() + 1.0 / zj)
        .sum();
    let lambda_min = 4.0 / (gamma_0 * delta * delta) * (128.0 * m / (z_min * delta * delta)).ln();
    Ok(LevelBound {
        expected_runtime: 8.0 / (delta * delta) * sum,
        lambda_min,
        g3_satisfied: l >= lambda_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_values() {
        assert!((theta(200, 1000, 0.1) - 36.0).abs() < 1e-12);
        assert!((theta(200, 1000, 0.0) - 40.0).abs() < 1e-12);
        assert!((theta(50, 50, 0.0) - 50.0).abs() < 1e-12);
    }

    #[test]
    fn trap_tail_values() {
        assert!((trap_tail_bound(0.1, 0.5).unwrap() - 0.2).abs() < 1e-12);
        let v = trap_tail_bound(0.2365, 0.2).unwrap();
        // 2 * 0.1465 / 0.64
        assert!((v - 0.4578125).abs() < 1e-12);
        assert_eq!(trap_tail_bound(0.09, 0.2).unwrap(), 0.0);
        assert_eq!(trap_tail_bound(0.0, 0.2).unwrap(), 0.0);
        assert!(trap_tail_bound(0.2, 0.0).is_err());
        assert!(trap_tail_bound(0.2, 1.0).is_err());
    }

    #[test]
    fn z0_values() {
        assert!((z0_expectation_bound(1).unwrap() - 1.0 / 4f64.ln()).abs() < 1e-12);
        let v = z0_expectation_bound(1000).unwrap();
        assert!((5.70..=5.71).contains(&v), "{v}");
        assert!(z0_expectation_bound(0).is_err());
    }

    #[test]
    fn level_bound_example() {
        let b = level_based_bound(&[0.5], 0.5, 1000, 0.5).unwrap();
        // 32 (1000 ln(3000/254) + 2)
        assert!((b.expected_runtime - 79_073.065_620).abs() < 1e-5, "{}", b.expected_runtime);
    }

    #[test]
    fn level_bound_single_level_closed_form() {
        // 6λ/(4+λ) = e  =>  λ = 4e/(6-e), per-level term λ + 1
        let e = std::f64::consts::E;
        let lambda_real = 4.0 * e / (6.0 - e);
        // λ must be an integer in the API; check the formula on the nearest
        // integer against direct evaluation and the real root analytically
        let l = lambda_real.round() as usize;
        let b = level_based_bound(&[1.0], 1.0, l, 0.5).unwrap();
        let lf = l as f64;
        let direct = 8.0 * (lf * (6.0 * lf / (4.0 + lf)).ln() + 1.0);
        assert!((b.expected_runtime - direct).abs() < 1e-9);
        let at_root = lambda_real * (6.0 * lambda_real / (4.0 + lambda_real)).ln() + 1.0;
        assert!((at_root - (lambda_real + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn level_bound_is_monotone_in_z() {
        let lo = level_based_bound(&[0.1, 0.1], 0.5, 500, 0.2).unwrap();
        let hi = level_based_bound(&[0.1, 0.3], 0.5, 500, 0.2).unwrap();
        assert!(hi.expected_runtime <= lo.expected_runtime);
        assert!(hi.lambda_min <= lo.lambda_min + 1e-12);
    }

    #[test]
    fn level_bound_g3_flag() {
        let b = level_based_bound(&[0.5; 3], 1.0, 10, 0.5).unwrap();
        // 8 * ln(128*4/0.5) ≈ 55.5
        assert!(!b.g3_satisfied);
        assert!((b.lambda_min - 8.0 * (1024f64).ln()).abs() < 1e-9);
        assert!(level_based_bound(&[0.5; 3], 1.0, 56, 0.5).unwrap().g3_satisfied);
        assert!(level_based_bound(&[], 1.0, 56, 0.5).is_err());
        assert!(level_based_bound(&[0.0], 1.0, 56, 0.5).is_err());
    }
}
