//! Normal and chi-square tail probabilities.
//!
//! `erfc` comes from statrs, which implements the Boost rational-approximation
//! scheme (relative error near machine precision across the real line).

use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

/// Standard normal CDF, `0.5 * erfc(-z / sqrt(2))`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Two-sided normal p-value `2 * (1 - Phi(|z|))`, evaluated in the lower tail.
pub fn two_sided_p(z: f64) -> f64 {
    2.0 * normal_cdf(-z.abs())
}

/// `P(chi2_df > x)`.
pub fn chi2_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(df as f64 / 2.0, x / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_at_zero() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for z in [0.1, 0.7, 1.3, 2.9, 5.5] {
            assert!((normal_cdf(-z) - (1.0 - normal_cdf(z))).abs() < 1e-15);
        }
    }

    #[test]
    fn chi2_one_df_matches_normal() {
        // P(chi2_1 > z^2) = 2 (1 - Phi(z))
        for z in [0.5f64, 1.0, 1.96, 2.36, 3.3] {
            assert!((chi2_sf(z * z, 1) - two_sided_p(z)).abs() < 1e-9);
        }
        // chi2 with 2 df is exponential with mean 2
        assert!((chi2_sf(3.0, 2) - (-1.5f64).exp()).abs() < 1e-14);
    }
}
