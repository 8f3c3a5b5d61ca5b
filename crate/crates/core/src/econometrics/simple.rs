use serde::Serialize;

use crate::error::{Error, Result};

use super::inference::squared_correlation;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimpleFit {
    pub slope: f64,
    pub intercept: f64,
    /// Squared correlation; `None` when `y` is constant.
    pub r2: Option<f64>,
}

/// Bivariate least squares `y = intercept + slope * x`.
pub fn simple_ols(x: &[f64], y: &[f64]) -> Result<SimpleFit> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(Error::TooShort {
            need: 3,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("x"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok(SimpleFit {
        slope,
        intercept: my - slope * mx,
        r2: squared_correlation(x, y),
    })
}
