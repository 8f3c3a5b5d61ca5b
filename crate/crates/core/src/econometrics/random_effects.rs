//! Random-effects GLS by quasi-demeaning, with Swamy-Arora variance components.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

use super::design::{DesignMatrix, CONS_LABEL};
use super::inference::{r_squared_triple, Method, RegressionResult};
use super::linalg::{ols_dropping_collinear, ols_matrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceComponents {
    /// Entity-effect variance, truncated at zero.
    pub sigma_u2: f64,
    /// Idiosyncratic variance.
    pub sigma_e2: f64,
    pub theta: BTreeMap<String, f64>,
    /// Set when the within residuals vanish; theta is then 1 everywhere and
    /// the random-effects fit falls back to the within estimator.
    pub degenerate: bool,
}

impl VarianceComponents {
    /// Components with `theta_i = 1 - sqrt(se2 / (T_i su2 + se2))`.
    pub fn from_sigmas(sigma_u2: f64, sigma_e2: f64, x: &DesignMatrix) -> Self {
        let theta = x
            .group_index
            .iter()
            .map(|(id, rows)| {
                let t = rows.len() as f64;
                let th = if sigma_u2 <= 0.0 {
                    0.0
                } else {
                    1.0 - (sigma_e2 / (t * sigma_u2 + sigma_e2)).sqrt()
                };
                (id.clone(), th)
            })
            .collect();
        VarianceComponents {
            sigma_u2,
            sigma_e2,
            theta,
            degenerate: false,
        }
    }
}

fn demean_by_group(v: &mut DMatrix<f64>, x: &DesignMatrix, factor: impl Fn(&str) -> f64) {
    for (id, rows) in &x.group_index {
        let f = factor(id);
        if f == 0.0 {
            continue;
        }
        let len = rows.len();
        for c in 0..v.ncols() {
            let mean = v.view((rows.start, c), (len, 1)).sum() / len as f64;
            for r in rows.clone() {
                v[(r, c)] -= f * mean;
            }
        }
    }
}

fn group_mean_rows(v: &DMatrix<f64>, x: &DesignMatrix) -> DMatrix<f64> {
    let groups = x.groups();
    DMatrix::from_fn(groups.len(), v.ncols(), |g, c| {
        let r = &groups[g];
        v.view((r.start, c), (r.len(), 1)).sum() / r.len() as f64
    })
}

fn non_cons_columns(x: &DesignMatrix) -> Vec<usize> {
    (0..x.k())
        .filter(|&j| x.column_labels[j] != CONS_LABEL)
        .collect()
}

/// Swamy-Arora estimates from the within and between regressions.
///
/// `sigma_e2 = SSR_within / (N - G - K_w)` where `K_w` counts the regressors
/// that survive group demeaning. `sigma_u2 = SSR_between / (G - K_b) -
/// sigma_e2 / T_h` with `T_h` the harmonic mean group size, floored at 0.
pub fn swamy_arora(x: &DesignMatrix, y: &DVector<f64>) -> Result<VarianceComponents> {
    let (n, g) = (x.n(), x.n_groups());
    if g < 2 {
        return Err(Error::TooFewGroups(g));
    }
    if g == n {
        return Err(Error::AllSingletonGroups);
    }

    let slopes = non_cons_columns(x);
    let mut within = x.values.select_columns(&slopes);
    let mut yw = DMatrix::from_column_slice(n, 1, y.as_slice());
    demean_by_group(&mut within, x, |_| 1.0);
    demean_by_group(&mut yw, x, |_| 1.0);
    let yw = yw.column(0).into_owned();
    let (k_w, ssr_w) = if within.ncols() == 0 {
        (0, yw.norm_squared())
    } else {
        let (kept, fit) = ols_dropping_collinear(&within, &yw)?;
        (kept.len(), fit.ssr())
    };
    let df_w = n as i64 - g as i64 - k_w as i64;
    if df_w <= 0 {
        return Err(Error::TooFewObservations { n, k: g + k_w });
    }
    let sigma_e2 = ssr_w / df_w as f64;

    let xb = group_mean_rows(&x.values, x);
    let yb = group_mean_rows(&DMatrix::from_column_slice(n, 1, y.as_slice()), x)
        .column(0)
        .into_owned();
    let (kept_b, fit_b) =
        ols_dropping_collinear(&xb, &yb).map_err(|_| Error::BetweenInfeasible {
            groups: g,
            regressors: x.k(),
        })?;
    let between_var = fit_b.ssr() / (g - kept_b.len()) as f64;
    let harmonic_t = g as f64
        / x.group_index
            .values()
            .map(|r| 1.0 / r.len() as f64)
            .sum::<f64>();
    let sigma_u2 = (between_var - sigma_e2 / harmonic_t).max(0.0);

    let scale = y.norm_squared() / n as f64;
    if scale == 0.0 || sigma_e2 <= 1e-20 * scale {
        log::warn!("idiosyncratic variance is zero; random effects reduce to the within estimator");
        return Ok(VarianceComponents {
            sigma_u2,
            sigma_e2,
            theta: x.group_index.keys().map(|id| (id.clone(), 1.0)).collect(),
            degenerate: true,
        });
    }
    Ok(VarianceComponents::from_sigmas(sigma_u2, sigma_e2, x))
}

/// Random-effects GLS with Swamy-Arora components.
pub fn re_gls(x: &DesignMatrix, y: &DVector<f64>) -> Result<RegressionResult> {
    let components = swamy_arora(x, y)?;
    re_gls_with(x, y, components)
}

/// Random-effects GLS with supplied components: OLS on `v - theta_i * mean_i(v)`
/// for every column (the constant included) and for `y`.
pub fn re_gls_with(
    x: &DesignMatrix,
    y: &DVector<f64>,
    components: VarianceComponents,
) -> Result<RegressionResult> {
    if components.degenerate {
        return within_fallback(x, y, components);
    }
    let theta = |id: &str| components.theta.get(id).copied().unwrap_or(0.0);
    let mut xs = x.values.clone();
    let mut ys = DMatrix::from_column_slice(y.len(), 1, y.as_slice());
    demean_by_group(&mut xs, x, theta);
    demean_by_group(&mut ys, x, theta);
    let ys = ys.column(0).into_owned();

    let fit = ols_matrix(&xs, &x.column_labels, &ys)?;
    let (n, k) = (x.n(), x.k());
    let s2 = fit.ssr() / (n - k) as f64;
    let vcov = &fit.xtx_inv * s2;

    let mut result = RegressionResult::assemble(Method::ReGls, x, &fit.beta, &vcov);
    let r2 = r_squared_triple(x, y, &fit.beta);
    result.r2_within = r2.within;
    result.r2_between = r2.between;
    result.r2_overall = r2.overall;
    result.components = Some(components);
    Ok(result)
}

/// Within (fixed-effects) slopes; the constant is `mean(y) - mean(x)'b`.
/// The constant's standard error is undefined (NaN).
fn within_fallback(
    x: &DesignMatrix,
    y: &DVector<f64>,
    components: VarianceComponents,
) -> Result<RegressionResult> {
    let slopes = non_cons_columns(x);
    let labels: Vec<String> = slopes.iter().map(|&j| x.column_labels[j].clone()).collect();
    let mut xw = x.values.select_columns(&slopes);
    let mut yw = DMatrix::from_column_slice(y.len(), 1, y.as_slice());
    demean_by_group(&mut xw, x, |_| 1.0);
    demean_by_group(&mut yw, x, |_| 1.0);
    let fit = ols_matrix(&xw, &labels, &yw.column(0).into_owned())?;
    let df = (x.n() - x.n_groups()).saturating_sub(slopes.len()).max(1);
    let s2 = fit.ssr() / df as f64;

    let k = x.k();
    let mut beta = DVector::zeros(k);
    let mut vcov = DMatrix::zeros(k, k);
    for (a, &ja) in slopes.iter().enumerate() {
        beta[ja] = fit.beta[a];
        for (b, &jb) in slopes.iter().enumerate() {
            vcov[(ja, jb)] = fit.xtx_inv[(a, b)] * s2;
        }
    }
    if let Some(c) = x.column_index(CONS_LABEL) {
        let n = x.n() as f64;
        let mut cons = y.sum() / n;
        for (a, &ja) in slopes.iter().enumerate() {
            cons -= fit.beta[a] * x.values.column(ja).sum() / n;
        }
        beta[c] = cons;
        vcov[(c, c)] = f64::NAN;
    }
    let mut result = RegressionResult::assemble(Method::ReGls, x, &beta, &vcov);
    let r2 = r_squared_triple(x, y, &beta);
    result.r2_within = r2.within;
    result.r2_between = r2.between;
    result.r2_overall = r2.overall;
    result.components = Some(components);
    Ok(result)
}
