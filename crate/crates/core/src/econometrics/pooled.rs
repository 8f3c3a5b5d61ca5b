use nalgebra::DVector;

use crate::error::Result;

use super::design::DesignMatrix;
use super::inference::{r_squared_triple, Method, RegressionResult};
use super::linalg::ols_matrix;
use super::robust::cluster_sandwich;

/// Pooled OLS with standard errors clustered on the entity.
pub fn pooled_cluster(x: &DesignMatrix, y: &DVector<f64>) -> Result<RegressionResult> {
    let fit = ols_matrix(&x.values, &x.column_labels, y)?;
    let vcov = cluster_sandwich(&x.values, &fit.xtx_inv, &fit.residuals, &x.cluster_ids)?;
    let mut result = RegressionResult::assemble(Method::PooledCluster, x, &fit.beta, &vcov);
    result.r2_overall = r_squared_triple(x, y, &fit.beta).overall;
    result.n_clusters = Some(x.n_groups());
    Ok(result)
}

/// Plain OLS on a design, returning `(beta, residuals)`.
pub fn ols(x: &DesignMatrix, y: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    let fit = ols_matrix(&x.values, &x.column_labels, y)?;
    Ok((fit.beta, fit.residuals))
}
