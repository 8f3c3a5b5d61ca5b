//! Sandwich covariance estimators.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::design::DesignMatrix;
use super::linalg::Qr;

/// `[G/(G-1)] * [(N-1)/(N-K)]`.
pub fn small_sample_factor(groups: usize, n: usize, k: usize) -> f64 {
    (groups as f64 / (groups as f64 - 1.0)) * ((n as f64 - 1.0) / (n as f64 - k as f64))
}

fn sandwich(xtx_inv: &DMatrix<f64>, meat: &DMatrix<f64>, c: f64) -> DMatrix<f64> {
    let v = xtx_inv * meat * xtx_inv * c;
    (&v + v.transpose()) * 0.5
}

fn score(x: &DMatrix<f64>, i: usize, u: f64) -> DVector<f64> {
    x.row(i).transpose() * u
}

/// Cluster-robust `c (X'X)^-1 [sum_g X_g'u_g u_g'X_g] (X'X)^-1`.
///
/// Clusters are summed in order of first appearance.
pub fn cluster_sandwich<S: AsRef<str>>(
    x: &DMatrix<f64>,
    xtx_inv: &DMatrix<f64>,
    residuals: &DVector<f64>,
    clusters: &[S],
) -> Result<DMatrix<f64>> {
    let (n, k) = x.shape();
    if residuals.len() != n {
        return Err(Error::LengthMismatch(n, residuals.len()));
    }
    if clusters.len() != n {
        return Err(Error::LengthMismatch(n, clusters.len()));
    }
    let mut order: Vec<&str> = Vec::new();
    let mut scores: std::collections::HashMap<&str, DVector<f64>> = Default::default();
    for (i, id) in clusters.iter().enumerate() {
        let id = id.as_ref();
        let s = score(x, i, residuals[i]);
        match scores.get_mut(id) {
            Some(acc) => *acc += s,
            None => {
                order.push(id);
                scores.insert(id, DVector::zeros(k) + s);
            }
        }
    }
    let g = order.len();
    if g < 2 {
        return Err(Error::TooFewClusters(g));
    }
    let mut meat = DMatrix::zeros(k, k);
    for id in &order {
        let s = &scores[id];
        meat += s * s.transpose();
    }
    Ok(sandwich(xtx_inv, &meat, small_sample_factor(g, n, k)))
}

/// Cluster-robust covariance for a design, clustering on `clusters`.
pub fn cluster_robust_vcov<S: AsRef<str>>(
    x: &DesignMatrix,
    residuals: &DVector<f64>,
    clusters: &[S],
) -> Result<DMatrix<f64>> {
    let qr = Qr::new(&x.values);
    let dependent = qr.dependent_columns();
    if !dependent.is_empty() {
        return Err(Error::RankDeficient(
            dependent
                .iter()
                .map(|&i| x.column_labels[i].clone())
                .collect(),
        ));
    }
    cluster_sandwich(&x.values, &qr.xtx_inverse(), residuals, clusters)
}

/// Heteroskedasticity-robust `c (X'X)^-1 [sum_i u_i^2 x_i x_i'] (X'X)^-1`.
pub fn hc_sandwich(
    x: &DMatrix<f64>,
    xtx_inv: &DMatrix<f64>,
    residuals: &DVector<f64>,
    c: f64,
) -> DMatrix<f64> {
    let k = x.ncols();
    let mut meat = DMatrix::zeros(k, k);
    for i in 0..x.nrows() {
        let s = DVector::zeros(k) + score(x, i, residuals[i]);
        meat += &s * s.transpose();
    }
    sandwich(xtx_inv, &meat, c)
}
