//! Regression results, z-inference, R-squared triple, and Wald tests.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

use super::design::{DesignMatrix, W_LABEL};
use super::dist::{chi2_sf, two_sided_p};
use super::random_effects::VarianceComponents;

/// Normal 97.5% quantile used for every confidence interval.
pub const Z_975: f64 = 1.959964;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ReGls,
    PooledCluster,
    SimpleOls,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupSizes {
    pub min: usize,
    pub avg: f64,
    pub max: usize,
}

impl GroupSizes {
    pub fn of(x: &DesignMatrix) -> Self {
        let sizes: Vec<usize> = x.group_index.values().map(|r| r.len()).collect();
        GroupSizes {
            min: sizes.iter().copied().min().unwrap_or(0),
            avg: x.n() as f64 / sizes.len().max(1) as f64,
            max: sizes.iter().copied().max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaldTest {
    pub chi2: f64,
    pub df: usize,
    pub p: f64,
}

/// `None` marks an R-squared whose correlation has a zero-variance side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RSquared {
    pub within: Option<f64>,
    pub between: Option<f64>,
    pub overall: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    pub method: Method,
    pub dep_var: String,
    pub labels: Vec<String>,
    pub coef: Vec<f64>,
    pub se: Vec<f64>,
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub n_obs: usize,
    pub n_groups: usize,
    pub obs_per_group: GroupSizes,
    pub r2_within: Option<f64>,
    pub r2_between: Option<f64>,
    pub r2_overall: Option<f64>,
    /// Joint test on every non-constant regressor.
    pub wald: Option<WaldTest>,
    /// Single-coefficient test on `w_t`.
    pub wald_w: Option<WaldTest>,
    pub n_clusters: Option<usize>,
    pub components: Option<VarianceComponents>,
    pub vcov: Vec<Vec<f64>>,
}

impl RegressionResult {
    /// Fills the per-coefficient columns from `beta` and its covariance.
    pub(crate) fn assemble(
        method: Method,
        x: &DesignMatrix,
        beta: &DVector<f64>,
        vcov: &DMatrix<f64>,
    ) -> Self {
        let coef: Vec<f64> = beta.iter().copied().collect();
        let se: Vec<f64> = vcov.diagonal().iter().map(|v| v.max(0.0).sqrt()).collect();
        let z: Vec<f64> = coef.iter().zip(&se).map(|(c, s)| c / s).collect();
        let p = z.iter().map(|&z| two_sided_p(z)).collect();
        let ci_low = coef.iter().zip(&se).map(|(c, s)| c - Z_975 * s).collect();
        let ci_high = coef.iter().zip(&se).map(|(c, s)| c + Z_975 * s).collect();

        let labels = x.non_cons_labels();
        let wald = wald_joint(beta, vcov, &x.column_labels, &labels)
            .map_err(|e| log::warn!("joint Wald test unavailable: {e}"))
            .ok();
        let wald_w = x
            .column_index(W_LABEL)
            .and_then(|_| wald_joint(beta, vcov, &x.column_labels, &[W_LABEL]).ok());

        RegressionResult {
            method,
            dep_var: String::new(),
            labels: x.column_labels.clone(),
            coef,
            se,
            z,
            p,
            ci_low,
            ci_high,
            n_obs: x.n(),
            n_groups: x.n_groups(),
            obs_per_group: GroupSizes::of(x),
            r2_within: None,
            r2_between: None,
            r2_overall: None,
            wald,
            wald_w,
            n_clusters: None,
            components: None,
            vcov: vcov
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn coef_of(&self, label: &str) -> Option<f64> {
        self.index_of(label).map(|i| self.coef[i])
    }

    pub fn se_of(&self, label: &str) -> Option<f64> {
        self.index_of(label).map(|i| self.se[i])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Squared Pearson correlation; `None` if either side has no variance.
pub(crate) fn squared_correlation(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    if a.is_empty() || a.len() != b.len() {
        return None;
    }
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (da, db) = (x - ma, y - mb);
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    let scale_a = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale_b = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let negligible = |ss: f64, scale: f64| ss <= (1e-14 * scale).powi(2) * n;
    if negligible(saa, scale_a) || negligible(sbb, scale_b) {
        return None;
    }
    Some((sab * sab / (saa * sbb)).min(1.0))
}

fn group_means(v: &DVector<f64>, x: &DesignMatrix) -> Vec<(std::ops::Range<usize>, f64)> {
    x.groups()
        .into_iter()
        .map(|r| {
            let m = v.rows(r.start, r.len()).sum() / r.len() as f64;
            (r, m)
        })
        .collect()
}

/// Within, between, and overall R-squared of the fit `X beta` against `y`.
pub fn r_squared_triple(x: &DesignMatrix, y: &DVector<f64>, beta: &DVector<f64>) -> RSquared {
    let fitted = &x.values * beta;
    let y_means = group_means(y, x);
    let f_means = group_means(&fitted, x);

    let mut y_within = vec![0.0; y.len()];
    let mut f_within = vec![0.0; y.len()];
    for ((range, ym), (_, fm)) in y_means.iter().zip(&f_means) {
        for i in range.clone() {
            y_within[i] = y[i] - ym;
            f_within[i] = fitted[i] - fm;
        }
    }
    let yb: Vec<f64> = y_means.iter().map(|(_, m)| *m).collect();
    let fb: Vec<f64> = f_means.iter().map(|(_, m)| *m).collect();

    RSquared {
        within: squared_correlation(&y_within, &f_within),
        between: squared_correlation(&yb, &fb),
        overall: squared_correlation(y.as_slice(), fitted.as_slice()),
    }
}

/// `b_s' V_s^-1 b_s` over the labelled subset.
pub fn wald_joint<S: AsRef<str>>(
    beta: &DVector<f64>,
    vcov: &DMatrix<f64>,
    labels: &[String],
    subset: &[S],
) -> Result<WaldTest> {
    let idx = subset
        .iter()
        .map(|s| {
            labels
                .iter()
                .position(|l| l == s.as_ref())
                .ok_or_else(|| Error::UnknownColumn(s.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let b = DVector::from_iterator(idx.len(), idx.iter().map(|&i| beta[i]));
    let v = DMatrix::from_fn(idx.len(), idx.len(), |r, c| vcov[(idx[r], idx[c])]);
    let singular =
        || Error::SingularCovariance(subset.iter().map(|s| s.as_ref().to_string()).collect());
    let chol = v.cholesky().ok_or_else(singular)?;
    let diag_ratio = {
        let d = chol.l_dirty().diagonal();
        let max = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let min = d.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
        if max == 0.0 {
            0.0
        } else {
            min / max
        }
    };
    if diag_ratio.is_nan() || diag_ratio <= 1e-8 {
        return Err(singular());
    }
    let chi2 = b.dot(&chol.solve(&b)).max(0.0);
    Ok(WaldTest {
        chi2,
        df: idx.len(),
        p: chi2_sf(chi2, idx.len()),
    })
}
