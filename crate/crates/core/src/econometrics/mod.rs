//! Panel estimators: random-effects GLS and pooled OLS with cluster-robust
//! errors, plus bivariate OLS and the inference machinery they share.

pub mod design;
pub mod dist;
pub mod inference;
pub mod linalg;
pub mod pooled;
pub mod random_effects;
pub mod report;
pub mod robust;
pub mod simple;

pub use design::{build_design, DepVar, DesignMatrix, DesignReport};
pub use dist::normal_cdf;
pub use inference::{r_squared_triple, wald_joint, Method, RSquared, RegressionResult, WaldTest};
pub use linalg::{ols_matrix, OlsFit};
pub use pooled::{ols, pooled_cluster};
pub use random_effects::{re_gls, re_gls_with, swamy_arora, VarianceComponents};
pub use report::render_table;
pub use robust::{cluster_robust_vcov, hc_sandwich, small_sample_factor};
pub use simple::{simple_ols, SimpleFit};

use nalgebra::DVector;

use crate::error::Result;
use crate::returns::PanelDataset;

/// Which estimator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Model {
    #[default]
    Re,
    Pooled,
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "re" => Ok(Model::Re),
            "pooled" => Ok(Model::Pooled),
            other => Err(format!("unknown model {other:?} (re|pooled)")),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            Model::Re => "re",
            Model::Pooled => "pooled",
        })
    }
}

/// Builds the design for `dep` and runs `model` on it.
pub fn estimate(panel: &PanelDataset, model: Model, dep: DepVar) -> Result<RegressionResult> {
    let (x, y, _) = build_design(panel, dep)?;
    let mut result = estimate_design(&x, &y, model)?;
    result.dep_var = dep.label().to_string();
    Ok(result)
}

pub fn estimate_design(
    x: &DesignMatrix,
    y: &DVector<f64>,
    model: Model,
) -> Result<RegressionResult> {
    match model {
        Model::Re => re_gls(x, y),
        Model::Pooled => pooled_cluster(x, y),
    }
}
