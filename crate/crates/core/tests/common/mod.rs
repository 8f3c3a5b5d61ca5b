#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal};

use promises::econometrics::DesignMatrix;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Normal-equations solution through an explicit LU inverse of `X'X`.
pub fn normal_equations(x: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    let xtx = x.transpose() * x;
    xtx.try_inverse().expect("well-conditioned") * x.transpose() * y
}

/// Full-covariance GLS with `Omega = blockdiag(su2 J + se2 I)` inverted explicitly.
pub fn gls_oracle(x: &DesignMatrix, y: &DVector<f64>, su2: f64, se2: f64) -> DVector<f64> {
    let n = x.n();
    let mut omega = DMatrix::<f64>::zeros(n, n);
    for range in x.group_index.values() {
        for i in range.clone() {
            for j in range.clone() {
                omega[(i, j)] = su2 + if i == j { se2 } else { 0.0 };
            }
        }
    }
    let oi = omega.try_inverse().expect("positive definite");
    let xt_oi = x.values.transpose() * &oi;
    (&xt_oi * &x.values).try_inverse().expect("full rank") * xt_oi * y
}

/// Balanced panel: `w` and year dummies, `y = 0.5 + 0.8 w + d_t + u_i + e`,
/// with `w` loading on `u_i` by `w_on_u`.
pub fn balanced_design_with<R: Rng>(
    rng: &mut R,
    groups: usize,
    periods: usize,
    su: f64,
    se: f64,
    w_on_u: f64,
) -> (DesignMatrix, DVector<f64>) {
    let n = groups * periods;
    let k = periods + 1;
    let z = Normal::new(0.0, 1.0).unwrap();
    let mut labels = vec!["w_t".to_string()];
    labels.extend((1..periods).map(|t| format!("dum{}", 1993 + t)));
    labels.push("cons".into());
    let mut values = DMatrix::zeros(n, k);
    let mut y = DVector::zeros(n);
    let mut ids = Vec::with_capacity(n);
    let year_fx: Vec<f64> = (0..periods).map(|t| 0.3 * t as f64).collect();
    for g in 0..groups {
        let u = su * z.sample(rng);
        for t in 0..periods {
            let i = g * periods + t;
            let w = 5.0 + 2.0 * z.sample(rng) + w_on_u * u;
            values[(i, 0)] = w;
            if t > 0 {
                values[(i, t)] = 1.0;
            }
            values[(i, k - 1)] = 1.0;
            y[i] = 0.5 + 0.8 * w + year_fx[t] + u + se * z.sample(rng);
            ids.push(format!("g{g:03}"));
        }
    }
    (DesignMatrix::new(labels, values, ids).unwrap(), y)
}

/// `balanced_design_with` where `w` is correlated with the entity effect.
pub fn balanced_design<R: Rng>(
    rng: &mut R,
    groups: usize,
    periods: usize,
    su: f64,
    se: f64,
) -> (DesignMatrix, DVector<f64>) {
    balanced_design_with(rng, groups, periods, su, se, 0.5)
}

pub fn corr2(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov * cov / (va * vb)
}
