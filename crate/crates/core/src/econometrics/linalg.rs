//! Householder QR least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Columns whose `|R_jj|` falls below this fraction of the largest are dependent.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Householder factorization `X = QR` of a tall matrix, reflections kept implicit.
#[derive(Debug, Clone)]
pub struct Qr {
    /// Upper triangle holds R; reflection vectors are kept separately.
    r: DMatrix<f64>,
    reflectors: Vec<DVector<f64>>,
}

impl Qr {
    pub fn new(x: &DMatrix<f64>) -> Self {
        let (n, k) = x.shape();
        let mut a = x.clone();
        let mut reflectors = Vec::with_capacity(k);
        for j in 0..k.min(n) {
            let mut v = a.view((j, j), (n - j, 1)).column(0).into_owned();
            let norm = v.norm();
            if norm == 0.0 {
                reflectors.push(DVector::zeros(n - j));
                continue;
            }
            let alpha = if v[0] >= 0.0 { -norm } else { norm };
            v[0] -= alpha;
            let vnorm2 = v.norm_squared();
            if vnorm2 == 0.0 {
                reflectors.push(DVector::zeros(n - j));
                continue;
            }
            let mut block = a.view_mut((j, j), (n - j, k - j));
            let proj = block.tr_mul(&v) * (2.0 / vnorm2);
            block -= &v * proj.transpose();
            reflectors.push(v);
        }
        let r = a.rows(0, k.min(n)).upper_triangle();
        Qr { r, reflectors }
    }

    pub fn r(&self) -> &DMatrix<f64> {
        &self.r
    }

    /// Indices of columns whose diagonal entry is negligible.
    pub fn dependent_columns(&self) -> Vec<usize> {
        let diag = self.r.diagonal();
        let largest = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        diag.iter()
            .enumerate()
            .filter(|(_, d)| largest == 0.0 || d.abs() < RANK_TOLERANCE * largest)
            .map(|(i, _)| i)
            .collect()
    }

    /// `Q' y`.
    pub fn qt_mul(&self, y: &DVector<f64>) -> DVector<f64> {
        let n = y.len();
        let mut out = y.clone();
        for (j, v) in self.reflectors.iter().enumerate() {
            let vnorm2 = v.norm_squared();
            if vnorm2 == 0.0 {
                continue;
            }
            let mut seg = out.rows_mut(j, n - j);
            let scale = 2.0 * v.dot(&seg) / vnorm2;
            seg.axpy(-scale, v, 1.0);
        }
        out
    }

    /// Solves `R b = (Q'y)[..k]`.
    pub fn solve(&self, y: &DVector<f64>) -> DVector<f64> {
        let k = self.r.ncols();
        let qty = self.qt_mul(y);
        let rhs = qty.rows(0, k).into_owned();
        back_substitute(&self.r, &rhs)
    }

    /// `(X'X)^{-1} = R^{-1} R^{-T}`.
    pub fn xtx_inverse(&self) -> DMatrix<f64> {
        let k = self.r.ncols();
        let mut rinv = DMatrix::zeros(k, k);
        for c in 0..k {
            let mut e = DVector::zeros(k);
            e[c] = 1.0;
            rinv.set_column(c, &back_substitute(&self.r, &e));
        }
        &rinv * rinv.transpose()
    }
}

fn back_substitute(r: &DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    let k = r.ncols();
    let mut b = DVector::zeros(k);
    for i in (0..k).rev() {
        let mut acc = rhs[i];
        for j in i + 1..k {
            acc -= r[(i, j)] * b[j];
        }
        b[i] = acc / r[(i, i)];
    }
    b
}

#[derive(Debug, Clone)]
pub struct OlsFit {
    pub beta: DVector<f64>,
    pub residuals: DVector<f64>,
    pub xtx_inv: DMatrix<f64>,
}

impl OlsFit {
    pub fn ssr(&self) -> f64 {
        self.residuals.norm_squared()
    }
}

/// Least squares via QR. Fails on `N <= K` or dependent columns.
pub fn ols_matrix(x: &DMatrix<f64>, labels: &[String], y: &DVector<f64>) -> Result<OlsFit> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(Error::LengthMismatch(n, y.len()));
    }
    if n <= k {
        return Err(Error::TooFewObservations { n, k });
    }
    let qr = Qr::new(x);
    let dependent = qr.dependent_columns();
    if !dependent.is_empty() {
        return Err(Error::RankDeficient(
            dependent
                .into_iter()
                .map(|i| labels.get(i).cloned().unwrap_or_else(|| format!("col{i}")))
                .collect(),
        ));
    }
    let beta = qr.solve(y);
    let residuals = y - x * &beta;
    Ok(OlsFit {
        beta,
        residuals,
        xtx_inv: qr.xtx_inverse(),
    })
}

/// Least squares after removing dependent columns one at a time (first
/// flagged column goes first). Returns the kept column indices with the fit.
pub(crate) fn ols_dropping_collinear(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
) -> Result<(Vec<usize>, OlsFit)> {
    let mut kept: Vec<usize> = (0..x.ncols()).collect();
    loop {
        let sub = x.select_columns(&kept);
        let (n, k) = sub.shape();
        if n <= k {
            return Err(Error::TooFewObservations { n, k });
        }
        let qr = Qr::new(&sub);
        match qr.dependent_columns().first() {
            Some(&drop) => {
                kept.remove(drop);
            }
            None => {
                let beta = qr.solve(y);
                let residuals = y - &sub * &beta;
                let fit = OlsFit {
                    beta,
                    residuals,
                    xtx_inv: qr.xtx_inverse(),
                };
                return Ok((kept, fit));
            }
        }
    }
}
