//! Dense linear-algebra helpers. Decompositions go through faer.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

/// Default relative singular-value cutoff for pseudo-inverses.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

fn to_faer(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    to_faer(m).singular_values().expect("svd converges")
}

/// Moore–Penrose pseudo-inverse; singular values below `rank_tol·σ_max` are
/// treated as zero.
pub fn pinv(m: &DMatrix<f64>, rank_tol: f64) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    if m.is_empty() {
        return out;
    }
    let svd = to_faer(m).thin_svd().expect("svd converges");
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
    let smax = (0..s.nrows()).map(|k| s[k]).fold(0.0, f64::max);
    if smax <= 0.0 {
        return out;
    }
    for k in 0..s.nrows() {
        if s[k] > rank_tol * smax {
            for i in 0..m.ncols() {
                for j in 0..m.nrows() {
                    out[(i, j)] += v[(i, k)] * u[(j, k)] / s[k];
                }
            }
        }
    }
    out
}

/// Numerical rank with the relative cutoff `rank_tol·σ_max`.
pub fn rank(m: &DMatrix<f64>, rank_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let s = singular_values(m);
    let smax = s.iter().copied().fold(0.0, f64::max);
    if smax <= 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rank_tol * smax).count()
}

/// Rows of `points` minus `center`.
pub fn centered(points: &DMatrix<f64>, center: &DVector<f64>) -> DMatrix<f64> {
    let mut out = points.clone();
    for mut row in out.row_iter_mut() {
        row -= center.transpose();
    }
    out
}

/// Global sample covariance, divisor n−1, centered at the overall mean.
pub fn global_covariance(data: &Dataset) -> DMatrix<f64> {
    let xc = centered(data.points(), &data.mean());
    xc.transpose() * xc / (data.len() as f64 - 1.0)
}

/// Pooled within-class covariance, divisor n−2.
pub fn pooled_covariance(data: &Dataset) -> Result<DMatrix<f64>> {
    if data.len() < 3 {
        return Err(Error::RankDeficient("pooled covariance needs at least 3 points".into()));
    }
    let mut scatter = DMatrix::zeros(data.dim(), data.dim());
    for label in [Label::Positive, Label::Negative] {
        let idx = data.indices_of(label);
        let rows = data.points().select_rows(idx.iter());
        let xc = centered(&rows, &data.class_mean(label));
        scatter += xc.transpose() * xc;
    }
    Ok(scatter / (data.len() as f64 - 2.0))
}

/// Symmetric inverse square root S^{-1/2} of a positive-definite matrix.
pub fn inverse_sqrt_spd(s: &DMatrix<f64>, rank_tol: f64) -> Result<DMatrix<f64>> {
    let eig = to_faer(s)
        .self_adjoint_eigen(Side::Lower)
        .expect("eigensolver converges");
    let (vecs, vals) = (eig.U(), eig.S().column_vector());
    let n = s.nrows();
    let lmax = (0..n).map(|k| vals[k]).fold(f64::NEG_INFINITY, f64::max);
    if lmax <= 0.0 || (0..n).any(|k| vals[k] <= rank_tol * lmax) {
        return Err(Error::RankDeficient("matrix is not positive definite".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| vecs[(i, k)] * vecs[(j, k)] / vals[k].sqrt()).sum()
    }))
}
