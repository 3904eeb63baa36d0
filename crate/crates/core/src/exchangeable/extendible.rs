use nalgebra::{DMatrix, DVector};

use super::UVector;
use crate::error::{ensure_param, Result};

/// Default number of grid atoms on `[0, 1]`.
pub const DEFAULT_GRID: usize = 4001;
/// Largest allowed moment mismatch `|E W^i (1-W)^(n-i) - u_i|`.
pub const MOMENT_TOL: f64 = 1e-6;

/// Decides whether some mixing law supported on `grid` equally spaced points
/// of `[0, 1]` reproduces `u` to within [`MOMENT_TOL`] in every entry.
///
/// The grid weights are fitted by nonnegative least squares; the law is
/// accepted when the fitted residual is below tolerance in sup norm. The
/// constraint `sum p = 1` is implied by the entries of `u`.
pub fn extendible_check(u: &UVector, grid: usize) -> Result<bool> {
    ensure_param!(grid >= 1000, "grid must have at least 1000 points, got {grid}");
    let n = u.n();
    let a = DMatrix::from_fn(n + 1, grid, |i, j| {
        let w = j as f64 / (grid - 1) as f64;
        w.powi(i as i32) * (1.0 - w).powi((n - i) as i32)
    });
    let b = DVector::from_column_slice(u.u());
    let p = nnls(&a, &b, 10 * grid);
    let residual = &a * &p - &b;
    Ok(residual.amax() <= MOMENT_TOL)
}

/// Lawson-Hanson active-set solver for `min ||A x - b||` subject to `x >= 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> DVector<f64> {
    let cols = a.ncols();
    let tol = 1e-14 * a.amax().max(1.0) * b.amax().max(1.0);
    let mut x = DVector::zeros(cols);
    let mut passive = vec![false; cols];
    let mut iter = 0;
    loop {
        let grad = a.tr_mul(&(b - a * &x));
        let candidate = (0..cols)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| grad[i].total_cmp(&grad[j]));
        let j = match candidate {
            Some(j) if grad[j] > tol => j,
            _ => return x,
        };
        passive[j] = true;
        loop {
            iter += 1;
            if iter > max_iter {
                return x;
            }
            let idx: Vec<usize> = (0..cols).filter(|&k| passive[k]).collect();
            let sub = a.select_columns(&idx);
            let s = match sub.clone().svd(true, true).solve(b, 1e-15) {
                Ok(s) => s,
                Err(_) => return x,
            };
            if s.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (k, &c) in idx.iter().enumerate() {
                    x[c] = s[k];
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (k, &c) in idx.iter().enumerate() {
                if s[k] <= 0.0 {
                    alpha = alpha.min(x[c] / (x[c] - s[k]));
                }
            }
            for (k, &c) in idx.iter().enumerate() {
                x[c] += alpha * (s[k] - x[c]);
                if x[c] <= tol {
                    x[c] = 0.0;
                    passive[c] = false;
                }
            }
        }
    }
}
