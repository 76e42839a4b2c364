//! Small dense linear algebra: symmetric eigendecomposition, k-means,
//! and a positive-definite solve.
//!
//! Everything here operates on matrices no larger than 64x64, which is
//! why a cyclic Jacobi sweep (robust, branch-free convergence) beats
//! pulling in a LAPACK binding.

mod eigen;
mod kmeans;

pub use eigen::{jacobi_eigh, SymEigen};
pub use kmeans::{kmeans, KMeansResult};

use ndarray::Array2;

use crate::error::{Error, Result};

/// Solve `A X = B` for symmetric positive-definite `A` via Cholesky.
///
/// `B` may have any number of columns; the result has the same shape.
pub fn spd_solve(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n, "A must be square");
    assert_eq!(b.nrows(), n, "B row count must match A");

    // Lower-triangular factor, column by column.
    let mut l = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut diag = a[[j, j]];
        for k in 0..j {
            diag -= l[[j, k]] * l[[j, k]];
        }
        if diag <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        let dsqrt = diag.sqrt();
        l[[j, j]] = dsqrt;
        for i in (j + 1)..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = s / dsqrt;
        }
    }

    // L y = b, then L^T x = y, one RHS column at a time.
    let mut x = b.clone();
    for col in 0..b.ncols() {
        for i in 0..n {
            let mut s = x[[i, col]];
            for k in 0..i {
                s -= l[[i, k]] * x[[k, col]];
            }
            x[[i, col]] = s / l[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = x[[i, col]];
            for k in (i + 1)..n {
                s -= l[[k, i]] * x[[k, col]];
            }
            x[[i, col]] = s / l[[i, i]];
        }
    }
    Ok(x)
}

/// Solve `A X = B` for symmetric `A` that is positive definite up to
/// rounding, via LDL^T with pivots floored at `floor`.
///
/// Scatter matrices assembled from large raw moments can carry
/// cancellation noise that makes a mathematically PSD matrix slightly
/// indefinite; flooring the pivots solves a nearby PD system instead
/// of failing. `floor` must be positive.
pub fn solve_spd_floored(a: &Array2<f64>, b: &Array2<f64>, floor: f64) -> Array2<f64> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n, "A must be square");
    assert_eq!(b.nrows(), n, "B row count must match A");
    assert!(floor > 0.0);

    // Unit lower-triangular L and diagonal d.
    let mut l = Array2::<f64>::eye(n);
    let mut d = vec![0.0f64; n];
    for j in 0..n {
        let mut dj = a[[j, j]];
        for k in 0..j {
            dj -= l[[j, k]] * l[[j, k]] * d[k];
        }
        d[j] = dj.max(floor);
        for i in (j + 1)..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]] * d[k];
            }
            l[[i, j]] = s / d[j];
        }
    }

    let mut x = b.clone();
    for col in 0..b.ncols() {
        for i in 0..n {
            for k in 0..i {
                let t = l[[i, k]] * x[[k, col]];
                x[[i, col]] -= t;
            }
        }
        for i in 0..n {
            x[[i, col]] /= d[i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let t = l[[k, i]] * x[[k, col]];
                x[[i, col]] -= t;
            }
        }
    }
    x
}
