//! Cyclic Jacobi eigendecomposition for real symmetric matrices.

use ndarray::Array2;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a symmetric matrix.
///
/// Eigenvalues are sorted descending; `eigenvectors` holds the matching
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Array2<f64>,
}

/// Diagonalize `a` with cyclic Jacobi rotations.
///
/// The input is symmetrized as `(A + A^T)/2` first, so mild asymmetry
/// from accumulated rounding is tolerated. Rotations run until the
/// off-diagonal Frobenius norm drops below `1e-12 * ||A||_F`, erroring
/// after 100 sweeps (unreachable for the sizes used here).
pub fn jacobi_eigh(a: &Array2<f64>) -> Result<SymEigen> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n, "matrix must be square");

    let mut m = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = 0.5 * (a[[i, j]] + a[[j, i]]);
        }
    }

    let norm = m.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut v = Array2::<f64>::eye(n);

    if n <= 1 || norm == 0.0 {
        return Ok(sorted(m, v, n));
    }
    let tol = 1e-12 * norm;

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m, n);
        if off < tol {
            return Ok(sorted(m, v, n));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle that annihilates m[p][q].
                let theta = 0.5 * (m[[q, q]] - m[[p, p]]) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }

    if off_diagonal_norm(&m, n) < tol {
        return Ok(sorted(m, v, n));
    }
    Err(Error::EigenNonConvergence(MAX_SWEEPS))
}

fn off_diagonal_norm(m: &Array2<f64>, n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[[i, j]] * m[[i, j]];
            }
        }
    }
    s.sqrt()
}

fn sorted(m: Array2<f64>, v: Array2<f64>, n: usize) -> SymEigen {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[[j, j]].total_cmp(&m[[i, i]]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[[i, i]]).collect();
    let mut eigenvectors = Array2::<f64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[[row, dst]] = v[[row, src]];
        }
    }
    SymEigen {
        eigenvalues,
        eigenvectors,
    }
}
