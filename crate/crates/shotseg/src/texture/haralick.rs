//! The fourteen Haralick statistics of one GLCM.
//!
//! Conventions used throughout: natural logarithm with `0 * log 0 = 0`;
//! gray levels enter index-weighted sums as 1-based values (so `i + j`
//! ranges over `2..=2*n_g` and `|i - j|` over `0..n_g`); contrast uses
//! the classical `|i - j| = n` grouping; correlation is 0 when either
//! marginal is degenerate.

use ndarray::Array2;

use crate::linalg::jacobi_eigh;
use crate::texture::Glcm;

/// Threshold under which a marginal spread or entropy counts as zero.
const DEGENERATE_EPS: f64 = 1e-12;

/// The per-block texture descriptor `f1..f14`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextureVector {
    /// Features in order; `f[0]` is f1.
    pub f: [f64; 14],
}

macro_rules! accessors {
    ($($name:ident => $idx:expr),* $(,)?) => {
        impl TextureVector {
            $(pub fn $name(&self) -> f64 { self.f[$idx] })*
        }
    };
}

accessors! {
    f1 => 0, f2 => 1, f3 => 2, f4 => 3, f5 => 4, f6 => 5, f7 => 6,
    f8 => 7, f9 => 8, f10 => 9, f11 => 10, f12 => 11, f13 => 12, f14 => 13,
}

fn xlogx(v: f64) -> f64 {
    if v > 0.0 {
        v * v.ln()
    } else {
        0.0
    }
}

/// Compute all fourteen features of one GLCM.
pub fn texture_vector_for(g: &Glcm) -> TextureVector {
    let n = g.n_g;
    let p = &g.p;

    // Marginal means and spreads over 1-based level values.
    let mut mu_x = 0.0;
    let mut mu_y = 0.0;
    for i in 0..n {
        mu_x += (i + 1) as f64 * g.p_x[i];
        mu_y += (i + 1) as f64 * g.p_y[i];
    }
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for i in 0..n {
        var_x += ((i + 1) as f64 - mu_x).powi(2) * g.p_x[i];
        var_y += ((i + 1) as f64 - mu_y).powi(2) * g.p_y[i];
    }
    let sigma_x = var_x.sqrt();
    let sigma_y = var_y.sqrt();

    // f1 angular second moment, f4 variance, f5 inverse difference
    // moment, f9 entropy, and the ij cross-moment for f3 share a pass.
    let mut f1 = 0.0;
    let mut f4 = 0.0;
    let mut f5 = 0.0;
    let mut f9 = 0.0;
    let mut cross = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = p[[i, j]];
            f1 += v * v;
            f4 += ((i + 1) as f64 - mu_x).powi(2) * v;
            f5 += v / (1.0 + (i as f64 - j as f64).powi(2));
            f9 -= xlogx(v);
            cross += ((i + 1) * (j + 1)) as f64 * v;
        }
    }

    let f3 = if sigma_x * sigma_y < DEGENERATE_EPS {
        0.0
    } else {
        (cross - mu_x * mu_y) / (sigma_x * sigma_y)
    };

    // Sum distribution: f2 (via |i-j|), f6, f7, f8.
    let mut f2 = 0.0;
    let mut f10_mean = 0.0;
    let mut f11 = 0.0;
    for d in 0..n {
        let v = g.p_diff[d];
        f2 += (d * d) as f64 * v;
        f10_mean += d as f64 * v;
        f11 -= xlogx(v);
    }
    let mut f10 = 0.0;
    for d in 0..n {
        f10 += (d as f64 - f10_mean).powi(2) * g.p_diff[d];
    }

    let mut f6 = 0.0;
    let mut f8 = 0.0;
    for s in 0..(2 * n - 1) {
        let v = g.p_sum[s];
        f6 += (s + 2) as f64 * v;
        f8 -= xlogx(v);
    }
    let mut f7 = 0.0;
    for s in 0..(2 * n - 1) {
        f7 += ((s + 2) as f64 - f6).powi(2) * g.p_sum[s];
    }

    // Information measures of correlation.
    let hxy = f9;
    let mut hx = 0.0;
    let mut hy = 0.0;
    for i in 0..n {
        hx -= xlogx(g.p_x[i]);
        hy -= xlogx(g.p_y[i]);
    }
    let mut hxy1 = 0.0;
    let mut hxy2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let marg = g.p_x[i] * g.p_y[j];
            if marg > 0.0 {
                hxy1 -= p[[i, j]] * marg.ln();
                hxy2 -= marg * marg.ln();
            }
        }
    }
    let denom = hx.max(hy);
    let f12 = if denom < DEGENERATE_EPS {
        0.0
    } else {
        (hxy - hxy1) / denom
    };
    let f13 = (1.0 - (-2.0 * (hxy2 - hxy)).exp()).max(0.0).sqrt();

    let f14 = maximal_correlation_coefficient(g);

    TextureVector {
        f: [f1, f2, f3, f4, f5, f6, f7, f8, f9, f10, f11, f12, f13, f14],
    }
}

/// f14: the second largest singular value of
/// `S(i,j) = p(i,j) / sqrt(p_x(i) * p_y(j))` over indices with nonzero
/// marginals.
///
/// The eigenvalues of the classical matrix Q equal the squared singular
/// values of S (Q is similar to the symmetric PSD `S S^T`), so this
/// avoids a nonsymmetric eigensolver. Degenerate matrices with fewer
/// than two occupied levels give 0.
pub fn maximal_correlation_coefficient(g: &Glcm) -> f64 {
    let idx: Vec<usize> = (0..g.n_g)
        .filter(|&i| g.p_x[i] > 0.0 && g.p_y[i] > 0.0)
        .collect();
    let m = idx.len();
    if m < 2 {
        return 0.0;
    }

    let mut s = Array2::<f64>::zeros((m, m));
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            s[[a, b]] = g.p[[i, j]] / (g.p_x[i] * g.p_y[j]).sqrt();
        }
    }
    let sst = s.dot(&s.t());
    let eig = jacobi_eigh(&sst).expect("symmetric PSD matrix of size <= 256");
    eig.eigenvalues[1].clamp(0.0, 1.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::texture::Glcm;
    use ndarray::array;

    #[test]
    fn diagonal_half_half_fixture() {
        let g = Glcm::from_probabilities(array![[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let tv = texture_vector_for(&g);
        assert!((tv.f1() - 0.5).abs() < 1e-12);
        assert_eq!(tv.f2(), 0.0);
        // Levels {1,2}: mu = 1.5, sigma^2 = 0.25, (2.5 - 2.25) / 0.25 = 1.
        assert!((tv.f3() - 1.0).abs() < 1e-12);
        assert!((tv.f5() - 1.0).abs() < 1e-12);
        assert!((tv.f9() - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((tv.f14() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_entry_distribution_is_flat_zero() {
        let mut p = Array2::<f64>::zeros((8, 8));
        p[[3, 3]] = 1.0;
        let g = Glcm::from_probabilities(p).unwrap();
        let tv = texture_vector_for(&g);
        assert_eq!(tv.f1(), 1.0);
        assert_eq!(tv.f2(), 0.0);
        assert_eq!(tv.f3(), 0.0);
        assert_eq!(tv.f8(), 0.0);
        assert_eq!(tv.f9(), 0.0);
        assert_eq!(tv.f10(), 0.0);
        assert_eq!(tv.f11(), 0.0);
        assert_eq!(tv.f12(), 0.0);
        assert_eq!(tv.f13(), 0.0);
        assert_eq!(tv.f14(), 0.0);
    }

    #[test]
    fn antidiagonal_has_negative_correlation() {
        let g = Glcm::from_probabilities(array![[0.0, 0.5], [0.5, 0.0]]).unwrap();
        let tv = texture_vector_for(&g);
        assert!((tv.f3() + 1.0).abs() < 1e-12);
        assert!((tv.f14() - 1.0).abs() < 1e-12);
        assert!((tv.f2() - 1.0).abs() < 1e-12);
    }
}
