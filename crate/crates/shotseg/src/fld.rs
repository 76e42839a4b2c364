//! Two-directional Fisher discriminant criterion between two classes
//! of equally-sized matrices.
//!
//! Each frame subsequence is a class of k x 14 representative matrices.
//! Scatter is measured in both matrix directions: column scatters are
//! d x d sums of `(A - M)^T (A - M)`, row scatters k x k sums of
//! `(A - M)(A - M)^T`. Per direction the score is the classical
//! multi-discriminant trace ratio `trace((S_w + eps I)^{-1} S_b)`, and
//! the criterion is the sum of the two directions. The ridge keeps
//! single-sample classes (zero within-class scatter) well defined.

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::linalg::solve_spd_floored;

/// Relative ridge applied to the within-class scatter.
pub const EPS_REL: f64 = 1e-6;
/// Absolute ridge floor.
pub const EPS_ABS: f64 = 1e-12;

/// One class of samples: the representative matrices of a frame
/// subsequence. All samples share dimensions.
#[derive(Debug, Clone)]
pub struct MatrixClass {
    samples: Vec<Array2<f64>>,
}

impl MatrixClass {
    pub fn new(samples: Vec<Array2<f64>>) -> Result<MatrixClass> {
        let first = samples.first().ok_or(Error::EmptyClass)?;
        let (k, d) = (first.nrows(), first.ncols());
        for s in &samples {
            if s.nrows() != k || s.ncols() != d {
                return Err(Error::DimensionMismatch(k, d, s.nrows(), s.ncols()));
            }
        }
        Ok(MatrixClass { samples })
    }

    pub fn samples(&self) -> &[Array2<f64>] {
        &self.samples
    }
}

/// Additive scatter summary of a set of matrices: sample count, sum,
/// and both raw second moments. Summaries of adjacent frame ranges
/// combine by plain addition, which is what makes the segmenter's
/// split search cheap.
#[derive(Debug, Clone)]
pub struct ClassSummary {
    pub n: usize,
    /// Elementwise sum of the samples (k x d).
    pub sum: Array2<f64>,
    /// Sum of `A^T A` over samples (d x d).
    pub sq_col: Array2<f64>,
    /// Sum of `A A^T` over samples (k x k).
    pub sq_row: Array2<f64>,
}

impl ClassSummary {
    pub fn zero(k: usize, d: usize) -> ClassSummary {
        ClassSummary {
            n: 0,
            sum: Array2::zeros((k, d)),
            sq_col: Array2::zeros((d, d)),
            sq_row: Array2::zeros((k, k)),
        }
    }

    pub fn add_sample(&mut self, a: ArrayView2<'_, f64>) {
        self.n += 1;
        self.sum += &a;
        self.sq_col += &a.t().dot(&a);
        self.sq_row += &a.dot(&a.t());
    }

    pub fn from_samples<'a, I>(samples: I, k: usize, d: usize) -> ClassSummary
    where
        I: IntoIterator<Item = ArrayView2<'a, f64>>,
    {
        let mut s = ClassSummary::zero(k, d);
        for a in samples {
            s.add_sample(a);
        }
        s
    }

    pub fn combined(&self, other: &ClassSummary) -> ClassSummary {
        ClassSummary {
            n: self.n + other.n,
            sum: &self.sum + &other.sum,
            sq_col: &self.sq_col + &other.sq_col,
            sq_row: &self.sq_row + &other.sq_row,
        }
    }

    /// Difference of two prefix summaries; `self` must cover `prefix`.
    pub fn minus(&self, prefix: &ClassSummary) -> ClassSummary {
        ClassSummary {
            n: self.n - prefix.n,
            sum: &self.sum - &prefix.sum,
            sq_col: &self.sq_col - &prefix.sq_col,
            sq_row: &self.sq_row - &prefix.sq_row,
        }
    }

    fn mean(&self) -> Array2<f64> {
        &self.sum / self.n as f64
    }
}

/// The two-directional criterion and its per-direction parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionValue {
    pub j: f64,
    pub j_row: f64,
    pub j_col: f64,
}

/// Criterion between two sample classes with the production ridge.
pub fn criterion_j(class1: &MatrixClass, class2: &MatrixClass) -> Result<CriterionValue> {
    let a = class1.samples.first().ok_or(Error::EmptyClass)?;
    let b = class2.samples.first().ok_or(Error::EmptyClass)?;
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch(
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
        ));
    }
    let (k, d) = (a.nrows(), a.ncols());
    let s1 = ClassSummary::from_samples(class1.samples.iter().map(|m| m.view()), k, d);
    let s2 = ClassSummary::from_samples(class2.samples.iter().map(|m| m.view()), k, d);
    criterion_j_summaries(&s1, &s2, EPS_REL, EPS_ABS)
}

/// How the within-class scatter enters the trace ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WithinScatter {
    /// Raw scatter sums, as in the classical criterion definition.
    Raw,
    /// Each class's scatter divided by its sample count before summing.
    ///
    /// Raw scatter grows linearly with the number of samples, which
    /// makes the criterion systematically larger for smaller classes of
    /// identical content (J ~ 1/n); comparisons between candidate
    /// segmentations of different lengths then reward shaving off tiny
    /// pieces. Averaging per class keeps the denominator an estimate of
    /// spread, independent of segment length, while the between-class
    /// term still weighs sample counts.
    PerClassMean,
}

/// Criterion from precomputed scatter summaries, with an explicit
/// ridge. Production callers pass [`EPS_REL`] / [`EPS_ABS`]; tests can
/// drive the ridge toward zero to check limits.
pub fn criterion_j_summaries(
    s1: &ClassSummary,
    s2: &ClassSummary,
    eps_rel: f64,
    eps_abs: f64,
) -> Result<CriterionValue> {
    criterion_impl(s1, s2, eps_rel, eps_abs, WithinScatter::Raw)
}

/// The criterion with the within-class scatter averaged per class;
/// this is the form the segmenter compares across candidate splits and
/// merges, where the two sides have different lengths.
pub fn criterion_j_balanced(
    s1: &ClassSummary,
    s2: &ClassSummary,
    eps_rel: f64,
    eps_abs: f64,
) -> Result<CriterionValue> {
    criterion_impl(s1, s2, eps_rel, eps_abs, WithinScatter::PerClassMean)
}

fn criterion_impl(
    s1: &ClassSummary,
    s2: &ClassSummary,
    eps_rel: f64,
    eps_abs: f64,
    within: WithinScatter,
) -> Result<CriterionValue> {
    if s1.n == 0 || s2.n == 0 {
        return Err(Error::EmptyClass);
    }
    let (n1, n2) = (s1.n as f64, s2.n as f64);
    let m1 = s1.mean();
    let m2 = s2.mean();
    let m = (&s1.sum + &s2.sum) / (n1 + n2);

    // Per-class scatter from raw moments: sum(A^T A) - n M^T M.
    let (w1, w2) = match within {
        WithinScatter::Raw => (1.0, 1.0),
        WithinScatter::PerClassMean => (1.0 / n1, 1.0 / n2),
    };
    let sw_col = (&s1.sq_col - &m1.t().dot(&m1) * n1) * w1
        + (&s2.sq_col - &m2.t().dot(&m2) * n2) * w2;
    let sw_row =
        (&s1.sq_row - &m1.dot(&m1.t()) * n1) * w1 + (&s2.sq_row - &m2.dot(&m2.t()) * n2) * w2;

    let d1c = &m1 - &m;
    let d2c = &m2 - &m;
    let sb_col = &d1c.t().dot(&d1c) * n1 + &d2c.t().dot(&d2c) * n2;
    let sb_row = &d1c.dot(&d1c.t()) * n1 + &d2c.dot(&d2c.t()) * n2;

    let j_col = trace_ratio(&sw_col, &sb_col, eps_rel, eps_abs);
    let j_row = trace_ratio(&sw_row, &sb_row, eps_rel, eps_abs);
    Ok(CriterionValue {
        j: j_row + j_col,
        j_row,
        j_col,
    })
}

fn trace_ratio(sw: &Array2<f64>, sb: &Array2<f64>, eps_rel: f64, eps_abs: f64) -> f64 {
    let dim = sw.nrows();
    let trace_sw: f64 = (0..dim).map(|i| sw[[i, i]]).sum();
    let eps = eps_rel * trace_sw.max(0.0) / dim as f64 + eps_abs;
    let mut ridged = sw.clone();
    for i in 0..dim {
        ridged[[i, i]] += eps;
    }
    // Raw-moment assembly can leave a degenerate S_w slightly
    // indefinite, so the solve floors its pivots instead of failing.
    let floor = eps.max(f64::MIN_POSITIVE);
    let x = solve_spd_floored(&ridged, sb, floor);
    let t: f64 = (0..dim).map(|i| x[[i, i]]).sum();
    // S_b is PSD and the ridged S_w is PD, so the exact trace is >= 0;
    // clamp rounding noise.
    t.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spd_solve;
    use ndarray::{arr2, Array2};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn scalar_class(values: &[f64]) -> MatrixClass {
        MatrixClass::new(values.iter().map(|&v| arr2(&[[v]])).collect()).unwrap()
    }

    fn random_matrix(rng: &mut impl Rng, k: usize, d: usize, scale: f64) -> Array2<f64> {
        let mut a = Array2::<f64>::zeros((k, d));
        for v in a.iter_mut() {
            *v = (rng.gen::<f64>() - 0.5) * scale;
        }
        a
    }

    /// Straight transcription of the scatter definitions, kept
    /// independent of the summary algebra used in production.
    fn criterion_direct(c1: &[Array2<f64>], c2: &[Array2<f64>], eps_rel: f64, eps_abs: f64) -> f64 {
        let (k, d) = (c1[0].nrows(), c1[0].ncols());
        let (n1, n2) = (c1.len() as f64, c2.len() as f64);
        let mean_of = |c: &[Array2<f64>]| {
            let mut m = Array2::<f64>::zeros((k, d));
            for a in c {
                m += a;
            }
            m / c.len() as f64
        };
        let m1 = mean_of(c1);
        let m2 = mean_of(c2);
        let m = (&m1 * n1 + &m2 * n2) / (n1 + n2);

        let mut sw_col = Array2::<f64>::zeros((d, d));
        let mut sw_row = Array2::<f64>::zeros((k, k));
        for (class, mc) in [(c1, &m1), (c2, &m2)] {
            for a in class {
                let c = a - mc;
                sw_col += &c.t().dot(&c);
                sw_row += &c.dot(&c.t());
            }
        }
        let mut sb_col = Array2::<f64>::zeros((d, d));
        let mut sb_row = Array2::<f64>::zeros((k, k));
        for (nc, mc) in [(n1, &m1), (n2, &m2)] {
            let c = mc - &m;
            sb_col += &(c.t().dot(&c) * nc);
            sb_row += &(c.dot(&c.t()) * nc);
        }

        let ratio = |sw: &Array2<f64>, sb: &Array2<f64>| {
            let dim = sw.nrows();
            let tr: f64 = (0..dim).map(|i| sw[[i, i]]).sum();
            let eps = eps_rel * tr.max(0.0) / dim as f64 + eps_abs;
            let mut r = sw.clone();
            for i in 0..dim {
                r[[i, i]] += eps;
            }
            let x = spd_solve(&r, sb).unwrap();
            (0..dim).map(|i| x[[i, i]]).sum::<f64>()
        };
        ratio(&sw_col, &sb_col) + ratio(&sw_row, &sb_row)
    }

    #[test]
    fn scalar_example_limit_is_eight() {
        // M1 = 1, M2 = 5, M = 3; S_b = 2*4 + 2*4 = 16, S_w = 4 per
        // direction, so J -> 16/4 + 16/4 = 8 as the ridge vanishes.
        let c1 = scalar_class(&[0.0, 2.0]);
        let c2 = scalar_class(&[4.0, 6.0]);
        let s1 = ClassSummary::from_samples(c1.samples().iter().map(|m| m.view()), 1, 1);
        let s2 = ClassSummary::from_samples(c2.samples().iter().map(|m| m.view()), 1, 1);
        let v = criterion_j_summaries(&s1, &s2, 0.0, 0.0).unwrap();
        assert!((v.j - 8.0).abs() <= 1e-6, "J = {}", v.j);
        assert!((v.j_row - v.j_col).abs() <= 1e-9);

        // The production ridge perturbs J only at the 1e-6 relative level.
        let prod = criterion_j(&c1, &c2).unwrap();
        assert!((prod.j - 8.0).abs() <= 1e-4);
    }

    #[test]
    fn equal_classes_give_zero() {
        let c1 = scalar_class(&[1.0, 3.0]);
        let v = criterion_j(&c1, &c1.clone()).unwrap();
        assert_eq!(v.j, 0.0);
    }

    #[test]
    fn label_swap_symmetric() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let c1 = MatrixClass::new((0..3).map(|_| random_matrix(&mut rng, 4, 5, 2.0)).collect())
            .unwrap();
        let c2 = MatrixClass::new((0..5).map(|_| random_matrix(&mut rng, 4, 5, 2.0)).collect())
            .unwrap();
        let a = criterion_j(&c1, &c2).unwrap();
        let b = criterion_j(&c2, &c1).unwrap();
        assert_eq!(a.j.to_bits(), b.j.to_bits());
    }

    #[test]
    fn translation_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let shift = random_matrix(&mut rng, 3, 4, 10.0);
        let c1: Vec<Array2<f64>> = (0..4).map(|_| random_matrix(&mut rng, 3, 4, 1.0)).collect();
        let c2: Vec<Array2<f64>> = (0..4)
            .map(|_| random_matrix(&mut rng, 3, 4, 1.0) + 3.0)
            .collect();
        let base = criterion_j(
            &MatrixClass::new(c1.clone()).unwrap(),
            &MatrixClass::new(c2.clone()).unwrap(),
        )
        .unwrap();
        let moved = criterion_j(
            &MatrixClass::new(c1.iter().map(|a| a + &shift).collect()).unwrap(),
            &MatrixClass::new(c2.iter().map(|a| a + &shift).collect()).unwrap(),
        )
        .unwrap();
        assert!((base.j - moved.j).abs() <= 1e-9 * base.j.abs().max(1.0));
    }

    #[test]
    fn singleton_classes_finite() {
        let c1 = scalar_class(&[1.0]);
        let c2 = scalar_class(&[2.0]);
        let v = criterion_j(&c1, &c2).unwrap();
        assert!(v.j.is_finite());
        assert!(v.j > 0.0);
    }

    #[test]
    fn separation_is_monotone_on_scalar_family() {
        // Fixed spread, growing mean gap: J must strictly increase.
        let mut last = -1.0;
        for gap in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let c1 = scalar_class(&[-1.0, 1.0]);
            let c2 = scalar_class(&[gap - 1.0, gap + 1.0]);
            let v = criterion_j(&c1, &c2).unwrap();
            assert!(v.j > last, "J({gap}) = {} not > {last}", v.j);
            last = v.j;
        }
    }

    #[test]
    fn matches_direct_transcription() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let k = rng.gen_range(1..6);
            let d = rng.gen_range(1..8);
            let c1: Vec<Array2<f64>> = (0..rng.gen_range(1..6))
                .map(|_| random_matrix(&mut rng, k, d, 3.0))
                .collect();
            let c2: Vec<Array2<f64>> = (0..rng.gen_range(1..6))
                .map(|_| random_matrix(&mut rng, k, d, 3.0) + 1.0)
                .collect();
            let via_summaries = criterion_j(
                &MatrixClass::new(c1.clone()).unwrap(),
                &MatrixClass::new(c2.clone()).unwrap(),
            )
            .unwrap();
            let direct = criterion_direct(&c1, &c2, EPS_REL, EPS_ABS);
            assert!(
                (via_summaries.j - direct).abs() <= 1e-9 * direct.abs().max(1.0),
                "{} vs {direct}",
                via_summaries.j
            );
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let c1 = MatrixClass::new(vec![Array2::zeros((2, 3))]).unwrap();
        let c2 = MatrixClass::new(vec![Array2::zeros((3, 2))]).unwrap();
        assert!(matches!(
            criterion_j(&c1, &c2),
            Err(Error::DimensionMismatch(2, 3, 3, 2))
        ));
        assert!(matches!(MatrixClass::new(vec![]), Err(Error::EmptyClass)));
    }
}
