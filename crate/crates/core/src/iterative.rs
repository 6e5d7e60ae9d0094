//! Matrix splittings and the stationary iteration they define.
//!
//! A [`Splitting`] writes `A = A1 + A2` with `A1` cheap to invert. The
//! iteration `A1 x_m = b - A2 x_{m-1}` has iteration matrix
//! `S = -A1^{-1} A2`, and the error obeys `x_m - x = S (x_{m-1} - x)`.

use serde::{Deserialize, Serialize};

use crate::complex::{ComplexScalar, EPS_ZERO};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector, LuFactors, Triangle, PIVOT_REL_TOL};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 100_000;
/// Divergence is declared once an update exceeds this factor times `1 + ||b||`.
pub const DIVERGENCE_FACTOR: f64 = 1e12;
/// Number of trailing error ratios averaged by [`observed_rate`].
pub const RATE_WINDOW: usize = 20;
/// Iterates retained in a trace; later steps keep only their norms.
pub const MAX_STORED_ITERATES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplittingKind {
    Jacobi,
    GaussSeidel,
    Custom,
}

#[derive(Debug, Clone)]
pub struct Splitting {
    a1: DenseMatrix,
    a2: DenseMatrix,
    kind: SplittingKind,
    // Factorization of A1 for custom splittings.
    a1_lu: Option<LuFactors>,
}

fn check_diagonal(a: &DenseMatrix) -> Result<usize> {
    let n = a.require_square("splitting")?;
    let threshold = PIVOT_REL_TOL * a.max_abs();
    for i in 0..n {
        let m = a[(i, i)].cmod();
        if m <= threshold || m == 0.0 {
            return Err(Error::ZeroDiagonal(i));
        }
    }
    Ok(n)
}

impl Splitting {
    /// `A1 = diag(A)`, `A2 = A - diag(A)`.
    pub fn jacobi(a: &DenseMatrix) -> Result<Self> {
        let n = check_diagonal(a)?;
        let a1 = DenseMatrix::from_fn(n, n, |i, j| if i == j { a[(i, j)] } else { ComplexScalar::ZERO });
        let a2 = DenseMatrix::from_fn(n, n, |i, j| if i != j { a[(i, j)] } else { ComplexScalar::ZERO });
        Ok(Self { a1, a2, kind: SplittingKind::Jacobi, a1_lu: None })
    }

    /// `A1` = lower triangle including the diagonal, `A2` = strict upper triangle.
    pub fn gauss_seidel(a: &DenseMatrix) -> Result<Self> {
        let n = check_diagonal(a)?;
        let a1 = DenseMatrix::from_fn(n, n, |i, j| if i >= j { a[(i, j)] } else { ComplexScalar::ZERO });
        let a2 = DenseMatrix::from_fn(n, n, |i, j| if i < j { a[(i, j)] } else { ComplexScalar::ZERO });
        Ok(Self { a1, a2, kind: SplittingKind::GaussSeidel, a1_lu: None })
    }

    /// Arbitrary `A = A1 + A2`; `A1` must admit an LU factorization.
    pub fn custom(a1: DenseMatrix, a2: DenseMatrix) -> Result<Self> {
        let n = a1.require_square("splitting")?;
        if a2.rows() != n || a2.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A1 is {n}x{n} but A2 is {}x{}",
                a2.rows(),
                a2.cols()
            )));
        }
        let lu = LuFactors::factor(&a1)?;
        Ok(Self { a1, a2, kind: SplittingKind::Custom, a1_lu: Some(lu) })
    }

    pub fn a1(&self) -> &DenseMatrix {
        &self.a1
    }

    pub fn a2(&self) -> &DenseMatrix {
        &self.a2
    }

    pub fn kind(&self) -> SplittingKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.a1.rows()
    }

    /// `A1 + A2`.
    pub fn reconstruct(&self) -> DenseMatrix {
        self.a1.add(&self.a2).expect("splitting halves share a shape")
    }

    /// Solves `A1 y = rhs`.
    pub fn solve_a1(&self, rhs: &DenseVector) -> Result<DenseVector> {
        match &self.a1_lu {
            Some(lu) => lu.solve(rhs),
            // Jacobi and Gauss-Seidel A1 are both lower triangular.
            None => self.a1.triangular_solve(rhs, Triangle::Lower),
        }
    }
}

/// `S = -A1^{-1} A2`, solved column by column from `A1 S = -A2`.
pub fn iteration_matrix(s: &Splitting) -> Result<DenseMatrix> {
    let n = s.dim();
    let rhs = s.a2.negate();
    let mut out = DenseMatrix::zeros(n, n);
    for j in 0..n {
        out.set_column(j, &s.solve_a1(&rhs.column(j))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateOptions {
    pub max_iters: usize,
    pub tol: f64,
    /// Absolute update-norm threshold; `None` means `DIVERGENCE_FACTOR * (1 + ||b||)`.
    pub divergence_threshold: Option<f64>,
}

impl Default for IterateOptions {
    fn default() -> Self {
        Self { max_iters: DEFAULT_MAX_ITERS, tol: DEFAULT_TOL, divergence_threshold: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceStatus {
    ReachedTol,
    MaxIters,
    Diverged,
}

/// Record of one run of the iteration.
///
/// `update_norms[m - 1] = ||x_m - x_{m-1}||` for `m = 1..=iterations`;
/// `error_norms[m] = ||x_m - x_ref||` for `m = 0..=iterations` when a
/// reference solution was supplied. `iterates` holds `x_0, x_1, ...` up to
/// [`MAX_STORED_ITERATES`] vectors.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub iterates: Vec<DenseVector>,
    pub error_norms: Option<Vec<f64>>,
    pub update_norms: Vec<f64>,
    pub status: TraceStatus,
    pub iterations: usize,
    pub final_iterate: DenseVector,
}

impl IterationTrace {
    pub fn final_update_norm(&self) -> Option<f64> {
        self.update_norms.last().copied()
    }

    pub fn final_error_norm(&self) -> Option<f64> {
        self.error_norms.as_ref().and_then(|e| e.last().copied())
    }
}

/// Runs `A1 x_m = b - A2 x_{m-1}` from `x0`.
///
/// Stops when `||x_m - x_{m-1}|| <= tol (1 + ||x_m||)` (status
/// `ReachedTol`), when an update exceeds the divergence threshold or becomes
/// non-finite (`Diverged`), or after `max_iters` steps (`MaxIters`). At least
/// one step is always taken.
pub fn iterate(
    s: &Splitting,
    b: &DenseVector,
    x0: &DenseVector,
    opts: &IterateOptions,
    x_ref: Option<&DenseVector>,
) -> Result<IterationTrace> {
    let n = s.dim();
    for (what, v) in [("b", Some(b)), ("x0", Some(x0)), ("x_ref", x_ref)] {
        if let Some(v) = v {
            if v.dim() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{what} has length {}, system has dimension {n}",
                    v.dim()
                )));
            }
        }
    }
    let threshold = opts.divergence_threshold.unwrap_or(DIVERGENCE_FACTOR * (1.0 + b.norm2()));

    let mut x = x0.clone();
    let mut iterates = vec![x.clone()];
    let mut error_norms = x_ref.map(|r| vec![x.sub(r).expect("checked dims").norm2()]);
    let mut update_norms = Vec::new();
    let mut status = TraceStatus::MaxIters;

    for _ in 0..opts.max_iters.max(1) {
        let rhs = b.sub(&s.a2.matvec(&x)?)?;
        let next = s.solve_a1(&rhs)?;
        let update = next.sub(&x)?.norm2();
        update_norms.push(update);
        if let (Some(errs), Some(r)) = (error_norms.as_mut(), x_ref) {
            errs.push(next.sub(r)?.norm2());
        }
        x = next;
        if iterates.len() < MAX_STORED_ITERATES {
            iterates.push(x.clone());
        }
        if !update.is_finite() || update > threshold {
            status = TraceStatus::Diverged;
            break;
        }
        if update <= opts.tol * (1.0 + x.norm2()) {
            status = TraceStatus::ReachedTol;
            break;
        }
    }

    Ok(IterationTrace {
        iterations: update_norms.len(),
        iterates,
        error_norms,
        update_norms,
        status,
        final_iterate: x,
    })
}

/// Geometric mean of `e_{m+1} / e_m` over the last [`RATE_WINDOW`] error
/// ratios of a trace.
pub fn observed_rate(trace: &IterationTrace) -> Result<f64> {
    let errs = trace
        .error_norms
        .as_ref()
        .ok_or_else(|| Error::InsufficientData("trace has no reference solution".into()))?;
    observed_rate_from_errors(errs)
}

pub fn observed_rate_from_errors(errs: &[f64]) -> Result<f64> {
    if errs.len() < RATE_WINDOW + 1 {
        return Err(Error::InsufficientData(format!(
            "need {} error norms, trace has {}",
            RATE_WINDOW + 1,
            errs.len()
        )));
    }
    let tail = &errs[errs.len() - RATE_WINDOW - 1..];
    if let Some(e) = tail.iter().find(|&&e| !(e > EPS_ZERO) || !e.is_finite()) {
        return Err(Error::InsufficientData(format!("error norm {e:e} in the rate window is at the noise floor")));
    }
    let log_sum: f64 = tail.windows(2).map(|w| (w[1] / w[0]).ln()).sum();
    Ok((log_sum / RATE_WINDOW as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{RealMatrix, RealVector};

    fn real(rows: &[&[f64]]) -> DenseMatrix {
        RealMatrix::from_rows(rows).unwrap().embed()
    }

    fn rvec(v: &[f64]) -> DenseVector {
        RealVector::new(v.to_vec()).unwrap().embed()
    }

    fn assert_mat_close(a: &DenseMatrix, b: &DenseMatrix, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((*x - *y).cmod() <= tol, "{x} vs {y}");
        }
    }

    #[test]
    fn jacobi_selection() {
        let a = real(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let s = Splitting::jacobi(&a).unwrap();
        assert_eq!(*s.a1(), real(&[&[2.0, 0.0], &[0.0, 2.0]]));
        assert_eq!(*s.a2(), real(&[&[0.0, -1.0], &[-1.0, 0.0]]));
        assert_eq!(s.kind(), SplittingKind::Jacobi);

        let d = real(&[&[3.0, 0.0], &[0.0, -1.0]]);
        assert!(Splitting::jacobi(&d).unwrap().a2().data().iter().all(|z| *z == ComplexScalar::ZERO));
    }

    #[test]
    fn gauss_seidel_selection() {
        let a = real(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let s = Splitting::gauss_seidel(&a).unwrap();
        assert_eq!(*s.a1(), real(&[&[2.0, 0.0], &[-1.0, 2.0]]));
        assert_eq!(*s.a2(), real(&[&[0.0, -1.0], &[0.0, 0.0]]));

        let u = real(&[&[1.0, 2.0, 3.0], &[0.0, 4.0, 5.0], &[0.0, 0.0, 6.0]]);
        let s = Splitting::gauss_seidel(&u).unwrap();
        assert_eq!(*s.a1(), real(&[&[1.0, 0.0, 0.0], &[0.0, 4.0, 0.0], &[0.0, 0.0, 6.0]]));
        assert_eq!(*s.a2(), real(&[&[0.0, 2.0, 3.0], &[0.0, 0.0, 5.0], &[0.0, 0.0, 0.0]]));
    }

    #[test]
    fn zero_diagonal_is_rejected() {
        let a = real(&[&[1.0, 2.0], &[3.0, 0.0]]);
        assert_eq!(Splitting::jacobi(&a).unwrap_err(), Error::ZeroDiagonal(1));
        assert_eq!(Splitting::gauss_seidel(&a).unwrap_err(), Error::ZeroDiagonal(1));
        assert!(Splitting::jacobi(&DenseMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn custom_requires_invertible_a1() {
        let a1 = real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(matches!(
            Splitting::custom(a1, DenseMatrix::zeros(2, 2)),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(Splitting::custom(DenseMatrix::identity(2), DenseMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn iteration_matrices_by_hand() {
        let a = real(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let sj = iteration_matrix(&Splitting::jacobi(&a).unwrap()).unwrap();
        assert_mat_close(&sj, &real(&[&[0.0, 0.5], &[0.5, 0.0]]), 0.0);
        let sgs = iteration_matrix(&Splitting::gauss_seidel(&a).unwrap()).unwrap();
        assert_mat_close(&sgs, &real(&[&[0.0, 0.5], &[0.0, 0.25]]), 0.0);

        // Custom with A1 = diag reproduces Jacobi.
        let custom = Splitting::custom(real(&[&[2.0, 0.0], &[0.0, 2.0]]), real(&[&[0.0, -1.0], &[-1.0, 0.0]])).unwrap();
        assert_mat_close(&iteration_matrix(&custom).unwrap(), &sj, 1e-15);
    }

    #[test]
    fn fixed_point_stops_after_one_step() {
        let a = real(&[&[4.0, 1.0], &[1.0, 3.0]]);
        let x = rvec(&[1.0, -2.0]);
        let b = a.matvec(&x).unwrap();
        let s = Splitting::jacobi(&a).unwrap();
        let trace = iterate(&s, &b, &x, &IterateOptions::default(), Some(&x)).unwrap();
        assert_eq!(trace.status, TraceStatus::ReachedTol);
        assert_eq!(trace.iterations, 1);
        assert_eq!(trace.iterates.len(), 2);
        assert!(trace.error_norms.unwrap().iter().all(|&e| e <= 1e-15));
    }

    #[test]
    fn jacobi_two_by_two_converges_at_half() {
        let a = real(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let b = rvec(&[1.0, 1.0]);
        let exact = rvec(&[1.0, 1.0]);
        let s = Splitting::jacobi(&a).unwrap();
        let trace = iterate(&s, &b, &DenseVector::zeros(2), &IterateOptions::default(), Some(&exact)).unwrap();
        assert_eq!(trace.status, TraceStatus::ReachedTol);
        assert!(trace.final_iterate.sub(&exact).unwrap().norm2() < 1e-9);
        assert!((observed_rate(&trace).unwrap() - 0.5).abs() < 1e-6);
        let errs = trace.error_norms.as_ref().unwrap();
        assert_eq!(errs.len(), trace.iterations + 1);
        assert_eq!(trace.update_norms.len(), trace.iterations);
    }

    #[test]
    fn jacobi_diverges_when_rho_is_two() {
        let a = real(&[&[1.0, 2.0], &[2.0, 1.0]]);
        let b = rvec(&[3.0, 3.0]);
        let exact = rvec(&[1.0, 1.0]);
        let s = Splitting::jacobi(&a).unwrap();
        let trace = iterate(&s, &b, &rvec(&[1.0, 0.0]), &IterateOptions::default(), Some(&exact)).unwrap();
        assert_eq!(trace.status, TraceStatus::Diverged);
        assert!(trace.iterations < 100);
    }

    #[test]
    fn max_iters_status() {
        let a = real(&[&[2.0, -1.0], &[-1.0, 2.0]]);
        let s = Splitting::jacobi(&a).unwrap();
        let opts = IterateOptions { max_iters: 3, ..Default::default() };
        let trace = iterate(&s, &rvec(&[1.0, 1.0]), &DenseVector::zeros(2), &opts, None).unwrap();
        assert_eq!(trace.status, TraceStatus::MaxIters);
        assert_eq!(trace.iterations, 3);
        assert!(trace.error_norms.is_none());
        assert!(matches!(observed_rate(&trace), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn iterate_checks_dimensions() {
        let s = Splitting::jacobi(&DenseMatrix::identity(2)).unwrap();
        let r = iterate(&s, &DenseVector::zeros(3), &DenseVector::zeros(2), &IterateOptions::default(), None);
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn observed_rate_of_exact_geometric_errors() {
        let errs: Vec<f64> = (0..40).map(|m| 3.0 * 0.5f64.powi(m)).collect();
        assert!((observed_rate_from_errors(&errs).unwrap() - 0.5).abs() < 1e-14);
        assert!(observed_rate_from_errors(&errs[..10]).is_err());
        let mut floor = errs.clone();
        floor.push(0.0);
        assert!(observed_rate_from_errors(&floor).is_err());
    }

    #[test]
    fn iterate_storage_is_capped() {
        // rho = 0.999 keeps the run going well past the cap.
        let a = real(&[&[1.0, -0.999], &[-0.999, 1.0]]);
        let s = Splitting::jacobi(&a).unwrap();
        let opts = IterateOptions { max_iters: MAX_STORED_ITERATES + 50, tol: 0.0, divergence_threshold: None };
        let trace = iterate(&s, &rvec(&[1.0, 0.0]), &DenseVector::zeros(2), &opts, None).unwrap();
        assert_eq!(trace.iterates.len(), MAX_STORED_ITERATES);
        assert_eq!(trace.update_norms.len(), MAX_STORED_ITERATES + 50);
    }
}
