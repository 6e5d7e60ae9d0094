//! Central-difference discretization of `u'' = 1` on `(0, 1)` with
//! `u(0) = u(1) = 0`, and certified Jacobi / Gauss-Seidel runs on it.
//!
//! With `n` interior points and `h = 1 / (n + 1)` the rows read
//! `(-u_{i+1} + 2 u_i - u_{i-1}) / h^2 = -1`, so `A = tridiag(-1, 2, -1) / h^2`
//! and `b = (-1, ..., -1)`. The exact discrete solution is
//! `u(x) = x (x - 1) / 2` sampled on the grid.

use serde::{Deserialize, Serialize};

use crate::certify::{certify_reich, certify_spectral, ConvergenceCertificate};
use crate::complex::ComplexScalar;
use crate::error::{Error, Result};
use crate::iterative::{iterate, iteration_matrix, observed_rate, IterateOptions, IterationTrace, Splitting};
use crate::linalg::{DenseMatrix, DenseVector, RealMatrix, RealVector};
use crate::spectral::{multiset_distance, tridiag_toeplitz_eigenvalues, Spectrum};

/// Tolerance for the analytic vs. numeric Jacobi spectrum cross-check.
pub const SPECTRUM_CROSSCHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSystem {
    pub n: usize,
    pub h: f64,
    pub a: RealMatrix,
    pub b: RealVector,
    pub grid: Vec<f64>,
}

pub fn build_poisson(n: usize) -> Result<PoissonSystem> {
    if n == 0 {
        return Err(Error::Domain("the grid needs at least one interior point".into()));
    }
    let h = 1.0 / (n as f64 + 1.0);
    let inv_h2 = 1.0 / (h * h);
    let a = RealMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * inv_h2
        } else if i.abs_diff(j) == 1 {
            -inv_h2
        } else {
            0.0
        }
    });
    let b = RealVector::new(vec![-1.0; n])?;
    let grid = (1..=n).map(|i| i as f64 * h).collect();
    Ok(PoissonSystem { n, h, a, b, grid })
}

/// Spectrum `{cos(m pi / (n + 1))}` of the Jacobi iteration matrix, obtained
/// from the closed-form eigenvalues of the negated matrix `A_J = -A` through
/// `lambda(S_J) = 1 + (h^2 / 2) lambda(A_J)`.
pub fn jacobi_spectrum_analytic(sys: &PoissonSystem) -> Spectrum {
    let inv_h2 = 1.0 / (sys.h * sys.h);
    let mut spec = tridiag_toeplitz_eigenvalues(inv_h2, -2.0 * inv_h2, inv_h2, sys.n)
        .expect("off-diagonal product is positive");
    let half_h2 = 0.5 * sys.h * sys.h;
    for z in spec.eigenvalues.iter_mut() {
        *z = ComplexScalar::from_real(1.0 + half_h2 * z.re);
    }
    spec
}

pub fn exact_discrete_solution(sys: &PoissonSystem) -> Result<RealVector> {
    Ok(sys.a.embed().lu_solve(&sys.b.embed())?.real_part())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Jacobi,
    GaussSeidel,
}

impl Method {
    pub fn splitting(self, a: &DenseMatrix) -> Result<Splitting> {
        match self {
            Method::Jacobi => Splitting::jacobi(a),
            Method::GaussSeidel => Splitting::gauss_seidel(a),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Jacobi => "jacobi",
            Method::GaussSeidel => "gauss-seidel",
        }
    }
}

/// Everything produced by one certified demo run.
#[derive(Debug, Clone)]
pub struct DemoOutcome {
    pub system: PoissonSystem,
    pub method: Method,
    /// `None` only when certification itself failed; see `error`.
    pub certificate: Option<ConvergenceCertificate>,
    /// Multiset distance between the analytic and QR Jacobi spectra (Jacobi only).
    pub analytic_distance: Option<f64>,
    pub iteration_matrix: DenseMatrix,
    pub exact: DenseVector,
    pub trace: Option<IterationTrace>,
    pub observed_rate: Option<f64>,
    pub final_error: Option<f64>,
    pub final_relative_error: Option<f64>,
    pub error: Option<Error>,
}

/// Builds the `n`-point system, certifies the method (spectral radius for
/// Jacobi, Reich for Gauss-Seidel), iterates from `x0 = 0`, and measures the
/// result against the direct solution. Numerical failures after assembly are
/// recorded in [`DemoOutcome::error`] rather than returned.
pub fn run_demo(n: usize, method: Method, tol: f64) -> Result<DemoOutcome> {
    run_demo_with(n, method, &IterateOptions { tol, ..IterateOptions::default() }, 1e-10)
}

pub fn run_demo_with(n: usize, method: Method, opts: &IterateOptions, target_reduction: f64) -> Result<DemoOutcome> {
    if !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(Error::Domain(format!("tolerance {} is not in (0, 1)", opts.tol)));
    }
    let system = build_poisson(n)?;
    let a = system.a.embed();
    let b = system.b.embed();
    let splitting = method.splitting(&a)?;
    let smat = iteration_matrix(&splitting)?;
    let exact = a.lu_solve(&b)?;

    let mut outcome = DemoOutcome {
        system,
        method,
        certificate: None,
        analytic_distance: None,
        iteration_matrix: smat,
        exact,
        trace: None,
        observed_rate: None,
        final_error: None,
        final_relative_error: None,
        error: None,
    };

    let cert = match method {
        Method::Jacobi => certify_spectral(&splitting, target_reduction),
        Method::GaussSeidel => certify_reich(&outcome.system.a, target_reduction),
    };
    match cert {
        Ok(mut cert) => {
            if method == Method::Jacobi {
                let analytic = jacobi_spectrum_analytic(&outcome.system);
                let dist = multiset_distance(&analytic.eigenvalues, &cert.eigenvalues);
                outcome.analytic_distance = Some(dist);
                if dist < SPECTRUM_CROSSCHECK_TOL {
                    cert.notes.push_str(&format!("; matches the analytic spectrum cos(m pi/(n+1)) within {dist:e}"));
                } else {
                    cert.notes.push_str(&format!("; analytic spectrum differs by {dist:e}"));
                }
            }
            outcome.certificate = Some(cert);
        }
        Err(err) => {
            outcome.error = Some(err);
            return Ok(outcome);
        }
    }

    let x0 = DenseVector::zeros(n);
    match iterate(&splitting, &b, &x0, opts, Some(&outcome.exact)) {
        Ok(trace) => {
            outcome.observed_rate = observed_rate(&trace).ok();
            let err = trace.final_iterate.sub(&outcome.exact)?.norm2();
            outcome.final_error = Some(err);
            outcome.final_relative_error = Some(err / outcome.exact.norm2());
            outcome.trace = Some(trace);
        }
        Err(err) => outcome.error = Some(err),
    }
    Ok(outcome)
}
