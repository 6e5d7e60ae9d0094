//! A priori convergence certificates.
//!
//! Two criteria are offered. The spectral-radius criterion is exact in both
//! directions: the iteration converges from every start iff `rho(S) < 1`.
//! Reich's criterion for Gauss-Seidel is sufficient only: a real symmetric
//! matrix with positive diagonal that is positive definite yields
//! `rho(S_GS) < 1`, but failing a premise says nothing about divergence.

use serde::{Deserialize, Serialize};

use crate::complex::{ComplexScalar, EPS_ZERO};
use crate::error::{Error, Result};
use crate::iterative::{iteration_matrix, Splitting};
use crate::linalg::{DenseMatrix, RealMatrix};
use crate::spectral::eigenvalues_qr;

/// Half-width of the band around `rho = 1` where no verdict is given.
pub const CERT_MARGIN: f64 = 1e-8;
/// Hermitian-part eigenvalues must exceed this multiple of `||A||_F`.
pub const PD_TOL: f64 = 1e-12;
/// Allowed asymmetry `|a_ij - a_ji|` relative to `||A||_F`.
pub const SYM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Converges,
    Diverges,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    SpectralRadius,
    Reich,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub verdict: Verdict,
    pub criterion: Criterion,
    /// `rho(S)`; only set by the spectral-radius criterion.
    pub spectral_radius: Option<f64>,
    pub eigenvalues: Vec<ComplexScalar>,
    pub predicted_rate: Option<f64>,
    pub predicted_iters: Option<u64>,
    pub notes: String,
}

impl ConvergenceCertificate {
    fn unknown(criterion: Criterion, notes: String) -> Self {
        Self {
            verdict: Verdict::Unknown,
            criterion,
            spectral_radius: None,
            eigenvalues: Vec::new(),
            predicted_rate: None,
            predicted_iters: None,
            notes,
        }
    }
}

fn check_target(target_reduction: f64) -> Result<()> {
    if target_reduction > 0.0 && target_reduction < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("target reduction {target_reduction} is not in (0, 1)")))
    }
}

/// Steps for the asymptotic rate `rho` to shrink the error by
/// `target_reduction`.
fn predicted_iterations(rho: f64, target_reduction: f64, dim: usize) -> (Option<u64>, Option<String>) {
    if rho <= EPS_ZERO {
        (Some(dim as u64), Some(format!("spectral radius is numerically zero; S is nilpotent and the error vanishes within {dim} steps")))
    } else if rho < 1.0 - CERT_MARGIN {
        (Some((target_reduction.ln() / rho.ln()).ceil() as u64), None)
    } else {
        (None, Some("no iteration count predicted: spectral radius is not below 1".into()))
    }
}

fn join_notes(notes: Vec<String>) -> String {
    notes.join("; ")
}

/// Spectral-radius certificate for the splitting's iteration matrix.
pub fn certify_spectral(s: &Splitting, target_reduction: f64) -> Result<ConvergenceCertificate> {
    check_target(target_reduction)?;
    let smat = iteration_matrix(s)?;
    let spectrum = match eigenvalues_qr(&smat) {
        Ok(spec) => spec,
        Err(err @ Error::ConvergenceFailure { .. }) => {
            return Ok(ConvergenceCertificate::unknown(
                Criterion::SpectralRadius,
                format!("eigenvalue computation failed: {err}"),
            ));
        }
        Err(err) => return Err(err),
    };
    let rho = spectrum.spectral_radius();
    let mut notes = Vec::new();
    let verdict = if rho < 1.0 - CERT_MARGIN {
        notes.push(format!("rho(S) = {rho} < 1: converges from every starting vector"));
        Verdict::Converges
    } else if rho > 1.0 + CERT_MARGIN {
        notes.push(format!("rho(S) = {rho} > 1: diverges from some starting vector"));
        Verdict::Diverges
    } else {
        notes.push(format!("rho(S) = {rho} is within {CERT_MARGIN:e} of 1; no verdict"));
        Verdict::Unknown
    };
    let (predicted_iters, iter_note) = predicted_iterations(rho, target_reduction, s.dim());
    notes.extend(iter_note);
    if verdict == Verdict::Converges && !is_normal(&smat) {
        notes.push("S is non-normal; the error may grow transiently before decaying at the predicted rate".into());
    }
    Ok(ConvergenceCertificate {
        verdict,
        criterion: Criterion::SpectralRadius,
        spectral_radius: Some(rho),
        eigenvalues: spectrum.eigenvalues,
        predicted_rate: Some(rho),
        predicted_iters,
        notes: join_notes(notes),
    })
}

fn is_normal(s: &DenseMatrix) -> bool {
    let sh = s.conjugate_transpose();
    let (Ok(left), Ok(right)) = (sh.matmul(s), s.matmul(&sh)) else {
        return false;
    };
    let commutator = left.sub(&right).expect("same shape").frobenius_norm();
    commutator <= 1e-10 * s.frobenius_norm().powi(2).max(f64::MIN_POSITIVE)
}

/// Hermitian part `(A + A^H) / 2`.
fn hermitian_part(a: &DenseMatrix) -> DenseMatrix {
    let ah = a.conjugate_transpose();
    a.add(&ah).expect("square").scale(ComplexScalar::from_real(0.5))
}

enum CholeskyOutcome {
    /// Succeeded; smallest pivot `d_jj` seen.
    Success(f64),
    /// Failed at a pivot with this value.
    Failure(f64),
}

// Unpivoted Cholesky L L^H of a Hermitian matrix, tracking pivots.
fn cholesky_pivots(h: &DenseMatrix) -> CholeskyOutcome {
    let n = h.rows();
    let mut l = DenseMatrix::zeros(n, n);
    let mut min_pivot = f64::INFINITY;
    for j in 0..n {
        let d = h[(j, j)].re - (0..j).map(|k| l[(j, k)].norm_sqr()).sum::<f64>();
        if !(d > 0.0) {
            return CholeskyOutcome::Failure(d);
        }
        min_pivot = min_pivot.min(d);
        let ljj = d.sqrt();
        l[(j, j)] = ComplexScalar::from_real(ljj);
        for i in (j + 1)..n {
            let mut acc = h[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc.scale(1.0 / ljj);
        }
    }
    CholeskyOutcome::Success(min_pivot)
}

/// True iff `Re(x^H A x) > 0` for all nonzero `x`, tested as: every
/// eigenvalue of the Hermitian part exceeds `PD_TOL * ||A||_F`.
///
/// Cholesky of `H - PD_TOL ||A||_F I` decides the clear cases; pivots within
/// rounding distance of zero fall back to the QR spectrum of `H`.
pub fn is_positive_definite(a: &DenseMatrix) -> bool {
    let Ok(n) = a.require_square("positive definiteness") else {
        return false;
    };
    let scale = a.frobenius_norm();
    if !(scale > 0.0) || !scale.is_finite() {
        return false;
    }
    let tau = PD_TOL * scale;
    let h = hermitian_part(a);
    let mut shifted = h.clone();
    for i in 0..n {
        shifted[(i, i)] -= ComplexScalar::from_real(tau);
    }
    let band = 64.0 * n as f64 * f64::EPSILON * scale;
    let outcome = cholesky_pivots(&shifted);
    match outcome {
        CholeskyOutcome::Success(min_pivot) if min_pivot > band => true,
        CholeskyOutcome::Failure(d) if d < -band => false,
        CholeskyOutcome::Success(_) | CholeskyOutcome::Failure(_) => {
            let cholesky_says = matches!(outcome, CholeskyOutcome::Success(_));
            match eigenvalues_qr(&h) {
                Ok(spec) => spec.eigenvalues.iter().all(|z| z.re > tau),
                Err(_) => cholesky_says,
            }
        }
    }
}

/// Reich's sufficient condition for Gauss-Seidel convergence.
///
/// Checks symmetry, a positive diagonal, and positive definiteness. When all
/// hold the verdict is `Converges`; the rate and eigenvalues reported are
/// those of the Gauss-Seidel iteration matrix. Otherwise the verdict is
/// `Unknown` with every failed premise named in the notes.
pub fn certify_reich(a: &RealMatrix, target_reduction: f64) -> Result<ConvergenceCertificate> {
    check_target(target_reduction)?;
    let Ok(n) = a.require_square("Reich's criterion") else {
        return Ok(ConvergenceCertificate::unknown(
            Criterion::Reich,
            format!("matrix is {}x{}, not square", a.rows(), a.cols()),
        ));
    };
    let dense = a.embed();
    let fro = dense.frobenius_norm();

    let mut failed = Vec::new();
    let asymmetry = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| (a[(i, j)] - a[(j, i)]).abs())
        .fold(0.0, f64::max);
    if asymmetry > SYM_TOL * fro {
        failed.push(format!("not symmetric (max |a_ij - a_ji| = {asymmetry:e})"));
    }
    if let Some(i) = (0..n).find(|&i| !(a[(i, i)] > 0.0)) {
        failed.push(format!("diagonal entry {i} = {} is not positive", a[(i, i)]));
    }
    if !is_positive_definite(&dense) {
        failed.push("not positive definite".into());
    }
    if !failed.is_empty() {
        return Ok(ConvergenceCertificate::unknown(
            Criterion::Reich,
            format!("Reich premises failed: {}; convergence is not decided by this criterion", failed.join(", ")),
        ));
    }

    let mut notes = vec!["symmetric with positive diagonal and positive definite: Gauss-Seidel converges from every starting vector".to_string()];
    let splitting = Splitting::gauss_seidel(&dense)?;
    let mut cert = ConvergenceCertificate {
        verdict: Verdict::Converges,
        criterion: Criterion::Reich,
        spectral_radius: None,
        eigenvalues: Vec::new(),
        predicted_rate: None,
        predicted_iters: None,
        notes: String::new(),
    };
    match iteration_matrix(&splitting).and_then(|s| eigenvalues_qr(&s)) {
        Ok(spec) => {
            let rho = spec.spectral_radius();
            let (iters, iter_note) = predicted_iterations(rho, target_reduction, n);
            notes.push(format!("informational: rho(S_GS) = {rho}"));
            notes.extend(iter_note);
            cert.eigenvalues = spec.eigenvalues;
            cert.predicted_rate = Some(rho);
            cert.predicted_iters = iters;
        }
        Err(err) => notes.push(format!("Gauss-Seidel spectrum unavailable: {err}")),
    }
    cert.notes = join_notes(notes);
    Ok(cert)
}

/// Certificate as a JSON value with the report's field names.
pub fn certificate_report(cert: &ConvergenceCertificate) -> serde_json::Value {
    serde_json::to_value(cert).expect("certificate serializes")
}
