//! JSON reports emitted by the command-line front end.
//!
//! The key set is stable; see `schema/report.schema.json`. Every float is
//! written in its shortest round-trip form, so parsing a report recovers the
//! exact doubles that were computed.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::certify::ConvergenceCertificate;
use crate::complex::ComplexScalar;
use crate::error::Error;
use crate::iterative::{observed_rate, IterationTrace, TraceStatus};
use crate::spectral::{Spectrum, SpectrumMethod};

pub const SCHEMA_VERSION: &str = "1.0";

/// The published JSON Schema for [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub method: Option<String>,
    pub matrix: MatrixInfo,
    pub certificate: Option<ConvergenceCertificate>,
    pub spectrum: Option<SpectrumSummary>,
    pub trace: Option<TraceSummary>,
    pub validation: Option<ValidationSummary>,
    pub error: Option<ErrorInfo>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub timing_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixInfo {
    pub n: usize,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub method: SpectrumMethod,
    pub spectral_radius: f64,
    pub eigenvalues: Vec<ComplexScalar>,
    pub residual_estimate: f64,
}

impl From<&Spectrum> for SpectrumSummary {
    fn from(spec: &Spectrum) -> Self {
        Self {
            method: spec.method,
            spectral_radius: spec.spectral_radius(),
            eigenvalues: spec.eigenvalues.clone(),
            residual_estimate: spec.residual_estimate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub status: TraceStatus,
    pub iterations: usize,
    pub final_update_norm: Option<f64>,
    pub final_error_norm: Option<f64>,
    pub final_relative_error: Option<f64>,
    pub observed_rate: Option<f64>,
}

impl TraceSummary {
    /// Summary of a trace; `reference_norm` is `||x||` of the direct solution
    /// used for the relative error.
    pub fn from_trace(trace: &IterationTrace, reference_norm: Option<f64>) -> Self {
        let final_error_norm = trace.final_error_norm();
        Self {
            status: trace.status,
            iterations: trace.iterations,
            final_update_norm: trace.final_update_norm(),
            final_error_norm,
            final_relative_error: match (final_error_norm, reference_norm) {
                (Some(e), Some(r)) if r > 0.0 => Some(e / r),
                _ => None,
            },
            observed_rate: observed_rate(trace).ok(),
        }
    }
}

/// Outcome of iterating from several seeded random starting vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub seed: u64,
    pub samples: usize,
    pub reached_tol: usize,
    pub diverged: usize,
    pub max_iters: usize,
    pub observed_rates: Vec<Option<f64>>,
    pub iterations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(err: &Error) -> Self {
        Self { code: err.code().to_string(), message: err.to_string() }
    }
}

impl Report {
    pub fn new(command: &str, method: Option<&str>, n: usize, source: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            method: method.map(str::to_string),
            matrix: MatrixInfo { n, source: source.to_string() },
            certificate: None,
            spectrum: None,
            trace: None,
            validation: None,
            error: None,
            timing_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering for terminals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"));
        writeln!(out, "command        {}", self.command).unwrap();
        if let Some(m) = &self.method {
            writeln!(out, "method         {m}").unwrap();
        }
        writeln!(out, "matrix         n = {} ({})", self.matrix.n, self.matrix.source).unwrap();
        if let Some(c) = &self.certificate {
            writeln!(out, "verdict        {:?} ({:?})", c.verdict, c.criterion).unwrap();
            writeln!(out, "spectral rad.  {}", opt(c.spectral_radius)).unwrap();
            writeln!(out, "pred. rate     {}", opt(c.predicted_rate)).unwrap();
            writeln!(
                out,
                "pred. iters    {}",
                c.predicted_iters.map_or_else(|| "-".to_string(), |k| k.to_string())
            )
            .unwrap();
            writeln!(out, "notes          {}", c.notes).unwrap();
            write_eigenvalues(&mut out, &c.eigenvalues);
        }
        if let Some(s) = &self.spectrum {
            writeln!(out, "spectrum       {:?}, rho = {:.6e}", s.method, s.spectral_radius).unwrap();
            write_eigenvalues(&mut out, &s.eigenvalues);
        }
        if let Some(t) = &self.trace {
            writeln!(out, "status         {:?} after {} iterations", t.status, t.iterations).unwrap();
            writeln!(out, "final update   {}", opt(t.final_update_norm)).unwrap();
            writeln!(out, "final error    {}", opt(t.final_error_norm)).unwrap();
            writeln!(out, "rel. error     {}", opt(t.final_relative_error)).unwrap();
            writeln!(out, "obs. rate      {}", opt(t.observed_rate)).unwrap();
        }
        if let Some(v) = &self.validation {
            writeln!(
                out,
                "validation     seed {}: {}/{} reached tol, {} diverged, {} hit max iters",
                v.seed, v.reached_tol, v.samples, v.diverged, v.max_iters
            )
            .unwrap();
        }
        if let Some(e) = &self.error {
            writeln!(out, "error          {}: {}", e.code, e.message).unwrap();
        }
        writeln!(out, "time           {:.3} ms", self.timing_ms).unwrap();
        out
    }
}

fn write_eigenvalues(out: &mut String, eigs: &[ComplexScalar]) {
    writeln!(out, "  {:>4}  {:>24}  {:>24}  {:>14}", "#", "re", "im", "|lambda|").unwrap();
    for (i, z) in eigs.iter().enumerate() {
        writeln!(out, "  {:>4}  {:>24.16e}  {:>24.16e}  {:>14.6e}", i, z.re, z.im, z.cmod()).unwrap();
    }
}

/// Drops `timing_ms` from a serialized report so two runs can be compared.
pub fn strip_timing(json: &str) -> serde_json::Result<serde_json::Value> {
    let mut value: serde_json::Value = serde_json::from_str(json)?;
    if let Some(obj) = value.as_object_mut() {
        obj.remove("timing_ms");
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let mut r = Report::new("spectrum", None, 1, "inline");
        let z = ComplexScalar::new(0.1 + 0.2, -1.0 / 3.0);
        r.spectrum = Some(SpectrumSummary {
            method: SpectrumMethod::Provided,
            spectral_radius: z.cmod(),
            eigenvalues: vec![z],
            residual_estimate: 0.0,
        });
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.spectrum.unwrap().eigenvalues[0], z);
    }

    #[test]
    fn timing_is_stripped() {
        let mut a = Report::new("poisson", Some("jacobi"), 3, "poisson(n=3)");
        let mut b = a.clone();
        a.timing_ms = 1.5;
        b.timing_ms = 2.5;
        assert_ne!(a.to_json(), b.to_json());
        assert_eq!(strip_timing(&a.to_json()).unwrap(), strip_timing(&b.to_json()).unwrap());
    }

    #[test]
    fn schema_is_valid_json() {
        let schema: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
        assert_eq!(schema["properties"]["schema_version"]["const"], SCHEMA_VERSION);
    }

    #[test]
    fn table_mentions_verdict() {
        let mut r = Report::new("certify", Some("jacobi"), 2, "inline");
        r.error = Some(ErrorInfo::from(&Error::ZeroDiagonal(1)));
        let text = r.to_table();
        assert!(text.contains("E_SINGULAR"));
    }
}
