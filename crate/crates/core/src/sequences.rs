//! Sampled checks for limits of real sequences.
//!
//! These are numerical surrogates for exact limit statements: a
//! [`SequenceProbe`] evaluates a sequence up to a finite horizon and the
//! verdicts look only at the tail.

use crate::error::{Error, Result};

/// Guard band below 1 that the estimated ratio limit must clear.
pub const RATIO_MARGIN: f64 = 0.02;
/// Largest spread of tail ratios accepted as a settled limit.
pub const RATIO_STABILITY_TOL: f64 = 1e-3;
/// Relative spread of tail samples accepted as a settled limit.
pub const LIMIT_STABILITY_TOL: f64 = 1e-9;

pub const DEFAULT_HORIZON: usize = 5000;
pub const DEFAULT_TAIL_WINDOW: usize = 100;

/// A sequence `n -> a_n` sampled at `n = 0..horizon`.
pub struct SequenceProbe<F> {
    generator: F,
    horizon: usize,
    tail_window: usize,
}

impl<F: Fn(usize) -> f64> SequenceProbe<F> {
    pub fn new(generator: F, horizon: usize, tail_window: usize) -> Result<Self> {
        if tail_window < 2 || horizon <= tail_window {
            return Err(Error::Domain(format!(
                "probe needs horizon > tail_window >= 2, got horizon {horizon}, tail_window {tail_window}"
            )));
        }
        Ok(Self { generator, horizon, tail_window })
    }

    pub fn with_defaults(generator: F) -> Self {
        Self { generator, horizon: DEFAULT_HORIZON, tail_window: DEFAULT_TAIL_WINDOW }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn tail_window(&self) -> usize {
        self.tail_window
    }

    fn sample(&self, n: usize) -> f64 {
        (self.generator)(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioVerdict {
    /// Tail ratios settled at `L < 1 - margin`.
    ConvergesToZero(f64),
    Inconclusive,
}

/// Ratio test on the last `tail_window` ratios `a_{n+1} / a_n` below the
/// horizon. Every term from 0 to the horizon must be strictly positive.
pub fn ratio_test<F: Fn(usize) -> f64>(probe: &SequenceProbe<F>) -> Result<RatioVerdict> {
    let mut prev = probe.sample(0);
    if !(prev > 0.0) {
        return Err(Error::NonPositiveTerm { index: 0, value: prev });
    }
    let first_ratio = probe.horizon - probe.tail_window;
    let mut ratios = Vec::with_capacity(probe.tail_window);
    for n in 1..=probe.horizon {
        let a = probe.sample(n);
        if !(a > 0.0) {
            return Err(Error::NonPositiveTerm { index: n, value: a });
        }
        if n > first_ratio {
            ratios.push(a / prev);
        }
        prev = a;
    }
    let limit = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let (lo, hi) = min_max(&ratios);
    if limit < 1.0 - RATIO_MARGIN && hi - lo < RATIO_STABILITY_TOL {
        Ok(RatioVerdict::ConvergesToZero(limit))
    } else {
        Ok(RatioVerdict::Inconclusive)
    }
}

/// Mean of the last `tail_window` samples and whether their spread is below
/// `LIMIT_STABILITY_TOL * (1 + |estimate|)`.
pub fn tail_limit_estimate<F: Fn(usize) -> f64>(probe: &SequenceProbe<F>) -> (f64, bool) {
    let tail: Vec<f64> = (probe.horizon - probe.tail_window..probe.horizon).map(|n| probe.sample(n)).collect();
    let estimate = tail.iter().sum::<f64>() / tail.len() as f64;
    let (lo, hi) = min_max(&tail);
    // NaN spreads (infinite samples) never count as converged.
    let converged = hi - lo < LIMIT_STABILITY_TOL * (1.0 + estimate.abs());
    (estimate, converged)
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// `(m + 1)^k x^(m + 1)`, which tends to 0 for `0 < x < 1`.
///
/// With `strict` set, `x` outside `(0, 1)` is a [`Error::Domain`]; otherwise
/// the raw value is returned.
pub fn powk_geometric_term(k: u32, x: f64, m: u64, strict: bool) -> Result<f64> {
    if strict && !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("geometric factor {x} is not in (0, 1)")));
    }
    let base = (m + 1) as f64;
    // Combine in log space when the pieces would overflow or underflow alone.
    let direct = base.powi(k as i32) * x.powf(base);
    if direct.is_finite() && direct != 0.0 || x <= 0.0 {
        return Ok(direct);
    }
    Ok((k as f64 * base.ln() + base * x.ln()).exp())
}

/// `C(m, k)` by the multiplicative formula `prod_{i=1..k} (m - k + i) / i`.
pub fn binom_float(m: u64, k: u64) -> Result<f64> {
    if k > m {
        return Err(Error::Domain(format!("C({m}, {k}) needs k <= m")));
    }
    let k = k.min(m - k);
    Ok((1..=k).fold(1.0, |acc, i| acc * (m - k + i) as f64 / i as f64))
}

/// Checks `C(m, k) <= m^k / k!` with a relative slack of 1e-9.
pub fn binom_bound_check(m: u64, k: u64) -> Result<bool> {
    let c = binom_float(m, k)?;
    let bound: f64 = (1..=k).map(|i| m as f64 / i as f64).product();
    Ok(c <= bound + 1e-9 * bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_shape_is_validated() {
        assert!(SequenceProbe::new(|_| 1.0, 10, 1).is_err());
        assert!(SequenceProbe::new(|_| 1.0, 10, 10).is_err());
        assert!(SequenceProbe::new(|_| 1.0, 11, 10).is_ok());
        let p = SequenceProbe::with_defaults(|_| 1.0);
        assert_eq!((p.horizon(), p.tail_window()), (5000, 100));
    }

    #[test]
    fn ratio_test_examples() {
        let probe = SequenceProbe::new(|n| ((n + 1) as f64).powi(2) * 0.8f64.powi(n as i32), 2000, 100).unwrap();
        match ratio_test(&probe).unwrap() {
            RatioVerdict::ConvergesToZero(l) => assert!((l - 0.8).abs() < 1e-3, "L = {l}"),
            other => panic!("unexpected {other:?}"),
        }

        let geometric = SequenceProbe::new(|n| 0.5f64.powi(n as i32), 500, 100).unwrap();
        assert_eq!(ratio_test(&geometric).unwrap(), RatioVerdict::ConvergesToZero(0.5));

        let harmonic = SequenceProbe::with_defaults(|n| 1.0 + 1.0 / (n + 1) as f64);
        assert_eq!(ratio_test(&harmonic).unwrap(), RatioVerdict::Inconclusive);
    }

    #[test]
    fn ratio_test_rejects_nonpositive_terms() {
        let probe = SequenceProbe::new(|n| 3.0 - n as f64, 10, 2).unwrap();
        assert_eq!(ratio_test(&probe), Err(Error::NonPositiveTerm { index: 3, value: 0.0 }));
        // 0.05^n underflows to zero long before n = 5000.
        let underflow = SequenceProbe::with_defaults(|n| 0.05f64.powi(n as i32));
        assert!(matches!(ratio_test(&underflow), Err(Error::NonPositiveTerm { .. })));
    }

    #[test]
    fn tail_limit_examples() {
        assert_eq!(tail_limit_estimate(&SequenceProbe::with_defaults(|_| 7.0)), (7.0, true));

        let (est, conv) = tail_limit_estimate(&SequenceProbe::new(|n| 0.9f64.powi(n as i32), 1000, 100).unwrap());
        assert!(est < 1e-40 && conv);

        let (_, conv) = tail_limit_estimate(&SequenceProbe::with_defaults(|n| if n % 2 == 0 { 1.0 } else { -1.0 }));
        assert!(!conv);

        let (_, conv) = tail_limit_estimate(&SequenceProbe::with_defaults(|n| 1.01f64.powi(n as i32)));
        assert!(!conv);
    }

    #[test]
    fn powk_term_examples() {
        assert_eq!(powk_geometric_term(0, 0.5, 3, true).unwrap(), 0.0625);
        let early = powk_geometric_term(2, 0.5, 10, true).unwrap();
        let late = powk_geometric_term(2, 0.5, 50, true).unwrap();
        assert!(late < early);
        let far = powk_geometric_term(3, 0.99, 1_000_000, true).unwrap();
        assert!(far < 1e-6);
        assert!(powk_geometric_term(1, 1.5, 3, true).is_err());
        assert_eq!(powk_geometric_term(1, 1.5, 3, false).unwrap(), 4.0 * 1.5f64.powi(4));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_float(5, 2).unwrap(), 10.0);
        assert!(binom_bound_check(5, 2).unwrap());
        assert_eq!(binom_float(9, 0).unwrap(), 1.0);
        assert!(binom_bound_check(9, 0).unwrap());
        assert!(binom_bound_check(0, 0).unwrap());
        assert!(matches!(binom_float(3, 4), Err(Error::Domain(_))));
        for m in 0..=200 {
            for k in 0..=m {
                assert!(binom_bound_check(m, k).unwrap(), "C({m},{k})");
            }
        }
    }
}
