//! Eigenvalues, spectral radius, and Jordan-block power bounds.
//!
//! General spectra come from Householder reduction to upper Hessenberg form
//! followed by single-shift complex QR iteration with Wilkinson shifts. The
//! Jordan machinery works on explicitly specified blocks only; it is used to
//! predict how fast `||S^m||` decays once the spectral radius is known.

use serde::{Deserialize, Serialize};

use crate::complex::ComplexScalar;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::sequences::binom_float;

/// Relative subdiagonal size at which the QR iteration deflates.
pub const DEFLATION_TOL: f64 = 1e-14;

/// Sweeps allowed per deflated eigenvalue, multiplied by the dimension.
pub const QR_SWEEPS_PER_DIM: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumMethod {
    QrIteration,
    TridiagClosedForm,
    Provided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<ComplexScalar>,
    pub method: SpectrumMethod,
    pub residual_estimate: f64,
}

impl Spectrum {
    pub fn provided(eigenvalues: Vec<ComplexScalar>) -> Self {
        Self { eigenvalues, method: SpectrumMethod::Provided, residual_estimate: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `max |lambda_i|`, 0 for an empty spectrum.
    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(self)
    }

    /// Reorders eigenvalues by descending modulus, then descending real part,
    /// then descending imaginary part. Moduli equal to about 1e-10 relative
    /// count as ties so that `0.5` precedes `-0.5` regardless of rounding.
    pub fn sort_descending(&mut self) {
        let scale = self.spectral_radius();
        let bucket = |z: &ComplexScalar| -> i64 {
            if scale == 0.0 || !scale.is_finite() {
                0
            } else {
                (z.cmod() / scale * 1e10).round() as i64
            }
        };
        self.eigenvalues.sort_by(|a, b| {
            bucket(b)
                .cmp(&bucket(a))
                .then_with(|| b.re.total_cmp(&a.re))
                .then_with(|| b.im.total_cmp(&a.im))
        });
    }
}

pub fn spectral_radius(spec: &Spectrum) -> f64 {
    spec.eigenvalues.iter().map(|z| z.cmod()).fold(0.0, f64::max)
}

/// Largest distance between matched eigenvalues of two spectra of equal
/// length, using greedy nearest-neighbour matching. `f64::INFINITY` when the
/// lengths differ.
pub fn multiset_distance(a: &[ComplexScalar], b: &[ComplexScalar]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (best, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (*x - *y).cmod()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("lengths match");
        used[best] = true;
        worst = worst.max(dist);
    }
    worst
}

/// Eigenvalues of a square matrix by Hessenberg reduction and shifted QR.
pub fn eigenvalues_qr(a: &DenseMatrix) -> Result<Spectrum> {
    let n = a.require_square("eigenvalue computation")?;
    let mut h = a.clone();
    reduce_to_hessenberg(&mut h);
    let norm = h.frobenius_norm();
    let max_sweeps = QR_SWEEPS_PER_DIM * n;

    let mut eigenvalues = Vec::with_capacity(n);
    let mut residual = 0.0f64;
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    loop {
        if hi == 0 {
            eigenvalues.push(h[(0, 0)]);
            break;
        }
        // Search upward for a negligible subdiagonal entry.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].cmod();
            let mut thresh = DEFLATION_TOL * (h[(lo - 1, lo - 1)].cmod() + h[(lo, lo)].cmod());
            if thresh == 0.0 {
                thresh = DEFLATION_TOL * norm;
            }
            if sub <= thresh {
                residual = residual.max(sub);
                h[(lo, lo - 1)] = ComplexScalar::ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigenvalues.push(h[(hi, hi)]);
            hi -= 1;
            sweeps = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(Error::ConvergenceFailure { what: "shifted QR iteration", iterations: sweeps });
        }
        sweeps += 1;
        let shift = if sweeps % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + ComplexScalar::from_real(0.75 * h[(hi, hi - 1)].cmod())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }

    let mut spec = Spectrum { eigenvalues, method: SpectrumMethod::QrIteration, residual_estimate: residual };
    spec.sort_descending();
    Ok(spec)
}

// Eigenvalue of [[a, b], [c, d]] closer to d.
fn wilkinson_shift(a: ComplexScalar, b: ComplexScalar, c: ComplexScalar, d: ComplexScalar) -> ComplexScalar {
    let half = ComplexScalar::from_real(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let root = (diff * diff + b * c).sqrt();
    let l1 = mean + root;
    let l2 = mean - root;
    if (l1 - d).cmod() <= (l2 - d).cmod() {
        l1
    } else {
        l2
    }
}

fn reduce_to_hessenberg(h: &mut DenseMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = ((k + 2)..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let xnorm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.cmod() == 0.0 { ComplexScalar::ONE } else { x0.scale(1.0 / x0.cmod()) };
        let alpha = -phase.scale(xnorm);
        // v = x - alpha e1, reflector I - 2 v v^H / (v^H v).
        let mut v: Vec<ComplexScalar> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // Left: H <- (I - beta v v^H) H on rows k+1..n.
        for j in 0..n {
            let dot: ComplexScalar = v.iter().enumerate().map(|(t, vt)| vt.conj() * h[(k + 1 + t, j)]).sum();
            let f = dot.scale(beta);
            for (t, vt) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= *vt * f;
            }
        }
        // Right: H <- H (I - beta v v^H) on columns k+1..n.
        for i in 0..n {
            let dot: ComplexScalar = v.iter().enumerate().map(|(t, vt)| h[(i, k + 1 + t)] * *vt).sum();
            let f = dot.scale(beta);
            for (t, vt) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= f * vt.conj();
            }
        }
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = ComplexScalar::ZERO;
        }
    }
}

// Rotation [[c, s], [-conj(s), c]] mapping (a, b) to (r, 0).
fn givens(a: ComplexScalar, b: ComplexScalar) -> (f64, ComplexScalar) {
    let am = a.cmod();
    let bm = b.cmod();
    if bm == 0.0 {
        return (1.0, ComplexScalar::ZERO);
    }
    if am == 0.0 {
        return (0.0, b.conj().scale(1.0 / bm));
    }
    let norm = am.hypot(bm);
    let phase = a.scale(1.0 / am);
    (am / norm, phase * b.conj().scale(1.0 / norm))
}

// One explicit shifted QR step H - mu I = QR, H <- RQ + mu I on the window lo..=hi.
fn qr_sweep(h: &mut DenseMatrix, lo: usize, hi: usize, mu: ComplexScalar) {
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x.scale(c) + s * y;
            h[(k + 1, j)] = y.scale(c) - s.conj() * x;
        }
        h[(k + 1, k)] = ComplexScalar::ZERO;
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        for i in lo..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x.scale(c) + y * s.conj();
            h[(i, k + 1)] = y.scale(c) - x * s;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

/// Spectrum of the `n x n` tridiagonal Toeplitz matrix with `a` below the
/// diagonal, `b` on it and `c` above: `b + 2 sqrt(ac) cos(m pi / (n + 1))`
/// for `m = 1..=n`, in that order.
pub fn tridiag_toeplitz_eigenvalues(a: f64, b: f64, c: f64, n: usize) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::DimensionMismatch("tridiagonal dimension must be positive".into()));
    }
    let product = a * c;
    if product < 0.0 {
        return Err(Error::NegativeProduct(product));
    }
    let root = product.sqrt();
    let eigenvalues = (1..=n)
        .map(|m| {
            let theta = m as f64 * std::f64::consts::PI / (n as f64 + 1.0);
            ComplexScalar::from_real(b + 2.0 * root * theta.cos())
        })
        .collect();
    Ok(Spectrum { eigenvalues, method: SpectrumMethod::TridiagClosedForm, residual_estimate: 0.0 })
}

/// Jordan block `J_k(lambda)`: `lambda` on the diagonal, ones above it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JordanBlockSpec {
    pub eigenvalue: ComplexScalar,
    pub size: usize,
}

impl JordanBlockSpec {
    pub fn new(eigenvalue: ComplexScalar, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Domain("Jordan block size must be at least 1".into()));
        }
        Ok(Self { eigenvalue, size })
    }

    pub fn matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.size, self.size, |i, j| {
            if i == j {
                self.eigenvalue
            } else if j == i + 1 {
                ComplexScalar::ONE
            } else {
                ComplexScalar::ZERO
            }
        })
    }
}

/// `J_k(lambda)^m`, entry `(i, j)` equal to `C(m, j-i) lambda^(m-(j-i))`
/// above the diagonal. For `m < k - 1` the power is formed by repeated
/// multiplication instead.
pub fn jordan_block_power(block: &JordanBlockSpec, m: u32) -> DenseMatrix {
    let k = block.size;
    if (m as usize) + 1 < k {
        return block.matrix().pow(m).expect("Jordan block is square");
    }
    let lambda = block.eigenvalue;
    // lambda^(m-d) for d = 0..k.
    let powers: Vec<ComplexScalar> = (0..k).map(|d| lambda.pow(m - d as u32)).collect();
    let coeffs: Vec<f64> = (0..k).map(|d| binom_float(m as u64, d as u64).expect("d <= m")).collect();
    DenseMatrix::from_fn(k, k, |i, j| {
        if j < i {
            ComplexScalar::ZERO
        } else {
            powers[j - i].scale(coeffs[j - i])
        }
    })
}

/// Upper bound `(m^k / k!) |lambda|^(m-k)` on the modulus of the entry at
/// superdiagonal offset `k` of `J(lambda)^m`. Returns 0 when `k > m`, where
/// that entry vanishes.
pub fn jordan_entry_bound(lambda: ComplexScalar, k_offset: u32, m: u32) -> f64 {
    if k_offset > m {
        return 0.0;
    }
    let mf = m as f64;
    let factor: f64 = (1..=k_offset).map(|i| mf / i as f64).product();
    factor * lambda.cmod().powi((m - k_offset) as i32)
}

/// Frobenius-style aggregate of [`jordan_entry_bound`] over every entry of
/// every block: an upper bound on `||J^m||_F`, hence on `||J^m||_2`.
pub fn predict_decay(blocks: &[JordanBlockSpec], m: u32) -> f64 {
    blocks
        .iter()
        .map(|block| {
            (0..block.size as u32)
                .map(|d| {
                    let bound = jordan_entry_bound(block.eigenvalue, d, m);
                    // size - d entries sit on superdiagonal d.
                    (block.size as u32 - d) as f64 * bound * bound
                })
                .sum::<f64>()
        })
        .sum::<f64>()
        .sqrt()
}
