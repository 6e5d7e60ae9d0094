//! Seeded random test systems.
//!
//! Matrices with a planted spectrum are built as `P D P^{-1}` where `D` is
//! block diagonal (1x1 real blocks and 2x2 rotation-scaling blocks for
//! conjugate pairs) and `P = I + E` with `||E||_F <= 0.9`, which keeps
//! `cond_2(P) <= 19`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::ComplexScalar;
use crate::error::Result;
use crate::iterative::Splitting;
use crate::linalg::{DenseMatrix, DenseVector, LuFactors, RealMatrix};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real vector with entries uniform in `[-1, 1)`, embedded as complex.
pub fn random_vector(rng: &mut SampleRng, n: usize) -> DenseVector {
    (0..n).map(|_| ComplexScalar::from_real(rng.gen_range(-1.0..1.0))).collect()
}

pub fn random_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_complex_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| ComplexScalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Strictly row diagonally dominant: each diagonal entry exceeds the row's
/// off-diagonal absolute sum by a factor in `[1.5, 3)`, with random sign.
pub fn random_diag_dominant(rng: &mut SampleRng, n: usize) -> RealMatrix {
    let mut m = random_matrix(rng, n, n);
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        m[(i, i)] = sign * (off.max(0.5) * rng.gen_range(1.5..3.0));
    }
    m
}

/// `M^T M + delta I` with `delta` in `[0.01, 1)`: symmetric positive
/// definite with a positive diagonal.
pub fn random_spd(rng: &mut SampleRng, n: usize) -> RealMatrix {
    let m = random_matrix(rng, n, n);
    let mut a = m.transpose().matmul(&m).expect("square");
    let delta = rng.gen_range(0.01..1.0);
    for i in 0..n {
        a[(i, i)] += delta;
    }
    a
}

/// Random Hermitian matrix `(M + M^H) / 2`.
pub fn random_hermitian(rng: &mut SampleRng, n: usize) -> DenseMatrix {
    let m = random_complex_matrix(rng, n, n);
    m.add(&m.conjugate_transpose()).expect("square").scale(ComplexScalar::from_real(0.5))
}

/// Random `I + E` with `||E||_F <= 0.9`.
pub fn random_well_conditioned(rng: &mut SampleRng, n: usize) -> RealMatrix {
    let amp = 0.9 / n as f64;
    RealMatrix::from_fn(n, n, |i, j| (if i == j { 1.0 } else { 0.0 }) + rng.gen_range(-amp..amp))
}

/// Eigenvalues with spectral radius exactly `rho`, grouped into real values
/// and conjugate pairs, and the block-diagonal real matrix carrying them.
fn planted_blocks(rng: &mut SampleRng, n: usize, rho: f64) -> (RealMatrix, Vec<ComplexScalar>) {
    let mut d = RealMatrix::zeros(n, n);
    let mut eigs = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let modulus = if i == 0 { rho } else { rng.gen_range(0.0..=rho) };
        if i + 1 < n && rng.gen_bool(0.4) {
            let theta = rng.gen_range(0.1..std::f64::consts::PI - 0.1);
            let (re, im) = (modulus * theta.cos(), modulus * theta.sin());
            d[(i, i)] = re;
            d[(i, i + 1)] = im;
            d[(i + 1, i)] = -im;
            d[(i + 1, i + 1)] = re;
            eigs.push(ComplexScalar::new(re, im));
            eigs.push(ComplexScalar::new(re, -im));
            i += 2;
        } else {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            d[(i, i)] = sign * modulus;
            eigs.push(ComplexScalar::from_real(sign * modulus));
            i += 1;
        }
    }
    (d, eigs)
}

/// Real `n x n` matrix `P D P^{-1}` with the returned planted eigenvalues.
pub fn planted_matrix(rng: &mut SampleRng, n: usize, rho: f64) -> Result<(DenseMatrix, Vec<ComplexScalar>)> {
    let (d, eigs) = planted_blocks(rng, n, rho);
    let p = random_well_conditioned(rng, n).embed();
    let pd = p.matmul(&d.embed())?;
    // X P = P D  <=>  P^T X^T = (P D)^T
    let lu = LuFactors::factor(&p.transpose())?;
    let s = lu.solve_matrix(&pd.transpose())?.transpose();
    Ok((s, eigs))
}

/// A custom splitting whose iteration matrix has the planted spectrum:
/// `A1` is random diagonally dominant and `A2 = -A1 S`.
pub fn planted_splitting(rng: &mut SampleRng, n: usize, rho: f64) -> Result<(Splitting, DenseMatrix, Vec<ComplexScalar>)> {
    let (s, eigs) = planted_matrix(rng, n, rho)?;
    let a1 = random_diag_dominant(rng, n).embed();
    let a2 = a1.matmul(&s)?.negate();
    Ok((Splitting::custom(a1, a2)?, s, eigs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigenvalues_qr, multiset_distance};

    #[test]
    fn seeds_are_reproducible() {
        let a = random_vector(&mut rng(7), 5);
        let b = random_vector(&mut rng(7), 5);
        assert_eq!(a, b);
        assert_ne!(a, random_vector(&mut rng(8), 5));
    }

    #[test]
    fn planted_spectrum_is_recovered() {
        let mut r = rng(3);
        for n in 1..=8 {
            let (s, eigs) = planted_matrix(&mut r, n, 0.9).unwrap();
            assert!(s.is_real() || s.data().iter().all(|z| z.im.abs() < 1e-14));
            let spec = eigenvalues_qr(&s).unwrap();
            assert!(multiset_distance(&spec.eigenvalues, &eigs) < 1e-8);
            assert!((spec.spectral_radius() - 0.9).abs() < 1e-8);
        }
    }

    #[test]
    fn diag_dominant_and_spd_shapes() {
        let mut r = rng(11);
        let d = random_diag_dominant(&mut r, 6);
        for i in 0..6 {
            let off: f64 = (0..6).filter(|&j| j != i).map(|j| d[(i, j)].abs()).sum();
            assert!(d[(i, i)].abs() > off);
        }
        let a = random_spd(&mut r, 6);
        assert_eq!(a, a.transpose());
        assert!(a.diagonal().iter().all(|&x| x > 0.0));
        let h = random_hermitian(&mut r, 4);
        assert_eq!(h, h.conjugate_transpose());
    }
}
