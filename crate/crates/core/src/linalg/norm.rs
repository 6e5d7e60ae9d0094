use super::{DenseMatrix, DenseVector};
use crate::complex::ComplexScalar;
use crate::error::{Error, Result};

/// Relative Rayleigh-quotient change at which power iteration stops.
pub const TOL_NORM: f64 = 1e-12;
pub const MAX_ITERS_NORM: usize = 10_000;

#[derive(Debug, Clone, Copy)]
pub struct PowerIterationOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PowerIterationOptions {
    fn default() -> Self {
        Self { tol: TOL_NORM, max_iters: MAX_ITERS_NORM }
    }
}

impl DenseVector {
    /// Euclidean norm `sqrt(sum |v_j|^2)`.
    pub fn norm2(&self) -> f64 {
        self.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `sum conj(u_j) v_j`.
    pub fn dot(&self, other: &Self) -> ComplexScalar {
        self.iter().zip(other.iter()).map(|(u, v)| u.conj() * *v).sum()
    }
}

impl DenseMatrix {
    /// `sqrt(sum_ij |a_ij|^2)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 2-norm `sup ||Ax|| / ||x||` with default power-iteration settings.
    pub fn induced_2norm(&self) -> Result<f64> {
        self.induced_2norm_with(PowerIterationOptions::default())
    }

    /// Induced 2-norm as `sqrt(lambda_max(A^H A))`.
    ///
    /// Power iteration on `A^H A` runs from the all-ones vector and from a
    /// second fixed start with incommensurate entries; the larger result is
    /// returned. A single start converges to a smaller eigenvalue whenever it
    /// happens to be orthogonal to the dominant eigenvector (for example the
    /// all-ones vector for `[[1.5, -0.5], [-0.5, 1.5]]`).
    pub fn induced_2norm_with(&self, opts: PowerIterationOptions) -> Result<f64> {
        let n = self.require_square("induced 2-norm")?;
        if self.max_abs() == 0.0 {
            return Ok(0.0);
        }
        let ones = DenseVector::from_vec(vec![ComplexScalar::ONE; n]);
        let skew: DenseVector = (0..n)
            .map(|j| {
                let t = (j as f64 + 1.0) * 0.618_033_988_749_894_8;
                ComplexScalar::new(1.0 + t.fract(), (2.0 * t).fract() - 0.5)
            })
            .collect();
        let a = self.gram_power_iteration(ones, opts)?;
        let b = self.gram_power_iteration(skew, opts)?;
        Ok(a.max(b).sqrt())
    }

    // Dominant eigenvalue of A^H A from the given start.
    fn gram_power_iteration(&self, start: DenseVector, opts: PowerIterationOptions) -> Result<f64> {
        let ah = self.conjugate_transpose();
        let mut v = start.scale(ComplexScalar::from_real(1.0 / start.norm2()));
        let mut lambda_prev = f64::NAN;
        for _ in 0..opts.max_iters {
            let av = self.matvec(&v)?;
            // Rayleigh quotient v^H A^H A v = ||Av||^2 for unit v.
            let lambda = av.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let w = ah.matvec(&av)?;
            let wn = w.norm2();
            if wn == 0.0 || lambda == 0.0 {
                return Ok(0.0);
            }
            if (lambda - lambda_prev).abs() <= opts.tol * lambda {
                return Ok(lambda);
            }
            lambda_prev = lambda;
            v = w.scale(ComplexScalar::from_real(1.0 / wn));
        }
        Err(Error::ConvergenceFailure { what: "power iteration for the induced 2-norm", iterations: opts.max_iters })
    }
}
