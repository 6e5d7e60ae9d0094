use super::{DenseMatrix, DenseVector};
use crate::complex::ComplexScalar;
use crate::error::{Error, Result};

/// Pivots with modulus at or below this multiple of the largest entry modulus
/// are treated as zero.
pub const PIVOT_REL_TOL: f64 = 1e-13;

/// Relative residual bound a direct solve is expected to meet:
/// `||Ax - b|| <= TOL_RESIDUAL * (||A||_F ||x|| + ||b||)`.
pub const TOL_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Lower,
    Upper,
}

/// Packed LU factors `PA = LU` with unit lower `L`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.require_square("LU factorization")?;
        let threshold = PIVOT_REL_TOL * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmod) = (k..n)
                .map(|i| (i, lu[(i, k)].cmod()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmod <= threshold || pmod == 0.0 {
                return Err(Error::SingularMatrix { pivot: k, modulus: pmod });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == ComplexScalar::ZERO {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &DenseVector) -> Result<DenseVector> {
        let n = self.dim();
        if b.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, system has {n} rows",
                b.dim()
            )));
        }
        let mut x: Vec<ComplexScalar> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(DenseVector::from_vec(x))
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, system has {}",
                b.rows(),
                self.dim()
            )));
        }
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            out.set_column(j, &self.solve(&b.column(j))?);
        }
        Ok(out)
    }
}

impl DenseMatrix {
    /// Direct solution of `A x = b` by LU with partial pivoting.
    pub fn lu_solve(&self, b: &DenseVector) -> Result<DenseVector> {
        if b.dim() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.dim(),
                self.rows()
            )));
        }
        LuFactors::factor(self)?.solve(b)
    }

    /// Forward or back substitution. Entries outside the declared triangle
    /// are ignored.
    pub fn triangular_solve(&self, b: &DenseVector, shape: Triangle) -> Result<DenseVector> {
        let n = self.require_square("triangular solve")?;
        if b.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {n} rows",
                b.dim()
            )));
        }
        let threshold = PIVOT_REL_TOL * self.max_abs();
        for i in 0..n {
            let m = self[(i, i)].cmod();
            if m <= threshold || m == 0.0 {
                return Err(Error::SingularMatrix { pivot: i, modulus: m });
            }
        }
        let mut x = vec![ComplexScalar::ZERO; n];
        match shape {
            Triangle::Lower => {
                for i in 0..n {
                    let mut acc = b[i];
                    for j in 0..i {
                        acc -= self[(i, j)] * x[j];
                    }
                    x[i] = acc / self[(i, i)];
                }
            }
            Triangle::Upper => {
                for i in (0..n).rev() {
                    let mut acc = b[i];
                    for j in (i + 1)..n {
                        acc -= self[(i, j)] * x[j];
                    }
                    x[i] = acc / self[(i, i)];
                }
            }
        }
        Ok(DenseVector::from_vec(x))
    }

    /// Residual `||Ax - b||` relative to `||A||_F ||x|| + ||b||`.
    pub fn relative_residual(&self, x: &DenseVector, b: &DenseVector) -> Result<f64> {
        let r = self.matvec(x)?.sub(b)?.norm2();
        let scale = self.frobenius_norm() * x.norm2() + b.norm2();
        Ok(if scale == 0.0 { r } else { r / scale })
    }
}
