//! Dense row-major matrices and column vectors.
//!
//! [`Matrix`] and [`Vector`] are generic over a small [`Scalar`] trait so the
//! same storage serves real inputs ([`RealMatrix`]) and the complex working
//! type ([`DenseMatrix`]) that every algorithm runs on. Norms and solvers are
//! defined on the complex types only; real data enters through
//! [`Matrix::embed`].

mod norm;
mod solve;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::complex::ComplexScalar;
use crate::error::{Error, Result};

pub use norm::{PowerIterationOptions, MAX_ITERS_NORM, TOL_NORM};
pub use solve::{LuFactors, Triangle, PIVOT_REL_TOL, TOL_RESIDUAL};

pub trait Scalar:
    Copy
    + Default
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
}

impl Scalar for ComplexScalar {
    fn zero() -> Self {
        ComplexScalar::ZERO
    }
    fn one() -> Self {
        ComplexScalar::ONE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T> {
    data: Vec<T>,
}

pub type DenseMatrix = Matrix<ComplexScalar>;
pub type DenseVector = Vector<ComplexScalar>;
pub type RealMatrix = Matrix<f64>;
pub type RealVector = Vector<f64>;

impl<T: Scalar> Matrix<T> {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(n_rows, n_cols, data)
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector::from_vec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &Vector<T>) {
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::DimensionMismatch(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn negate(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|a| s * a)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Matrix product with left-to-right accumulation over the inner index.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &Vector<T>) -> Result<Vector<T>> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok(Vector::from_vec(
            (0..self.rows)
                .map(|i| {
                    self.row(i).iter().zip(v.iter()).fold(T::zero(), |acc, (&a, &x)| acc + a * x)
                })
                .collect(),
        ))
    }

    /// Matrix power by repeated multiplication.
    pub fn pow(&self, m: u32) -> Result<Self> {
        let n = self.require_square("matrix power")?;
        let mut acc = Self::identity(n);
        for _ in 0..m {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }
}

impl RealMatrix {
    /// Entrywise embedding `a -> a + 0i`.
    pub fn embed(&self) -> DenseMatrix {
        self.map(ComplexScalar::from_real)
    }
}

impl DenseMatrix {
    /// `(A^H)_{ij} = conj(A_{ji})`.
    pub fn conjugate_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Largest entry modulus, 0 for the zero matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.cmod()).fold(0.0, f64::max)
    }

    /// True when every entry has exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> RealMatrix {
        self.map(|z| z.re)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Vector<T> {
    pub fn new(data: Vec<T>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::DimensionMismatch("vector dimension must be positive".into()));
        }
        Ok(Self { data })
    }

    /// Like [`Vector::new`] without the emptiness check; used internally where
    /// the length is derived from a validated matrix.
    pub(crate) fn from_vec(data: Vec<T>) -> Self {
        Self { data }
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "vector dimension must be positive");
        Self { data: vec![T::zero(); n] }
    }

    /// The `j`-th standard basis vector of length `n`.
    pub fn unit(n: usize, j: usize) -> Result<Self> {
        if n == 0 || j >= n {
            return Err(Error::IndexOutOfRange { index: j, dim: n });
        }
        let mut v = Self::zeros(n);
        v.data[j] = T::one();
        Ok(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    fn require_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {}",
                self.dim(),
                other.dim()
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        Ok(Self::from_vec(self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        Ok(Self::from_vec(self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect()))
    }

    pub fn negate(&self) -> Self {
        Self::from_vec(self.data.iter().map(|&a| -a).collect())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_vec(self.data.iter().map(|&a| s * a).collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Vector<U> {
        Vector::from_vec(self.data.iter().map(|&x| f(x)).collect())
    }
}

impl RealVector {
    pub fn embed(&self) -> DenseVector {
        self.map(ComplexScalar::from_real)
    }
}

impl DenseVector {
    pub fn real_part(&self) -> RealVector {
        self.map(|z| z.re)
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    #[inline]
    fn index(&self, i: usize) -> &T {
        &self.data[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.data[i]
    }
}

impl<T: Scalar> FromIterator<T> for Vector<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self::from_vec(iter.into_iter().collect())
    }
}
