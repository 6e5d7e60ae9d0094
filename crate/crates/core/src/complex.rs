//! Complex scalars with modulus and conjugation.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute threshold below which a modulus is treated as zero.
pub const EPS_ZERO: f64 = 1e-14;

/// A complex number `re + i im` in double precision.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexScalar {
    pub re: f64,
    pub im: f64,
}

impl ComplexScalar {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
    pub const ONE: Self = Self { re: 1.0, im: 0.0 };
    pub const I: Self = Self { re: 0.0, im: 1.0 };

    #[inline]
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    #[inline]
    pub const fn from_real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    /// Modulus `sqrt(re^2 + im^2)`, computed without intermediate overflow.
    #[inline]
    pub fn cmod(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `re^2 + im^2`.
    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self { re: self.re * s, im: self.im * s }
    }

    /// True when the modulus is at most [`EPS_ZERO`].
    #[inline]
    pub fn is_zero(self) -> bool {
        self.cmod() <= EPS_ZERO
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Division that refuses denominators with modulus `<= EPS_ZERO`.
    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        let m = rhs.cmod();
        if m <= EPS_ZERO {
            return Err(Error::DivisionByZero(m));
        }
        Ok(smith_div(self, rhs))
    }

    pub fn inv(self) -> Result<Self> {
        Self::ONE.checked_div(self)
    }

    /// `self^n` by binary exponentiation; `z^0 = 1` for every `z`.
    pub fn pow(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc *= base;
            }
            n >>= 1;
            if n > 0 {
                base *= base;
            }
        }
        acc
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        let m = self.cmod();
        if m == 0.0 {
            return Self::ZERO;
        }
        let re = ((m + self.re.abs()) * 0.5).sqrt();
        if self.re >= 0.0 {
            Self::new(re, self.im / (2.0 * re))
        } else {
            Self::new(self.im.abs() / (2.0 * re), re.copysign(self.im))
        }
    }
}

// Smith's algorithm: scale by the larger denominator component.
fn smith_div(a: ComplexScalar, b: ComplexScalar) -> ComplexScalar {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let d = b.re + b.im * r;
        ComplexScalar::new((a.re + a.im * r) / d, (a.im - a.re * r) / d)
    } else {
        let r = b.re / b.im;
        let d = b.re * r + b.im;
        ComplexScalar::new((a.re * r + a.im) / d, (a.im * r - a.re) / d)
    }
}

impl From<f64> for ComplexScalar {
    fn from(re: f64) -> Self {
        Self::from_real(re)
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 || (self.im == 0.0 && self.im.is_sign_negative()) {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for ComplexScalar {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexScalar {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for ComplexScalar {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for ComplexScalar {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// Unchecked division (Smith's algorithm). A zero denominator yields
/// non-finite components; use [`ComplexScalar::checked_div`] to get an error.
impl Div for ComplexScalar {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        smith_div(self, rhs)
    }
}

impl Neg for ComplexScalar {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl AddAssign for ComplexScalar {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for ComplexScalar {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl MulAssign for ComplexScalar {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Sum for ComplexScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, z| acc + z)
    }
}

impl<'a> Sum<&'a ComplexScalar> for ComplexScalar {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, z| acc + *z)
    }
}
