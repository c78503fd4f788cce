//! Precision-parametric scalars.
//!
//! Every iteration in this crate is written against the [`Scalar`] trait so
//! that the same step function runs on 1800-digit reals for the benchmark
//! tables and on hardware doubles for the basin renderer. Two families are
//! provided:
//!
//! * [`BigReal`] / [`BigComplex`]: arbitrary precision, round-to-nearest-even.
//! * `f64` / [`Complex64`]: the 16-digit backend used when [`Precision`] asks
//!   for no more than double precision.

mod big;
mod diff;
mod float;
mod literal;

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use alloc::string::String;

pub use big::{BigComplex, BigEnv, BigReal};
pub use diff::{nth_derivative_fd, DiffError, MAX_FD_ORDER};
pub use literal::{make_scalar, validate_literal};
pub use num_complex::Complex64;

/// Working precision in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision {
    decimal_digits: u32,
}

impl Precision {
    /// Hardware-double equivalent.
    pub const DOUBLE: Precision = Precision { decimal_digits: 16 };
    /// Precision of the benchmark tables.
    pub const BENCHMARK: Precision = Precision { decimal_digits: 1800 };

    pub fn new(decimal_digits: u32) -> Result<Self, NumericError> {
        if decimal_digits < 16 {
            return Err(NumericError::PrecisionTooLow(decimal_digits));
        }
        Ok(Precision { decimal_digits })
    }

    pub fn decimal_digits(self) -> u32 {
        self.decimal_digits
    }

    /// Mantissa width in bits: `ceil(digits * log2(10))`.
    pub fn bits(self) -> usize {
        // log2(10) to 12 places, integer arithmetic keeps this exact and const-friendly
        let scaled = self.decimal_digits as u64 * 3_321_928_094_888;
        scaled.div_ceil(1_000_000_000_000) as usize
    }

    /// True when the hardware-double backend suffices.
    pub fn is_double(self) -> bool {
        self.decimal_digits <= 16
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::BENCHMARK
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.decimal_digits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumericError {
    PrecisionTooLow(u32),
    Parse(String),
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::PrecisionTooLow(d) => {
                write!(f, "precision of {d} digits is below the minimum of 16")
            }
            NumericError::Parse(s) => write!(f, "malformed numeric literal {s:?}"),
        }
    }
}

impl core::error::Error for NumericError {}

/// Field arithmetic plus the handful of elementary functions the test
/// problems and weight functions need.
///
/// Division by zero is not checked here; step functions test denominators
/// with [`Scalar::is_zero`] before dividing.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Real: RealScalar;
    /// Scratch state for transcendental functions (constant caches).
    type Env: Send;

    fn env(p: Precision) -> Self::Env;
    fn precision(&self) -> Precision;

    fn from_i64(v: i64, p: Precision) -> Self;
    fn from_real(r: Self::Real) -> Self;
    /// `None` when `im != 0` and the type cannot hold it.
    fn from_parts(re: Self::Real, im: Self::Real) -> Option<Self>;

    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    /// `|self|`.
    fn modulus(&self) -> Self::Real;
    fn real_part(&self) -> Self::Real;
    fn imag_part(&self) -> Self::Real;

    fn exp(&self, env: &mut Self::Env) -> Self;
    /// Principal logarithm; `None` outside the domain (non-positive reals,
    /// complex zero).
    fn ln(&self, env: &mut Self::Env) -> Option<Self>;
    fn sin(&self, env: &mut Self::Env) -> Self;
    fn cos(&self, env: &mut Self::Env) -> Self;
    fn atan(&self, env: &mut Self::Env) -> Self;

    /// `n / d` rounded once.
    fn ratio(n: i64, d: i64, p: Precision) -> Self {
        Self::from_i64(n, p) / Self::from_i64(d, p)
    }

    fn powi(&self, n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_i64(1, self.precision());
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// `self^e` through `exp(e ln self)`; `None` when the logarithm is undefined.
    fn pow(&self, e: &Self, env: &mut Self::Env) -> Option<Self> {
        let l = self.ln(env)?;
        Some((e.clone() * l).exp(env))
    }

    fn zero(p: Precision) -> Self {
        Self::from_i64(0, p)
    }

    fn one(p: Precision) -> Self {
        Self::from_i64(1, p)
    }
}

/// Ordered real scalars.
pub trait RealScalar: Scalar<Real = Self> + PartialOrd {
    fn parse_literal(text: &str, p: Precision) -> Result<Self, NumericError>;
    fn from_f64(v: f64, p: Precision) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn is_negative(&self) -> bool;
    /// `ln|self|` as a double; stays accurate far outside the `f64` exponent
    /// range. Undefined for zero.
    fn ln_abs_f64(&self) -> f64;
    /// `10^k`.
    fn pow10(k: i64, p: Precision) -> Self;
    /// Decimal digits of `|self|` rounded to `sig` significant digits:
    /// `d1.d2d3... x 10^exp`. `None` for zero or non-finite values.
    fn decimal_digits(&self, sig: usize) -> Option<(String, i64)>;
    /// Shortest decimal text that parses back to the same value.
    fn to_decimal_string(&self) -> String;
    fn sqrt(&self) -> Self;
}

/// Scalars with an imaginary part, used on the complex plane.
pub trait ComplexScalar: Scalar {
    fn new(re: Self::Real, im: Self::Real) -> Self;
}

/// Rounds a decimal mantissa string (digits only, the first being the
/// leading digit) to `sig` digits. Returns the digits and the carry into the
/// exponent (0 or 1).
pub(crate) fn round_digits(digits: &str, sig: usize) -> (String, i64) {
    let bytes = digits.as_bytes();
    let mut out: alloc::vec::Vec<u8> = bytes.iter().take(sig).copied().collect();
    while out.len() < sig {
        out.push(b'0');
    }
    let round_up = bytes.get(sig).is_some_and(|&d| d >= b'5');
    let mut carry = 0;
    if round_up {
        let mut i = sig;
        loop {
            if i == 0 {
                out.insert(0, b'1');
                out.truncate(sig);
                carry = 1;
                break;
            }
            i -= 1;
            if out[i] == b'9' {
                out[i] = b'0';
            } else {
                out[i] += 1;
                break;
            }
        }
    }
    (String::from_utf8(out).expect("ascii digits"), carry)
}
