//! Hardware-double backend.

use alloc::format;
use alloc::string::String;

use num_complex::Complex64;
use num_traits::Float;

use super::{round_digits, ComplexScalar, NumericError, Precision, RealScalar, Scalar};

impl Scalar for f64 {
    type Real = f64;
    type Env = ();

    fn env(_: Precision) {}

    fn precision(&self) -> Precision {
        Precision::DOUBLE
    }

    fn from_i64(v: i64, _: Precision) -> Self {
        v as f64
    }

    fn from_real(r: f64) -> Self {
        r
    }

    fn from_parts(re: f64, im: f64) -> Option<Self> {
        (im == 0.0).then_some(re)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_finite(&self) -> bool {
        Float::is_finite(*self)
    }

    fn modulus(&self) -> f64 {
        Float::abs(*self)
    }

    fn real_part(&self) -> f64 {
        *self
    }

    fn imag_part(&self) -> f64 {
        0.0
    }

    fn exp(&self, _: &mut ()) -> Self {
        Float::exp(*self)
    }

    fn ln(&self, _: &mut ()) -> Option<Self> {
        (*self > 0.0).then(|| Float::ln(*self))
    }

    fn sin(&self, _: &mut ()) -> Self {
        Float::sin(*self)
    }

    fn cos(&self, _: &mut ()) -> Self {
        Float::cos(*self)
    }

    fn atan(&self, _: &mut ()) -> Self {
        Float::atan(*self)
    }

    fn pow(&self, e: &Self, _: &mut ()) -> Option<Self> {
        (*self > 0.0).then(|| Float::powf(*self, *e))
    }
}

impl RealScalar for f64 {
    fn parse_literal(text: &str, _: Precision) -> Result<Self, NumericError> {
        super::validate_literal(text)?;
        text.trim()
            .trim_start_matches('+')
            .parse()
            .map_err(|_| NumericError::Parse(String::from(text)))
    }

    fn from_f64(v: f64, _: Precision) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        Float::abs(*self)
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn ln_abs_f64(&self) -> f64 {
        Float::ln(Float::abs(*self))
    }

    fn pow10(k: i64, _: Precision) -> Self {
        Float::powi(10.0, k as i32)
    }

    fn decimal_digits(&self, sig: usize) -> Option<(String, i64)> {
        if *self == 0.0 || !Float::is_finite(*self) {
            return None;
        }
        // 17 significant digits identify any double
        let text = format!("{:.16e}", Float::abs(*self));
        let (mantissa, exp) = text.split_once('e')?;
        let exp: i64 = exp.parse().ok()?;
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        let (rounded, carry) = round_digits(&digits, sig);
        Some((rounded, exp + carry))
    }

    fn to_decimal_string(&self) -> String {
        format!("{self:e}")
    }

    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }
}

impl Scalar for Complex64 {
    type Real = f64;
    type Env = ();

    fn env(_: Precision) {}

    fn precision(&self) -> Precision {
        Precision::DOUBLE
    }

    fn from_i64(v: i64, _: Precision) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_real(r: f64) -> Self {
        Complex64::new(r, 0.0)
    }

    fn from_parts(re: f64, im: f64) -> Option<Self> {
        Some(Complex64::new(re, im))
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_finite(&self) -> bool {
        Complex64::is_finite(*self)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn real_part(&self) -> f64 {
        self.re
    }

    fn imag_part(&self) -> f64 {
        self.im
    }

    fn exp(&self, _: &mut ()) -> Self {
        Complex64::exp(*self)
    }

    fn ln(&self, _: &mut ()) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| Complex64::ln(*self))
    }

    fn sin(&self, _: &mut ()) -> Self {
        Complex64::sin(*self)
    }

    fn cos(&self, _: &mut ()) -> Self {
        Complex64::cos(*self)
    }

    fn atan(&self, _: &mut ()) -> Self {
        Complex64::atan(*self)
    }

    fn pow(&self, e: &Self, _: &mut ()) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| self.powc(*e))
    }
}

impl ComplexScalar for Complex64 {
    fn new(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
}
