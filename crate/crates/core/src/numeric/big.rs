use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use alloc::string::String;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use super::{round_digits, ComplexScalar, NumericError, Precision, RealScalar, Scalar};

const RM: RoundingMode = RoundingMode::ToEven;

/// Constant cache (pi, e, ln 2, powers of ten) shared by the transcendental
/// functions of one evaluation context.
pub struct BigEnv {
    consts: Consts,
}

impl BigEnv {
    pub fn new() -> Self {
        BigEnv {
            consts: Consts::new().expect("constant cache allocation"),
        }
    }

    pub(crate) fn consts(&mut self) -> &mut Consts {
        &mut self.consts
    }
}

impl Default for BigEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for BigEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BigEnv")
    }
}

/// Arbitrary-precision real carried at a fixed [`Precision`].
#[derive(Clone)]
pub struct BigReal {
    value: BigFloat,
    prec: Precision,
}

impl BigReal {
    pub(crate) fn from_raw(value: BigFloat, prec: Precision) -> Self {
        BigReal { value, prec }
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.value
    }

    fn nan(prec: Precision) -> Self {
        BigReal {
            value: BigFloat::nan(None),
            prec,
        }
    }

    fn bits(&self) -> usize {
        self.prec.bits()
    }

    fn lift(&self, value: BigFloat) -> Self {
        BigReal {
            value,
            prec: self.prec,
        }
    }

    /// Leading mantissa as a double in `[0.5, 1)` and the binary exponent.
    fn split(&self) -> Option<(f64, i64)> {
        let words = self.value.mantissa_digits()?;
        let e = self.value.exponent()? as i64;
        let top = *words.last()?;
        if top == 0 {
            return None;
        }
        let next = if words.len() > 1 {
            words[words.len() - 2]
        } else {
            0
        };
        let m = top as f64 / 18_446_744_073_709_551_616.0 + next as f64 / 3.402_823_669_209_385e38;
        Some((m, e))
    }

    /// Four-quadrant arctangent of `self / x`.
    pub fn atan2(&self, x: &BigReal, env: &mut BigEnv) -> BigReal {
        let p = self.bits().max(x.bits());
        let pi = env.consts().pi(p, RM);
        if x.value.is_zero() {
            if self.value.is_zero() {
                return self.lift(BigFloat::from_i64(0, p));
            }
            let half = BigFloat::div(&pi, &BigFloat::from_i64(2, p), p, RM);
            return self.lift(if self.value.is_negative() {
                half.neg()
            } else {
                half
            });
        }
        let base = BigFloat::div(&self.value, &x.value, p, RM).atan(p, RM, env.consts());
        if x.value.is_positive() {
            self.lift(base)
        } else if self.value.is_negative() {
            self.lift(BigFloat::sub(&base, &pi, p, RM))
        } else {
            self.lift(BigFloat::add(&base, &pi, p, RM))
        }
    }

    fn sinh(&self, env: &mut BigEnv) -> BigReal {
        self.lift(self.value.sinh(self.bits(), RM, env.consts()))
    }

    fn cosh(&self, env: &mut BigEnv) -> BigReal {
        self.lift(self.value.cosh(self.bits(), RM, env.consts()))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decimal_digits(20) {
            Some((digits, exp)) => {
                let sign = if self.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}.{}e{exp}", &digits[..1], &digits[1..])
            }
            None => write!(f, "{}", self.to_decimal_string()),
        }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! big_real_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                $trait::$method(&self, &rhs)
            }
        }

        impl<'a> $trait<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let prec = self.prec.max(rhs.prec);
                BigReal {
                    value: BigFloat::$method(&self.value, &rhs.value, prec.bits(), RM),
                    prec,
                }
            }
        }
    };
}

big_real_binop!(Add, add);
big_real_binop!(Sub, sub);
big_real_binop!(Mul, mul);
big_real_binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            value: self.value.neg(),
            prec: self.prec,
        }
    }
}

impl Scalar for BigReal {
    type Real = BigReal;
    type Env = BigEnv;

    fn env(_: Precision) -> BigEnv {
        BigEnv::new()
    }

    fn precision(&self) -> Precision {
        self.prec
    }

    fn from_i64(v: i64, p: Precision) -> Self {
        BigReal {
            value: BigFloat::from_i64(v, p.bits()),
            prec: p,
        }
    }

    fn from_real(r: BigReal) -> Self {
        r
    }

    fn from_parts(re: BigReal, im: BigReal) -> Option<Self> {
        im.is_zero().then_some(re)
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    fn modulus(&self) -> BigReal {
        self.abs()
    }

    fn real_part(&self) -> BigReal {
        self.clone()
    }

    fn imag_part(&self) -> BigReal {
        BigReal::zero(self.prec)
    }

    fn exp(&self, env: &mut BigEnv) -> Self {
        self.lift(self.value.exp(self.bits(), RM, env.consts()))
    }

    fn ln(&self, env: &mut BigEnv) -> Option<Self> {
        if !self.value.is_positive() || self.value.is_zero() {
            return None;
        }
        Some(self.lift(self.value.ln(self.bits(), RM, env.consts())))
    }

    fn sin(&self, env: &mut BigEnv) -> Self {
        self.lift(self.value.sin(self.bits(), RM, env.consts()))
    }

    fn cos(&self, env: &mut BigEnv) -> Self {
        self.lift(self.value.cos(self.bits(), RM, env.consts()))
    }

    fn atan(&self, env: &mut BigEnv) -> Self {
        self.lift(self.value.atan(self.bits(), RM, env.consts()))
    }

    fn powi(&self, n: u32) -> Self {
        self.lift(self.value.powi(n as usize, self.bits(), RM))
    }

    fn pow(&self, e: &Self, env: &mut BigEnv) -> Option<Self> {
        if !self.value.is_positive() || self.value.is_zero() {
            return None;
        }
        Some(self.lift(self.value.pow(&e.value, self.bits(), RM, env.consts())))
    }
}

impl RealScalar for BigReal {
    fn parse_literal(text: &str, p: Precision) -> Result<Self, NumericError> {
        super::make_scalar(text, p)
    }

    fn from_f64(v: f64, p: Precision) -> Self {
        BigReal {
            value: BigFloat::from_f64(v, p.bits()),
            prec: p,
        }
    }

    fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return if self.value.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        let (m, e) = self.split().expect("finite nonzero value");
        let e = e.clamp(-2000, 2000) as i32;
        let v = libm::ldexp(m, e);
        if self.value.is_negative() {
            -v
        } else {
            v
        }
    }

    fn abs(&self) -> Self {
        self.lift(self.value.abs())
    }

    fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    fn ln_abs_f64(&self) -> f64 {
        match self.split() {
            Some((m, e)) => libm::log(m) + e as f64 * core::f64::consts::LN_2,
            None => f64::NAN,
        }
    }

    fn pow10(k: i64, p: Precision) -> Self {
        let bits = p.bits();
        let ten = BigFloat::from_i64(10, bits);
        let mag = ten.powi(k.unsigned_abs() as usize, bits, RM);
        let value = if k < 0 { mag.reciprocal(bits, RM) } else { mag };
        BigReal { value, prec: p }
    }

    fn decimal_digits(&self, sig: usize) -> Option<(String, i64)> {
        if self.value.is_zero() || !self.is_finite() {
            return None;
        }
        let text = self
            .value
            .abs()
            .format(Radix::Dec, RM, BigEnv::new().consts())
            .ok()?;
        let (mantissa, exp) = text.split_once('e')?;
        let exp: i64 = exp.trim_start_matches('+').parse().ok()?;
        let mut digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        // the formatter emits d.ddd with a nonzero leading digit; be lenient anyway
        let mut exp = exp;
        let lead_zeros = digits.bytes().take_while(|&b| b == b'0').count();
        if lead_zeros == digits.len() {
            return None;
        }
        let int_len = mantissa.find('.').unwrap_or(mantissa.len()) as i64;
        exp += int_len - 1 - lead_zeros as i64;
        digits.drain(..lead_zeros);
        let (rounded, carry) = round_digits(&digits, sig);
        Some((rounded, exp + carry))
    }

    fn to_decimal_string(&self) -> String {
        self.value
            .format(Radix::Dec, RM, BigEnv::new().consts())
            .unwrap_or_else(|_| String::from("NaN"))
    }

    fn sqrt(&self) -> Self {
        self.lift(self.value.sqrt(self.bits(), RM))
    }
}

/// Arbitrary-precision complex number.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: BigComplex) -> BigComplex {
        BigComplex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: BigComplex) -> BigComplex {
        BigComplex {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: BigComplex) -> BigComplex {
        // real operands take the real path so the embedding stays exact
        if rhs.im.is_zero() {
            return BigComplex {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            };
        }
        if self.im.is_zero() {
            return BigComplex {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            };
        }
        BigComplex {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: BigComplex) -> BigComplex {
        if rhs.im.is_zero() {
            return BigComplex {
                re: &self.re / &rhs.re,
                im: &self.im / &rhs.re,
            };
        }
        let den = &(&rhs.re * &rhs.re) + &(&rhs.im * &rhs.im);
        let re = &(&self.re * &rhs.re) + &(&self.im * &rhs.im);
        let im = &(&self.im * &rhs.re) - &(&self.re * &rhs.im);
        BigComplex {
            re: &re / &den,
            im: &im / &den,
        }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl BigComplex {
    fn real(re: BigReal) -> Self {
        let im = BigReal::zero(re.prec);
        BigComplex { re, im }
    }

    fn nan(p: Precision) -> Self {
        BigComplex {
            re: BigReal::nan(p),
            im: BigReal::nan(p),
        }
    }

    fn i(p: Precision) -> Self {
        BigComplex {
            re: BigReal::zero(p),
            im: BigReal::one(p),
        }
    }
}

impl Scalar for BigComplex {
    type Real = BigReal;
    type Env = BigEnv;

    fn env(_: Precision) -> BigEnv {
        BigEnv::new()
    }

    fn precision(&self) -> Precision {
        self.re.prec.max(self.im.prec)
    }

    fn from_i64(v: i64, p: Precision) -> Self {
        BigComplex::real(BigReal::from_i64(v, p))
    }

    fn from_real(r: BigReal) -> Self {
        BigComplex::real(r)
    }

    fn from_parts(re: BigReal, im: BigReal) -> Option<Self> {
        Some(BigComplex { re, im })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn modulus(&self) -> BigReal {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        (&(&self.re * &self.re) + &(&self.im * &self.im)).sqrt()
    }

    fn real_part(&self) -> BigReal {
        self.re.clone()
    }

    fn imag_part(&self) -> BigReal {
        self.im.clone()
    }

    fn exp(&self, env: &mut BigEnv) -> Self {
        let ea = self.re.exp(env);
        if self.im.is_zero() {
            return BigComplex::real(ea);
        }
        BigComplex {
            re: &ea * &self.im.cos(env),
            im: &ea * &self.im.sin(env),
        }
    }

    fn ln(&self, env: &mut BigEnv) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() && !self.re.is_negative() {
            return self.re.ln(env).map(BigComplex::real);
        }
        let p = self.precision();
        let r2 = &(&self.re * &self.re) + &(&self.im * &self.im);
        let re = &r2.ln(env)? / &BigReal::from_i64(2, p);
        let im = self.im.atan2(&self.re, env);
        Some(BigComplex { re, im })
    }

    fn sin(&self, env: &mut BigEnv) -> Self {
        if self.im.is_zero() {
            return BigComplex::real(self.re.sin(env));
        }
        BigComplex {
            re: &self.re.sin(env) * &self.im.cosh(env),
            im: &self.re.cos(env) * &self.im.sinh(env),
        }
    }

    fn cos(&self, env: &mut BigEnv) -> Self {
        if self.im.is_zero() {
            return BigComplex::real(self.re.cos(env));
        }
        BigComplex {
            re: &self.re.cos(env) * &self.im.cosh(env),
            im: -(&self.re.sin(env) * &self.im.sinh(env)),
        }
    }

    fn atan(&self, env: &mut BigEnv) -> Self {
        if self.im.is_zero() {
            return BigComplex::real(self.re.atan(env));
        }
        // atan z = (i/2) [ln(1 - iz) - ln(1 + iz)]
        let p = self.precision();
        let i = BigComplex::i(p);
        let iz = i.clone() * self.clone();
        let one = BigComplex::one(p);
        match ((one.clone() - iz.clone()).ln(env), (one + iz).ln(env)) {
            (Some(a), Some(b)) => i * (a - b) / BigComplex::from_i64(2, p),
            _ => BigComplex::nan(p),
        }
    }
}

impl ComplexScalar for BigComplex {
    fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }
}
