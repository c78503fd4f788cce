use alloc::string::{String, ToString};

use astro_float::{BigFloat, Radix, RoundingMode};

use super::{BigEnv, BigReal, NumericError, Precision};

/// Checks `[+-]? (d+ | d+.d* | .d+) ([eE][+-]?d+)?`.
pub fn validate_literal(text: &str) -> Result<(), NumericError> {
    let err = || NumericError::Parse(text.to_string());
    let s = text.trim().as_bytes();
    let mut i = 0;
    if matches!(s.first(), Some(b'+' | b'-')) {
        i += 1;
    }
    let mut int_digits = 0;
    while i < s.len() && s[i].is_ascii_digit() {
        i += 1;
        int_digits += 1;
    }
    let mut frac_digits = 0;
    if i < s.len() && s[i] == b'.' {
        i += 1;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
            frac_digits += 1;
        }
    }
    if int_digits + frac_digits == 0 {
        return Err(err());
    }
    if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
        i += 1;
        if matches!(s.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return Err(err());
        }
    }
    if i != s.len() {
        return Err(err());
    }
    Ok(())
}

/// Parses a decimal or scientific literal, rounding to nearest at `p`.
pub fn make_scalar(text: &str, p: Precision) -> Result<BigReal, NumericError> {
    validate_literal(text)?;
    let normalized = normalize(text.trim());
    let value = BigFloat::parse(
        &normalized,
        Radix::Dec,
        p.bits(),
        RoundingMode::ToEven,
        BigEnv::new().consts(),
    );
    if value.is_nan() || value.is_inf() {
        return Err(NumericError::Parse(text.to_string()));
    }
    Ok(BigReal::from_raw(value, p))
}

fn normalize(text: &str) -> String {
    let (sign, rest) = match text.as_bytes()[0] {
        b'-' => ("-", &text[1..]),
        b'+' => ("", &text[1..]),
        _ => ("", text),
    };
    let (mantissa, exp) = match rest.find(['e', 'E']) {
        Some(k) => (&rest[..k], &rest[k + 1..]),
        None => (rest, "0"),
    };
    let mut out = String::from(sign);
    if mantissa.starts_with('.') {
        out.push('0');
    }
    out.push_str(mantissa);
    if mantissa.ends_with('.') {
        out.push('0');
    }
    if !mantissa.contains('.') {
        out.push_str(".0");
    }
    out.push('e');
    out.push_str(exp.trim_start_matches('+'));
    out
}
