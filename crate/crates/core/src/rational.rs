//! Exact arithmetic helpers.
//!
//! Metrics are recomputed exactly from strategies; only the LP solver works
//! in floating point. Solver output is snapped back to the simplest rational
//! within a small tolerance (see [`simplest_within`]).

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"12"`, `"0.25"`, `"-1.5e3"`, `"2E-2"` or `"10/470"` exactly.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_decimal(n)?;
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exponent - i32::try_from(frac.len()).ok()?;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact binary value of a finite float.
pub fn from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// The rational with the smallest denominator in `[x - tol, x + tol]`.
pub fn simplest_within(x: f64, tol: f64) -> Rational {
    let lo = from_f64(x - tol).unwrap_or_else(Rational::zero);
    let hi = from_f64(x + tol).unwrap_or_else(Rational::zero);
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(-hi, -lo);
    }
    simplest_between(lo, hi)
}

// Continued-fraction descent; requires 0 <= lo <= hi.
fn simplest_between(lo: Rational, hi: Rational) -> Rational {
    let floor = lo.floor();
    if floor == lo {
        return lo;
    }
    let next = &floor + Rational::one();
    if next <= hi {
        return next;
    }
    let inner = simplest_between((&hi - &floor).recip(), (&lo - &floor).recip());
    floor + inner.recip()
}

/// Rounds half away from zero to `places` decimals.
pub fn round_to(value: &Rational, places: u32) -> Rational {
    let scale = Rational::from_integer(num::pow(BigInt::from(10), places as usize));
    (value * &scale).round() / scale
}

/// Float view of `value` rounded to `places` decimals; used for JSON output.
pub fn rounded_f64(value: &Rational, places: u32) -> f64 {
    let rounded = round_to(value, places);
    format_fixed(&rounded, places).parse().unwrap_or(f64::NAN)
}

/// Fixed-point decimal string, e.g. `format_fixed(2/3, 3) == "0.667"`.
pub fn format_fixed(value: &Rational, places: u32) -> String {
    let scale = num::pow(BigInt::from(10), places as usize);
    let scaled = (value * Rational::from_integer(scale.clone())).round().to_integer();
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let places = places as usize;
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (whole, frac) = digits.split_at(digits.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

/// Short human-readable form: `2/3`, `300`.
pub fn display(value: &Rational) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
