//! Lossless and approximate renderings of exact values.

use johnson_core::{BigInt, BigRational};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Significant digits in every approximate decimal field.
pub const APPROX_DIGITS: usize = 12;

/// An exact rational as `"num/den"` (or `"num"` when integral), with a
/// labeled decimal approximation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRational {
    pub exact: String,
    pub approx: String,
}

impl From<&BigRational> for ExactRational {
    fn from(q: &BigRational) -> Self {
        ExactRational { exact: q.to_string(), approx: approx_rational(q, APPROX_DIGITS) }
    }
}

impl ExactRational {
    pub fn parse(&self) -> Option<BigRational> {
        parse_rational(&self.exact)
    }
}

fn pow10(e: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), e)
}

/// `q` rounded half away from zero to `digits` significant digits.
///
/// Positional notation for magnitudes in `[1e-5, 1e15)`, scientific otherwise.
/// Trailing fractional zeros are dropped.
pub fn approx_rational(q: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if q.is_zero() {
        return "0".to_string();
    }
    let negative = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();

    // exponent e with 10^e <= |q| < 10^(e+1)
    let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
    let below = |e: i64| {
        if e >= 0 {
            num < &den * pow10(e as usize)
        } else {
            &num * pow10((-e) as usize) < den
        }
    };
    if below(exp) {
        exp -= 1;
    }

    // scaled = round(|q| * 10^(digits - 1 - exp))
    let shift = digits as i64 - 1 - exp;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (&num * pow10(shift as usize), den.clone())
    } else {
        (num.clone(), &den * pow10((-shift) as usize))
    };
    let mut scaled: BigInt = (&scaled_num * 2 + &scaled_den) / (&scaled_den * 2);
    if scaled >= pow10(digits) {
        scaled /= 10;
        exp += 1;
    }

    let mantissa = scaled.to_string();
    let sign = if negative { "-" } else { "" };
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..15).contains(&exp) {
        let body = if exp >= 0 {
            let int_len = exp as usize + 1;
            if int_len >= mantissa.len() {
                format!("{mantissa}{}", "0".repeat(int_len - mantissa.len()))
            } else {
                format!("{}.{}", &mantissa[..int_len], &mantissa[int_len..])
            }
        } else {
            format!("0.{}{mantissa}", "0".repeat((-exp - 1) as usize))
        };
        format!("{sign}{}", trim(body))
    } else {
        let body = trim(format!("{}.{}", &mantissa[..1], &mantissa[1..]));
        format!("{sign}{body}e{exp}")
    }
}

/// Approximate rendering of a float through its exact binary value.
pub fn approx_f64(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    match BigRational::from_float(x) {
        Some(q) => approx_rational(&q, APPROX_DIGITS),
        None => x.to_string(),
    }
}

/// Parses `"a/b"`, `"a"`, or a plain decimal such as `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let q = BigRational::new(num, pow10(frac_part.len()));
    Some(if negative { -q } else { q })
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}
