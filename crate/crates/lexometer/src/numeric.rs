//! Exact rational arithmetic and fixed-precision decimal presentation.
//!
//! Word counts stay integers end to end; every derived quantity
//! (characters per word, growth, validation ratios) is carried as an
//! exact `i128` rational and rounded once, at presentation. The default
//! presentation rounding is half-up (half away from zero); half-even
//! exists for the reproduction fallback protocol.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational. `i128` covers the full pipeline comfortably: the
/// largest intermediate is a yearly character total (~1.5e8) scaled by
/// 10^5 presentation digits.
pub type Rat = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    HalfUp,
    HalfEven,
}

/// `value` as a fixed-point decimal string with exactly `decimals`
/// fractional digits. Zero never carries a sign.
pub fn to_decimal(value: Rat, decimals: u32, mode: Rounding) -> String {
    let scale = 10_i128.pow(decimals);
    let scaled = value * Rat::from_integer(scale);
    let n = scaled.numer().abs();
    let d = scaled.denom().abs();
    let (q, r) = (n / d, n % d);
    let rounded = match mode {
        Rounding::HalfUp => {
            if 2 * r >= d {
                q + 1
            } else {
                q
            }
        }
        Rounding::HalfEven => {
            if 2 * r > d || (2 * r == d && q % 2 == 1) {
                q + 1
            } else {
                q
            }
        }
    };
    let sign = if value.is_negative() && rounded != 0 {
        "-"
    } else {
        ""
    };
    if decimals == 0 {
        return format!("{sign}{rounded}");
    }
    let int = rounded / scale;
    let frac = rounded % scale;
    format!(
        "{sign}{int}.{frac:0width$}",
        width = decimals as usize
    )
}

/// Rounds to the nearest integer, half away from zero.
pub fn round_half_up_i128(value: Rat) -> i128 {
    let n = value.numer().abs();
    let d = value.denom().abs();
    let q = n / d;
    let r = n % d;
    let mag = if 2 * r >= d { q + 1 } else { q };
    if value.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Parses a plain decimal literal (optional sign, optional fraction)
/// into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::Input(format!("not a decimal number: {s:?}"));
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1_i128, r),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let int: i128 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let mut num = int;
    let mut den = 1_i128;
    for c in frac_part.chars() {
        num = num * 10 + (c as u8 - b'0') as i128;
        den *= 10;
    }
    Ok(Rat::new(sign * num, den))
}

/// Ratio of two counts as an exact rational; `denom` must be positive.
pub fn ratio(numer: u64, denom: u64) -> Result<Rat> {
    if denom == 0 {
        return Err(Error::ArithmeticDomain("division by zero count".into()));
    }
    Ok(Rat::new(numer as i128, denom as i128))
}

pub fn is_zero(r: Rat) -> bool {
    r.is_zero()
}
