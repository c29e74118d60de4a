//! Exact rational scalars and their text forms.
//!
//! Rationals print and parse as `p/q` or plain integers (`-3/2`, `7`).
//! Report columns additionally use [`format_exact`], which prefers the
//! terminating decimal expansion when one exists.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number; the scalar of the whole crate.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor from an integer pair. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand constructor from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Parses `p/q` or integer `p`. Whitespace is not accepted.
pub fn parse_rational(text: &str) -> Result<Rational> {
    text.parse::<Rational>()
        .map_err(|_| Error::Precondition(format!("invalid rational literal `{text}`")))
}

/// Renders a rational as its exact decimal expansion when the expansion
/// terminates (denominator of the form 2^a 5^b), else as `p/q`.
pub fn format_exact(q: &Rational) -> String {
    let denom = q.denom();
    let mut d = denom.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if d != BigInt::from(1) {
        return q.to_string();
    }
    // Scale to 10^k with k = max(twos, fives).
    let k = twos.max(fives);
    let scale = BigInt::from(10).pow(k);
    let scaled = q.numer() * &scale / denom;
    if k == 0 {
        return scaled.to_string();
    }
    let sign = if scaled.is_negative() { "-" } else { "" };
    let digits = scaled.abs().to_string();
    let (int_part, frac_part) = if digits.len() > k as usize {
        let split = digits.len() - k as usize;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", digits, width = k as usize))
    };
    format!("{sign}{int_part}.{frac_part}")
}

/// Lossy conversion for the growth-fit estimates (the one float boundary).
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["-3/2", "7", "0", "22/7"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(q.to_string(), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn exact_decimal_when_terminating() {
        assert_eq!(format_exact(&rat(1, 2)), "0.5");
        assert_eq!(format_exact(&rat(-1, 8)), "-0.125");
        assert_eq!(format_exact(&rat(1, 3)), "1/3");
        assert_eq!(format_exact(&rat_int(42)), "42");
        assert_eq!(format_exact(&rat(7, 50)), "0.14");
        assert_eq!(format_exact(&rat(1048577, 1048576)), "1.00000095367431640625");
    }
}
