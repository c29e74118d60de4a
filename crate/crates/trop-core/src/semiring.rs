//! Max-plus scalar arithmetic on `R ∪ {-inf}`.
//!
//! Addition is max, multiplication is +; `0_o = -inf` is the additive
//! identity and absorbs multiplication, `1_o = 0` is the multiplicative
//! identity. Division and powers are partial: `-inf` has no
//! multiplicative inverse, and `-inf` to a nonpositive power is undefined.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A max-plus scalar: an exact rational or the bottom element `-inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TropValue {
    /// The additive identity 0_o = -inf.
    Bottom,
    /// A finite rational value.
    Finite(Rational),
}

impl TropValue {
    /// The additive identity 0_o = -inf.
    pub fn bottom() -> Self {
        TropValue::Bottom
    }

    /// The multiplicative identity 1_o = 0.
    pub fn one() -> Self {
        TropValue::Finite(Rational::zero())
    }

    pub fn finite(q: Rational) -> Self {
        TropValue::Finite(q)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, TropValue::Bottom)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            TropValue::Bottom => None,
            TropValue::Finite(q) => Some(q),
        }
    }

    /// Tropical addition: max, with `-inf` as least element.
    pub fn oplus(&self, other: &TropValue) -> TropValue {
        match (self, other) {
            (TropValue::Bottom, b) => b.clone(),
            (a, TropValue::Bottom) => a.clone(),
            (TropValue::Finite(a), TropValue::Finite(b)) => {
                TropValue::Finite(a.max(b).clone())
            }
        }
    }

    /// Tropical multiplication: +, with `-inf` absorbing.
    pub fn otimes(&self, other: &TropValue) -> TropValue {
        match (self, other) {
            (TropValue::Bottom, _) | (_, TropValue::Bottom) => TropValue::Bottom,
            (TropValue::Finite(a), TropValue::Finite(b)) => TropValue::Finite(a + b),
        }
    }

    /// Tropical division: subtraction. Dividing by `-inf` is an error.
    pub fn oslash(&self, other: &TropValue) -> Result<TropValue> {
        match (self, other) {
            (_, TropValue::Bottom) => Err(Error::DivisionByBottom),
            (TropValue::Bottom, _) => Ok(TropValue::Bottom),
            (TropValue::Finite(a), TropValue::Finite(b)) => Ok(TropValue::Finite(a - b)),
        }
    }

    /// Tropical power: scaling. `-inf` requires a strictly positive exponent.
    pub fn opow(&self, exponent: &Rational) -> Result<TropValue> {
        match self {
            TropValue::Bottom => {
                if exponent > &Rational::zero() {
                    Ok(TropValue::Bottom)
                } else {
                    Err(Error::BottomPower(exponent.clone()))
                }
            }
            TropValue::Finite(a) => Ok(TropValue::Finite(a * exponent)),
        }
    }
}

impl PartialOrd for TropValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TropValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TropValue::Bottom, TropValue::Bottom) => Ordering::Equal,
            (TropValue::Bottom, _) => Ordering::Less,
            (_, TropValue::Bottom) => Ordering::Greater,
            (TropValue::Finite(a), TropValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl From<Rational> for TropValue {
    fn from(q: Rational) -> Self {
        TropValue::Finite(q)
    }
}

impl fmt::Display for TropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropValue::Bottom => write!(f, "-inf"),
            TropValue::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// Parses `-inf` or a rational literal.
pub fn parse_trop(text: &str) -> Result<TropValue> {
    if text == "-inf" {
        Ok(TropValue::Bottom)
    } else {
        crate::rational::parse_rational(text).map(TropValue::Finite)
    }
}
