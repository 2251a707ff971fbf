//! Exact non-negative ratios of cell counts.
//!
//! Values are serialized as `"num/den"` strings so that JSON output never
//! passes through floating point.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational with 64-bit numerator and denominator.
pub type Rational = Ratio<i64>;

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(num as i64, den as i64)
}

/// Formats as `num/den` even for integers (`2/1`).
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rational::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.trim().parse().ok()?)),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Compares `a/b < c/d` for non-negative integer pairs by cross-multiplication.
#[inline]
pub(crate) fn less(a: u64, b: u64, c: u64, d: u64) -> bool {
    (a as u128) * (d as u128) < (c as u128) * (b as u128)
}

/// serde adapter: `#[serde(with = "crate::rational::string")]`.
pub mod string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        format(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// serde adapter for `Option<Rational>`.
pub mod opt_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(format).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        match s {
            None => Ok(None),
            Some(s) => parse(&s)
                .map(Some)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))),
        }
    }
}
