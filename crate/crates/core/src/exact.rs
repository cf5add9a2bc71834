//! Exact rational arithmetic helpers.
//!
//! Every closed-form threshold in this crate is an exact rational; floats
//! only ever appear in Monte Carlo estimates.

use serde::{Deserialize, Serialize};

pub type Rational = num_rational::Ratio<i64>;

/// Shorthand constructor. Panics on zero denominator, like `Ratio::new`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Wire form of a rational: `{"num": 1, "den": 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalParts {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for RationalParts {
    fn from(r: Rational) -> Self {
        RationalParts {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl From<RationalParts> for Rational {
    fn from(p: RationalParts) -> Self {
        Rational::new(p.num, p.den)
    }
}

/// Serde adapter serializing a [`Rational`] as `{"num": .., "den": ..}`.
/// Use with `#[serde(with = "crate::exact::rational_serde")]`.
pub mod rational_serde {
    use super::{Rational, RationalParts};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RationalParts::from(*r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        use serde::de::Error;
        let parts = RationalParts::deserialize(d)?;
        if parts.den == 0 {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(parts.into())
    }
}

/// Render as `num/den`, or just `num` for integers.
pub fn format_rational(r: Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"2/3"`, `"0.25"` or `"1"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.len() > 15 || frac.chars().any(|c| !c.is_ascii_digit()) {
            return None;
        }
        let neg = whole.trim_start().starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().ok()?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac_val: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().ok()?
        };
        let signed_frac = if neg { -frac_val } else { frac_val };
        return Some(Rational::new(whole * scale + signed_frac, scale));
    }
    s.parse::<i64>().ok().map(Rational::from_integer)
}

/// Convert to f64 for Monte Carlo thresholding and CSV output.
pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_integers() {
        assert_eq!(parse_rational("2/3"), Some(rational(2, 3)));
        assert_eq!(parse_rational("0.25"), Some(rational(1, 4)));
        assert_eq!(parse_rational("1"), Some(rational(1, 1)));
        assert_eq!(parse_rational("-0.5"), Some(rational(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(rational(2, 6)), "1/3");
        assert_eq!(format_rational(rational(4, 2)), "2");
        assert_eq!(format_rational(rational(0, 5)), "0");
    }
}
