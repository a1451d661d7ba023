//! Exact rational scalars and their text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The exact scalar used by every algebraic module.
pub type Q = BigRational;

/// Integer literal as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `num / den` as a rational. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Sign of a nonzero rational, `None` for zero.
pub fn sign_of(x: &Q) -> Option<i8> {
    if x.is_zero() {
        None
    } else if x.is_positive() {
        Some(1)
    } else {
        Some(-1)
    }
}

/// Render as `p/q` (or `p` for integers).
pub fn to_fraction_string(x: &Q) -> String {
    x.to_string()
}

/// Parse `p`, `p/q`, or a finite decimal such as `-0.25`.
pub fn parse_rational(text: &str) -> Result<Q, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty rational".into());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {t:?}"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {t:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {t:?}"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, dec_part)) = t.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), dec_part);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal {t:?}"));
        }
        let mut n: BigInt = digits.parse().map_err(|_| format!("bad decimal {t:?}"))?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), dec_part.len());
        return Ok(Q::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| format!("bad rational {t:?}"))?;
    Ok(Q::from_integer(n))
}

/// Nearest `f64`; only used when exact values cross into the numeric geometry.
pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), q(-3));
        assert_eq!(parse_rational("-0.25").unwrap(), frac(-1, 4));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), frac(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn fraction_strings() {
        assert_eq!(to_fraction_string(&frac(-2, 6)), "-1/3");
        assert_eq!(to_fraction_string(&q(4)), "4");
        assert_eq!(parse_rational(&to_fraction_string(&frac(7, 9))).unwrap(), frac(7, 9));
    }

    #[test]
    fn signs() {
        assert_eq!(sign_of(&frac(-1, 3)), Some(-1));
        assert_eq!(sign_of(&zero()), None);
        assert_eq!(sign_of(&q(2)), Some(1));
    }
}
