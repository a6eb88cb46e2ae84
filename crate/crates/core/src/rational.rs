//! Exact rational numbers and their textual forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a rational from decimal or fraction notation.
///
/// Accepted forms: `"3"`, `"-0.25"`, `".5"`, `"1e-3"`, `"2.5E2"`, `"7/10"`,
/// `"-3/4"`. Decimals are read exactly, so `"0.1"` is `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::input("empty rational"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim(), text)?;
        let den = parse_integer(den.trim(), text)?;
        if den.is_zero() {
            return Err(Error::input(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s, text)
}

fn parse_integer(s: &str, whole: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::input(format!("not a rational: {whole:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|_| Error::input(format!("not a rational: {whole:?}")))
}

fn parse_decimal(s: &str, whole: &str) -> Result<Rational> {
    let bad = || Error::input(format!("not a rational: {whole:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp_text = &s[pos + 1..];
            let exp_digits = exp_text.strip_prefix(['+', '-']).unwrap_or(exp_text);
            if exp_digits.is_empty() || exp_digits.len() > 4 || !exp_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let e: i64 = exp_text.parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= Rational::from_integer(factor);
    } else {
        value /= Rational::from_integer(factor);
    }
    Ok(if negative { -value } else { value })
}

/// Reduced fraction text: `"7/10"`, `"-3"`, `"0"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Fraction with a decimal approximation alongside, e.g. `"1/3 (≈0.333333)"`.
pub fn format_with_decimal(q: &Rational) -> String {
    if q.denom().is_one() {
        return format_rational(q);
    }
    let approx = q.to_f64().unwrap_or(f64::NAN);
    format!("{} (≈{:.6})", format_rational(q), approx)
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.1").unwrap(), frac(1, 10));
        assert_eq!(parse_rational("-0.25").unwrap(), frac(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("3.").unwrap(), int(3));
        assert_eq!(parse_rational("1e-3").unwrap(), frac(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational("+4").unwrap(), int(4));
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_rational("7/10").unwrap(), frac(7, 10));
        assert_eq!(parse_rational("-6/8").unwrap(), frac(-3, 4));
        assert_eq!(parse_rational(" 2 / -4 ").unwrap(), frac(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "",
            "abc",
            "1/0",
            "1.2.3",
            "-",
            ".",
            "1e",
            "1/2/3",
            "0x10",
            "nan",
            "1e9999999",
            "--1",
        ] {
            assert!(parse_rational(s).is_err(), "{s:?} should be rejected");
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&frac(3, 10)), "3/10");
        assert_eq!(format_rational(&int(-2)), "-2");
        assert_eq!(format_with_decimal(&frac(1, 4)), "1/4 (≈0.250000)");
        assert_eq!(format_with_decimal(&int(5)), "5");
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let q = frac(n, d);
            prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }
}
