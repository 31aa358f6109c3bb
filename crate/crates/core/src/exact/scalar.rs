//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, a plain integer, or a finite decimal such as `"-1.25"`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let bad = || Error::Input(format!("malformed exact value `{t}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Input(format!("zero denominator in `{t}`")));
        }
        return Ok(Scalar::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mut num: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Scalar::new(num, den));
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Scalar::from_integer(p))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale down both sides
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_scalar("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_scalar("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar("42").unwrap(), int(42));
        assert_eq!(parse_scalar("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_scalar(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for t in ["", "1/0", "abc", "1.2.3", "1/x", "1."] {
            assert!(parse_scalar(t).is_err(), "{t}");
        }
    }

    #[test]
    fn format_round_trips() {
        for v in [ratio(7, -3), int(0), int(-5), ratio(22, 7)] {
            assert_eq!(parse_scalar(&format_scalar(&v)).unwrap(), v);
        }
    }
}
