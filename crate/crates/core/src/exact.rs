//! Small helpers around exact rationals: the text encoding `"a/b"` and
//! integer powers with signed exponents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type ExactScalar = BigRational;

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn integer(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Canonical text encoding: `"a/b"`, or `"a"` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |e: &dyn std::fmt::Display| Error::Parse(format!("{s:?}: {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| bad(&e))?;
            let d: BigInt = d.trim().parse().map_err(|e| bad(&e))?;
            if d.is_zero() {
                return Err(bad(&"zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|e| bad(&e))?)),
    }
}

/// `base^exp` for any signed exponent; `base` must be non-zero when `exp < 0`.
pub fn pow_signed(base: i64, exp: i64) -> BigRational {
    let magnitude = BigInt::from(base).pow(exp.unsigned_abs() as u32);
    if exp >= 0 {
        BigRational::from_integer(magnitude)
    } else {
        BigRational::new(BigInt::one(), magnitude)
    }
}

/// If `ratio = ±base^e` for an integer `e`, returns `(sign, e)`.
pub fn signed_log(ratio: &BigRational, base: u64) -> Option<(i32, i64)> {
    if ratio.is_zero() || base < 2 {
        return None;
    }
    let sign = if ratio.is_negative() { -1 } else { 1 };
    let abs = ratio.abs();
    let (num, den) = (abs.numer().clone(), abs.denom().clone());
    let log_of = |mut v: BigInt| -> Option<i64> {
        let b = BigInt::from(base);
        let mut e = 0;
        while v > BigInt::one() {
            if !(&v % &b).is_zero() {
                return None;
            }
            v /= &b;
            e += 1;
        }
        Some(e)
    };
    match (num.is_one(), den.is_one()) {
        (true, true) => Some((sign, 0)),
        (false, true) => log_of(num).map(|e| (sign, e)),
        (true, false) => log_of(den).map(|e| (sign, -e)),
        (false, false) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["1/2", "-3/7", "5", "0"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("2/4").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("3/-6").unwrap(), rational(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow_signed(3, 2), integer(9));
        assert_eq!(pow_signed(3, -2), rational(1, 9));
        assert_eq!(pow_signed(-2, 3), integer(-8));
        assert_eq!(signed_log(&rational(1, 9), 3), Some((1, -2)));
        assert_eq!(signed_log(&integer(-27), 3), Some((-1, 3)));
        assert_eq!(signed_log(&integer(1), 5), Some((1, 0)));
        assert_eq!(signed_log(&rational(2, 3), 3), None);
        assert_eq!(signed_log(&integer(0), 3), None);
    }
}
