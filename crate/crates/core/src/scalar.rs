//! The ground field: arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(k: u32) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

pub fn is_one(s: &Scalar) -> bool {
    s.is_one()
}

/// Formats as `p` or `p/q`.
pub fn format(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed).
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn abs(s: &Scalar) -> Scalar {
    s.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let s = frac(6, -4);
        assert_eq!(s.numer(), &BigInt::from(-3));
        assert_eq!(s.denom(), &BigInt::from(2));
        assert_eq!(format(&s), "-3/2");
        assert_eq!(format(&int(0)), "0");
        assert_eq!(int(0).denom(), &BigInt::one());
    }

    #[test]
    fn parse_roundtrip() {
        for s in [frac(7, 3), int(-12), int(0), frac(-1, 6)] {
            assert_eq!(parse(&format(&s)), Some(s));
        }
        assert_eq!(parse("1/0"), None);
        assert_eq!(factorial(5), int(120));
        assert_eq!(factorial(0), int(1));
    }
}
