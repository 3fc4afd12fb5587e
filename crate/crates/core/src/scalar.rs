//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Coefficient field of the whole engine.
pub type Scalar = BigRational;

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn sign(negative: bool) -> Scalar {
    if negative {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// `(-1)^k` for a possibly negative exponent.
pub fn minus_one_pow(k: i64) -> Scalar {
    sign(k.rem_euclid(2) == 1)
}

/// Parses `"3"`, `"-3/4"` or a plain decimal such as `"0.25"`.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Scalar::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let mut digits = String::from(if int_digits.is_empty() { "0" } else { int_digits });
        digits.push_str(frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Scalar::new(n, d);
        return Some(if negative { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Scalar::from_integer(n))
}

pub fn format_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}
