//! Exact integer and rational arithmetic helpers.
//!
//! All quantities in this crate are exact: integers are arbitrary-precision
//! and "numbers" are rationals. Floating point never appears.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// q^e as an exact rational, for integer e of either sign.
pub fn q_pow(q: u64, e: i64) -> Rat {
    let base = Int::from(q);
    if e >= 0 {
        Rat::from_integer(base.pow(e as u32))
    } else {
        Rat::new(Int::one(), base.pow((-e) as u32))
    }
}

/// p-adic valuation of a nonzero rational (None for zero).
pub fn val_p(x: &Rat, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = Int::from(p);
    let mut v: i64 = 0;
    let mut n = x.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = x.denom().abs();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Some(v)
}

/// Render a rational as "a" or "a/b" in lowest terms.
pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse "a" or "a/b" with decimal-string components.
pub fn rat_from_string(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Int> {
        t.trim()
            .parse::<Int>()
            .map_err(|_| Error::Json(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((a, b)) => {
            let d = parse_int(b)?;
            if d.is_zero() {
                return Err(Error::Json(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(a)?, d))
        }
    }
}

/// Exact pair-of-decimal-strings form ["a","b"] used by the JSON schemas.
pub fn rat_to_pair(x: &Rat) -> (String, String) {
    (x.numer().to_string(), x.denom().to_string())
}

pub fn rat_from_pair(n: &str, d: &str) -> Result<Rat> {
    let n: Int = n
        .parse()
        .map_err(|_| Error::Json(format!("not an integer: {n:?}")))?;
    let d: Int = d
        .parse()
        .map_err(|_| Error::Json(format!("not an integer: {d:?}")))?;
    if d.is_zero() {
        return Err(Error::Json("zero denominator".into()));
    }
    Ok(Rat::new(n, d))
}

/// Checked conversion of a rational that must be an integer fitting i64.
pub fn rat_as_i64(x: &Rat) -> Option<i64> {
    if x.denom().is_one() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_pow_signs() {
        assert_eq!(q_pow(2, 3), rat_int(8));
        assert_eq!(q_pow(2, -2), rat(1, 4));
        assert_eq!(q_pow(3, 0), rat_int(1));
    }

    #[test]
    fn val_p_works() {
        assert_eq!(val_p(&rat(8, 3), 2), Some(3));
        assert_eq!(val_p(&rat(3, 4), 2), Some(-2));
        assert_eq!(val_p(&rat_int(0), 2), None);
    }

    #[test]
    fn string_roundtrip() {
        let x = rat(-7, 12);
        assert_eq!(rat_from_string(&rat_to_string(&x)).unwrap(), x);
    }
}
