use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: "p/q", or "p" when q = 1.
pub fn fmt_q(r: &Rational) -> String {
    r.to_string()
}

/// Parses "p", "p/q" and finite decimals such as "2.5" or "-0.75".
pub fn parse_q(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn serialize_q<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(r))
}

pub fn deserialize_q<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse_q(&s).map_err(serde::de::Error::custom)
}

pub mod serde_q {
    pub use super::deserialize_q as deserialize;
    pub use super::serialize_q as serialize;
}

pub mod serde_qvec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_q(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_q(s).map_err(serde::de::Error::custom)).collect()
    }
}

fn exact_root(x: &BigInt, d: u32) -> Option<BigInt> {
    let r = x.nth_root(d);
    if num_traits::pow(r.clone(), d as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Rational d-th root of `r`, if one exists.
pub fn dth_root(r: &Rational, d: u64) -> Result<Option<Rational>> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    if d == 0 {
        return Err(Error::PreconditionViolation("d must be positive".into()));
    }
    let d32 = u32::try_from(d).map_err(|_| Error::PreconditionViolation("d too large".into()))?;
    if r.is_negative() && d.is_multiple_of(2) {
        return Ok(None);
    }
    let num = exact_root(&r.numer().abs(), d32);
    let den = exact_root(r.denom(), d32);
    Ok(match (num, den) {
        (Some(n), Some(m)) => {
            let root = Rational::new(n, m);
            Some(if r.is_negative() { -root } else { root })
        }
        _ => None,
    })
}

pub fn is_dth_power(r: &Rational, d: u64) -> Result<bool> {
    Ok(dth_root(r, d)?.is_some())
}

/// Canonical representative of `r` in Q^x / (Q^x)^d: a d-th-power-free integer
/// (positive when d is odd).
pub fn power_class(r: &Rational, d: u64) -> Result<Rational> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    if d <= 1 {
        return Ok(Rational::one());
    }
    let negative = r.is_negative() && d.is_multiple_of(2);
    // r * denom^d is an integer in the same class
    let mut m = r.numer().abs() * num_traits::pow(r.denom().clone(), d as usize - 1);
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u64;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if !e.is_multiple_of(d) {
            out *= num_traits::pow(p.clone(), (e % d) as usize);
        }
        p += 1;
    }
    if !m.is_one() {
        // leftover is a prime (exponent 1)
        out *= m;
    }
    let out = Rational::from_integer(out);
    Ok(if negative { -out } else { out })
}

/// Extended gcd on machine integers: returns (g, x, y) with a*x + b*y = g.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn pow_q(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["0", "3", "-7/2", "13/3"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q("4/8").unwrap(), qf(1, 2));
        assert_eq!(parse_q("2.5").unwrap(), qf(5, 2));
        assert_eq!(parse_q("-0.25").unwrap(), qf(-1, 4));
        assert_eq!(fmt_q(&parse_q("0/5").unwrap()), "0");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn dth_powers() {
        assert!(is_dth_power(&q(8), 3).unwrap());
        assert!(!is_dth_power(&q(-4), 2).unwrap());
        assert!(is_dth_power(&q(-8), 3).unwrap());
        assert!(is_dth_power(&q(1), 5).unwrap());
        assert!(is_dth_power(&qf(4, 9), 2).unwrap());
        assert!(!is_dth_power(&qf(2, 9), 2).unwrap());
        assert_eq!(is_dth_power(&q(0), 2), Err(Error::ZeroInput));
    }

    #[test]
    fn classes() {
        assert_eq!(power_class(&q(4), 2).unwrap(), q(1));
        assert_eq!(power_class(&q(2), 2).unwrap(), q(2));
        assert_eq!(power_class(&qf(1, 2), 2).unwrap(), q(2));
        assert_eq!(power_class(&q(-12), 2).unwrap(), q(-3));
        assert_eq!(power_class(&q(-12), 3).unwrap(), q(12));
        assert_eq!(power_class(&qf(3, 16), 4).unwrap(), q(3));
        assert_eq!(power_class(&q(7), 1).unwrap(), q(1));
    }

    #[test]
    fn bezout() {
        for (a, b) in [(4, 6), (2, 3), (8, 2), (5, 5), (1, 7)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, num_integer::gcd(a, b));
        }
    }
}
