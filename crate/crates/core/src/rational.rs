//! Exact rational helpers shared by the capacity and GDOF evaluators.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rational {
    Ratio::new(num, den)
}

pub fn int(n: i64) -> Rational {
    Ratio::from_integer(n)
}

/// `(x)^+`
pub fn pos(x: Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else {
        x
    }
}

/// Machine form of a rational: `{num, den}` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for RationalJson {
    fn from(r: Rational) -> Self {
        RationalJson { num: *r.numer(), den: *r.denom() }
    }
}

impl From<RationalJson> for Rational {
    fn from(r: RationalJson) -> Self {
        rat(r.num, r.den)
    }
}

pub fn serialize_json<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson::from(*r).serialize(s)
}

/// Table form: `num/den`, or just `num` for integers.
pub fn display(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.75` exactly.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(rat(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: i64 = match whole.trim_start_matches(['-', '+']) {
            "" => 0,
            w => w.parse().map_err(|_| bad())?,
        };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let mag = rat(whole, 1) + rat(f, den);
        return Ok(if negative { -mag } else { mag });
    }
    s.parse::<i64>().map(int).map_err(|_| bad())
}

/// Closest rational to `x` with denominator at most `max_den` (continued-fraction
/// convergents plus the best semiconvergent).
pub fn best_approximation(x: f64, max_den: i64) -> Result<Rational> {
    if !x.is_finite() || max_den < 1 {
        return Err(Error::OutOfRange(format!("cannot approximate {x}")));
    }
    let negative = x < 0.0;
    let target = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut rem = target;
    loop {
        let a = rem.floor();
        if a > (i64::MAX / 4) as f64 {
            break;
        }
        let a = a as i64;
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            // best semiconvergent with denominator <= max_den
            let k = (max_den - q0) / q1.max(1);
            let semi = rat(k * p1 + p0, k * q1 + q0);
            let conv = rat(p1, q1.max(1));
            let err = |r: &Rational| (to_f64(r) - target).abs();
            let best = if q1 == 0 || err(&semi) < err(&conv) { semi } else { conv };
            return Ok(if negative { -best } else { best });
        }
        let p2 = a * p1 + p0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = rem - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        rem = 1.0 / frac;
    }
    let r = rat(p1, q1);
    Ok(if negative { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse("0.75").unwrap(), rat(3, 4));
        assert_eq!(parse("2").unwrap(), int(2));
        assert_eq!(parse("-1.5").unwrap(), rat(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn approximation_recovers_simple_fractions() {
        assert_eq!(best_approximation(0.75, 1_000_000).unwrap(), rat(3, 4));
        assert_eq!(best_approximation(4.0 / 3.0, 1_000_000).unwrap(), rat(4, 3));
        assert_eq!(best_approximation(std::f64::consts::PI, 7).unwrap(), rat(22, 7));
        let r = best_approximation(std::f64::consts::E, 1_000_000).unwrap();
        assert!(*r.denom() <= 1_000_000);
        assert!((to_f64(&r) - std::f64::consts::E).abs() < 1e-11);
    }

    #[test]
    fn display_forms() {
        assert_eq!(display(&rat(58, 3)), "58/3");
        assert_eq!(display(&int(22)), "22");
        assert_eq!(RationalJson::from(rat(6, 4)), RationalJson { num: 3, den: 2 });
    }
}
