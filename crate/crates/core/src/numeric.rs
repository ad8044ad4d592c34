//! Exact integer and rational arithmetic shared by every module.
//!
//! All volumes, counts and bounds are carried as [`Nat`] or [`Rat`]. When
//! they leave the library (JSON, CSV, the cache) they are written as decimal
//! strings, `"num/den"` for rationals, never as floating point.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

/// Exact rational, always stored reduced with a positive denominator.
pub type Rat = BigRational;

pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_nat(v: &Nat) -> Rat {
    Rat::from_integer(BigInt::from(v.clone()))
}

pub fn nat_ratio(num: &Nat, den: &Nat) -> Rat {
    Rat::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn pow_u(base: u64, exp: u32) -> Nat {
    num_traits::pow(nat(base), exp as usize)
}

pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    num_traits::pow(base.clone(), exp as usize)
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    let k = k.min(n - k);
    let mut acc = Nat::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(m, 2)` for a machine-sized count.
pub fn choose2(m: u64) -> u128 {
    let m = m as u128;
    m * m.saturating_sub(1) / 2
}

/// Largest integer `<= x`.
pub fn floor_rat(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// Smallest integer `>= x`.
pub fn ceil_rat(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

/// Parses `"a"`, `"a/b"`, or a terminating decimal such as `"0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::input(format!("not an exact rational: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::input("rational with zero denominator"));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = Rat::from_integer(int.abs()) + Rat::new(frac, scale);
        return Ok(if neg { -magnitude } else { magnitude });
    }
    let int: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(int))
}

/// Lossy conversion for reports only; never used in a decision.
pub fn rat_to_f64(x: &Rat) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge operands: compare through bit lengths.
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(960);
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// `log2` of a positive natural number as a float, for reports.
pub fn log2_nat(x: &Nat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.log2() + shift as f64
}

/// Exact rational `u/v` with `log2(q) <= u/v <= log2(q) + 2^-32`.
///
/// Powers of two are returned exactly. Otherwise the bracket comes from the
/// continued-fraction convergents of the floating-point logarithm and is then
/// certified with integer arithmetic (`2^u >= q^v` and the matching lower
/// convergent satisfies `q^v' >= 2^u'`), so float error cannot leak in.
pub fn log2_upper(q: u64) -> Result<Rat> {
    if q < 1 {
        return Err(Error::input("log2 of zero"));
    }
    if q.is_power_of_two() {
        return Ok(Rat::from_integer(BigInt::from(q.trailing_zeros())));
    }
    let target = (q as f64).log2();
    let tol = Rat::new(BigInt::one(), BigInt::one() << 32u32);
    let big_q = nat(q);
    let two = nat(2);

    // Convergents p_k/s_k alternate around the true value.
    let (mut p_prev, mut s_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut s) = (BigInt::from(target.floor() as i64), BigInt::one());
    let mut x = target - target.floor();
    let mut lower: Option<Rat> = None;
    let mut upper: Option<Rat> = None;
    for _ in 0..64 {
        let candidate = Rat::new(p.clone(), s.clone());
        let pu = p.to_u32().ok_or_else(|| Error::input("log2 bracket overflow"))?;
        let su = s.to_u32().ok_or_else(|| Error::input("log2 bracket overflow"))?;
        // candidate >= log2 q  <=>  2^p >= q^s
        if num_traits::pow(two.clone(), pu as usize) >= num_traits::pow(big_q.clone(), su as usize) {
            upper = Some(candidate);
        } else {
            lower = Some(candidate);
        }
        if let (Some(lo), Some(hi)) = (&lower, &upper) {
            if hi - lo <= tol {
                return Ok(hi.clone());
            }
        }
        if x == 0.0 {
            break;
        }
        let inv = 1.0 / x;
        let a = inv.floor();
        x = inv - a;
        let a = BigInt::from(a as i64);
        let p_next = &a * &p + &p_prev;
        let s_next = &a * &s + &s_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        s_prev = std::mem::replace(&mut s, s_next);
    }
    Err(Error::Verification(format!(
        "could not certify a rational bracket for log2({q})"
    )))
}

/// Comparison direction carried by a [`CheckResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        })
    }
}

/// Both sides of an exact comparison plus its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    #[serde(with = "rat_str")]
    pub lhs: Rat,
    pub relation: Relation,
    #[serde(with = "rat_str")]
    pub rhs: Rat,
    pub holds: bool,
}

impl CheckResult {
    pub fn new(lhs: Rat, relation: Relation, rhs: Rat) -> Self {
        let holds = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        };
        CheckResult {
            lhs,
            relation,
            rhs,
            holds,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} [{}]",
            self.lhs,
            self.relation,
            self.rhs,
            if self.holds { "holds" } else { "FAILS" }
        )
    }
}

/// Serde adapter writing a [`Nat`] as a decimal string.
pub mod nat_str {
    use super::Nat;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Nat, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Serde adapter writing a [`Rat`] as `"num/den"` (or `"num"` when integral).
pub mod rat_str {
    use super::{parse_rat, Rat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}

/// Same as [`rat_str`] for optional values.
pub mod opt_rat_str {
    use super::{parse_rat, Rat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rat(&s).map_err(D::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), nat(10));
        assert_eq!(binomial(5, 0), nat(1));
        assert_eq!(binomial(5, 6), nat(0));
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("16/11").unwrap(), rat(16, 11));
        assert_eq!(parse_rat("4/2").unwrap(), rat(2, 1));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("7").unwrap(), rat(7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn rat_display_is_reduced() {
        assert_eq!(rat(22, 4).to_string(), "11/2");
        assert_eq!(rat(16, 1).to_string(), "16");
    }

    #[test]
    fn log2_upper_is_certified_bracket() {
        assert_eq!(log2_upper(8).unwrap(), rat(3, 1));
        for q in [3u64, 5, 6, 7, 10, 12, 255] {
            let u = log2_upper(q).unwrap();
            let f = rat_to_f64(&u);
            let truth = (q as f64).log2();
            assert!(f >= truth - 1e-15, "q={q}: {f} < {truth}");
            assert!(f - truth <= 2f64.powi(-32) + 1e-15, "q={q}: gap {}", f - truth);
        }
    }

    #[test]
    fn check_result_relations() {
        assert!(CheckResult::new(rat(1, 2), Relation::Le, rat(1, 2)).holds);
        assert!(!CheckResult::new(rat(1, 1), Relation::Le, rat(1, 2)).holds);
        assert!(CheckResult::new(rat(3, 1), Relation::Ge, rat(1, 2)).holds);
        assert!(!CheckResult::new(rat(3, 1), Relation::Eq, rat(1, 2)).holds);
    }

    #[test]
    fn log2_nat_large() {
        let x = pow_u(2, 1000);
        assert!((log2_nat(&x) - 1000.0).abs() < 1e-9);
    }
}
