//! Hamming ball volumes, the sphere-packing bound and exact binomial tails.
//!
//! `V_q(n, r)` is accumulated term by term with
//! `C(n, i+1)(q-1)^(i+1) = C(n, i)(q-1)^i · (n-i)(q-1) / (i+1)`, which keeps
//! the cost linear in `r` even for very long words.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{nat_ratio, pow_u, rat_from_nat, rat_pow, CheckResult, Nat, Rat, Relation};

/// The individual terms `C(n, i)(q-1)^i` for `i = 0..=r`.
pub fn volume_terms(q: u32, n: u32, r: u32) -> Result<Vec<Nat>> {
    if q < 2 {
        return Err(Error::input(format!("alphabet size q={q} must be at least 2")));
    }
    if r > n {
        return Err(Error::input(format!("radius r={r} exceeds length n={n}")));
    }
    let mut terms = Vec::with_capacity(r as usize + 1);
    let mut term = Nat::one();
    terms.push(term.clone());
    let qm1 = (q - 1) as u64;
    for i in 0..r as u64 {
        term = term * ((n as u64 - i) * qm1) / (i + 1);
        terms.push(term.clone());
    }
    Ok(terms)
}

/// `V_q(n, r) = Σ_{i<=r} C(n, i)(q-1)^i`.
pub fn ball_volume(q: u32, n: u32, r: u32) -> Result<Nat> {
    Ok(volume_terms(q, n, r)?.into_iter().sum())
}

/// Volume with the empty-ball convention for negative radius; the radius is
/// clamped to `n` from above.
pub(crate) fn ball_volume_or_zero(q: u32, n: u32, r: i64) -> Nat {
    if r < 0 {
        return Nat::zero();
    }
    ball_volume(q, n, (r as u64).min(n as u64) as u32).expect("radius clamped into range")
}

/// `H_q(n, t) = q^n / V_q(n, t)`.
pub fn hamming_bound(q: u32, n: u32, t: u32) -> Result<Rat> {
    let v = ball_volume(q, n, t)?;
    Ok(nat_ratio(&pow_u(q as u64, n), &v))
}

/// `V_q(n, t) / q^n = P(Bin(n, 1 - 1/q) <= t)`.
pub fn tail_probability(q: u32, n: u32, t: u32) -> Result<Rat> {
    let v = ball_volume(q, n, t)?;
    Ok(nat_ratio(&v, &pow_u(q as u64, n)))
}

/// Point masses `P(Bin(n, 1 - 1/q) = k)` for `k = 0..=n`.
pub fn binomial_masses(q: u32, n: u32) -> Result<Vec<Rat>> {
    let total = pow_u(q as u64, n);
    Ok(volume_terms(q, n, n)?
        .iter()
        .map(|term| nat_ratio(term, &total))
        .collect())
}

/// Smallest `t` with `H_q(n, t) <= bound`; `n` when no smaller radius works.
pub fn threshold_radius(q: u32, n: u32, bound: &Rat) -> Result<u32> {
    if q < 2 {
        return Err(Error::input(format!("alphabet size q={q} must be at least 2")));
    }
    if *bound < Rat::one() {
        return Err(Error::input(format!(
            "threshold {bound} is below 1, but H_q(n, t) >= 1 always"
        )));
    }
    // H(t) <= B  <=>  q^n · den(B) <= num(B) · V(t)
    let space = BigInt::from(pow_u(q as u64, n)) * bound.denom();
    let mut volume = BigInt::zero();
    let mut term = BigInt::one();
    let qm1 = (q - 1) as u64;
    for t in 0..=n {
        if t > 0 {
            term = term * ((n - t + 1) as u64 * qm1) / t as u64;
        }
        volume += &term;
        if space <= bound.numer() * &volume {
            return Ok(t);
        }
    }
    Ok(n)
}

/// `V_q(n-i, t-i) <= (t / ((q-1)n))^i · V_q(n, t)` for `1 <= i <= t`.
pub fn check_volume_decay(q: u32, n: u32, t: u32, i: u32) -> Result<CheckResult> {
    if !(1 <= i && i <= t && t <= n) {
        return Err(Error::input(format!(
            "volume decay needs 1 <= i <= t <= n, got i={i}, t={t}, n={n}"
        )));
    }
    let lhs = ball_volume(q, n - i, t - i)?;
    let ratio = Rat::new(BigInt::from(t), BigInt::from((q as u64 - 1) * n as u64));
    let rhs = rat_pow(&ratio, i) * rat_from_nat(&ball_volume(q, n, t)?);
    Ok(CheckResult::new(rat_from_nat(&lhs), Relation::Le, rhs))
}

/// `V_q(n, t+α) >= ((q-1)n/(t+α))^α · ((n-α+1-t)/(n-α+1))^α · V_q(n, t)`
/// for `1 <= α <= t` and `t + α <= n`.
pub fn check_volume_growth(q: u32, n: u32, t: u32, alpha: u32) -> Result<CheckResult> {
    if !(1 <= alpha && alpha <= t) {
        return Err(Error::input(format!(
            "volume growth needs 1 <= alpha <= t, got alpha={alpha}, t={t}"
        )));
    }
    if t + alpha > n {
        return Err(Error::input(format!(
            "volume growth needs t + alpha <= n, got {} > {n}",
            t + alpha
        )));
    }
    let lhs = ball_volume(q, n, t + alpha)?;
    let spread = Rat::new(
        BigInt::from((q as u64 - 1) * n as u64),
        BigInt::from(t + alpha),
    );
    let shrink = Rat::new(BigInt::from(n - alpha + 1 - t), BigInt::from(n - alpha + 1));
    let rhs = rat_pow(&spread, alpha) * rat_pow(&shrink, alpha) * rat_from_nat(&ball_volume(q, n, t)?);
    Ok(CheckResult::new(rat_from_nat(&lhs), Relation::Ge, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{nat, rat};

    #[test]
    fn volume_examples() {
        assert_eq!(ball_volume(2, 3, 1).unwrap(), nat(4));
        assert_eq!(ball_volume(7, 9, 0).unwrap(), nat(1));
        assert_eq!(ball_volume(3, 2, 1).unwrap(), nat(5));
        assert_eq!(ball_volume(2, 7, 1).unwrap(), nat(8));
        assert_eq!(ball_volume(3, 5, 5).unwrap(), nat(243));
        assert!(matches!(ball_volume(2, 3, 4), Err(Error::Input(_))));
    }

    #[test]
    fn hamming_bound_examples() {
        assert_eq!(hamming_bound(2, 7, 1).unwrap(), rat(16, 1));
        assert_eq!(hamming_bound(3, 4, 0).unwrap(), rat(81, 1));
        assert_eq!(hamming_bound(2, 4, 2).unwrap(), rat(16, 11));
    }

    #[test]
    fn tail_examples() {
        assert_eq!(tail_probability(2, 4, 2).unwrap(), rat(11, 16));
        assert_eq!(tail_probability(5, 6, 6).unwrap(), rat(1, 1));
        assert_eq!(tail_probability(2, 1, 0).unwrap(), rat(1, 2));
        assert_eq!(
            tail_probability(3, 5, 2).unwrap(),
            hamming_bound(3, 5, 2).unwrap().recip()
        );
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold_radius(2, 7, &rat(16, 1)).unwrap(), 1);
        assert_eq!(threshold_radius(3, 5, &rat(243, 1)).unwrap(), 0);
        assert_eq!(threshold_radius(2, 100, &rat(2, 1)).unwrap(), 50);
        assert!(matches!(threshold_radius(2, 7, &rat(1, 2)), Err(Error::Input(_))));
    }

    #[test]
    fn decay_examples() {
        let c = check_volume_decay(2, 4, 2, 1).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(4, 1), rat(11, 2)));
        assert!(c.holds);
        let c = check_volume_decay(2, 10, 3, 2).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(9, 1), rat(396, 25)));
        assert!(c.holds);
        let c = check_volume_decay(3, 9, 4, 4).unwrap();
        assert_eq!(c.lhs, rat(1, 1));
        assert!(c.holds);
        assert!(check_volume_decay(2, 4, 2, 3).is_err());
        assert!(check_volume_decay(2, 4, 2, 0).is_err());
    }

    #[test]
    fn growth_examples() {
        let c = check_volume_growth(2, 4, 1, 1).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(11, 1), rat(15, 2)));
        assert!(c.holds);
        let c = check_volume_growth(2, 6, 2, 1).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(42, 1), rat(88, 3)));
        assert!(c.holds);
        assert!(check_volume_growth(3, 6, 2, 2).unwrap().holds);
        assert!(matches!(check_volume_growth(2, 4, 2, 3), Err(Error::Input(_))));
        assert!(matches!(check_volume_growth(2, 4, 3, 2), Err(Error::Input(_))));
    }

    #[test]
    fn long_words_stay_linear() {
        let v = ball_volume(2, 1_000_000, 3).unwrap();
        let n = 1_000_000u64;
        let expected = nat(1) + nat(n) + nat(n * (n - 1) / 2) + nat(n * (n - 1) / 2) * (n - 2) / 3u32;
        assert_eq!(v, expected);
    }
}
