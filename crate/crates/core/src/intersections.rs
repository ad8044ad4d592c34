//! Volume `W_q(n, t, k)` of the intersection of two radius-`t` balls whose
//! centers are `k` apart, and exact checks of its identity, monotonicity and
//! decay.
//!
//! With centers `0^n` and `1^k 0^(n-k)`, a word in the intersection has `r`
//! zeros and `s` ones among the first `k` coordinates (the other `k-r-s` are
//! one of the `q-2` remaining symbols), and at most `t - max(k-r, k-s)`
//! nonzero coordinates among the last `n-k`:
//!
//! ```text
//! W = Σ_{r=0}^{k} Σ_{s=0}^{k-r} C(k,r) C(k-r,s) (q-2)^(k-r-s) V_q(n-k, t - max(k-r, k-s))
//! ```
//!
//! `(q-2)^0 = 1` even for `q = 2`, and a negative radius is an empty ball.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binomial, nat, pow_u, rat_from_nat, rat_pow, CheckResult, Nat, Rat, Relation};
use crate::space::CodeParams;
use crate::volumes::{ball_volume, ball_volume_or_zero};

/// `W_q(n, t, k)` from the closed form.
pub fn intersection_volume(params: &CodeParams, k: u32) -> Result<Nat> {
    let CodeParams { q, n, t } = *params;
    if k > n {
        return Err(Error::input(format!("center distance k={k} exceeds n={n}")));
    }
    // V_q(n-k, j) for every radius the sum can ask for
    let tails: Vec<Nat> = (0..=t as i64)
        .map(|j| ball_volume_or_zero(q, n - k, j))
        .collect();
    let mut total = Nat::zero();
    for r in 0..=k {
        let choose_r = binomial(k as u64, r as u64);
        for s in 0..=k - r {
            let radius = t as i64 - (k - r).max(k - s) as i64;
            if radius < 0 {
                continue;
            }
            let others = pow_u((q - 2) as u64, k - r - s);
            if others.is_zero() {
                continue;
            }
            total += &choose_r * binomial((k - r) as u64, s as u64) * others * &tails[radius as usize];
        }
    }
    Ok(total)
}

/// The full profile `W(0), …, W(n)`.
pub fn intersection_profile(params: &CodeParams) -> Result<Vec<Nat>> {
    (0..=params.n).map(|k| intersection_volume(params, k)).collect()
}

/// `W_q(n, t, 1) = q · V_q(n-1, t-1)`.
pub fn check_identity_k1(params: &CodeParams) -> Result<CheckResult> {
    check_identity_k1_with(params, intersection_volume)
}

pub fn check_identity_k1_with(
    params: &CodeParams,
    w: impl Fn(&CodeParams, u32) -> Result<Nat>,
) -> Result<CheckResult> {
    if params.t == 0 {
        return Err(Error::input("the k = 1 identity needs t >= 1"));
    }
    let lhs = w(params, 1)?;
    let rhs = ball_volume(params.q, params.n - 1, params.t - 1)? * nat(params.q as u64);
    Ok(CheckResult::new(rat_from_nat(&lhs), Relation::Eq, rat_from_nat(&rhs)))
}

/// `W(k+1) <= W(k)` for `0 <= k <= t`.
pub fn check_monotone(params: &CodeParams, k: u32) -> Result<CheckResult> {
    check_monotone_with(params, k, intersection_volume)
}

pub fn check_monotone_with(
    params: &CodeParams,
    k: u32,
    w: impl Fn(&CodeParams, u32) -> Result<Nat>,
) -> Result<CheckResult> {
    if k > params.t {
        return Err(Error::input(format!(
            "monotonicity is only claimed for k <= t, got k={k}, t={}",
            params.t
        )));
    }
    if k + 1 > params.n {
        return Err(Error::input(format!("k + 1 = {} exceeds n={}", k + 1, params.n)));
    }
    let lhs = w(params, k + 1)?;
    let rhs = w(params, k)?;
    Ok(CheckResult::new(rat_from_nat(&lhs), Relation::Le, rat_from_nat(&rhs)))
}

/// Pairs `(k, W(k+1) <= W(k))` for every `k` past the claimed range, for reports.
pub fn monotone_beyond_range(params: &CodeParams) -> Result<Vec<(u32, bool)>> {
    let profile = intersection_profile(params)?;
    Ok((params.t + 1..params.n)
        .map(|k| (k, profile[k as usize + 1] <= profile[k as usize]))
        .collect())
}

/// The four quantities of the decay chain
/// `W(2k+2) <= W(2k+1) <= 2ρ^k W(1) <= 2ρ^(k+1) V_q(n,t)` with
/// `ρ = q²t / ((q-1)n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecayChain {
    #[serde(with = "crate::numeric::nat_str")]
    pub w_even: Nat,
    #[serde(with = "crate::numeric::nat_str")]
    pub w_odd: Nat,
    #[serde(with = "crate::numeric::rat_str")]
    pub scaled_w1: Rat,
    #[serde(with = "crate::numeric::rat_str")]
    pub scaled_volume: Rat,
    /// Outcome of each of the three inequalities, left to right.
    pub links: [bool; 3],
}

impl DecayChain {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|&b| b)
    }

    /// The first failing link as a [`CheckResult`], if any.
    pub fn first_failure(&self) -> Option<CheckResult> {
        let sides = [
            (rat_from_nat(&self.w_even), rat_from_nat(&self.w_odd)),
            (rat_from_nat(&self.w_odd), self.scaled_w1.clone()),
            (self.scaled_w1.clone(), self.scaled_volume.clone()),
        ];
        self.links
            .iter()
            .zip(sides)
            .find(|(ok, _)| !**ok)
            .map(|(_, (l, r))| CheckResult::new(l, Relation::Le, r))
    }
}

pub fn check_decay(params: &CodeParams, k: u32) -> Result<DecayChain> {
    check_decay_with(params, k, intersection_volume)
}

pub fn check_decay_with(
    params: &CodeParams,
    k: u32,
    w: impl Fn(&CodeParams, u32) -> Result<Nat>,
) -> Result<DecayChain> {
    let CodeParams { q, n, t } = *params;
    if 2 * k + 2 > n {
        return Err(Error::input(format!("decay chain needs 2k + 2 <= n, got k={k}, n={n}")));
    }
    let w_even = w(params, 2 * k + 2)?;
    let w_odd = w(params, 2 * k + 1)?;
    let w_one = w(params, 1)?;
    let rho = Rat::new(
        BigInt::from(q as u64 * q as u64 * t as u64),
        BigInt::from((q as u64 - 1) * n as u64),
    );
    let two = Rat::from_integer(BigInt::from(2));
    let scaled_w1 = &two * rat_pow(&rho, k) * rat_from_nat(&w_one);
    let scaled_volume = &two * rat_pow(&rho, k + 1) * rat_from_nat(&ball_volume(q, n, t)?);
    let links = [
        w_even <= w_odd,
        rat_from_nat(&w_odd) <= scaled_w1,
        scaled_w1 <= scaled_volume,
    ];
    Ok(DecayChain {
        w_even,
        w_odd,
        scaled_w1,
        scaled_volume,
        links,
    })
}
