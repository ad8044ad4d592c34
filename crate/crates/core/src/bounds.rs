//! Upper bounds on `A_q(n, d)`: sphere packing (Hamming), Plotkin and
//! Elias, the count bound `C(q^n, <= A) <= q^(nA)`, and a classifier for the
//! three parameter regimes of the code-count asymptotics.
//!
//! All arithmetic and every validity test is exact. The only floating-point
//! inputs are `ln n` (bracketed with a safety margin and rejected when the
//! bracket cannot decide) and the reported Elias heuristic radius.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{floor_rat, log2_upper, pow_u, rat_from_nat, Nat, Rat};
use crate::space::CodeParams;
use crate::volumes::{ball_volume, hamming_bound};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMethod {
    Hamming,
    Plotkin,
    Elias,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::Hamming => "hamming",
            BoundMethod::Plotkin => "plotkin",
            BoundMethod::Elias => "elias",
        })
    }
}

/// An upper bound on code size; `value` is `None` when the bound does not apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    #[serde(with = "crate::numeric::opt_rat_str")]
    pub value: Option<Rat>,
    pub method: BoundMethod,
    pub witness_r: Option<u32>,
    pub applicable: bool,
}

impl BoundResult {
    fn applies(method: BoundMethod, value: Rat, witness_r: Option<u32>) -> Self {
        BoundResult {
            value: Some(value),
            method,
            witness_r,
            applicable: true,
        }
    }

    fn inapplicable(method: BoundMethod, witness_r: Option<u32>) -> Self {
        BoundResult {
            value: None,
            method,
            witness_r,
            applicable: false,
        }
    }

    /// `⌊value⌋`, since code sizes are integers.
    pub fn floor(&self) -> Option<BigInt> {
        self.value.as_ref().map(floor_rat)
    }
}

impl fmt::Display for BoundResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inapplicable"),
        }
    }
}

fn theta(q: u32) -> Rat {
    Rat::new(BigInt::from(q - 1), BigInt::from(q))
}

fn int(v: impl Into<BigInt>) -> Rat {
    Rat::from_integer(v.into())
}

/// `H_q(n,t)` as a [`BoundResult`].
pub fn hamming(params: &CodeParams) -> Result<BoundResult> {
    Ok(BoundResult::applies(
        BoundMethod::Hamming,
        hamming_bound(params.q, params.n, params.t)?,
        None,
    ))
}

/// With `α = 2t+1 − (1 − 1/q) n > 0`, codes have at most `(2t+1)/α` words.
pub fn plotkin_bound(params: &CodeParams) -> BoundResult {
    let d = int(2 * params.t + 1);
    let alpha = &d - theta(params.q) * int(params.n);
    if alpha.is_positive() {
        BoundResult::applies(BoundMethod::Plotkin, d / alpha, None)
    } else {
        BoundResult::inapplicable(BoundMethod::Plotkin, None)
    }
}

fn check_distance(q: u32, n: u32, d: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::input(format!("alphabet size q={q} must be at least 2")));
    }
    if !(1 <= d && d <= n) {
        return Err(Error::input(format!("distance d={d} must lie in 1..=n={n}")));
    }
    Ok(())
}

/// `A_q(n,d) <= θnd / (r² − 2θnr + θnd) · q^n / V_q(n,r)` with
/// `θ = 1 − 1/q`, valid when `r <= θn` and the denominator is positive.
pub fn elias_bound_at_r(q: u32, n: u32, d: u32, r: u32) -> Result<BoundResult> {
    check_distance(q, n, d)?;
    if r > n {
        return Err(Error::input(format!("radius r={r} exceeds n={n}")));
    }
    let th = theta(q);
    let tnd = &th * int(n) * int(d);
    let denom = int(r) * int(r) - int(2) * &th * int(n) * int(r) + &tnd;
    if int(r) > &th * int(n) || !denom.is_positive() {
        return Ok(BoundResult::inapplicable(BoundMethod::Elias, Some(r)));
    }
    let volume_ratio = Rat::new(
        BigInt::from(pow_u(q as u64, n)),
        BigInt::from(ball_volume(q, n, r)?),
    );
    Ok(BoundResult::applies(BoundMethod::Elias, tnd / denom * volume_ratio, Some(r)))
}

/// The Elias bound minimized over every valid radius, plus the radius a
/// fixed schedule would pick for `d = 2t+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliasSearch {
    pub best: BoundResult,
    /// `t + 7` for `10√n < t < n^{4/5}`, `t + ⌈√(n ln n)⌉` for `t >= n^{4/5}`.
    pub heuristic_r: Option<u32>,
    pub heuristic: Option<BoundResult>,
}

pub fn elias_bound_best(q: u32, n: u32, d: u32) -> Result<EliasSearch> {
    check_distance(q, n, d)?;
    let limit = floor_rat(&(theta(q) * int(n))).to_u32().unwrap_or(n).min(n);
    let mut best: Option<BoundResult> = None;
    for r in 0..=limit {
        let b = elias_bound_at_r(q, n, d, r)?;
        let better = match (&b.value, best.as_ref().and_then(|c| c.value.as_ref())) {
            (Some(v), Some(cur)) => v < cur,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if better {
            best = Some(b);
        }
    }
    let best = best.expect("r = 0 is always a valid Elias radius");
    let heuristic_r = if d % 2 == 1 { heuristic_radius(n, (d - 1) / 2) } else { None };
    let heuristic = match heuristic_r {
        Some(r) if r <= n => Some(elias_bound_at_r(q, n, d, r)?),
        _ => None,
    };
    Ok(EliasSearch {
        best,
        heuristic_r,
        heuristic,
    })
}

/// The radius schedule `r = t + α`; `None` for `t <= 10√n`.
pub fn heuristic_radius(n: u32, t: u32) -> Option<u32> {
    let (n64, t64) = (n as u128, t as u128);
    if t64 * t64 <= 100 * n64 {
        return None;
    }
    if t64.pow(5) < n64.pow(4) {
        return Some(t + 7);
    }
    let root = ((n as f64) * (n as f64).ln()).sqrt().ceil();
    Some(t.saturating_add(root as u32))
}

/// `log2` of `q^(nA)`, i.e. `nA·log2 q`, rounded up to an exact rational
/// when `q` is not a power of two.
pub fn code_count_log2_upper(q: u32, n: u32, a: &Nat) -> Result<Rat> {
    Ok(log2_upper(q as u64)? * int(n) * rat_from_nat(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `t <= 10√n`.
    RegimeA,
    /// `10√n < t <= θn − C√(n ln n)`.
    RegimeB,
    /// Beyond that, where the sphere-packing bound is already tiny.
    RegimeC,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    /// Set when a second constant was supplied and classifies differently.
    pub constants_disagree: Option<bool>,
}

/// `[lo, hi]` around `ln n`, wide enough to absorb libm error.
fn ln_bracket(n: u32) -> (Rat, Rat) {
    let l = (n as f64).ln();
    let slack = l.abs() * 1e-12 + 1e-300;
    let lo = Rat::from_float(l - slack).unwrap_or_else(Rat::zero);
    let hi = Rat::from_float(l + slack).unwrap_or_else(Rat::zero);
    (lo.max(Rat::zero()), hi)
}

fn classify(q: u32, n: u32, t: u32, c: &Rat) -> Result<Regime> {
    if (t as u128).pow(2) <= 100 * n as u128 {
        return Ok(Regime::RegimeA);
    }
    // t <= θn − c√(n ln n)  <=>  c√(n ln n) <= θn − t
    let room = theta(q) * int(n) - int(t);
    if room.is_negative() {
        return Ok(Regime::RegimeC);
    }
    let room2 = &room * &room;
    let (lo, hi) = ln_bracket(n);
    let scale = c * c * int(n);
    if &scale * hi <= room2 {
        Ok(Regime::RegimeB)
    } else if &scale * lo > room2 {
        Ok(Regime::RegimeC)
    } else {
        Err(Error::Verification(format!(
            "regime boundary too close to decide for n={n}, t={t}"
        )))
    }
}

/// Classifies `(q, n, t)` with the boundary constant `c_big`; `c_small`, if
/// given, is compared against it. `t` may exceed `n`.
pub fn regime(q: u32, n: u32, t: u32, c_big: &Rat, c_small: Option<&Rat>) -> Result<RegimeReport> {
    if q < 2 || n < 1 {
        return Err(Error::input(format!("need q >= 2 and n >= 1, got q={q}, n={n}")));
    }
    for c in std::iter::once(c_big).chain(c_small) {
        if !c.is_positive() {
            return Err(Error::input(format!("regime constants must be positive, got {c}")));
        }
    }
    let regime = classify(q, n, t, c_big)?;
    let constants_disagree = c_small.map(|c| classify(q, n, t, c).map(|r| r != regime)).transpose()?;
    Ok(RegimeReport {
        regime,
        constants_disagree,
    })
}

/// The smallest applicable bound among Hamming, Plotkin and Elias, rounded down.
pub fn best_upper_bound(params: &CodeParams) -> Result<Nat> {
    let mut candidates = vec![hamming(params)?, plotkin_bound(params)];
    let d = 2 * params.t + 1;
    if d <= params.n {
        candidates.push(elias_bound_best(params.q, params.n, d)?.best);
    }
    let best = candidates
        .iter()
        .filter_map(BoundResult::floor)
        .min()
        .expect("the sphere-packing bound always applies");
    Ok(best.to_biguint().unwrap_or_else(Nat::one))
}
