//! Supersaturation: large sets of words contain many close pairs.
//!
//! Every pair `a, b ∈ S` at distance `k` is counted once for each `x` in
//! `B(a,t) ∩ B(b,t)`, so
//! `Σ_{k=1}^{2t} W_q(n,t,k) |E_k| = Σ_x C(|K_x|, 2)` with
//! `K_x = S ∩ B(x,t)`. Combined with convexity this gives explicit lower
//! bounds on the number of close pairs once `|S| >= 2 H_q(n,t)`.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intersections::intersection_volume;
use crate::numeric::{nat, pow_u, rat_from_nat, rat_to_f64, CheckResult, Nat, Rat, Relation};
use crate::space::{covering_counts, from_rank_list, normalize_set, pair_distance_histogram, CodeParams, Word};
use crate::volumes::{ball_volume, hamming_bound};

/// Distances `k = 1..=MAX_DEGREE_DISTANCE` enter the `S₁`/`S₂` tests.
pub const MAX_DEGREE_DISTANCE: u32 = 20;

/// `Σ_k W(k)|E_k|` from the pair histogram.
fn weighted_pairs(set: &[Word], params: &CodeParams) -> Result<Nat> {
    let hist = pair_distance_histogram(set, params.n as usize);
    let mut total = Nat::zero();
    for k in 1..=(2 * params.t).min(params.n) {
        let e = hist[k as usize];
        if e > 0 {
            total += intersection_volume(params, k)? * e;
        }
    }
    Ok(total)
}

/// `Σ_{k=1}^{2t} W(k)|E_k| == Σ_x C(|K_x|, 2)`, compared exactly.
pub fn double_counting_check(set: &[Word], params: &CodeParams, budget: u64) -> Result<CheckResult> {
    let set = normalize_set(set, params)?;
    let lhs = weighted_pairs(&set, params)?;
    let rhs: u128 = covering_counts(&set, params, budget)?
        .into_iter()
        .map(|c| c as u128 * (c as u128).saturating_sub(1) / 2)
        .sum();
    Ok(CheckResult::new(rat_from_nat(&lhs), Relation::Eq, Rat::from_integer(BigInt::from(rhs))))
}

/// The two inequalities that hold once `|S| >= 2 H_q(n,t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma41Check {
    /// `Σ_k W(k)|E_k| >= |S|² V² / (10 q^n)`.
    pub weighted: CheckResult,
    /// `|E| >= n |S|² / (20 t H_q(n,t))`.
    pub edges: CheckResult,
}

impl Lemma41Check {
    pub fn holds(&self) -> bool {
        self.weighted.holds && self.edges.holds
    }
}

pub fn lemma41_check(set: &[Word], params: &CodeParams) -> Result<Lemma41Check> {
    let CodeParams { q, n, t } = *params;
    if t == 0 {
        return Err(Error::Precondition("the close-pair bounds need t >= 1".into()));
    }
    let set = normalize_set(set, params)?;
    let size = rat_from_nat(&nat(set.len() as u64));
    let h = hamming_bound(q, n, t)?;
    if size < Rat::from_integer(2.into()) * &h {
        return Err(Error::Precondition(format!(
            "|S| = {} is below 2 H_q(n,t) = {}",
            set.len(),
            Rat::from_integer(2.into()) * &h
        )));
    }
    let v = rat_from_nat(&ball_volume(q, n, t)?);
    let space = rat_from_nat(&pow_u(q as u64, n));
    let weighted = CheckResult::new(
        rat_from_nat(&weighted_pairs(&set, params)?),
        Relation::Ge,
        &size * &size * &v * &v / (Rat::from_integer(10.into()) * space),
    );
    let hist = pair_distance_histogram(&set, n as usize);
    let edge_total: u64 = hist[1..=(2 * t).min(n) as usize].iter().sum();
    let edges = CheckResult::new(
        Rat::from_integer(edge_total.into()),
        Relation::Ge,
        Rat::from_integer(n.into()) * &size * &size / (Rat::from_integer((20 * t).into()) * h),
    );
    Ok(Lemma41Check { weighted, edges })
}

/// `deg_k(v)` for `k = 1..=MAX_DEGREE_DISTANCE`, for every member of `set`
/// (already normalized).
fn degree_profiles(set: &[Word]) -> Vec<[u64; MAX_DEGREE_DISTANCE as usize]> {
    let mut out = vec![[0u64; MAX_DEGREE_DISTANCE as usize]; set.len()];
    for (i, a) in set.iter().enumerate() {
        for (j, b) in set.iter().enumerate().skip(i + 1) {
            let d = a.distance_unchecked(b);
            if (1..=MAX_DEGREE_DISTANCE as usize).contains(&d) {
                out[i][d - 1] += 1;
                out[j][d - 1] += 1;
            }
        }
    }
    out
}

/// `S₁ = {v : deg_k(v) <= ε n^{⌈k/2⌉/2} for all k <= 20}` (decided exactly
/// via `deg_k² <= ε² n^{⌈k/2⌉}`) and
/// `S₂ = {v : Σ_{k<=20} deg_k(v) >= ln(n)/ε}` (natural log, in `f64`).
pub fn classify_s1_s2(set: &[Word], params: &CodeParams, epsilon: &Rat) -> Result<(Vec<Word>, Vec<Word>)> {
    if *epsilon <= Rat::zero() {
        return Err(Error::input(format!("epsilon must be positive, got {epsilon}")));
    }
    if params.n < 2 {
        return Err(Error::Precondition("the degree classes need n >= 2".into()));
    }
    let set = normalize_set(set, params)?;
    let eps2 = epsilon * epsilon;
    let caps: Vec<Rat> = (1..=MAX_DEGREE_DISTANCE)
        .map(|k| &eps2 * rat_from_nat(&pow_u(params.n as u64, k.div_ceil(2))))
        .collect();
    let s2_threshold = (params.n as f64).ln() / rat_to_f64(epsilon);
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for (w, degs) in set.iter().zip(degree_profiles(&set)) {
        let sparse = degs
            .iter()
            .zip(&caps)
            .all(|(&d, cap)| Rat::from_integer(BigInt::from(d) * d) <= *cap);
        if sparse {
            s1.push(w.clone());
        }
        if degs.iter().sum::<u64>() as f64 >= s2_threshold {
            s2.push(w.clone());
        }
    }
    Ok((s1, s2))
}

/// A maximal subset of `set` with pairwise distance `> t`, chosen greedily
/// in rank order. Every member of `set` ends up within `t` of the result.
pub fn greedy_distance_packing(set: &[Word], t: u32) -> Result<Vec<Word>> {
    let mut sorted = set.to_vec();
    if let Some(first) = set.first() {
        for w in set {
            first.distance(w)?;
        }
    }
    sorted.sort();
    sorted.dedup();
    let mut packing: Vec<Word> = Vec::new();
    for w in sorted {
        if packing.iter().all(|x| x.distance_unchecked(&w) > t as usize) {
            packing.push(w);
        }
    }
    Ok(packing)
}

/// Everything measured on one set `S`.
#[derive(Debug, Clone, Serialize)]
pub struct SupersatReport {
    pub params: CodeParams,
    pub set_size: usize,
    pub edge_total: u64,
    /// `|E_k|` for `k = 1..=2t`.
    pub edges_by_distance: Vec<u64>,
    pub double_counting: CheckResult,
    /// Absent when `|S| < 2 H_q(n,t)` or `t = 0`.
    pub lemma41: Option<Lemma41Check>,
    /// `Δ(G[S])`.
    pub max_degree: usize,
    pub s1_size: usize,
    pub s2_size: usize,
    pub packing_size: usize,
    /// `Δ H / (n^{3/2} |S|)`, reported only.
    pub degree_ratio: f64,
    /// `|S₁| / H`, reported only.
    pub s1_over_hamming: f64,
}

pub fn supersat_report(set: &[Word], params: &CodeParams, epsilon: &Rat, budget: u64) -> Result<SupersatReport> {
    let set = normalize_set(set, params)?;
    let n = params.n as usize;
    let hist = pair_distance_histogram(&set, n);
    let reach = (2 * params.t as usize).min(n);
    let edges_by_distance = hist[1..=reach].to_vec();
    let mut degree = vec![0usize; set.len()];
    for (i, a) in set.iter().enumerate() {
        for (j, b) in set.iter().enumerate().skip(i + 1) {
            if (1..=reach).contains(&a.distance_unchecked(b)) {
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    let max_degree = degree.into_iter().max().unwrap_or(0);
    let lemma41 = match lemma41_check(&set, params) {
        Ok(c) => Some(c),
        Err(Error::Precondition(_)) => None,
        Err(e) => return Err(e),
    };
    let (s1, s2) = if n >= 2 {
        classify_s1_s2(&set, params, epsilon)?
    } else {
        (Vec::new(), Vec::new())
    };
    let h = rat_to_f64(&hamming_bound(params.q, params.n, params.t)?);
    Ok(SupersatReport {
        params: *params,
        set_size: set.len(),
        edge_total: edges_by_distance.iter().sum(),
        edges_by_distance,
        double_counting: double_counting_check(&set, params, budget)?,
        lemma41,
        max_degree,
        s1_size: s1.len(),
        s2_size: s2.len(),
        packing_size: greedy_distance_packing(&set, params.t)?.len(),
        degree_ratio: max_degree as f64 * h / ((n as f64).powf(1.5) * set.len().max(1) as f64),
        s1_over_hamming: s1.len() as f64 / h,
    })
}

/// A uniformly random subset: the size is uniform on `0..=q^n`, then the
/// members are a uniform sample of that size.
pub fn random_subset(params: &CodeParams, rng: &mut impl Rng, budget: u64) -> Result<Vec<Word>> {
    let total = params.enumerable(budget)?;
    let size = rng.gen_range(0..=total);
    let ranks: Vec<u64> = sample(rng, total as usize, size as usize)
        .into_iter()
        .map(|r| r as u64)
        .collect();
    from_rank_list(params, &ranks)
}

/// Whether every word of `set` is within `t` of some member of `centers`.
pub fn covers(centers: &[Word], set: &[Word], t: u32) -> bool {
    set.iter()
        .all(|w| centers.iter().any(|x| x.distance_unchecked(w) <= t as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use crate::space::all_words;

    fn p(q: u32, n: u32, t: u32) -> CodeParams {
        CodeParams::new(q, n, t).unwrap()
    }

    fn words(q: u32, items: &[&str]) -> Vec<Word> {
        items.iter().map(|s| Word::parse(q, s).unwrap()).collect()
    }

    #[test]
    fn double_counting_examples() {
        let c = double_counting_check(&words(2, &["000", "111"]), &p(2, 3, 1), 1 << 20).unwrap();
        assert_eq!((c.lhs.clone(), c.holds), (rat(0, 1), true));
        let c = double_counting_check(&words(2, &["000", "001"]), &p(2, 3, 1), 1 << 20).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (rat(2, 1), rat(2, 1)));
        let c = double_counting_check(&[], &p(2, 3, 1), 1 << 20).unwrap();
        assert!(c.holds && c.lhs.is_zero());
    }

    #[test]
    fn lemma41_on_whole_spaces() {
        for params in [p(2, 4, 1), p(2, 5, 1), p(3, 3, 1)] {
            let all = all_words(&params, 1 << 20).unwrap();
            assert!(lemma41_check(&all, &params).unwrap().holds(), "{params}");
        }
        let small = words(2, &["0000"]);
        assert!(matches!(lemma41_check(&small, &p(2, 4, 1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn classification_examples() {
        let all = all_words(&p(2, 3, 1), 64).unwrap();
        let (s1, s2) = classify_s1_s2(&all, &p(2, 3, 1), &rat(1, 10)).unwrap();
        assert!(s1.is_empty() && s2.is_empty());
        let pair = words(2, &["000", "111"]);
        let (s1, _) = classify_s1_s2(&pair, &p(2, 3, 1), &rat(1, 1)).unwrap();
        assert_eq!(s1, pair);
        let (s1, s2) = classify_s1_s2(&[], &p(2, 3, 1), &rat(1, 2)).unwrap();
        assert!(s1.is_empty() && s2.is_empty());
        assert!(classify_s1_s2(&pair, &p(2, 3, 1), &rat(0, 1)).is_err());
    }

    #[test]
    fn packing_examples() {
        let all = all_words(&p(2, 3, 1), 64).unwrap();
        let x = greedy_distance_packing(&all, 1).unwrap();
        assert_eq!(x, words(2, &["000", "011", "101", "110"]));
        assert!(covers(&x, &all, 1));
        let single = words(3, &["012"]);
        assert_eq!(greedy_distance_packing(&single, 2).unwrap(), single);
        let spread = words(2, &["0000", "1111"]);
        assert_eq!(greedy_distance_packing(&spread, 3).unwrap(), spread);
    }
}
