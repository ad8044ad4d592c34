//! Words of `[q]^n`, Hamming distance, balls, and pair statistics of subsets.
//!
//! A [`Word`] packs its symbols into fixed-width bit lanes inside `u64`s,
//! most significant coordinate first. For `q = 2` a lane is one bit and the
//! distance is a plain XOR + popcount; for larger `q` the XOR is folded within
//! each lane before counting, so every alphabet takes the same code path.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{nat, pow_u, Nat};

/// Largest alphabet a [`Word`] can hold.
pub const MAX_ALPHABET: u32 = 1 << 16;

/// The triple `(q, n, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CodeParams {
    pub q: u32,
    pub n: u32,
    pub t: u32,
}

impl CodeParams {
    pub fn new(q: u32, n: u32, t: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::input(format!("alphabet size q={q} must be at least 2")));
        }
        if n < 1 {
            return Err(Error::input("length n must be at least 1"));
        }
        if t > n {
            return Err(Error::input(format!("radius t={t} exceeds length n={n}")));
        }
        Ok(CodeParams { q, n, t })
    }

    /// `q^n`.
    pub fn space_size(&self) -> Nat {
        pow_u(self.q as u64, self.n)
    }

    pub fn space_size_u64(&self) -> Option<u64> {
        (self.q as u64).checked_pow(self.n)
    }

    /// `q^n` if it is within `budget`, otherwise a budget error.
    pub fn enumerable(&self, budget: u64) -> Result<u64> {
        match self.space_size_u64() {
            Some(size) if size <= budget => Ok(size),
            Some(size) => Err(Error::budget("enumeration", budget, size)),
            None => Err(Error::budget("enumeration", budget, u64::MAX)),
        }
    }

    pub fn with_t(&self, t: u32) -> Result<Self> {
        CodeParams::new(self.q, self.n, t)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, n={}, t={})", self.q, self.n, self.t)
    }
}

/// Bit width of one symbol lane.
fn lane_bits(q: u32) -> u32 {
    32 - (q - 1).leading_zeros()
}

/// A point of `[q]^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    q: u32,
    n: usize,
    lanes: Vec<u64>,
}

impl Word {
    fn layout(q: u32) -> (u32, usize) {
        let bits = lane_bits(q);
        (bits, (64 / bits) as usize)
    }

    fn blank(q: u32, n: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return Err(Error::input(format!(
                "alphabet size q={q} outside 2..={MAX_ALPHABET}"
            )));
        }
        let (_, per) = Self::layout(q);
        Ok(Word {
            q,
            n,
            lanes: vec![0; n.div_ceil(per)],
        })
    }

    pub fn zero(q: u32, n: usize) -> Result<Self> {
        Self::blank(q, n)
    }

    pub fn from_digits(q: u32, digits: &[u32]) -> Result<Self> {
        let mut w = Self::blank(q, digits.len())?;
        for (i, &d) in digits.iter().enumerate() {
            if d >= q {
                return Err(Error::input(format!("symbol {d} out of range for q={q}")));
            }
            w.set(i, d);
        }
        Ok(w)
    }

    /// Inverse of [`Word::rank`].
    pub fn from_rank(q: u32, n: usize, rank: &Nat) -> Result<Self> {
        if *rank >= pow_u(q as u64, n as u32) {
            return Err(Error::input(format!("rank {rank} out of range for q={q}, n={n}")));
        }
        let mut w = Self::blank(q, n)?;
        let mut r = rank.clone();
        let qn = nat(q as u64);
        for i in (0..n).rev() {
            let d = (&r % &qn).to_u32().unwrap_or(0);
            r /= &qn;
            w.set(i, d);
        }
        Ok(w)
    }

    pub fn from_rank_u64(q: u32, n: usize, rank: u64) -> Result<Self> {
        let mut w = Self::blank(q, n)?;
        match (q as u64).checked_pow(n as u32) {
            Some(size) if rank < size => {}
            Some(_) => {
                return Err(Error::input(format!("rank {rank} out of range for q={q}, n={n}")))
            }
            None => {}
        }
        let mut r = rank;
        for i in (0..n).rev() {
            w.set(i, (r % q as u64) as u32);
            r /= q as u64;
        }
        Ok(w)
    }

    /// Parses a base-`q` digit string, most significant coordinate first.
    /// Alphabets above 36 use `.`-separated decimal symbols.
    pub fn parse(q: u32, s: &str) -> Result<Self> {
        let digits: Vec<u32> = if q > 36 {
            s.split('.')
                .map(|p| p.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::input(format!("bad word {s:?}")))?
        } else {
            s.chars()
                .map(|c| c.to_digit(36).ok_or_else(|| Error::input(format!("bad symbol {c:?}"))))
                .collect::<Result<_>>()?
        };
        if digits.is_empty() {
            return Err(Error::input("empty word"));
        }
        Self::from_digits(q, &digits)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn slot(&self, i: usize) -> (usize, u32) {
        let (bits, per) = Self::layout(self.q);
        let offset = 64 - (i % per + 1) as u32 * bits;
        (i / per, offset)
    }

    pub fn digit(&self, i: usize) -> u32 {
        let (bits, _) = Self::layout(self.q);
        let (lane, off) = self.slot(i);
        ((self.lanes[lane] >> off) & ((1u64 << bits) - 1)) as u32
    }

    fn set(&mut self, i: usize, d: u32) {
        let (bits, _) = Self::layout(self.q);
        let (lane, off) = self.slot(i);
        let mask = ((1u64 << bits) - 1) << off;
        self.lanes[lane] = (self.lanes[lane] & !mask) | ((d as u64) << off);
    }

    pub fn digits(&self) -> Vec<u32> {
        (0..self.n).map(|i| self.digit(i)).collect()
    }

    pub fn with_digit(&self, i: usize, d: u32) -> Word {
        let mut w = self.clone();
        w.set(i, d);
        w
    }

    /// Base-`q` value of the digits.
    pub fn rank(&self) -> Nat {
        let qn = nat(self.q as u64);
        self.digits()
            .into_iter()
            .fold(Nat::zero(), |acc, d| acc * &qn + nat(d as u64))
    }

    pub fn rank_u64(&self) -> Option<u64> {
        let q = self.q as u64;
        self.digits().into_iter().try_fold(0u64, |acc, d| {
            acc.checked_mul(q).and_then(|v| v.checked_add(d as u64))
        })
    }

    /// Hamming distance; errors when the words have different shapes.
    pub fn distance(&self, other: &Word) -> Result<usize> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::input(format!(
                "distance between words of shape (q={}, n={}) and (q={}, n={})",
                self.q, self.n, other.q, other.n
            )));
        }
        Ok(self.distance_unchecked(other))
    }

    pub(crate) fn distance_unchecked(&self, other: &Word) -> usize {
        let (bits, per) = Self::layout(self.q);
        if bits == 1 {
            return self
                .lanes
                .iter()
                .zip(&other.lanes)
                .map(|(a, b)| (a ^ b).count_ones() as usize)
                .sum();
        }
        let low = low_bit_mask(bits, per);
        self.lanes
            .iter()
            .zip(&other.lanes)
            .map(|(a, b)| {
                let x = a ^ b;
                let mut folded = x;
                for s in 1..bits {
                    folded |= x >> s;
                }
                (folded & low).count_ones() as usize
            })
            .sum()
    }

    pub fn weight(&self) -> usize {
        (0..self.n).filter(|&i| self.digit(i) != 0).count()
    }
}

fn low_bit_mask(bits: u32, per: usize) -> u64 {
    (0..per as u32).fold(0u64, |m, j| m | 1u64 << (64 - (j + 1) * bits))
}

impl Ord for Word {
    /// Rank order for words of one shape.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.n)
            .cmp(&(other.q, other.n))
            .then_with(|| self.lanes.cmp(&other.lanes))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q > 36 {
            let parts: Vec<String> = self.digits().iter().map(|d| d.to_string()).collect();
            return f.write_str(&parts.join("."));
        }
        for d in self.digits() {
            let c = char::from_digit(d, 36).unwrap_or('?');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Validates shapes against `params`, then sorts and removes duplicates.
pub fn normalize_set(set: &[Word], params: &CodeParams) -> Result<Vec<Word>> {
    for w in set {
        if w.q != params.q || w.n != params.n as usize {
            return Err(Error::input(format!(
                "word {w} does not belong to [{}]^{}",
                params.q, params.n
            )));
        }
    }
    let mut out = set.to_vec();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Sorted rank list, the JSON form of a word set.
pub fn to_rank_list(set: &[Word]) -> Result<Vec<u64>> {
    let mut ranks = set
        .iter()
        .map(|w| w.rank_u64().ok_or_else(|| Error::input("rank does not fit in 64 bits")))
        .collect::<Result<Vec<_>>>()?;
    ranks.sort_unstable();
    ranks.dedup();
    Ok(ranks)
}

pub fn from_rank_list(params: &CodeParams, ranks: &[u64]) -> Result<Vec<Word>> {
    let words = ranks
        .iter()
        .map(|&r| Word::from_rank_u64(params.q, params.n as usize, r))
        .collect::<Result<Vec<_>>>()?;
    normalize_set(&words, params)
}

/// All of `[q]^n` in rank order.
pub fn all_words(params: &CodeParams, budget: u64) -> Result<Vec<Word>> {
    let size = params.enumerable(budget)?;
    (0..size)
        .map(|r| Word::from_rank_u64(params.q, params.n as usize, r))
        .collect()
}

/// `w = 1^k 0^(n-k)`, the second canonical center for intersections.
pub fn canonical_offset(q: u32, n: usize, k: usize) -> Result<Word> {
    let digits: Vec<u32> = (0..n).map(|i| u32::from(i < k)).collect();
    Word::from_digits(q, &digits)
}

/// Words of `B_q(center, r)` in order of (distance from center, rank).
///
/// A radius beyond the length is clamped, giving the whole space.
pub fn enumerate_ball(center: &Word, r: usize) -> BallIter {
    BallIter {
        center: center.clone(),
        radius: r.min(center.len()),
        shell: 0,
        pending: Vec::new().into_iter(),
    }
}

pub struct BallIter {
    center: Word,
    radius: usize,
    shell: usize,
    pending: std::vec::IntoIter<Word>,
}

impl BallIter {
    fn fill_shell(&mut self, d: usize) {
        let mut out = Vec::new();
        let mut cur = self.center.clone();
        shell_rec(&self.center, &mut cur, 0, d, &mut out);
        out.sort();
        self.pending = out.into_iter();
    }
}

fn shell_rec(center: &Word, cur: &mut Word, start: usize, left: usize, out: &mut Vec<Word>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    let n = center.len();
    for i in start..=n - left {
        let orig = center.digit(i);
        for s in (0..center.q()).filter(|&s| s != orig) {
            cur.set(i, s);
            shell_rec(center, cur, i + 1, left - 1, out);
        }
        cur.set(i, orig);
    }
}

impl Iterator for BallIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            if let Some(w) = self.pending.next() {
                return Some(w);
            }
            if self.shell > self.radius {
                return None;
            }
            let d = self.shell;
            self.shell += 1;
            self.fill_shell(d);
        }
    }
}

/// Rank-level helpers for spaces whose size fits in a `u64`.
#[derive(Debug, Clone)]
pub(crate) struct RankSpace {
    q: u64,
    n: usize,
    /// `place[i] = q^(n-1-i)`, the weight of coordinate `i`.
    place: Vec<u64>,
}

impl RankSpace {
    pub(crate) fn new(params: &CodeParams) -> Result<Self> {
        let size = params
            .space_size_u64()
            .ok_or_else(|| Error::budget("enumeration", u64::MAX, u64::MAX))?;
        let n = params.n as usize;
        let q = params.q as u64;
        let mut place = vec![1u64; n];
        for i in (0..n.saturating_sub(1)).rev() {
            place[i] = place[i + 1] * q;
        }
        debug_assert!(n == 0 || place[0].checked_mul(q) == Some(size));
        Ok(RankSpace { q, n, place })
    }

    pub(crate) fn digits(&self, rank: u64) -> Vec<u32> {
        self.place.iter().map(|&p| ((rank / p) % self.q) as u32).collect()
    }

    /// Calls `f(rank, distance)` for every word within `r` of `center`.
    pub(crate) fn for_each_in_ball(&self, center: u64, r: usize, f: &mut impl FnMut(u64, usize)) {
        let digits = self.digits(center);
        self.ball_rec(&digits, center, 0, 0, r.min(self.n), f);
    }

    fn ball_rec(
        &self,
        digits: &[u32],
        rank: u64,
        start: usize,
        dist: usize,
        r: usize,
        f: &mut impl FnMut(u64, usize),
    ) {
        f(rank, dist);
        if dist == r {
            return;
        }
        for i in start..self.n {
            let base = rank - digits[i] as u64 * self.place[i];
            for s in 0..self.q {
                if s != digits[i] as u64 {
                    self.ball_rec(digits, base + s * self.place[i], i + 1, dist + 1, r, f);
                }
            }
        }
    }
}

/// `|B_q(0^n, t) ∩ B_q(1^k 0^(n-k), t)|` by scanning all of `[q]^n`.
pub fn ball_intersection_bruteforce(params: &CodeParams, k: u32, budget: u64) -> Result<Nat> {
    if k > params.n {
        return Err(Error::input(format!("center distance k={k} exceeds n={}", params.n)));
    }
    params.enumerable(budget)?;
    let (n, q, t, k) = (params.n as usize, params.q, params.t as usize, k as usize);
    let mut digits = vec![0u32; n];
    let mut count = 0u64;
    loop {
        let mut d_zero = 0;
        let mut d_offset = 0;
        for (i, &x) in digits.iter().enumerate() {
            d_zero += usize::from(x != 0);
            d_offset += usize::from(x != u32::from(i < k));
        }
        if d_zero <= t && d_offset <= t {
            count += 1;
        }
        // odometer, least significant coordinate last
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(nat(count));
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Histogram over unordered pairs of `set`: entry `d` counts pairs at distance `d`.
pub fn pair_distance_histogram(set: &[Word], n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    let single_lane = set
        .first()
        .is_some_and(|f| set.iter().all(|w| w.lanes.len() == 1 && w.q == f.q));
    if single_lane {
        // Contiguous lanes keep the quadratic loop in cache.
        let (bits, per) = Word::layout(set[0].q);
        let low = low_bit_mask(bits, per);
        let packed: Vec<u64> = set.iter().map(|w| w.lanes[0]).collect();
        for (i, &a) in packed.iter().enumerate() {
            for &b in &packed[i + 1..] {
                let x = a ^ b;
                let mut folded = x;
                for s in 1..bits {
                    folded |= x >> s;
                }
                hist[(folded & low).count_ones() as usize] += 1;
            }
        }
        return hist;
    }
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            hist[a.distance_unchecked(b)] += 1;
        }
    }
    hist
}

/// `|E_k|` for `k = 1..=2t`.
pub fn edge_counts_by_distance(set: &[Word], params: &CodeParams) -> Result<BTreeMap<u32, Nat>> {
    let set = normalize_set(set, params)?;
    let hist = pair_distance_histogram(&set, params.n as usize);
    Ok((1..=2 * params.t)
        .map(|k| (k, nat(hist.get(k as usize).copied().unwrap_or(0))))
        .collect())
}

/// `deg_k(v) = |{u ∈ S : d(u, v) = k}|`.
pub fn degree_by_distance(set: &[Word], v: &Word, k: u32) -> Result<u64> {
    if !set.contains(v) {
        return Err(Error::input(format!("vertex {v} is not in the set")));
    }
    let mut deg = 0u64;
    for u in set {
        if u.q != v.q || u.n != v.n {
            return Err(Error::input(format!("word {u} has a different shape from {v}")));
        }
        if u != v && u.distance_unchecked(v) == k as usize {
            deg += 1;
        }
    }
    Ok(deg)
}

/// `|K_x| = |{a ∈ S : d(x, a) <= t}|` for every `x`, indexed by rank.
pub fn covering_counts(set: &[Word], params: &CodeParams, budget: u64) -> Result<Vec<u32>> {
    let size = params.enumerable(budget)?;
    let set = normalize_set(set, params)?;
    let space = RankSpace::new(params)?;
    let mut counts = vec![0u32; size as usize];
    for a in &set {
        let center = a.rank_u64().expect("enumerable space has 64-bit ranks");
        space.for_each_in_ball(center, params.t as usize, &mut |x, _| counts[x as usize] += 1);
    }
    Ok(counts)
}
