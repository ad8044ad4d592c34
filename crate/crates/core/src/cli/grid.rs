//! Parameter grids: `q=2,3;n=1..8;t=0..2;seeds=20`.
//!
//! Each clause is `key=values` where values are a comma list and/or
//! inclusive ranges `a..b`. The `t` clause also accepts `all` (every
//! `t <= n`) and `<=n`, `<=n/K` or `<=K` as a rule in `n`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::CodeParams;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TRule {
    List(Vec<u32>),
    /// `t <= floor(n / divisor)`.
    FractionOfN { divisor: u32 },
    AtMost(u32),
}

impl TRule {
    pub fn values(&self, n: u32) -> Vec<u32> {
        match self {
            TRule::List(ts) => ts.iter().copied().filter(|&t| t <= n).collect(),
            TRule::FractionOfN { divisor } => (0..=n / divisor).collect(),
            TRule::AtMost(k) => (0..=(*k).min(n)).collect(),
        }
    }
}

/// A grid of `(q, n, t)` points plus the number of random sets per point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSpec {
    pub q_list: Vec<u32>,
    pub n_list: Vec<u32>,
    pub t_rule: TRule,
    pub seeds_per_point: u32,
}

fn parse_values(key: &str, s: &str) -> Result<Vec<u32>> {
    let bad = || Error::input(format!("bad value list for {key}: {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

impl SweepSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let mut q_list = None;
        let mut n_list = None;
        let mut t_rule = None;
        let mut seeds = 1;
        for clause in s.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            if let Some(rule) = clause.strip_prefix("t<=") {
                let rule = rule.trim();
                t_rule = Some(if rule == "n" {
                    TRule::FractionOfN { divisor: 1 }
                } else if let Some(d) = rule.strip_prefix("n/") {
                    let divisor: u32 = d.trim().parse().map_err(|_| Error::input(format!("bad rule {clause:?}")))?;
                    if divisor == 0 {
                        return Err(Error::input("t<=n/0 is not a rule"));
                    }
                    TRule::FractionOfN { divisor }
                } else {
                    TRule::AtMost(rule.parse().map_err(|_| Error::input(format!("bad rule {clause:?}")))?)
                });
                continue;
            }
            let (key, value) = clause
                .split_once('=')
                .ok_or_else(|| Error::input(format!("grid clause {clause:?} is not key=value")))?;
            match key.trim() {
                "q" => q_list = Some(parse_values("q", value)?),
                "n" => n_list = Some(parse_values("n", value)?),
                "t" if value.trim() == "all" => t_rule = Some(TRule::FractionOfN { divisor: 1 }),
                "t" => t_rule = Some(TRule::List(parse_values("t", value)?)),
                "seeds" => {
                    seeds = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::input(format!("bad seed count {value:?}")))?
                }
                other => return Err(Error::input(format!("unknown grid key {other:?}"))),
            }
        }
        let spec = SweepSpec {
            q_list: q_list.ok_or_else(|| Error::input("grid needs a q clause"))?,
            n_list: n_list.ok_or_else(|| Error::input("grid needs an n clause"))?,
            t_rule: t_rule.unwrap_or(TRule::FractionOfN { divisor: 1 }),
            seeds_per_point: seeds,
        };
        if let Some(&q) = spec.q_list.iter().find(|&&q| q < 2) {
            return Err(Error::input(format!("alphabet size q={q} must be at least 2")));
        }
        if spec.n_list.contains(&0) {
            return Err(Error::input("word length n must be at least 1"));
        }
        Ok(spec)
    }

    /// Every `(q, n, t)` of the grid, in `q`, then `n`, then `t` order.
    pub fn points(&self) -> Vec<CodeParams> {
        let mut out = Vec::new();
        for &q in &self.q_list {
            for &n in &self.n_list {
                for t in self.t_rule.values(n) {
                    out.push(CodeParams { q, n, t });
                }
            }
        }
        out
    }

    /// Points whose space has at most `limit` words.
    pub fn points_within(&self, limit: u64) -> Vec<CodeParams> {
        self.points()
            .into_iter()
            .filter(|p| p.space_size_u64().is_some_and(|s| s <= limit))
            .collect()
    }
}

/// The seeds of grid point `index`: ChaCha stream `index` keyed by the
/// master seed, so they never depend on scheduling.
pub fn point_seeds(master: u64, index: usize, count: u32) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64);
    (0..count).map(|_| rng.next_u64()).collect()
}
