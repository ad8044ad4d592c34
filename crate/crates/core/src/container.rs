//! The graph container algorithm with an early-stopping rule.
//!
//! Given an independent set `I`, the loop repeatedly looks at the remaining
//! graph `G'`: once `i(G') <= T` it stops and sets `f(P) = V(G')`; otherwise
//! it takes a maximum-degree vertex `u` (earliest in the vertex order on ties)
//! and either deletes it (`u ∉ I`) or appends it to the fingerprint `P` and
//! deletes its closed neighbourhood (`u ∈ I`). Every choice depends only on
//! `G'`, which in turn depends only on `P`, so `f(P)` is a function of `P`
//! and `I ⊆ P ∪ f(P)`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{BitGraph, DistanceGraph, VertexSet};
use crate::indep::{enumerate_independent_sets, IndependentSetCounter};
use crate::numeric::{ceil_rat, nat, pow_u, rat_from_nat, Nat, Rat};
use crate::space::CodeParams;
use crate::volumes::hamming_bound;

/// Largest exponent accepted for `T = 2^e`.
const MAX_THRESHOLD_BITS: u64 = 1 << 24;

/// Stop once the remaining graph has at most `threshold` independent sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StopRule {
    #[serde(with = "crate::numeric::nat_str")]
    pub threshold: Nat,
    #[serde(skip)]
    pub budget: Budget,
}

impl StopRule {
    pub fn new(threshold: Nat, budget: Budget) -> Result<Self> {
        if threshold < Nat::one() {
            return Err(Error::input("stop threshold must be at least 1"));
        }
        Ok(StopRule { threshold, budget })
    }

    /// `T = 2^⌈(1+ε) H_q(n,t)⌉`.
    pub fn from_epsilon(params: &CodeParams, epsilon: &Rat, budget: Budget) -> Result<Self> {
        Self::new(threshold_from_epsilon(params, epsilon)?, budget)
    }
}

/// `2^⌈(1+ε) H_q(n,t)⌉`, with the ceiling taken on the exact exponent.
pub fn threshold_from_epsilon(params: &CodeParams, epsilon: &Rat) -> Result<Nat> {
    if *epsilon < Rat::from_integer(0.into()) {
        return Err(Error::input(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let h = hamming_bound(params.q, params.n, params.t)?;
    let exponent = ceil_rat(&((Rat::one() + epsilon) * h));
    let bits = exponent.to_u64().unwrap_or(u64::MAX);
    if bits > MAX_THRESHOLD_BITS {
        return Err(Error::budget("threshold exponent", MAX_THRESHOLD_BITS, bits));
    }
    Ok(Nat::one() << bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Stopped with vertices left over: `f(P) ≠ ∅`.
    EarlyStop,
    /// Nothing was left when the rule fired.
    Exhausted,
}

/// One pass of the loop: the chosen vertex and how many vertices went with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub vertex: usize,
    pub removed: usize,
    pub added_to_fingerprint: bool,
}

/// Observables for the two-stage accounting; recorded, never asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageMetrics {
    /// `n^4 · H_q(n,t)` when the graph is a Hamming distance graph.
    #[serde(with = "crate::numeric::opt_rat_str")]
    pub boundary: Option<Rat>,
    /// First step taken with at most `boundary` vertices left.
    pub boundary_crossed_at: Option<usize>,
    pub first_stage_fingerprint: usize,
    pub second_stage_fingerprint: usize,
    /// Vertices removed per fingerprint addition in each stage.
    pub first_stage_rate: Option<f64>,
    pub second_stage_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainerRecord {
    pub fingerprint: Vec<usize>,
    pub f: Vec<usize>,
    /// `P ∪ f(P)`.
    pub container: Vec<usize>,
    pub stop_reason: StopReason,
    pub removed_per_step: Vec<Step>,
    #[serde(with = "crate::numeric::nat_str")]
    pub threshold_used: Nat,
    /// `i(G')` when the rule fired.
    #[serde(with = "crate::numeric::nat_str")]
    pub final_count: Nat,
    pub stages: StageMetrics,
}

/// Runs the algorithm repeatedly on one graph, sharing the count cache.
pub struct ContainerRunner<'g> {
    graph: &'g BitGraph,
    position: Vec<usize>,
    stop: StopRule,
    counter: IndependentSetCounter<'g>,
    boundary: Option<Rat>,
}

impl<'g> ContainerRunner<'g> {
    /// `order` lists every vertex once; earlier vertices win degree ties.
    pub fn new(graph: &'g BitGraph, order: &[usize], stop: StopRule) -> Result<Self> {
        let mut position = vec![usize::MAX; graph.len()];
        if order.len() != graph.len() {
            return Err(Error::input("vertex order must list every vertex once"));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= graph.len() || position[v] != usize::MAX {
                return Err(Error::input("vertex order must list every vertex once"));
            }
            position[v] = i;
        }
        let counter = IndependentSetCounter::new(graph, stop.budget)?;
        Ok(ContainerRunner {
            graph,
            position,
            stop,
            counter,
            boundary: None,
        })
    }

    /// Uses the distance graph's own order and records the stage boundary.
    pub fn for_distance_graph(dg: &'g DistanceGraph, stop: StopRule) -> Result<Self> {
        let p = dg.params();
        let mut runner = Self::new(dg.bit_graph()?, dg.order(), stop)?;
        let n4 = pow_u(p.n as u64, 4);
        runner.boundary = Some(rat_from_nat(&n4) * hamming_bound(p.q, p.n, p.t)?);
        Ok(runner)
    }

    pub fn graph(&self) -> &'g BitGraph {
        self.graph
    }

    pub fn stop_rule(&self) -> &StopRule {
        &self.stop
    }

    /// `i(G[set])` through the shared cache.
    pub fn count(&mut self, set: &VertexSet) -> Result<Nat> {
        self.counter.count(set)
    }

    pub fn run(&mut self, independent: &VertexSet) -> Result<ContainerRecord> {
        let g = self.graph;
        if independent.iter().any(|v| v >= g.len()) || !g.is_independent(independent) {
            return Err(Error::input("the given vertex set is not independent"));
        }
        let mut alive = g.all_vertices();
        let mut fingerprint = Vec::new();
        let mut steps = Vec::new();
        let mut crossed_at = None;
        let mut stage_removed = [0usize; 2];
        let mut stage_added = [0usize; 2];
        let final_count = loop {
            let count = self.counter.count(&alive)?;
            if count <= self.stop.threshold {
                break count;
            }
            let stage = match &self.boundary {
                Some(b) if rat_from_nat(&nat(alive.len() as u64)) <= *b => {
                    crossed_at.get_or_insert(steps.len());
                    1
                }
                _ => 0,
            };
            // i(G') > T >= 1 forces a vertex to exist
            let (u, degree) = alive
                .iter()
                .map(|v| (v, g.degree_within(v, &alive)))
                .max_by(|a, b| a.1.cmp(&b.1).then(self.position[b.0].cmp(&self.position[a.0])))
                .expect("graph with more than one independent set has a vertex");
            let removed = if independent.contains(u) {
                let mut gone = g.closed_neighborhood(u);
                gone.intersect_with(&alive);
                alive.difference_with(&gone);
                fingerprint.push(u);
                stage_added[stage] += 1;
                assert!(gone.len() > degree, "closed neighbourhood must cover Δ + 1 vertices");
                gone.len()
            } else {
                alive.remove(u);
                1
            };
            stage_removed[stage] += removed;
            steps.push(Step {
                vertex: u,
                removed,
                added_to_fingerprint: independent.contains(u),
            });
        };
        let f = alive.to_vec();
        let mut container = VertexSet::from_indices(g.len(), fingerprint.iter().copied());
        container.union_with(&alive);
        fingerprint.sort_unstable();
        let rate = |i: usize| (stage_added[i] > 0).then(|| stage_removed[i] as f64 / stage_added[i] as f64);
        Ok(ContainerRecord {
            stop_reason: if f.is_empty() {
                StopReason::Exhausted
            } else {
                StopReason::EarlyStop
            },
            fingerprint,
            f,
            container: container.to_vec(),
            removed_per_step: steps,
            threshold_used: self.stop.threshold.clone(),
            final_count,
            stages: StageMetrics {
                boundary: self.boundary.clone(),
                boundary_crossed_at: crossed_at,
                first_stage_fingerprint: stage_added[0],
                second_stage_fingerprint: stage_added[1],
                first_stage_rate: rate(0),
                second_stage_rate: rate(1),
            },
        })
    }
}

/// Convenience wrapper for a single run on a distance graph.
pub fn run_container_algorithm(dg: &DistanceGraph, independent: &VertexSet, stop: StopRule) -> Result<ContainerRecord> {
    ContainerRunner::for_distance_graph(dg, stop)?.run(independent)
}

/// Containers `P ∪ f(P)` together with the fingerprints that produced them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ContainerFamily {
    /// Fingerprint to `f(P)`.
    pub fingerprints: BTreeMap<Vec<usize>, Vec<usize>>,
    /// The deduplicated containers.
    pub containers: BTreeSet<Vec<usize>>,
}

impl ContainerFamily {
    /// A family given directly by its containers, without fingerprints.
    pub fn from_containers(containers: impl IntoIterator<Item = Vec<usize>>) -> Self {
        ContainerFamily {
            fingerprints: BTreeMap::new(),
            containers: containers
                .into_iter()
                .map(|mut c| {
                    c.sort_unstable();
                    c.dedup();
                    c
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.containers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.containers.is_empty()
    }
}

/// Runs the algorithm on every independent set (all of them when `sets` is
/// `None`) and collects the containers.
///
/// Fails with a verification error if two runs with the same fingerprint
/// disagree on `f(P)`, or if some run violates `P ⊆ I ⊆ P ∪ f(P)`.
pub fn build_container_family(
    runner: &mut ContainerRunner<'_>,
    sets: Option<&[VertexSet]>,
) -> Result<ContainerFamily> {
    let g = runner.graph();
    let owned;
    let sets = match sets {
        Some(s) => s,
        None => {
            owned = all_independent_sets(g, &runner.stop_rule().budget)?;
            &owned
        }
    };
    let mut family = ContainerFamily::default();
    for set in sets {
        let rec = runner.run(set)?;
        let p = VertexSet::from_indices(g.len(), rec.fingerprint.iter().copied());
        let c = VertexSet::from_indices(g.len(), rec.container.iter().copied());
        if !p.is_subset(set) || !set.is_subset(&c) {
            return Err(Error::Verification(format!(
                "sandwich P ⊆ I ⊆ P ∪ f(P) broken for I = {:?}",
                set.to_vec()
            )));
        }
        match family.fingerprints.get(&rec.fingerprint) {
            Some(f) if *f != rec.f => {
                return Err(Error::Verification(format!(
                    "fingerprint {:?} produced two different f(P)",
                    rec.fingerprint
                )))
            }
            Some(_) => {}
            None => {
                family.fingerprints.insert(rec.fingerprint, rec.f);
            }
        }
        family.containers.insert(rec.container);
    }
    Ok(family)
}

/// Every independent set of `g`, as vertex sets.
pub fn all_independent_sets(g: &BitGraph, budget: &Budget) -> Result<Vec<VertexSet>> {
    Ok(enumerate_independent_sets(g, budget)?
        .map(|s| VertexSet::from_indices(g.len(), s))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// Every supplied independent set lies in some container.
    pub coverage: bool,
    pub family_size: usize,
    #[serde(with = "crate::numeric::nat_str")]
    pub max_container_isets: Nat,
    pub max_fingerprint_size: usize,
    /// `Σ_{S ∈ 𝓕} i(G[S])`, an upper bound on `i(G)` when coverage holds.
    #[serde(with = "crate::numeric::nat_str")]
    pub sum_container_isets: Nat,
    /// First independent set found outside every container.
    pub uncovered_example: Option<Vec<usize>>,
}

pub fn audit_family(
    runner: &mut ContainerRunner<'_>,
    family: &ContainerFamily,
    independent_sets: &[VertexSet],
) -> Result<AuditReport> {
    let n = runner.graph().len();
    let containers: Vec<VertexSet> = family
        .containers
        .iter()
        .map(|c| VertexSet::from_indices(n, c.iter().copied()))
        .collect();
    let uncovered = independent_sets
        .iter()
        .find(|i| !containers.iter().any(|c| i.is_subset(c)));
    let mut max = Nat::default();
    let mut sum = Nat::default();
    for c in &containers {
        let count = runner.count(c)?;
        sum += &count;
        max = max.max(count);
    }
    Ok(AuditReport {
        coverage: uncovered.is_none(),
        family_size: family.len(),
        max_container_isets: max,
        max_fingerprint_size: family.fingerprints.keys().map(Vec::len).max().unwrap_or(0),
        sum_container_isets: sum,
        uncovered_example: uncovered.map(VertexSet::to_vec),
    })
}
