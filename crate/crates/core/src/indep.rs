//! Exact counting, maximum size, and enumeration of independent sets.
//!
//! Independent sets of `G_{q,n,t}[S]` are exactly the `t`-error-correcting
//! codes inside `S`, so everything here doubles as a code census.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{BudgetExceeded, Error, Result};
use crate::graph::{BitGraph, DistanceGraph, VertexSet};
use crate::numeric::{log2_nat, nat, rat_to_f64, Nat};
use crate::space::{canonical_offset, CodeParams, Word};
use crate::volumes::hamming_bound;

fn node_budget_error(what: &'static str, budget: &Budget, nodes: u64, best: Option<u64>) -> Error {
    Error::Budget(BudgetExceeded {
        what,
        limit: budget.max_nodes,
        requested: nodes,
        node_visits: nodes,
        best_lower_bound: best,
    })
}

fn check_vertices(what: &'static str, limit: usize, g: &BitGraph) -> Result<()> {
    if g.len() > limit {
        return Err(Error::budget(what, limit as u64, g.len() as u64));
    }
    Ok(())
}

/// Memoized branching counter for `i(G)`.
///
/// Uses `i(G) = i(G - v) + i(G - N[v])` on a maximum-degree vertex (lowest
/// index on ties), multiplies over connected components, and caches the
/// count of every connected vertex set it meets. The cache is keyed by the
/// vertex set itself, so one counter can be reused for any number of
/// induced subgraphs of the same graph.
pub struct IndependentSetCounter<'g> {
    graph: &'g BitGraph,
    memo: HashMap<VertexSet, Nat>,
    budget: Budget,
    nodes: u64,
}

impl<'g> IndependentSetCounter<'g> {
    pub fn new(graph: &'g BitGraph, budget: Budget) -> Result<Self> {
        check_vertices("branching counter vertices", budget.branching_vertices, graph)?;
        Ok(IndependentSetCounter {
            graph,
            memo: HashMap::new(),
            budget,
            nodes: 0,
        })
    }

    pub fn node_visits(&self) -> u64 {
        self.nodes
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn count_all(&mut self) -> Result<Nat> {
        self.count(&self.graph.all_vertices())
    }

    /// `i(G[alive])`.
    pub fn count(&mut self, alive: &VertexSet) -> Result<Nat> {
        self.count_rec(alive.clone())
    }

    fn count_rec(&mut self, alive: VertexSet) -> Result<Nat> {
        if alive.is_empty() {
            return Ok(Nat::one());
        }
        let comps = self.graph.components(&alive);
        let mut product = Nat::one();
        for comp in comps {
            product *= self.count_connected(comp)?;
        }
        Ok(product)
    }

    fn count_connected(&mut self, comp: VertexSet) -> Result<Nat> {
        match comp.len() {
            1 => return Ok(nat(2)),
            2 => return Ok(nat(3)),
            _ => {}
        }
        if let Some(hit) = self.memo.get(&comp) {
            return Ok(hit.clone());
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(node_budget_error("branching counter nodes", &self.budget, self.nodes, None));
        }
        let mut pivot = 0;
        let mut best = 0;
        for v in comp.iter() {
            let d = self.graph.degree_within(v, &comp);
            if d > best {
                best = d;
                pivot = v;
            }
        }
        let mut without = comp.clone();
        without.remove(pivot);
        let mut with = comp.clone();
        with.difference_with(&self.graph.closed_neighborhood(pivot));
        let total = self.count_rec(without)? + self.count_rec(with)?;
        self.memo.insert(comp, total.clone());
        Ok(total)
    }
}

/// `i(G)` with default budgets.
pub fn count_independent_sets(g: &BitGraph) -> Result<Nat> {
    count_independent_sets_with(g, Budget::default())
}

pub fn count_independent_sets_with(g: &BitGraph, budget: Budget) -> Result<Nat> {
    IndependentSetCounter::new(g, budget)?.count_all()
}

/// `i(G)` by checking all `2^|V|` subsets.
pub fn count_independent_sets_naive(g: &BitGraph, budget: &Budget) -> Result<Nat> {
    check_vertices("naive scan vertices", budget.naive_vertices.min(32), g)?;
    Ok(nat(naive_scan(g, &g.all_vertices())))
}

/// Counts independent subsets of `within` by a subset scan over its members.
fn naive_scan(g: &BitGraph, within: &VertexSet) -> u64 {
    let verts = within.to_vec();
    let m = verts.len();
    // conflicts[i]: bitmask (over positions in `verts`) of neighbours of verts[i]
    let conflicts: Vec<u32> = verts
        .iter()
        .map(|&v| {
            verts
                .iter()
                .enumerate()
                .filter(|(_, &u)| g.adjacent(v, u))
                .fold(0u32, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    let mut independent = vec![false; 1usize << m];
    independent[0] = true;
    let mut count = 1u64;
    for mask in 1u32..(1u32 << m as u32).max(1) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let ok = independent[rest as usize] && conflicts[low] & rest == 0;
        independent[mask as usize] = ok;
        count += u64::from(ok);
    }
    count
}

/// A second, independently written counter: components of at most
/// `budget.naive_vertices` vertices are settled by a subset scan, larger ones
/// by include/exclude on their lowest-index vertex with a separate cache.
pub fn count_independent_sets_component_naive(g: &BitGraph, budget: &Budget) -> Result<Nat> {
    check_vertices("component-naive vertices", budget.branching_vertices, g)?;
    ComponentNaive::new(g, budget).count(g.all_vertices())
}

/// Components up to this size are scanned rather than branched on.
const COMPONENT_SCAN_LIMIT: usize = 12;

struct ComponentNaive<'g> {
    graph: &'g BitGraph,
    memo: HashMap<VertexSet, Nat>,
    limit: usize,
    budget: Budget,
    nodes: u64,
}

impl<'g> ComponentNaive<'g> {
    fn new(graph: &'g BitGraph, budget: &Budget) -> Self {
        ComponentNaive {
            graph,
            memo: HashMap::new(),
            limit: budget.naive_vertices.min(COMPONENT_SCAN_LIMIT),
            budget: *budget,
            nodes: 0,
        }
    }

    fn count(&mut self, alive: VertexSet) -> Result<Nat> {
        let mut product = Nat::one();
        for comp in self.graph.components(&alive) {
            product *= if comp.len() <= self.limit {
                nat(naive_scan(self.graph, &comp))
            } else {
                self.branch(comp)?
            };
        }
        Ok(product)
    }

    fn branch(&mut self, comp: VertexSet) -> Result<Nat> {
        if let Some(hit) = self.memo.get(&comp) {
            return Ok(hit.clone());
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(node_budget_error("component-naive nodes", &self.budget, self.nodes, None));
        }
        let v = comp.first().expect("component is nonempty");
        let mut without = comp.clone();
        without.remove(v);
        let mut with = comp.clone();
        with.difference_with(&self.graph.closed_neighborhood(v));
        let total = self.count(without)? + self.count(with)?;
        self.memo.insert(comp, total.clone());
        Ok(total)
    }
}

/// Which exact counter settles the subproblems of a split count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterKind {
    Branching,
    ComponentNaive,
}

/// `i(G)` by conditioning on the trace of the independent set on `part`:
/// `i(G) = Σ_{I ∈ IS(G[X])} i(G[V ∖ X ∖ N(I)])` with `X = part`.
///
/// Every independent set of `G[X]` is enumerated once; all subproblems on
/// the other side share one cache.
pub fn count_by_split(g: &BitGraph, part: &VertexSet, kind: CounterKind, budget: &Budget) -> Result<Nat> {
    let (gx, _) = g.induced(part);
    let mut rest = g.all_vertices();
    rest.difference_with(part);
    let (gy, ymap) = g.induced(&rest);
    let mut pos = vec![usize::MAX; g.len()];
    for (i, &v) in ymap.iter().enumerate() {
        pos[v] = i;
    }
    let across: Vec<VertexSet> = part
        .iter()
        .map(|v| VertexSet::from_indices(gy.len(), g.neighbors(v).iter().map(|u| pos[u]).filter(|&u| u != usize::MAX)))
        .collect();

    let outer = count_independent_sets_with(&gx, *budget)?;
    let outer = outer.to_u64().unwrap_or(u64::MAX);
    if outer > budget.streaming {
        return Err(Error::budget("split outer independent sets", budget.streaming, outer));
    }

    let mut inner: Box<dyn FnMut(VertexSet) -> Result<Nat> + '_> = match kind {
        CounterKind::Branching => {
            let mut c = IndependentSetCounter::new(&gy, *budget)?;
            Box::new(move |alive| c.count_rec(alive))
        }
        CounterKind::ComponentNaive => {
            check_vertices("component-naive vertices", budget.branching_vertices, &gy)?;
            let mut c = ComponentNaive::new(&gy, budget);
            Box::new(move |alive| c.count(alive))
        }
    };
    let mut total = Nat::zero();
    // depth-first over independent sets of G[X], carrying the blocked side
    let mut stack = vec![(gx.all_vertices(), VertexSet::empty(gy.len()))];
    while let Some((cand, blocked)) = stack.pop() {
        let mut alive = gy.all_vertices();
        alive.difference_with(&blocked);
        total += inner(alive)?;
        let members = cand.to_vec();
        for (i, &v) in members.iter().enumerate() {
            let mut next = cand.clone();
            next.difference_with(&gx.closed_neighborhood(v));
            for &u in &members[..i] {
                next.remove(u);
            }
            let mut b = blocked.clone();
            b.union_with(&across[v]);
            stack.push((next, b));
        }
    }
    Ok(total)
}

/// Words whose leading digit is zero, as a vertex set of `dg`.
pub fn leading_zero_part(dg: &DistanceGraph) -> VertexSet {
    VertexSet::from_indices(
        dg.len(),
        dg.vertices().iter().enumerate().filter(|(_, w)| w.digit(0) == 0).map(|(i, _)| i),
    )
}

/// `i(G_{q,n,t})`, split on the leading coordinate once the space is
/// larger than one machine word of vertices.
pub fn count_codes(params: &CodeParams, kind: CounterKind, budget: &Budget) -> Result<Nat> {
    let dg = DistanceGraph::full(*params, budget.enumeration)?;
    let g = dg.bit_graph()?;
    if g.len() <= 64 || params.n == 1 {
        return match kind {
            CounterKind::Branching => count_independent_sets_with(g, *budget),
            CounterKind::ComponentNaive => count_independent_sets_component_naive(g, budget),
        };
    }
    count_by_split(g, &leading_zero_part(&dg), kind, budget)
}

/// A maximum independent set and the search effort spent on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxIndependentSet {
    pub size: usize,
    pub witness: Vec<usize>,
    pub node_visits: u64,
}

/// Exact maximum independent set by branch and bound.
///
/// Candidates are greedily partitioned into cliques of `G` (each clique holds
/// at most one member of an independent set), which bounds how far the
/// current set can still grow.
pub fn max_independent_set(g: &BitGraph, budget: &Budget) -> Result<MaxIndependentSet> {
    max_independent_set_containing(g, &[], budget)
}

/// Like [`max_independent_set`], restricted to sets containing `forced`.
///
/// For a vertex-transitive graph, forcing any single vertex loses nothing.
pub fn max_independent_set_containing(
    g: &BitGraph,
    forced: &[usize],
    budget: &Budget,
) -> Result<MaxIndependentSet> {
    check_vertices("exact search vertices", budget.branching_vertices, g)?;
    let forced_set = VertexSet::from_indices(g.len(), forced.iter().copied());
    if forced.iter().any(|&v| v >= g.len()) || !g.is_independent(&forced_set) {
        return Err(Error::input("forced vertices must form an independent set"));
    }
    let mut cand = g.all_vertices();
    for &v in forced {
        cand.difference_with(&g.closed_neighborhood(v));
    }
    let mut search = MaxSearch::new(g, budget, forced_set.to_vec(), usize::MAX, 0);
    search.run(forced, cand)?;
    Ok(search.finish())
}

struct MaxSearch<'g> {
    graph: &'g BitGraph,
    best: Vec<usize>,
    current: Vec<usize>,
    /// Stop as soon as `best` reaches this size (a known upper bound).
    target: usize,
    nodes: u64,
    budget: Budget,
}

impl<'g> MaxSearch<'g> {
    fn new(graph: &'g BitGraph, budget: &Budget, incumbent: Vec<usize>, target: usize, nodes: u64) -> Self {
        MaxSearch {
            graph,
            best: incumbent,
            current: Vec::new(),
            target,
            nodes,
            budget: *budget,
        }
    }

    /// Best set containing `forced` and otherwise drawn from `cand`, unless
    /// the incumbent is already at least as large.
    fn run(&mut self, forced: &[usize], cand: VertexSet) -> Result<()> {
        self.current = forced.to_vec();
        self.expand(cand)
    }

    fn finish(self) -> MaxIndependentSet {
        let mut witness = self.best;
        witness.sort_unstable();
        MaxIndependentSet {
            size: witness.len(),
            witness,
            node_visits: self.nodes,
        }
    }

    fn done(&self) -> bool {
        self.best.len() >= self.target
    }

    /// Greedy clique cover of `cand`; returns vertices with their class
    /// number, in increasing class order.
    fn clique_cover(&self, cand: &VertexSet) -> Vec<(usize, usize)> {
        let mut order = Vec::with_capacity(cand.len());
        let mut uncovered = cand.clone();
        let mut class = 0;
        while !uncovered.is_empty() {
            class += 1;
            let mut open = uncovered.clone();
            while let Some(v) = open.first() {
                open.remove(v);
                uncovered.remove(v);
                open.intersect_with(self.graph.neighbors(v));
                order.push((v, class));
            }
        }
        order
    }

    fn expand(&mut self, mut cand: VertexSet) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(node_budget_error(
                "exact search nodes",
                &self.budget,
                self.nodes,
                Some(self.best.len() as u64),
            ));
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if cand.is_empty() || self.done() {
            return Ok(());
        }
        let order = self.clique_cover(&cand);
        for &(v, class) in order.iter().rev() {
            if self.current.len() + class <= self.best.len() || self.done() {
                return Ok(());
            }
            let mut next = cand.clone();
            next.difference_with(&self.graph.closed_neighborhood(v));
            self.current.push(v);
            self.expand(next)?;
            self.current.pop();
            cand.remove(v);
        }
        Ok(())
    }
}

/// Greedy independent set in index order; on `[q]^n` in rank order this is
/// the lexicode.
pub fn greedy_independent_set(g: &BitGraph) -> Vec<usize> {
    let mut cand = g.all_vertices();
    let mut out = Vec::new();
    while let Some(v) = cand.first() {
        out.push(v);
        cand.difference_with(&g.closed_neighborhood(v));
    }
    out
}

/// Streams every independent set (including the empty one) exactly once, in
/// lexicographic order of sorted index lists.
pub fn enumerate_independent_sets<'g>(g: &'g BitGraph, budget: &Budget) -> Result<IndependentSets<'g>> {
    let total = count_independent_sets_with(g, *budget)?;
    let total_u64 = total.to_u64().unwrap_or(u64::MAX);
    if total_u64 > budget.streaming {
        return Err(Error::budget("independent-set stream", budget.streaming, total_u64));
    }
    Ok(IndependentSets {
        graph: g,
        stack: vec![(Vec::new(), g.all_vertices())],
    })
}

pub struct IndependentSets<'g> {
    graph: &'g BitGraph,
    stack: Vec<(Vec<usize>, VertexSet)>,
}

impl Iterator for IndependentSets<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let (chosen, cand) = self.stack.pop()?;
        let members = cand.to_vec();
        for &v in members.iter().rev() {
            let mut rest = cand.clone();
            rest.difference_with(&self.graph.closed_neighborhood(v));
            // only later vertices, so each set is produced from its sorted prefix
            for &u in members.iter().take_while(|&&u| u < v) {
                rest.remove(u);
            }
            let mut grown = chosen.clone();
            grown.push(v);
            self.stack.push((grown, rest));
        }
        Some(chosen)
    }
}

/// One row of the exact code census.
#[derive(Debug, Clone, Serialize)]
pub struct CensusResult {
    pub params: CodeParams,
    #[serde(with = "crate::numeric::nat_str")]
    pub vertex_count: Nat,
    /// `i(G)`, the number of codes including the empty one.
    #[serde(with = "crate::numeric::nat_str")]
    pub independent_set_count: Nat,
    /// `A_q(n, 2t+1)`.
    #[serde(with = "crate::numeric::nat_str")]
    pub max_independent_size: Nat,
    pub witness: Vec<u64>,
    /// `log2 i(G) / H_q(n, t)`, reported only.
    pub log2_count_over_hamming: f64,
    /// Excluded from the serialized form so that output is reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
    /// Branch-and-bound nodes of the maximum-code search.
    pub node_visits: u64,
}

/// `A_q(n, 2t+1)`: maximum code size in all of `[q]^n`, with a witness.
///
/// The search uses the symmetries of `[q]^n` (translations, coordinate
/// permutations and per-coordinate symbol permutations, all of which
/// preserve distance): some optimal code contains `0^n` and, with `w` its
/// minimum nonzero weight, also `1^w 0^(n-w)` and no word of weight below
/// `w`. One search runs per `w`. The lexicode seeds the incumbent, and the
/// search stops early once it meets the best Hamming/Plotkin/Elias bound.
pub fn max_code_size(params: &CodeParams, budget: &Budget) -> Result<MaxIndependentSet> {
    let CodeParams { q, n, t } = *params;
    let dg = DistanceGraph::full(*params, budget.enumeration)?;
    let g = dg.bit_graph()?;
    let trivial = |witness: Vec<usize>| MaxIndependentSet {
        size: witness.len(),
        witness,
        node_visits: 0,
    };
    if t == 0 {
        return Ok(trivial((0..g.len()).collect()));
    }
    if 2 * t >= n {
        return Ok(trivial(vec![0]));
    }
    check_vertices("exact search vertices", budget.branching_vertices, g)?;
    let upper = crate::bounds::best_upper_bound(params)?
        .to_usize()
        .unwrap_or(usize::MAX);
    let weights: Vec<usize> = dg.vertices().iter().map(Word::weight).collect();
    let mut incumbent = greedy_independent_set(g);
    let mut nodes = 0;
    for w in (2 * t + 1) as usize..=n as usize {
        if incumbent.len() >= upper {
            break;
        }
        let anchor = dg
            .index_of(&canonical_offset(q, n as usize, w)?)
            .expect("full space contains every word");
        let mut cand = VertexSet::from_indices(g.len(), (0..g.len()).filter(|&v| weights[v] >= w));
        cand.difference_with(&g.closed_neighborhood(0));
        cand.difference_with(&g.closed_neighborhood(anchor));
        let mut search = MaxSearch::new(g, budget, incumbent, upper, nodes);
        search.run(&[0, anchor], cand)?;
        nodes = search.nodes;
        incumbent = search.best;
    }
    incumbent.sort_unstable();
    Ok(MaxIndependentSet {
        size: incumbent.len(),
        witness: incumbent,
        node_visits: nodes,
    })
}

/// `i(G_{q,n,t})` and `A_q(n, 2t+1)` on all of `[q]^n`.
pub fn census(params: &CodeParams, budget: &Budget) -> Result<CensusResult> {
    let start = Instant::now();
    let dg = DistanceGraph::full(*params, budget.enumeration)?;
    let count = count_codes(params, CounterKind::Branching, budget)?;
    let best = max_code_size(params, budget)?;
    let h = hamming_bound(params.q, params.n, params.t)?;
    let witness = best
        .witness
        .iter()
        .map(|&v| dg.vertices()[v].rank_u64().expect("enumerable space"))
        .collect();
    Ok(CensusResult {
        params: *params,
        vertex_count: nat(dg.len() as u64),
        log2_count_over_hamming: log2_nat(&count) / rat_to_f64(&h),
        independent_set_count: count,
        max_independent_size: nat(best.size as u64),
        witness,
        wall_time: start.elapsed(),
        node_visits: best.node_visits,
    })
}
