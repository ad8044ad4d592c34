//! Bitset graphs and the Hamming distance graph `G_{q,n,t}[S]`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::space::{normalize_set, CodeParams, RankSpace, Word};
use crate::volumes::ball_volume;

/// Above this many vertices a [`DistanceGraph`] keeps no adjacency bitsets.
pub const EXPLICIT_ADJACENCY_LIMIT: usize = 1 << 16;

/// Fixed-capacity set of vertex indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    blocks: Box<[u64]>,
}

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            blocks: vec![0; capacity.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::empty(capacity);
        for (i, b) in s.blocks.iter_mut().enumerate() {
            let hi = ((i + 1) * 64).min(capacity);
            let width = hi - i * 64;
            *b = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        }
        s
    }

    pub fn from_indices(capacity: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(capacity);
        for v in items {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.blocks[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.blocks[v / 64] &= !(1 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.blocks
            .get(v / 64)
            .is_some_and(|b| b & (1 << (v % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(i, b)| i * 64 + b.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &b)| {
            let mut bits = b;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i * 64 + tz)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    #[inline]
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .any(|(a, b)| a & b != 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Simple undirected graph with one adjacency bitset per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    adj: Vec<VertexSet>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        BitGraph {
            adj: vec![VertexSet::empty(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.len();
        if u >= n || v >= n {
            return Err(Error::input(format!("edge ({u}, {v}) out of range for {n} vertices")));
        }
        if u == v {
            return Err(Error::input(format!("self-loop at vertex {u}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    #[inline]
    pub fn degree_within(&self, v: usize, alive: &VertexSet) -> usize {
        self.adj[v].intersection_len(alive)
    }

    pub fn max_degree_within(&self, alive: &VertexSet) -> usize {
        alive
            .iter()
            .map(|v| self.degree_within(v, alive))
            .max()
            .unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// `N[v] = N(v) ∪ {v}`.
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| !self.adj[v].intersects(set))
    }

    /// Connected components of the subgraph induced by `alive`, ordered by
    /// their smallest vertex.
    pub fn components(&self, alive: &VertexSet) -> Vec<VertexSet> {
        let mut rest = alive.clone();
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::empty(self.len());
            let mut frontier = VertexSet::empty(self.len());
            frontier.insert(start);
            while !frontier.is_empty() {
                comp.union_with(&frontier);
                rest.difference_with(&frontier);
                let mut next = VertexSet::empty(self.len());
                for v in frontier.iter() {
                    next.union_with(&self.adj[v]);
                }
                next.intersect_with(&rest);
                frontier = next;
            }
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `keep`, with vertices renumbered in increasing order.
    pub fn induced(&self, keep: &VertexSet) -> (BitGraph, Vec<usize>) {
        let map: Vec<usize> = keep.iter().collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in map.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = BitGraph::new(map.len());
        for (i, &v) in map.iter().enumerate() {
            for u in self.adj[v].iter() {
                if pos[u] != usize::MAX {
                    g.adj[i].insert(pos[u]);
                }
            }
        }
        (g, map)
    }
}

#[derive(Clone, Debug)]
enum Adjacency {
    Explicit(BitGraph),
    Implicit,
}

/// `G_{q,n,t}[S]`: vertices are the words of `S` in rank order, and two
/// vertices are adjacent iff `1 <= d(u, v) <= 2t`.
#[derive(Clone, Debug)]
pub struct DistanceGraph {
    params: CodeParams,
    vertices: Vec<Word>,
    adjacency: Adjacency,
    order: Vec<usize>,
}

impl DistanceGraph {
    pub fn new(params: CodeParams, set: &[Word]) -> Result<Self> {
        let vertices = normalize_set(set, &params)?;
        let adjacency = if vertices.len() <= EXPLICIT_ADJACENCY_LIMIT {
            Adjacency::Explicit(build_adjacency(&params, &vertices)?)
        } else {
            Adjacency::Implicit
        };
        let order = (0..vertices.len()).collect();
        Ok(DistanceGraph {
            params,
            vertices,
            adjacency,
            order,
        })
    }

    /// The graph on all of `[q]^n`.
    pub fn full(params: CodeParams, budget: u64) -> Result<Self> {
        let words = crate::space::all_words(&params, budget)?;
        Self::new(params, &words)
    }

    /// Replaces the default rank order used to break ties.
    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; self.vertices.len()];
        if order.len() != seen.len() {
            return Err(Error::input("vertex order must list every vertex once"));
        }
        for &v in &order {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::input("vertex order must list every vertex once"));
            }
        }
        self.order = order;
        Ok(self)
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.vertices.binary_search(w).ok()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        match &self.adjacency {
            Adjacency::Explicit(g) => g.adjacent(u, v),
            Adjacency::Implicit => {
                u != v
                    && self.vertices[u].distance_unchecked(&self.vertices[v])
                        <= 2 * self.params.t as usize
            }
        }
    }

    /// The explicit bitset graph, available up to [`EXPLICIT_ADJACENCY_LIMIT`] vertices.
    pub fn bit_graph(&self) -> Result<&BitGraph> {
        match &self.adjacency {
            Adjacency::Explicit(g) => Ok(g),
            Adjacency::Implicit => Err(Error::budget(
                "explicit adjacency",
                EXPLICIT_ADJACENCY_LIMIT as u64,
                self.vertices.len() as u64,
            )),
        }
    }

    pub fn max_degree(&self) -> usize {
        match &self.adjacency {
            Adjacency::Explicit(g) => g.max_degree_within(&g.all_vertices()),
            Adjacency::Implicit => (0..self.len())
                .map(|u| (0..self.len()).filter(|&v| self.adjacent(u, v)).count())
                .max()
                .unwrap_or(0),
        }
    }

    pub fn words_of(&self, set: &VertexSet) -> Vec<Word> {
        set.iter().map(|v| self.vertices[v].clone()).collect()
    }
}

fn build_adjacency(params: &CodeParams, vertices: &[Word]) -> Result<BitGraph> {
    let m = vertices.len();
    let reach = 2 * params.t as usize;
    let mut g = BitGraph::new(m);
    if reach == 0 || m < 2 {
        return Ok(g);
    }
    // Looking up each vertex's radius-2t ball beats the pair scan when the
    // ball is smaller than the set.
    let ball = ball_volume(params.q, params.n, reach.min(params.n as usize) as u32)?;
    let use_balls = params.space_size_u64().is_some() && ball < crate::numeric::nat(m as u64);
    if use_balls {
        let space = RankSpace::new(params)?;
        let index: HashMap<u64, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, w)| (w.rank_u64().expect("64-bit ranks"), i))
            .collect();
        for (i, w) in vertices.iter().enumerate() {
            let center = w.rank_u64().expect("64-bit ranks");
            space.for_each_in_ball(center, reach, &mut |r, d| {
                if d > 0 {
                    if let Some(&j) = index.get(&r) {
                        g.adj[i].insert(j);
                    }
                }
            });
        }
    } else {
        for i in 0..m {
            for j in i + 1..m {
                if vertices[i].distance_unchecked(&vertices[j]) <= reach {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                }
            }
        }
    }
    Ok(g)
}
