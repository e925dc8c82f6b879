//! Multigraphs, edge multisets and the graph algorithms everything else builds on.

mod blocks;
mod brute;
mod contract;
mod matching;
mod paths;
mod tjoin;
mod tour;

pub use blocks::{block_decompose, cut_vertices, Block, BlockTree};
pub use brute::{brute_force_opt, DEFAULT_ENUM_LIMIT};
pub use contract::{contract, Contraction};
pub use matching::{matching_cost, min_weight_perfect_matching, min_weight_perfect_matching_exhaustive};
pub use paths::{distance_matrix, shortest_distances, shortest_path, ShortestPaths};
pub use tjoin::{constrained_simple_t_join, min_signed_simple_t_join, min_t_join};
pub use tour::{is_t_tour, TourCheck, TourViolation};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub w: u64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn has(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// Undirected multigraph on vertices `0..n` with dense edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = MultiGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v, 1)?;
        }
        Ok(g)
    }

    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut g = MultiGraph::new(n);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: u64) -> Result<usize> {
        if u >= self.n || v >= self.n {
            return Err(Error::Argument(format!(
                "edge {{{u},{v}}} has an endpoint outside 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Argument(format!("self-loop at vertex {u}")));
        }
        let id = self.edges.len();
        self.edges.push(Edge { id, u, v, w });
        self.adj[u].push((id, v));
        self.adj[v].push((id, u));
        Ok(id)
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.adj.push(Vec::new());
        self.n - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Incident `(edge id, neighbour)` pairs in edge-id order.
    pub fn adj(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_unit(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Lowest-id edge joining `u` and `v`.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u]
            .iter()
            .filter(|&&(_, x)| x == v)
            .map(|&(e, _)| e)
            .min()
    }

    /// Connected components of the subgraph formed by the edges accepted by `keep`,
    /// as a component label per vertex and the number of components.
    pub fn components_with(&self, keep: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for r in 0..self.n {
            if comp[r] != usize::MAX {
                continue;
            }
            comp[r] = count;
            stack.push(r);
            while let Some(x) = stack.pop() {
                for &(e, y) in &self.adj[x] {
                    if comp[y] == usize::MAX && keep(e) {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components_with(|_| true).1 == 1
    }

    /// Subgraph induced by `vertices`; returns it with the vertex map (new -> old)
    /// and the edge map (new id -> old id).
    pub fn induced(&self, vertices: &[usize]) -> (MultiGraph, Vec<usize>, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut h = MultiGraph::new(vertices.len());
        let mut emap = Vec::new();
        for e in &self.edges {
            if index[e.u] != usize::MAX && index[e.v] != usize::MAX {
                h.add_edge(index[e.u], index[e.v], e.w).expect("valid induced edge");
                emap.push(e.id);
            }
        }
        (h, vertices.to_vec(), emap)
    }
}

/// Edge multiset with multiplicities in {1, 2}.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeMultiset {
    mult: BTreeMap<usize, u8>,
}

impl EdgeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = usize>) -> Self {
        let mut j = Self::new();
        for e in edges {
            j.add(e, 1);
        }
        j
    }

    /// Adds `k` copies of `e`; multiplicities above two drop by two, which
    /// preserves both degree parities and the support.
    pub fn add(&mut self, e: usize, k: u32) {
        let mut c = self.get(e) as u32 + k;
        while c > 2 {
            c -= 2;
        }
        if c == 0 {
            self.mult.remove(&e);
        } else {
            self.mult.insert(e, c as u8);
        }
    }

    pub fn set(&mut self, e: usize, k: u8) {
        assert!(k <= 2, "multiplicity {k} out of range");
        if k == 0 {
            self.mult.remove(&e);
        } else {
            self.mult.insert(e, k);
        }
    }

    /// Removes one copy of `e`; returns false if `e` was absent.
    pub fn remove_one(&mut self, e: usize) -> bool {
        match self.get(e) {
            0 => false,
            1 => {
                self.mult.remove(&e);
                true
            }
            _ => {
                self.mult.insert(e, 1);
                true
            }
        }
    }

    pub fn get(&self, e: usize) -> u8 {
        self.mult.get(&e).copied().unwrap_or(0)
    }

    pub fn contains(&self, e: usize) -> bool {
        self.mult.contains_key(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.mult.iter().map(|(&e, &k)| (e, k))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.mult.keys().copied()
    }

    pub fn doubled(&self) -> impl Iterator<Item = usize> + '_ {
        self.mult.iter().filter(|(_, &k)| k == 2).map(|(&e, _)| e)
    }

    pub fn size(&self) -> usize {
        self.mult.values().map(|&k| k as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn weight(&self, g: &MultiGraph) -> u64 {
        self.iter().map(|(e, k)| g.edge(e).w * k as u64).sum()
    }

    /// Vertices of odd degree in `g`.
    pub fn odd_vertices(&self, g: &MultiGraph) -> VertexSet {
        let mut odd = VertexSet::new();
        for (e, k) in self.iter() {
            if k % 2 == 1 {
                let ed = g.edge(e);
                toggle(&mut odd, ed.u);
                toggle(&mut odd, ed.v);
            }
        }
        odd
    }

    /// Multiset sum; multiplicities are reduced as in [`EdgeMultiset::add`].
    pub fn union(&mut self, other: &EdgeMultiset) {
        for (e, k) in other.iter() {
            self.add(e, k as u32);
        }
    }

    /// Renames edge ids through `map`.
    pub fn mapped(&self, map: &[usize]) -> EdgeMultiset {
        let mut j = EdgeMultiset::new();
        for (e, k) in self.iter() {
            j.add(map[e], k as u32);
        }
        j
    }
}

impl FromIterator<(usize, u8)> for EdgeMultiset {
    fn from_iter<I: IntoIterator<Item = (usize, u8)>>(iter: I) -> Self {
        let mut j = EdgeMultiset::new();
        for (e, k) in iter {
            j.add(e, k as u32);
        }
        j
    }
}

pub fn toggle(set: &mut VertexSet, v: usize) {
    if !set.remove(&v) {
        set.insert(v);
    }
}

pub fn sym_diff(a: &VertexSet, b: &VertexSet) -> VertexSet {
    a.symmetric_difference(b).copied().collect()
}

/// `{s} △ {t}`.
pub fn st_terminals(s: usize, t: usize) -> VertexSet {
    let mut set = VertexSet::new();
    toggle(&mut set, s);
    toggle(&mut set, t);
    set
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub graph: MultiGraph,
    pub terminals: VertexSet,
    pub s: usize,
    pub t: usize,
}

impl ProblemInstance {
    pub fn new(graph: MultiGraph, s: usize, t: usize) -> Result<Self> {
        if s >= graph.n() || t >= graph.n() {
            return Err(Error::Argument(format!(
                "terminals s={s}, t={t} outside 0..{}",
                graph.n()
            )));
        }
        Ok(ProblemInstance {
            terminals: st_terminals(s, t),
            graph,
            s,
            t,
        })
    }

    /// Instance with an arbitrary even terminal set; `s` and `t` are only labels here.
    pub fn with_terminals(graph: MultiGraph, terminals: VertexSet) -> Result<Self> {
        if terminals.len() % 2 == 1 {
            return Err(Error::OddTerminals(terminals.len()));
        }
        if let Some(&v) = terminals.iter().find(|&&v| v >= graph.n()) {
            return Err(Error::Argument(format!("terminal {v} outside the graph")));
        }
        let mut it = terminals.iter().copied();
        let s = it.next().unwrap_or(0);
        let t = it.next().unwrap_or(s);
        Ok(ProblemInstance {
            graph,
            terminals,
            s,
            t,
        })
    }
}
