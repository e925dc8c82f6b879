//! Ear-decompositions: construction, normalization, classification and orientation.

mod build;
mod normalize;
mod orient;
mod verify;

pub use build::{check_two_connected, exact_min_even_ears, heuristic_open_ears, open_min_even_ears, EarBackend, EXACT_LIMIT};
pub use normalize::{normalize, normalize_traced, NormalizeTrace, Potential};
pub use orient::{orient_clean_forest, WellOrientedEarDecomposition};
pub use verify::{verify_nice, NiceReport, PropertyCheck};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use serde::Serialize;
use std::fmt::Write as _;
use std::sync::Arc;

pub const NO_EAR: usize = usize::MAX;

/// A path or circuit given by its vertex sequence and the edges between them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Ear {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Ear {
    pub fn new(vertices: Vec<usize>, edges: Vec<usize>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        Ear { vertices, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn internal(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn has_closed_shape(&self) -> bool {
        self.vertices[0] == *self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> Ear {
        let mut v = self.vertices.clone();
        let mut e = self.edges.clone();
        v.reverse();
        e.reverse();
        Ear::new(v, e)
    }

    /// Middle internal vertex of an even ear.
    pub fn middle(&self) -> Option<usize> {
        (self.len() % 2 == 0).then(|| self.vertices[self.len() / 2])
    }

    pub fn is_endpoint(&self, v: usize) -> bool {
        let (a, b) = self.ends();
        a == v || b == v
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn join(&self, other: &Ear) -> Ear {
        assert_eq!(self.vertices.last(), other.vertices.first());
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        let mut e = self.edges.clone();
        e.extend_from_slice(&other.edges);
        Ear::new(v, e)
    }

    /// Orients the ear so that it starts at `v`.
    pub fn starting_at(&self, v: usize) -> Ear {
        if self.vertices[0] == v {
            self.clone()
        } else {
            self.reversed()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FourEarKind {
    Pendant,
    Blocked,
    Vertical,
    Horizontal,
    Other,
}

/// Ordered ears `P_1, ..., P_l` grown from the single vertex `root`; every other
/// vertex is internal to exactly one ear, and all remaining edges are trivial ears.
#[derive(Debug, Clone)]
pub struct EarDecomposition {
    pub graph: Arc<MultiGraph>,
    pub root: usize,
    pub ears: Vec<Ear>,
    pub trivial: Vec<usize>,
}

impl PartialEq for EarDecomposition {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.ears == other.ears && self.trivial == other.trivial
    }
}

impl Eq for EarDecomposition {}

/// Derived incidence data for a decomposition.
#[derive(Debug, Clone)]
pub struct Layout {
    /// Ear owning each vertex as an internal vertex (`NO_EAR` for the root).
    pub ear_of: Vec<usize>,
    /// Nontrivial ears having each vertex as an endpoint.
    pub endpoint_of: Vec<Vec<usize>>,
    pub pendant_ear: Vec<bool>,
    pub four_kind: Vec<Option<FourEarKind>>,
    pub outer: Vec<bool>,
    pub trivial_edge: Vec<bool>,
}

impl Layout {
    pub fn is_pendant_vertex(&self, v: usize) -> bool {
        self.endpoint_of[v].is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EarStats {
    pub k2: usize,
    pub k3: usize,
    pub k4: usize,
    pub k_ge5: usize,
    pub even: usize,
    pub trivial: usize,
    pub nontrivial: usize,
}

impl EarDecomposition {
    /// Orders the given ears into a valid decomposition: the first ear is a circuit
    /// through the root, every ear follows the ears owning its endpoints, and the
    /// pendant ears come last by nonincreasing length. Returns `None` if the ears do
    /// not form an ear-decomposition of the graph.
    pub fn from_ears(graph: Arc<MultiGraph>, ears: Vec<Ear>) -> Option<EarDecomposition> {
        let (owner, edge_used, root) = check_cover(&graph, &ears)?;
        let n = graph.n();
        if ears.is_empty() {
            return (n == 1).then(|| EarDecomposition {
                trivial: (0..graph.m()).collect(),
                graph,
                root,
                ears,
            });
        }
        let first = ears.iter().position(|e| e.has_closed_shape() && e.vertices[0] == root)?;
        let mut endpoint_of = vec![Vec::new(); n];
        for (i, ear) in ears.iter().enumerate() {
            let (a, b) = ear.ends();
            endpoint_of[a].push(i);
            if b != a {
                endpoint_of[b].push(i);
            }
        }
        let pendant: Vec<bool> = ears
            .iter()
            .map(|e| e.internal().iter().all(|&v| endpoint_of[v].is_empty()))
            .collect();
        let deps = |i: usize| -> Vec<usize> {
            let (a, b) = ears[i].ends();
            [a, b].into_iter().filter(|&v| owner[v] != NO_EAR).map(|v| owner[v]).collect()
        };
        let mut placed = vec![false; ears.len()];
        let mut order = vec![first];
        placed[first] = true;
        let inner: Vec<usize> = (0..ears.len()).filter(|&i| i != first && !pendant[i]).collect();
        let mut progress = true;
        while progress {
            progress = false;
            for &i in &inner {
                if !placed[i] && deps(i).iter().all(|&d| placed[d]) {
                    placed[i] = true;
                    order.push(i);
                    progress = true;
                    break;
                }
            }
        }
        if inner.iter().any(|&i| !placed[i]) {
            return None;
        }
        let mut tail: Vec<usize> = (0..ears.len()).filter(|&i| !placed[i]).collect();
        if tail.iter().any(|&i| deps(i).iter().any(|&d| !placed[d])) {
            return None;
        }
        tail.sort_by_key(|&i| std::cmp::Reverse(ears[i].len()));
        order.extend(tail);
        let ordered: Vec<Ear> = order.into_iter().map(|i| ears[i].clone()).collect();
        let trivial = (0..graph.m()).filter(|&e| !edge_used[e]).collect();
        Some(EarDecomposition {
            graph,
            root,
            ears: ordered,
            trivial,
        })
    }

    /// Accepts the ears in exactly the given order, or `None` if that order is
    /// not an ear-decomposition.
    pub fn in_order(graph: Arc<MultiGraph>, ears: Vec<Ear>) -> Option<EarDecomposition> {
        let (owner, edge_used, root) = check_cover(&graph, &ears)?;
        if let Some(first) = ears.first() {
            if !(first.has_closed_shape() && first.vertices[0] == root) {
                return None;
            }
        } else if graph.n() != 1 {
            return None;
        }
        for (i, ear) in ears.iter().enumerate() {
            let (a, b) = ear.ends();
            if [a, b].iter().any(|&v| owner[v] != NO_EAR && owner[v] >= i) {
                return None;
            }
        }
        let trivial = (0..graph.m()).filter(|&e| !edge_used[e]).collect();
        Some(EarDecomposition {
            graph,
            root,
            ears,
            trivial,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn is_open_ear(&self, i: usize) -> bool {
        i == 0 || !self.ears[i].has_closed_shape()
    }

    pub fn is_open(&self) -> bool {
        (0..self.ears.len()).all(|i| self.is_open_ear(i))
    }

    pub fn stats(&self) -> EarStats {
        let mut s = EarStats {
            trivial: self.trivial.len(),
            nontrivial: self.ears.len(),
            ..Default::default()
        };
        for e in &self.ears {
            match e.len() {
                2 => s.k2 += 1,
                3 => s.k3 += 1,
                4 => s.k4 += 1,
                _ => s.k_ge5 += 1,
            }
            if e.len() % 2 == 0 {
                s.even += 1;
            }
        }
        s
    }

    pub fn even_ears(&self) -> usize {
        self.ears.iter().filter(|e| e.len() % 2 == 0).count()
    }

    pub fn layout(&self) -> Layout {
        let g = &self.graph;
        let n = g.n();
        let mut ear_of = vec![NO_EAR; n];
        let mut endpoint_of = vec![Vec::new(); n];
        for (i, ear) in self.ears.iter().enumerate() {
            for &v in ear.internal() {
                ear_of[v] = i;
            }
            let (a, b) = ear.ends();
            endpoint_of[a].push(i);
            if b != a {
                endpoint_of[b].push(i);
            }
        }
        let pendant_ear: Vec<bool> = self
            .ears
            .iter()
            .map(|e| e.internal().iter().all(|&v| endpoint_of[v].is_empty()))
            .collect();
        let mut trivial_edge = vec![false; g.m()];
        for &e in &self.trivial {
            trivial_edge[e] = true;
        }
        let mut layout = Layout {
            ear_of,
            endpoint_of,
            pendant_ear,
            four_kind: vec![None; self.ears.len()],
            outer: vec![false; self.ears.len()],
            trivial_edge,
        };
        for i in 0..self.ears.len() {
            if self.ears[i].len() == 4 {
                layout.four_kind[i] = Some(self.kind_with(&layout, i));
            }
        }
        for i in 0..self.ears.len() {
            layout.outer[i] = match self.ears[i].len() {
                2 | 3 => true,
                4 => matches!(
                    layout.four_kind[i],
                    Some(FourEarKind::Pendant | FourEarKind::Vertical | FourEarKind::Horizontal)
                ),
                _ => false,
            };
        }
        layout
    }

    /// Nontrivial ears attached to ear `i`, as `(ear, vertex)` in ear order.
    pub fn attached(&self, layout: &Layout, i: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &v in self.ears[i].internal() {
            for &q in &layout.endpoint_of[v] {
                out.push((q, v));
            }
        }
        out.sort_unstable();
        out
    }

    fn kind_with(&self, layout: &Layout, i: usize) -> FourEarKind {
        let g = &self.graph;
        let p = &self.ears[i];
        let (v1, v2, v3) = (p.vertices[1], p.vertices[2], p.vertices[3]);
        let attached = self.attached(layout, i);
        if attached.iter().any(|&(q, _)| !self.is_open_ear(q)) {
            return FourEarKind::Blocked;
        }
        if attached.is_empty() {
            return FourEarKind::Pendant;
        }
        let adjacent = |a: usize, b: usize| g.find_edge(a, b).is_some();
        let vertical = layout.is_pendant_vertex(v1)
            && layout.is_pendant_vertex(v3)
            && !adjacent(v1, v3)
            && attached.iter().all(|&(q, v)| {
                let e = &self.ears[q];
                v == v2 && e.len() == 2 && {
                    let w = e.vertices[1];
                    !adjacent(w, v1) && !adjacent(w, v3)
                }
            });
        if vertical {
            return FourEarKind::Vertical;
        }
        let horizontal = g.degree(v2) == 2
            && attached.iter().all(|&(q, _)| {
                let e = &self.ears[q];
                let (a, b) = e.ends();
                e.len() == 2 && ((a == v1 && b == v3) || (a == v3 && b == v1)) && g.degree(e.vertices[1]) == 2
            });
        if horizontal {
            return FourEarKind::Horizontal;
        }
        FourEarKind::Other
    }

    /// Classification of a 4-ear.
    pub fn classify_4ear(&self, i: usize) -> Result<FourEarKind> {
        if self.ears.get(i).map(|e| e.len()) != Some(4) {
            return Err(Error::Argument(format!("ear {i} is not a 4-ear")));
        }
        Ok(self.kind_with(&self.layout(), i))
    }

    /// One line per ear: `ear <idx> <open|closed> <len> <v0 .. vk>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, ear) in self.ears.iter().enumerate() {
            let kind = if self.is_open_ear(i) { "open" } else { "closed" };
            let vs: Vec<String> = ear.vertices.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "ear {} {} {} {}", i + 1, kind, ear.len(), vs.join(" "));
        }
        out
    }

    /// Parses the dump format back, resolving edges by lowest unused id.
    pub fn parse_dump(graph: Arc<MultiGraph>, text: &str) -> Result<EarDecomposition> {
        let mut used = vec![false; graph.m()];
        let mut ears = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() < 4 || tok[0] != "ear" {
                return Err(err("expected `ear <idx> <open|closed> <len> <v0 .. vk>`"));
            }
            let len: usize = tok[3].parse().map_err(|_| err("bad length"))?;
            let vs: Vec<usize> = tok[4..]
                .iter()
                .map(|t| t.parse().map_err(|_| err("bad vertex id")))
                .collect::<Result<_>>()?;
            if vs.len() != len + 1 {
                return Err(err("vertex count does not match length"));
            }
            let mut es = Vec::new();
            for w in vs.windows(2) {
                let e = graph
                    .adj(w[0])
                    .iter()
                    .filter(|&&(e, x)| x == w[1] && !used[e])
                    .map(|&(e, _)| e)
                    .min()
                    .ok_or_else(|| err("no unused edge between consecutive vertices"))?;
                used[e] = true;
                es.push(e);
            }
            ears.push(Ear::new(vs, es));
        }
        EarDecomposition::from_ears(graph, ears)
            .ok_or_else(|| Error::Structure("ears do not form an ear-decomposition".into()))
    }
}

/// Checks that the ears are paths or circuits of the graph with disjoint edge sets
/// and that every vertex but one (the root) is internal to exactly one ear.
fn check_cover(graph: &MultiGraph, ears: &[Ear]) -> Option<(Vec<usize>, Vec<bool>, usize)> {
    let n = graph.n();
    let mut owner = vec![NO_EAR; n];
    let mut edge_used = vec![false; graph.m()];
    for (i, ear) in ears.iter().enumerate() {
        if ear.len() < 2 || ear.vertices.len() != ear.edges.len() + 1 {
            return None;
        }
        for (k, &e) in ear.edges.iter().enumerate() {
            if e >= graph.m() || edge_used[e] {
                return None;
            }
            edge_used[e] = true;
            let ed = graph.edge(e);
            let (a, b) = (ear.vertices[k], ear.vertices[k + 1]);
            if !((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)) {
                return None;
            }
        }
        for &v in ear.internal() {
            if owner[v] != NO_EAR {
                return None;
            }
            owner[v] = i;
        }
    }
    for (i, ear) in ears.iter().enumerate() {
        let (a, b) = ear.ends();
        if owner[a] == i || owner[b] == i {
            return None;
        }
    }
    let free: Vec<usize> = (0..n).filter(|&v| owner[v] == NO_EAR).collect();
    (free.len() == 1).then(|| (owner, edge_used, free[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(n: usize) -> Arc<MultiGraph> {
        let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Arc::new(MultiGraph::from_edges(n, &e).unwrap())
    }

    #[test]
    fn circuit_is_one_ear() {
        let g = circuit(5);
        let ear = Ear::new(vec![0, 1, 2, 3, 4, 0], vec![0, 1, 2, 3, 4]);
        let ed = EarDecomposition::from_ears(g.clone(), vec![ear]).unwrap();
        assert_eq!(ed.root, 0);
        assert!(ed.trivial.is_empty());
        assert_eq!(ed.dump(), "ear 1 open 5 0 1 2 3 4 0\n");
        let back = EarDecomposition::parse_dump(g, &ed.dump()).unwrap();
        assert_eq!(back, ed);
    }

    #[test]
    fn rejects_doubly_owned_vertex() {
        let g = circuit(4);
        let a = Ear::new(vec![0, 1, 2, 3, 0], vec![0, 1, 2, 3]);
        let b = Ear::new(vec![0, 1, 2], vec![0, 1]);
        assert!(EarDecomposition::from_ears(g, vec![a, b]).is_none());
    }
}
