//! Ear induction: the circuit lemmas, the two inductions over a well-oriented
//! ear-decomposition (clean ears used for connectivity or for parity), the
//! simple induction, and the assembly for decompositions with many
//! non-entered ears.

mod assemble;
mod circuit;
mod connectivity;
mod parity;

pub use assemble::{
    best_t_tour, simple_induction, simple_induction_range, st_tour_many_pendant, st_tour_many_pendant_from,
    EarCertificate, InductionBounds, InductionResult, ManyPendant, Mode, SimpleRun,
};
pub use circuit::{
    circuit_tjoin, circuit_tjoin_with_parity_twin, enhanced_circuit_tjoin, odd_positions, size, spans, Circuit,
    EnhancedOutcome,
};
pub use connectivity::{classify_pair, induct_connectivity, ConnectivityRun};
pub use parity::{induct_parity, ParityCase, ParityRun};

use crate::ear::WellOrientedEarDecomposition;
use crate::error::{Error, Result};
use crate::graph::{EdgeMultiset, MultiGraph, VertexSet};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairClass {
    Good,
    Bad,
    Special,
    /// A short ear that is not oriented; handled by the plain circuit lemma.
    Short,
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
    parts: usize,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
            parts: n,
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.parts -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.parts
    }
}

/// Vertex entered by the oriented ear `q`: the head of its only edge whose
/// head is not internal to `q`.
pub fn entry_vertex(w: &WellOrientedEarDecomposition, q: usize) -> Result<usize> {
    let ear = &w.ed.ears[q];
    ear.edges
        .iter()
        .filter_map(|&e| w.direction[e])
        .map(|(_, head)| head)
        .find(|h| !ear.internal().contains(h))
        .ok_or_else(|| Error::Structure(format!("ear {} is not oriented", q + 1)))
}

/// The primary part of a well-oriented decomposition as seen by the inductions.
pub(crate) struct Frame<'a> {
    pub w: &'a WellOrientedEarDecomposition,
    pub g: &'a MultiGraph,
    /// Non-oriented primary ears in order.
    pub ears: Vec<usize>,
    /// Oriented (clean) primary ears.
    pub clean: Vec<usize>,
    /// 0 for the root, `i + 1` for internal vertices of ear `i`.
    pub rank: Vec<usize>,
    pub in_primary: Vec<bool>,
    pub n: usize,
    pub entry: Vec<usize>,
    /// Oriented edge entering each vertex.
    pub parent: Vec<Option<usize>>,
    /// Every short primary ear is oriented.
    pub standing: bool,
}

impl<'a> Frame<'a> {
    pub(crate) fn new(w: &'a WellOrientedEarDecomposition, t: &VertexSet) -> Result<Frame<'a>> {
        let g = &*w.ed.graph;
        let p = w.primary.min(w.ed.ears.len());
        let n_all = g.n();
        let mut rank = vec![usize::MAX; n_all];
        let mut in_primary = vec![false; n_all];
        rank[w.ed.root] = 0;
        in_primary[w.ed.root] = true;
        let mut ears = Vec::new();
        let mut clean = Vec::new();
        for (i, ear) in w.ed.ears.iter().enumerate() {
            if i >= p {
                if w.oriented[i] {
                    return Err(Error::Structure(format!("secondary ear {} is oriented", i + 1)));
                }
                continue;
            }
            for &v in &ear.vertices {
                in_primary[v] = true;
            }
            for &v in ear.internal() {
                rank[v] = i + 1;
            }
            if w.oriented[i] {
                if ear.len() > 3 || ear.internal().iter().any(|v| t.contains(v)) {
                    return Err(Error::Structure(format!("oriented ear {} is not clean", i + 1)));
                }
                clean.push(i);
            } else {
                ears.push(i);
            }
        }
        if t.len() % 2 == 1 {
            return Err(Error::OddTerminals(t.len()));
        }
        if let Some(&v) = t.iter().find(|&&v| v >= n_all || !in_primary[v]) {
            return Err(Error::Argument(format!("terminal {v} is not a vertex of the primary ears")));
        }
        let mut entry = vec![usize::MAX; w.ed.ears.len()];
        for &q in &clean {
            entry[q] = entry_vertex(w, q)?;
        }
        let mut parent = vec![None; n_all];
        for (e, d) in w.direction.iter().enumerate() {
            if let Some((_, head)) = d {
                parent[*head] = Some(e);
            }
        }
        let standing = ears.iter().all(|&i| w.ed.ears[i].len() >= 4);
        Ok(Frame {
            w,
            g,
            ears,
            clean,
            rank,
            n: in_primary.iter().filter(|&&b| b).count(),
            in_primary,
            entry,
            parent,
            standing,
        })
    }

    /// Edges of the oriented path from `root_of[v]` to `v`, starting at the root.
    pub(crate) fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(e) = self.parent[cur] {
            path.push(e);
            cur = self.w.direction[e].expect("oriented").0;
        }
        path.reverse();
        path
    }

    pub(crate) fn e_gamma(&self) -> EdgeMultiset {
        EdgeMultiset::from_edges(self.clean.iter().flat_map(|&q| self.w.ed.ears[q].edges.iter().copied()))
    }

    pub(crate) fn k(&self, len: usize) -> usize {
        self.clean.iter().filter(|&&q| self.w.ed.ears[q].len() == len).count()
    }

    /// `T`-tour check restricted to the primary vertices.
    pub(crate) fn check_tour(&self, j: &EdgeMultiset, t: &VertexSet, what: &str) -> Result<()> {
        check_tour_on(self.g, j, t, &self.in_primary).map_err(|e| Error::Internal(format!("{what}: {e}")))
    }
}

/// Checks that `j` is a `T`-tour of the subgraph spanned by the marked vertices.
pub(crate) fn check_tour_on(g: &MultiGraph, j: &EdgeMultiset, t: &VertexSet, mask: &[bool]) -> std::result::Result<(), String> {
    let mut d = Dsu::new(g.n());
    for (e, k) in j.iter() {
        if k > 2 {
            return Err(format!("edge {e} used {k} times"));
        }
        let ed = g.edge(e);
        if !mask[ed.u] || !mask[ed.v] {
            return Err(format!("edge {e} leaves the vertex set"));
        }
        d.union(ed.u, ed.v);
    }
    let odd = j.odd_vertices(g);
    if &odd != t {
        return Err(format!("odd vertices {odd:?} differ from T = {t:?}"));
    }
    let mut roots: Vec<usize> = (0..g.n()).filter(|&v| mask[v]).map(|v| d.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() > 1 {
        return Err(format!("support has {} components", roots.len()));
    }
    Ok(())
}
