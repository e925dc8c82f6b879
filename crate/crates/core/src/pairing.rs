//! Removable pairings on a well-oriented ear-decomposition and the
//! resulting `s`-`t`-tour for decompositions with few non-entered ears.

use crate::ear::WellOrientedEarDecomposition;
use crate::error::{Error, Result};
use crate::graph::{constrained_simple_t_join, is_t_tour, shortest_path, st_terminals, EdgeMultiset, MultiGraph, VertexSet};
use crate::induction::entry_vertex;
use crate::Rational;
use serde::Serialize;
use std::collections::BTreeSet;

/// A removable pair: two edges of an entered ear meeting at an entry vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovablePair {
    pub ear: usize,
    pub vertex: usize,
    /// The edge on the side of the ear's first vertex, then the other one.
    pub edges: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovablePairing {
    /// Edges of the nontrivial ears.
    pub e_prime: Vec<usize>,
    /// All removable edges, sorted.
    pub removable: Vec<usize>,
    pub pairs: Vec<RemovablePair>,
    /// `(ear, edge)` for every non-entered ear.
    pub singles: Vec<(usize, usize)>,
    pub pi: usize,
}

impl RemovablePairing {
    pub fn is_removable(&self, e: usize) -> bool {
        self.removable.binary_search(&e).is_ok()
    }
}

/// One removable edge (the lowest id) per non-entered ear, and for every
/// entered ear the two ear edges at its lowest-id entry vertex.
pub fn build_pairing(w: &WellOrientedEarDecomposition) -> Result<RemovablePairing> {
    let ed = &w.ed;
    let n = ed.graph.n();
    let mut pairs = Vec::new();
    let mut singles = Vec::new();
    for (i, ear) in ed.ears.iter().enumerate() {
        if w.entering[i].is_empty() {
            let e = *ear.edges.iter().min().expect("ears are nonempty");
            singles.push((i, e));
            continue;
        }
        let v = w
            .entering[i]
            .iter()
            .map(|&q| entry_vertex(w, q))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .expect("entered");
        let k = ear
            .internal()
            .iter()
            .position(|&x| x == v)
            .ok_or_else(|| Error::Structure(format!("ear {} is entered at {v}, not an internal vertex", i + 1)))?
            + 1;
        pairs.push(RemovablePair {
            ear: i,
            vertex: v,
            edges: (ear.edges[k - 1], ear.edges[k]),
        });
    }
    let mut e_prime: Vec<usize> = ed.ears.iter().flat_map(|e| e.edges.iter().copied()).collect();
    e_prime.sort_unstable();
    let mut removable: Vec<usize> = singles
        .iter()
        .map(|&(_, e)| e)
        .chain(pairs.iter().flat_map(|p| [p.edges.0, p.edges.1]))
        .collect();
    removable.sort_unstable();
    let pi = singles.len();
    let expected = 2 * (e_prime.len() as i64 - (n as i64 - 1)) - pi as i64;
    if removable.len() as i64 != expected {
        return Err(Error::Internal(format!("|R| = {} but the identity gives {expected}", removable.len())));
    }
    if pi != w.pi {
        return Err(Error::Internal(format!("{pi} non-entered ears, decomposition records {}", w.pi)));
    }
    Ok(RemovablePairing {
        e_prime,
        removable,
        pairs,
        singles,
        pi,
    })
}

/// `G''`: the nontrivial ears with one new degree-3 vertex per removable
/// pair, weights in `{-1, 0, 1}`, and an `s`-`t` edge of weight `dist(s, t)`.
#[derive(Debug, Clone)]
pub struct AuxiliaryGraph {
    pub graph: MultiGraph,
    pub cost: Vec<i64>,
    /// Original edge behind each edge of `G''`; `None` for the zero-weight
    /// edges and for `d`.
    pub original: Vec<Option<usize>>,
    pub new_vertices: Vec<usize>,
    pub d: Option<usize>,
    pub dist: u64,
    /// Odd-degree vertices of `G''`.
    pub terminals: VertexSet,
}

fn is_bridge(n: usize, edges: &[(usize, usize)], skip: usize) -> bool {
    let mut g = MultiGraph::new(n);
    for (k, &(u, v)) in edges.iter().enumerate() {
        if k != skip {
            g.add_edge(u, v, 1).expect("endpoints exist");
        }
    }
    let (comp, _) = g.components_with(|_| true);
    let (u, v) = edges[skip];
    comp[u] != comp[v]
}

pub fn build_auxiliary(
    w: &WellOrientedEarDecomposition,
    pairing: &RemovablePairing,
    s: usize,
    t: usize,
) -> Result<AuxiliaryGraph> {
    let g = &*w.ed.graph;
    let mut n = g.n();
    if s >= n || t >= n {
        return Err(Error::Argument(format!("terminals {s}, {t} out of range")));
    }
    let mut ends: Vec<(usize, usize)> = Vec::new();
    let mut cost = Vec::new();
    let mut original = Vec::new();
    let mut slot = vec![usize::MAX; g.m()];
    for &e in &pairing.e_prime {
        let ed = g.edge(e);
        slot[e] = ends.len();
        ends.push((ed.u, ed.v));
        cost.push(if pairing.is_removable(e) { -1 } else { 1 });
        original.push(Some(e));
    }
    let mut new_vertices = Vec::new();
    let mut pairs: Vec<&RemovablePair> = pairing.pairs.iter().collect();
    pairs.sort_by_key(|p| std::cmp::Reverse(p.ear));
    for p in pairs {
        let v = p.vertex;
        let vp = n;
        n += 1;
        new_vertices.push(vp);
        for e in [p.edges.0, p.edges.1] {
            let k = slot[e];
            let (a, b) = ends[k];
            ends[k] = if a == v { (vp, b) } else { (a, vp) };
        }
        ends.push((v, vp));
        cost.push(0);
        original.push(None);
        if is_bridge(n, &ends, ends.len() - 1) {
            return Err(Error::Internal(format!("new edge at {v} for ear {} is a bridge", p.ear + 1)));
        }
    }
    let dist = if s == t {
        0
    } else {
        shortest_path(g, s, t).ok_or(Error::Unreachable(t))?.len() as u64
    };
    let d = (s != t).then(|| {
        ends.push((s, t));
        cost.push(dist as i64);
        original.push(None);
        ends.len() - 1
    });
    let mut graph = MultiGraph::new(n);
    for &(u, v) in &ends {
        graph.add_edge(u, v, 1)?;
    }
    let terminals: VertexSet = (0..n).filter(|&v| graph.degree(v) % 2 == 1).collect();
    Ok(AuxiliaryGraph {
        graph,
        cost,
        original,
        new_vertices,
        d,
        dist,
        terminals,
    })
}

#[derive(Debug, Clone)]
pub struct FewPendant {
    pub tour: EdgeMultiset,
    pub pairing: RemovablePairing,
    pub aux: AuxiliaryGraph,
    /// `J''` as edge ids of `G''`.
    pub j_aux: BTreeSet<usize>,
    /// `c(J'')`.
    pub cost: i64,
    /// `c(x)` for the all-`1/3` vector.
    pub cost_bound: Rational,
    pub shortcut: Vec<usize>,
    /// `(4/3)(n - 1) + (2/3)π + (1/3)dist(s, t)`.
    pub bound: Rational,
}

/// `s`-`t`-tour from a removable pairing: keep the nontrivial ears, drop the
/// removable edges of a cheap constrained join, double its other edges and
/// replace the `s`-`t` edge by a shortest path.
pub fn st_tour_few_pendant(w: &WellOrientedEarDecomposition, s: usize, t: usize) -> Result<FewPendant> {
    let g = &*w.ed.graph;
    if !g.is_unit() {
        return Err(Error::Argument("the removable-pairing tour needs unit weights".into()));
    }
    let pairing = build_pairing(w)?;
    let aux = build_auxiliary(w, &pairing, s, t)?;
    let forced: VertexSet = aux.new_vertices.iter().copied().collect();
    let m2 = aux.graph.m() as i64;
    let zero = aux.new_vertices.len() as i64;
    let ep = pairing.e_prime.len() as i64;
    let r = pairing.removable.len() as i64;
    let cost_bound = Rational::new(ep - 2 * r + aux.dist as i64, 3);
    debug_assert_eq!(m2, ep + zero + i64::from(aux.d.is_some()));
    let (j_aux, cost) = constrained_simple_t_join(&aux.graph, &aux.cost, &aux.terminals, &forced, None)?;
    if Rational::from_integer(cost) > cost_bound {
        return Err(Error::Internal(format!("c(J'') = {cost} exceeds c(x) = {cost_bound}")));
    }
    let j: BTreeSet<usize> = j_aux.iter().filter_map(|&k| aux.original[k]).collect();
    for p in &pairing.pairs {
        if j.contains(&p.edges.0) && j.contains(&p.edges.1) {
            return Err(Error::Internal(format!("J holds both edges of the pair at {}", p.vertex)));
        }
    }
    let mut tour = EdgeMultiset::from_edges(pairing.e_prime.iter().copied());
    for &e in &j {
        if pairing.is_removable(e) {
            tour.set(e, 0);
        } else {
            tour.set(e, 2);
        }
    }
    let uses_d = aux.d.is_some_and(|d| j_aux.contains(&d));
    let shortcut = if uses_d {
        shortest_path(g, s, t).ok_or(Error::Unreachable(t))?
    } else {
        Vec::new()
    };
    for &e in &shortcut {
        tour.add(e, 1);
    }
    let terminals = st_terminals(s, t);
    let check = is_t_tour(g, &tour, &terminals);
    if !check.is_valid() {
        return Err(Error::Internal(format!("removable-pairing tour: {:?}", check.violations)));
    }
    if tour.size() as i64 > ep + cost {
        return Err(Error::Internal(format!("tour has {} edges, more than |E'| + c(J'')", tour.size())));
    }
    let n = g.n() as i64;
    let bound = Rational::new(4 * (n - 1) + 2 * pairing.pi as i64 + aux.dist as i64, 3);
    if Rational::from_integer(tour.size() as i64) > bound {
        return Err(Error::Internal(format!("tour has {} edges, over {bound}", tour.size())));
    }
    Ok(FewPendant {
        tour,
        pairing,
        aux,
        j_aux,
        cost,
        cost_bound,
        shortcut,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ear::{orient_clean_forest, Ear, EarDecomposition};
    use std::sync::Arc;

    fn circuit(n: usize) -> WellOrientedEarDecomposition {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = Arc::new(MultiGraph::from_edges(n, &edges).unwrap());
        let mut vs: Vec<usize> = (0..n).collect();
        vs.push(0);
        let ear = Ear::new(vs, (0..n).collect());
        let ed = EarDecomposition::in_order(g, vec![ear]).unwrap();
        orient_clean_forest(&ed, &[]).unwrap()
    }

    #[test]
    fn circuit_has_one_removable_edge() {
        let w = circuit(8);
        let p = build_pairing(&w).unwrap();
        assert_eq!(p.removable, vec![0]);
        assert!(p.pairs.is_empty());
        let aux = build_auxiliary(&w, &p, 0, 4).unwrap();
        assert_eq!(aux.dist, 4);
        assert_eq!(aux.graph.m(), 9);
        let few = st_tour_few_pendant(&w, 0, 4).unwrap();
        assert!(few.tour.size() <= 11);
    }

    #[test]
    fn same_terminals_have_no_d() {
        let w = circuit(6);
        let p = build_pairing(&w).unwrap();
        let aux = build_auxiliary(&w, &p, 2, 2).unwrap();
        assert!(aux.d.is_none());
        assert_eq!(st_tour_few_pendant(&w, 2, 2).unwrap().tour.size(), 6);
    }
}
