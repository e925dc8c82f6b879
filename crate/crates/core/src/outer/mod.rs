//! Outer-ear optimization: the path families over short and vertical 4-ears,
//! the re-design of outer ears from a maximum common independent set, and the
//! dual lower bound built from the intersection certificate.

mod dual;
mod optimize;

pub use dual::{dual_lower_bound, verify_dual, DualCheck, DualSolution, DualViolation};
pub use optimize::{is_clean, optimize_outer_ears, OuterOptimization, RaiseLbCheck};

use crate::ear::{EarDecomposition, FourEarKind};
use crate::error::{Error, Result};
use crate::matroid::{PathFamilies, PathFamily};
use serde::Serialize;
use std::collections::BTreeSet;

/// Where a member of `M` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilySource {
    /// Internal vertices of a short ear.
    ShortEar(usize),
    /// A non-middle internal vertex of a vertical 4-ear.
    Singleton { ear: usize, vertex: usize },
}

/// A horizontal 4-ear with the 2-ears attached to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorizontalBlock {
    pub ear: usize,
    pub middle: usize,
    /// Internal vertex sets of the attached 2-ears.
    pub two_ears: Vec<Vec<usize>>,
    /// Internal vertices of the 4-ear and of its 2-ears; the endpoints of the
    /// 4-ear stay outside so that edges between them and `V_in` keep load 1.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OuterOptimizationInstance {
    /// `V_in`, `M` with `U_f` and `P_f`, and the groups `M(a)`.
    pub paths: PathFamilies,
    pub source: Vec<FamilySource>,
    /// Middle vertices of vertical 4-ears.
    pub a: Vec<usize>,
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
    /// Internal vertices of horizontal 4-ears and of the 2-ears attached to them.
    pub v_hor: Vec<usize>,
    pub blocks: Vec<HorizontalBlock>,
    /// Whether the ears are treated as inner (their vertices form `V_in`).
    pub inner: Vec<bool>,
    /// Set when the first ear is outer and was counted as inner.
    pub promoted_first: bool,
}

impl OuterOptimizationInstance {
    pub fn m(&self) -> usize {
        self.paths.families.len()
    }

    pub fn in_v_in(&self, v: usize) -> bool {
        self.paths.v_in.binary_search(&v).is_ok()
    }

    /// Family index of `M(a)` members for the given `a`.
    pub fn group(&self, a: usize) -> Option<&[usize]> {
        self.paths.groups.iter().find(|(x, _)| *x == a).map(|(_, g)| g.as_slice())
    }
}

/// Computes `M`, `A`, `M(a)`, `V_in`, `P_f` and `U_f` for a decomposition
/// satisfying the structural properties checked by `verify_nice`.
///
/// The first ear always counts as inner; if it is an outer ear it is promoted
/// and `promoted_first` is set.
pub fn build_outer_instance(ed: &EarDecomposition) -> Result<OuterOptimizationInstance> {
    let g = &ed.graph;
    let n = g.n();
    let layout = ed.layout();
    let l = ed.ears.len();
    let mut inner: Vec<bool> = layout.outer.iter().map(|&o| !o).collect();
    let promoted_first = l > 0 && !inner[0];
    if l > 0 {
        inner[0] = true;
    }
    let mut in_v = vec![false; n];
    if l == 0 {
        in_v[ed.root] = true;
    }
    for (i, ear) in ed.ears.iter().enumerate() {
        if inner[i] {
            for &v in &ear.vertices {
                in_v[v] = true;
            }
        }
    }
    let v_in: Vec<usize> = (0..n).filter(|&v| in_v[v]).collect();
    let kind = |i: usize| if inner[i] { None } else { layout.four_kind[i] };
    let vertical: Vec<usize> = (0..l).filter(|&i| kind(i) == Some(FourEarKind::Vertical)).collect();
    let horizontal: Vec<usize> = (0..l).filter(|&i| kind(i) == Some(FourEarKind::Horizontal)).collect();
    let mut hor_internal = vec![false; n];
    for &i in &horizontal {
        for &v in ed.ears[i].internal() {
            hor_internal[v] = true;
        }
    }
    let mut v_hor: BTreeSet<usize> = BTreeSet::new();
    let mut on_horizontal = vec![false; l];
    for (q, ear) in ed.ears.iter().enumerate() {
        let (x, y) = ear.ends();
        if ear.len() <= 3 && !inner[q] && (hor_internal[x] || hor_internal[y]) {
            on_horizontal[q] = true;
            v_hor.extend(ear.internal().iter().copied());
        }
    }
    let mut blocks = Vec::new();
    for &i in &horizontal {
        let p = &ed.ears[i];
        v_hor.extend(p.internal().iter().copied());
        let mut vertices: BTreeSet<usize> = p.internal().iter().copied().collect();
        let mut two_ears = Vec::new();
        for &(q, _) in &ed.attached(&layout, i) {
            if !two_ears.contains(&ed.ears[q].internal().to_vec()) {
                two_ears.push(ed.ears[q].internal().to_vec());
            }
            vertices.extend(ed.ears[q].internal().iter().copied());
        }
        blocks.push(HorizontalBlock {
            ear: i,
            middle: p.vertices[2],
            two_ears,
            vertices: vertices.into_iter().collect(),
        });
    }

    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut source = Vec::new();
    for (i, ear) in ed.ears.iter().enumerate() {
        if inner[i] {
            continue;
        }
        if ear.len() <= 3 && !on_horizontal[i] {
            let mut f = ear.internal().to_vec();
            f.sort_unstable();
            sets.push(f);
            source.push(FamilySource::ShortEar(i));
        }
        if kind(i) == Some(FourEarKind::Vertical) {
            for v in [ear.vertices[1], ear.vertices[3]] {
                sets.push(vec![v]);
                source.push(FamilySource::Singleton { ear: i, vertex: v });
            }
        }
    }

    let a: Vec<usize> = vertical.iter().map(|&i| ed.ears[i].vertices[2]).collect();
    let mut seen = vec![false; n];
    for v in a.iter().chain(&v_in).chain(sets.iter().flatten()) {
        if seen[*v] {
            return Err(Error::Structure(format!(
                "vertex {v} lies in more than one of A, V_in and the members of M"
            )));
        }
        seen[*v] = true;
    }

    let mut next_id = 0usize;
    let mut families = Vec::with_capacity(sets.len());
    for f in &sets {
        let mut nb: BTreeSet<usize> = BTreeSet::new();
        for &x in f {
            nb.extend(g.adj(x).iter().map(|&(_, w)| w).filter(|&w| in_v[w]));
        }
        if nb.is_empty() {
            return Err(Error::Structure(format!("U_f is empty for f = {f:?}")));
        }
        let paths: Vec<(usize, Vec<usize>)> = enumerate_paths(g, f, &in_v)
            .into_iter()
            .map(|seq| {
                next_id += 1;
                (next_id - 1, seq)
            })
            .collect();
        families.push(PathFamily {
            vertices: f.clone(),
            neighbours: nb.into_iter().collect(),
            paths,
        });
    }

    let mut groups = Vec::new();
    for (&i, &mid) in vertical.iter().zip(&a) {
        let ear = &ed.ears[i];
        let ends = [ear.vertices[1], ear.vertices[3]];
        let mut members: Vec<usize> = ends
            .iter()
            .filter_map(|&v| sets.iter().position(|f| f == &vec![v]))
            .collect();
        for (k, f) in sets.iter().enumerate() {
            if f.len() == 1 && !ends.contains(&f[0]) && g.find_edge(f[0], mid).is_some() {
                members.push(k);
            }
        }
        let two_ears = layout.endpoint_of[mid].iter().filter(|&&q| ed.ears[q].len() == 2).count();
        if members.len() != two_ears + 2 {
            return Err(Error::Structure(format!(
                "|M(a)| = {} for a = {mid} but {two_ears} 2-ears are attached there",
                members.len()
            )));
        }
        groups.push((mid, members));
    }

    Ok(OuterOptimizationInstance {
        paths: PathFamilies {
            v_in,
            families,
            groups,
        },
        source,
        a,
        vertical,
        horizontal,
        v_hor: v_hor.into_iter().collect(),
        blocks,
        inner,
        promoted_first,
    })
}

/// Paths with internal vertex set exactly `f` and distinct endpoints in `V_in`,
/// each listed once with its smaller endpoint first.
fn enumerate_paths(g: &crate::MultiGraph, f: &[usize], in_v: &[bool]) -> Vec<Vec<usize>> {
    let ends_of = |x: usize| -> BTreeSet<usize> { g.adj(x).iter().map(|&(_, w)| w).filter(|&w| in_v[w]).collect() };
    let mut orders: Vec<Vec<usize>> = Vec::new();
    match f.len() {
        1 => orders.push(f.to_vec()),
        2 if g.find_edge(f[0], f[1]).is_some() => {
            orders.push(vec![f[0], f[1]]);
            orders.push(vec![f[1], f[0]]);
        }
        _ => {}
    }
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for inner in orders {
        let (first, last) = (inner[0], *inner.last().unwrap());
        for u in ends_of(first) {
            for w in ends_of(last) {
                if u == w {
                    continue;
                }
                let mut seq = vec![u];
                seq.extend(&inner);
                seq.push(w);
                if seq[0] > *seq.last().unwrap() {
                    seq.reverse();
                }
                out.insert(seq);
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ear::Ear;
    use crate::MultiGraph;
    use std::sync::Arc;

    pub(crate) fn ear(g: &MultiGraph, vs: &[usize]) -> Ear {
        let edges = vs.windows(2).map(|w| g.find_edge(w[0], w[1]).unwrap()).collect();
        Ear::new(vs.to_vec(), edges)
    }

    #[test]
    fn circuit_has_no_outer_ears() {
        let g = Arc::new(MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap());
        let ed = EarDecomposition::from_ears(g.clone(), vec![ear(&g, &[0, 1, 2, 3, 4, 5, 0])]).unwrap();
        let inst = build_outer_instance(&ed).unwrap();
        assert_eq!(inst.m(), 0);
        assert!(inst.a.is_empty());
        assert_eq!(inst.paths.v_in, (0..6).collect::<Vec<_>>());
        assert!(!inst.promoted_first);
    }

    #[test]
    fn two_ear_between_long_ear_vertices() {
        // C6 on 0..5 plus ear 1 - 6 - 4, with chords 6-2 and 6-3.
        let g = Arc::new(
            MultiGraph::from_edges(
                7,
                &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 6), (6, 4), (6, 2), (6, 3)],
            )
            .unwrap(),
        );
        let ed = EarDecomposition::from_ears(g.clone(), vec![ear(&g, &[0, 1, 2, 3, 4, 5, 0]), ear(&g, &[1, 6, 4])])
            .unwrap();
        let inst = build_outer_instance(&ed).unwrap();
        assert_eq!(inst.m(), 1);
        let f = &inst.paths.families[0];
        assert_eq!(f.vertices, vec![6]);
        assert_eq!(f.neighbours, vec![1, 2, 3, 4]);
        let seqs: Vec<Vec<usize>> = f.paths.iter().map(|p| p.1.clone()).collect();
        let mut expected = Vec::new();
        for u in [1, 2, 3, 4] {
            for w in [1, 2, 3, 4] {
                if u < w {
                    expected.push(vec![u, 6, w]);
                }
            }
        }
        assert_eq!(seqs, expected);
    }

    #[test]
    fn vertical_ear_with_one_two_ear() {
        // C5 on 0..4; vertical 4-ear 0 - 5 - 6 - 7 - 2 with 2-ear 6 - 8 - 3.
        let g = Arc::new(
            MultiGraph::from_edges(
                9,
                &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 7), (7, 2), (6, 8), (8, 3)],
            )
            .unwrap(),
        );
        let ed = EarDecomposition::from_ears(
            g.clone(),
            vec![ear(&g, &[0, 1, 2, 3, 4, 0]), ear(&g, &[0, 5, 6, 7, 2]), ear(&g, &[6, 8, 3])],
        )
        .unwrap();
        assert_eq!(ed.classify_4ear(1).unwrap(), FourEarKind::Vertical);
        let inst = build_outer_instance(&ed).unwrap();
        assert_eq!(inst.a, vec![6]);
        let group = inst.group(6).unwrap();
        assert_eq!(group.len(), 3);
        let members: Vec<&Vec<usize>> = group.iter().map(|&k| &inst.paths.families[k].vertices).collect();
        assert_eq!(members, vec![&vec![5], &vec![7], &vec![8]]);
        // 8 has the single V_in neighbour 3, so it has no path.
        assert!(inst.paths.families[group[2]].paths.is_empty());
        assert_eq!(inst.paths.families[group[2]].neighbours, vec![3]);
    }

    #[test]
    fn empty_neighbourhood_is_rejected() {
        // A 2-ear hanging off a 3-ear has no neighbour in V_in.
        let g = Arc::new(
            MultiGraph::from_edges(
                8,
                &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 2), (5, 7), (7, 6)],
            )
            .unwrap(),
        );
        let ed = EarDecomposition::from_ears(
            g.clone(),
            vec![ear(&g, &[0, 1, 2, 3, 4, 0]), ear(&g, &[0, 5, 6, 2]), ear(&g, &[5, 7, 6])],
        )
        .unwrap();
        assert!(matches!(build_outer_instance(&ed), Err(Error::Structure(_))));
    }

    #[test]
    fn outer_first_ear_is_promoted() {
        let g = Arc::new(MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)]).unwrap());
        let ed = EarDecomposition::from_ears(g.clone(), vec![ear(&g, &[0, 1, 2, 0]), ear(&g, &[0, 3, 1])]).unwrap();
        let inst = build_outer_instance(&ed).unwrap();
        assert!(inst.promoted_first);
        assert_eq!(inst.paths.families[0].neighbours, vec![0, 1]);
    }
}
