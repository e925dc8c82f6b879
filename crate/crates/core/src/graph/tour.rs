use super::{EdgeMultiset, MultiGraph, VertexSet};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TourViolation {
    UnknownEdge(usize),
    Multiplicity { edge: usize, count: u8 },
    ParityMismatch { missing: Vec<usize>, extra: Vec<usize> },
    UncoveredVertex(usize),
    Disconnected { component_count: usize },
}

impl fmt::Display for TourViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TourViolation::UnknownEdge(e) => write!(f, "edge {e} does not exist"),
            TourViolation::Multiplicity { edge, count } => {
                write!(f, "edge {edge} used {count} times (at most 2 allowed)")
            }
            TourViolation::ParityMismatch { missing, extra } => write!(
                f,
                "odd-degree set differs from T: missing {missing:?}, unexpected {extra:?}"
            ),
            TourViolation::UncoveredVertex(v) => write!(f, "vertex {v} uncovered"),
            TourViolation::Disconnected { component_count } => {
                write!(f, "support has {component_count} components")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TourCheck {
    pub size: usize,
    pub weight: u64,
    pub violations: Vec<TourViolation>,
}

impl TourCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `j` has odd-degree set `t` and that its support is connected and spanning.
pub fn is_t_tour(g: &MultiGraph, j: &EdgeMultiset, t: &VertexSet) -> TourCheck {
    let mut violations = Vec::new();
    for (e, k) in j.iter() {
        if e >= g.m() {
            violations.push(TourViolation::UnknownEdge(e));
        } else if k > 2 {
            violations.push(TourViolation::Multiplicity { edge: e, count: k });
        }
    }
    if !violations.is_empty() {
        return TourCheck {
            size: j.size(),
            weight: 0,
            violations,
        };
    }
    let odd = j.odd_vertices(g);
    if &odd != t {
        violations.push(TourViolation::ParityMismatch {
            missing: t.difference(&odd).copied().collect(),
            extra: odd.difference(t).copied().collect(),
        });
    }
    if g.n() > 1 {
        let mut covered = vec![false; g.n()];
        for e in j.support() {
            covered[g.edge(e).u] = true;
            covered[g.edge(e).v] = true;
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            violations.push(TourViolation::UncoveredVertex(v));
        }
        let (_, count) = g.components_with(|e| j.contains(e));
        if count > 1 {
            violations.push(TourViolation::Disconnected {
                component_count: count,
            });
        }
    }
    TourCheck {
        size: j.size(),
        weight: j.weight(g),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> MultiGraph {
        // s=0, a=1, t=2, b=3
        MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn euler_circuit() {
        let j = EdgeMultiset::from_edges(0..4);
        assert!(is_t_tour(&c4(), &j, &VertexSet::new()).is_valid());
    }

    #[test]
    fn antipodal_tour_of_size_four() {
        let mut j = EdgeMultiset::from_edges([0, 1]);
        j.add(3, 2);
        let r = is_t_tour(&c4(), &j, &[0, 2].into_iter().collect());
        assert!(r.is_valid());
        assert_eq!(r.size, 4);
    }

    #[test]
    fn uncovered_vertex() {
        let mut j = EdgeMultiset::new();
        j.add(0, 2);
        j.add(1, 2);
        let r = is_t_tour(&c4(), &j, &VertexSet::new());
        assert!(r.violations.contains(&TourViolation::UncoveredVertex(3)));
    }
}
