//! Matroid oracles, maximum-cardinality intersection and the coloring lemmas.

mod certificate;
mod coloring;
mod intersect;

pub use certificate::{intersection_certificate, IntersectionCertificate, PathFamilies, PathFamily};
pub use coloring::{forest_color, union_color, ForestColoring};
pub use intersect::{exchange_reachable, matroid_intersect_max, maximal_minimizer};

use std::collections::BTreeSet;

/// Independence oracle over a finite ground set of element ids.
pub trait MatroidOracle {
    fn ground(&self) -> Vec<usize>;

    fn is_independent(&self, set: &[usize]) -> bool;

    /// Greedy rank in increasing id order.
    fn rank(&self, set: &[usize]) -> usize {
        greedy_basis(self, set).len()
    }
}

/// Maximal independent subset of `set`, scanning in increasing id order.
pub fn greedy_basis<M: MatroidOracle + ?Sized>(m: &M, set: &[usize]) -> Vec<usize> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut basis = Vec::new();
    for x in sorted {
        basis.push(x);
        if !m.is_independent(&basis) {
            basis.pop();
        }
    }
    basis
}

#[derive(Debug, Clone)]
pub struct FreeMatroid {
    pub elements: Vec<usize>,
}

impl MatroidOracle for FreeMatroid {
    fn ground(&self) -> Vec<usize> {
        self.elements.clone()
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|x| self.elements.contains(x))
    }
}

/// Cycle matroid: an element is an edge (or a path standing in for one) between
/// two vertices; a set is independent iff those edges form a forest.
#[derive(Debug, Clone, Default)]
pub struct GraphicMatroid {
    /// `(id, (u, v))`, sorted by id, ids distinct.
    endpoints: Vec<(usize, (usize, usize))>,
}

impl GraphicMatroid {
    /// Later duplicates of an id are dropped.
    pub fn new(elements: impl IntoIterator<Item = (usize, usize, usize)>) -> Self {
        let mut endpoints: Vec<(usize, (usize, usize))> = elements.into_iter().map(|(id, u, v)| (id, (u, v))).collect();
        endpoints.sort_by_key(|e| e.0);
        endpoints.dedup_by_key(|e| e.0);
        GraphicMatroid { endpoints }
    }

    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }

    pub fn ends(&self, id: usize) -> Option<(usize, usize)> {
        self.endpoints.binary_search_by_key(&id, |e| e.0).ok().map(|k| self.endpoints[k].1)
    }
}

impl MatroidOracle for GraphicMatroid {
    fn ground(&self) -> Vec<usize> {
        self.endpoints.iter().map(|e| e.0).collect()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let mut ends = Vec::with_capacity(set.len());
        for &x in set {
            let Some(uv) = self.ends(x) else {
                return false;
            };
            ends.push(uv);
        }
        // A repeated element closes a cycle with its copy, so needs no separate check.
        let n = ends.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let mut parent: Vec<usize> = (0..n).collect();
        let find = |p: &mut Vec<usize>, mut x: usize| {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        };
        for (u, v) in ends {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}

/// Capacity constraints on a laminar family of element groups.
#[derive(Debug, Clone, Default)]
pub struct LaminarMatroid {
    pub elements: Vec<usize>,
    pub groups: Vec<(BTreeSet<usize>, usize)>,
}

impl LaminarMatroid {
    pub fn new(elements: Vec<usize>, groups: Vec<(BTreeSet<usize>, usize)>) -> Self {
        let m = LaminarMatroid { elements, groups };
        debug_assert!(m.is_laminar(), "capacity groups must form a laminar family");
        m
    }

    pub fn is_laminar(&self) -> bool {
        self.groups.iter().enumerate().all(|(i, (a, _))| {
            self.groups[i + 1..]
                .iter()
                .all(|(b, _)| a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a))
        })
    }
}

impl MatroidOracle for LaminarMatroid {
    fn ground(&self) -> Vec<usize> {
        self.elements.clone()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
            && s.iter().all(|x| self.elements.contains(x))
            && self
                .groups
                .iter()
                .all(|(g, cap)| s.iter().filter(|x| g.contains(x)).count() <= *cap)
    }
}

/// `M / F` for an independent set `F`.
pub struct Contracted<'a, M: MatroidOracle + ?Sized> {
    pub inner: &'a M,
    pub by: Vec<usize>,
}

impl<'a, M: MatroidOracle + ?Sized> Contracted<'a, M> {
    pub fn new(inner: &'a M, by: Vec<usize>) -> Self {
        debug_assert!(inner.is_independent(&by), "contraction needs an independent set");
        Contracted { inner, by }
    }
}

impl<M: MatroidOracle + ?Sized> MatroidOracle for Contracted<'_, M> {
    fn ground(&self) -> Vec<usize> {
        self.inner
            .ground()
            .into_iter()
            .filter(|x| !self.by.contains(x))
            .collect()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        if set.iter().any(|x| self.by.contains(x)) {
            return false;
        }
        let mut all = set.to_vec();
        all.extend_from_slice(&self.by);
        self.inner.is_independent(&all)
    }
}

/// Restriction of a matroid to a subset of its ground set.
pub struct Restricted<'a, M: MatroidOracle + ?Sized> {
    pub inner: &'a M,
    pub elements: Vec<usize>,
}

impl<M: MatroidOracle + ?Sized> MatroidOracle for Restricted<'_, M> {
    fn ground(&self) -> Vec<usize> {
        self.elements.clone()
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|x| self.elements.contains(x)) && self.inner.is_independent(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_rank() {
        let m = GraphicMatroid::new([(0, 0, 1), (1, 1, 2), (2, 2, 0)]);
        assert_eq!(m.rank(&[0, 1, 2]), 2);
        assert!(m.is_independent(&[0, 2]));
        assert!(!m.is_independent(&[0, 1, 2]));
        let c = Contracted::new(&m, vec![0]);
        assert!(!c.is_independent(&[1, 2]));
        assert!(c.is_independent(&[2]));
        assert_eq!(c.ground(), vec![1, 2]);
    }

    #[test]
    fn parallel_elements_are_dependent() {
        let m = GraphicMatroid::new([(0, 0, 1), (1, 1, 0)]);
        assert!(!m.is_independent(&[0, 1]));
    }

    #[test]
    fn laminar_caps() {
        let m = LaminarMatroid::new(
            vec![0, 1, 2, 3],
            vec![([0, 1].into(), 1), ([2, 3].into(), 1), ([0, 1, 2, 3].into(), 1)],
        );
        assert!(m.is_laminar());
        assert!(m.is_independent(&[0]));
        assert!(!m.is_independent(&[0, 2]));
    }
}
