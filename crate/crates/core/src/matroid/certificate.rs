use super::{maximal_minimizer, GraphicMatroid, LaminarMatroid};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// One member `f` of the family `M`: its vertex set, its neighbours `U_f`
/// in `V_in`, and the candidate paths `P_f` (element id, vertex sequence).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathFamily {
    pub vertices: Vec<usize>,
    pub neighbours: Vec<usize>,
    pub paths: Vec<(usize, Vec<usize>)>,
}

/// Ground-set layout shared by the graphic and the laminar matroid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PathFamilies {
    pub v_in: Vec<usize>,
    pub families: Vec<PathFamily>,
    /// `(a, indices into families of M(a))`.
    pub groups: Vec<(usize, Vec<usize>)>,
}

impl PathFamilies {
    pub fn elements(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.families.iter().flat_map(|f| f.paths.iter().map(|p| p.0)).collect();
        ids.sort_unstable();
        ids
    }

    pub fn path_count(&self) -> usize {
        self.families.iter().map(|f| f.paths.len()).sum()
    }

    pub fn path(&self, id: usize) -> Option<(usize, &[usize])> {
        self.families
            .iter()
            .enumerate()
            .find_map(|(i, f)| f.paths.iter().find(|p| p.0 == id).map(|p| (i, p.1.as_slice())))
    }

    /// Each path acts as an edge between its endpoints.
    pub fn graphic(&self) -> GraphicMatroid {
        GraphicMatroid::new(self.families.iter().flat_map(|f| {
            f.paths
                .iter()
                .map(|(id, seq)| (*id, seq[0], *seq.last().expect("nonempty path")))
        }))
    }

    /// At most one path per family and at most `|M(a)| - 2` per group.
    pub fn laminar(&self) -> LaminarMatroid {
        let mut groups: Vec<(BTreeSet<usize>, usize)> = self
            .families
            .iter()
            .map(|f| (f.paths.iter().map(|p| p.0).collect(), 1))
            .collect();
        for (_, members) in &self.groups {
            let set: BTreeSet<usize> = members
                .iter()
                .flat_map(|&i| self.families[i].paths.iter().map(|p| p.0))
                .collect();
            groups.push((set, members.len().saturating_sub(2)));
        }
        LaminarMatroid::new(self.elements(), groups)
    }

    /// `μ(W, A')`.
    pub fn mu(&self, partition: &[Vec<usize>], a_prime: &[usize]) -> i64 {
        let inside = |f: &PathFamily, w: &[usize]| f.neighbours.iter().all(|u| w.contains(u));
        let mut mu = 0i64;
        for w in partition {
            let covered = self.families.iter().filter(|f| inside(f, w)).count() as i64;
            mu += covered - (w.len() as i64 - 1);
        }
        for (a, members) in &self.groups {
            if a_prime.contains(a) {
                let covered: i64 = partition
                    .iter()
                    .map(|w| members.iter().filter(|&&i| inside(&self.families[i], w)).count() as i64)
                    .sum();
                mu += 2 - covered;
            }
        }
        mu
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionCertificate {
    pub partition: Vec<Vec<usize>>,
    pub a_prime: Vec<usize>,
    pub mu: i64,
}

/// Builds `(W, A')` from the maximal minimizer `Q` of the intersection min-max
/// formula and checks `|I| = |M| - μ(W, A')`.
pub fn intersection_certificate(
    m1: &GraphicMatroid,
    m2: &LaminarMatroid,
    layout: &PathFamilies,
    common: &[usize],
) -> Result<IntersectionCertificate> {
    let q: BTreeSet<usize> = maximal_minimizer(m1, m2, common)?.into_iter().collect();
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while let Some(&up) = p.get(&r) {
            if up == r {
                break;
            }
            r = up;
        }
        p.insert(x, r);
        r
    }
    for &id in &q {
        let (_, seq) = layout.path(id).ok_or_else(|| Error::Internal(format!("unknown path {id}")))?;
        for w in seq.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent.insert(a, b);
            }
        }
    }
    let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in &layout.v_in {
        let r = find(&mut parent, v);
        parts.entry(r).or_default().push(v);
    }
    let mut partition: Vec<Vec<usize>> = parts.into_values().collect();
    for w in &mut partition {
        w.sort_unstable();
    }
    partition.sort();
    let a_prime: Vec<usize> = layout
        .groups
        .iter()
        .filter(|(_, members)| {
            let outside = members
                .iter()
                .filter(|&&i| layout.families[i].paths.iter().any(|p| !q.contains(&p.0)))
                .count();
            outside + 2 > members.len()
        })
        .map(|(a, _)| *a)
        .collect();
    let mu = layout.mu(&partition, &a_prime);
    if common.len() as i64 != layout.families.len() as i64 - mu {
        return Err(Error::Internal(format!(
            "certificate identity fails: |I| = {}, |M| = {}, mu = {mu}",
            common.len(),
            layout.families.len()
        )));
    }
    Ok(IntersectionCertificate {
        partition,
        a_prime,
        mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::matroid_intersect_max;

    fn fam(vertices: Vec<usize>, neighbours: Vec<usize>, paths: Vec<(usize, Vec<usize>)>) -> PathFamily {
        PathFamily {
            vertices,
            neighbours,
            paths,
        }
    }

    fn run(layout: &PathFamilies) -> (usize, IntersectionCertificate) {
        let (m1, m2) = (layout.graphic(), layout.laminar());
        let i = matroid_intersect_max(&m1, &m2).unwrap();
        let c = intersection_certificate(&m1, &m2, layout, &i).unwrap();
        (i.len(), c)
    }

    #[test]
    fn empty_m() {
        let layout = PathFamilies {
            v_in: vec![0, 1, 2],
            ..Default::default()
        };
        let (size, c) = run(&layout);
        assert_eq!(size, 0);
        assert_eq!(c.partition, vec![vec![0], vec![1], vec![2]]);
        assert!(c.a_prime.is_empty());
        assert_eq!(c.mu, 0);
    }

    #[test]
    fn one_clean_ear() {
        // Ear 0 - 5 - 1 with V_in = {0, 1}.
        let layout = PathFamilies {
            v_in: vec![0, 1],
            families: vec![fam(vec![5], vec![0, 1], vec![(0, vec![0, 5, 1])])],
            groups: vec![],
        };
        let (size, c) = run(&layout);
        assert_eq!((size, c.mu), (1, 0));
    }

    #[test]
    fn two_ears_same_pair() {
        let layout = PathFamilies {
            v_in: vec![0, 1],
            families: vec![
                fam(vec![5], vec![0, 1], vec![(0, vec![0, 5, 1])]),
                fam(vec![6], vec![0, 1], vec![(1, vec![0, 6, 1])]),
            ],
            groups: vec![],
        };
        let (size, c) = run(&layout);
        assert_eq!((size, c.mu), (1, 1));
        assert_eq!(c.partition, vec![vec![0, 1]]);
    }
}
