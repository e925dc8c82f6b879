use super::{build_outer_instance, FamilySource, OuterOptimizationInstance};
use crate::ear::{orient_clean_forest, Ear, EarDecomposition, WellOrientedEarDecomposition};
use crate::error::{Error, Result};
use crate::matroid::{intersection_certificate, matroid_intersect_max, IntersectionCertificate, PathFamilies};
use crate::{MultiGraph, VertexSet};
use serde::Serialize;
use std::cmp::Reverse;

/// Largest `n` for which the certificate is compared against a brute-force
/// maximization of `μ`.
const MU_CHECK_LIMIT: usize = 10;

/// Counts entering the inequalities asserted after the re-design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RaiseLbCheck {
    pub k4_primary: usize,
    pub k_ge5_primary: usize,
    pub k4_secondary: usize,
    pub k_clean_secondary: usize,
    /// A promoted first ear is left out of every count above.
    pub promoted_first: bool,
}

impl RaiseLbCheck {
    pub fn blocked_inequality(&self) -> bool {
        self.k4_primary <= 2 * self.k_ge5_primary + self.k4_secondary
    }
}

#[derive(Debug, Clone)]
pub struct OuterOptimization {
    pub instance: OuterOptimizationInstance,
    pub common: Vec<usize>,
    pub certificate: IntersectionCertificate,
    pub optimized: WellOrientedEarDecomposition,
    pub check: RaiseLbCheck,
    pub terminals: VertexSet,
}

/// Short ear whose internal vertices avoid `T`.
pub fn is_clean(ear: &Ear, terminals: &VertexSet) -> bool {
    ear.len() <= 3 && ear.internal().iter().all(|v| !terminals.contains(v))
}

fn path_ear(g: &MultiGraph, seq: &[usize]) -> Result<Ear> {
    let edges = seq
        .windows(2)
        .map(|w| {
            g.find_edge(w[0], w[1])
                .ok_or_else(|| Error::Internal(format!("no edge {}-{}", w[0], w[1])))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ear::new(seq.to_vec(), edges))
}

/// Re-designs the outer ears from a maximum common independent set of the
/// graphic and the laminar matroid over the path families, splits the ears
/// into primary and secondary and orients the clean primary short ears.
pub fn optimize_outer_ears(ed: &EarDecomposition, terminals: &VertexSet) -> Result<OuterOptimization> {
    let inst = build_outer_instance(ed)?;
    let g = &*ed.graph;
    let n = g.n();
    let (m1, m2) = (inst.paths.graphic(), inst.paths.laminar());
    let common = matroid_intersect_max(&m1, &m2)?;
    let certificate = intersection_certificate(&m1, &m2, &inst.paths, &common)?;
    if n <= MU_CHECK_LIMIT {
        let best = brute_max_mu(&inst.paths);
        if best != certificate.mu {
            return Err(Error::Internal(format!(
                "certificate mu {} differs from the maximum {best}",
                certificate.mu
            )));
        }
    }

    let mut chosen: Vec<Option<Vec<usize>>> = vec![None; inst.m()];
    for &id in &common {
        let (k, seq) = inst.paths.path(id).ok_or_else(|| Error::Internal(format!("unknown path {id}")))?;
        chosen[k] = Some(seq.to_vec());
    }
    let mut in_v = vec![false; n];
    for &v in &inst.paths.v_in {
        in_v[v] = true;
    }
    let mut outer4 = vec![false; n];
    for (i, ear) in ed.ears.iter().enumerate() {
        if !inst.inner[i] && ear.len() == 4 {
            for &v in ear.internal() {
                outer4[v] = true;
            }
        }
    }
    let near_outer4 =
        |q: usize| ed.ears[q].internal().iter().any(|&x| g.adj(x).iter().any(|&(_, w)| outer4[w]));

    let l = ed.ears.len();
    let mut slot: Vec<Option<(Ear, bool)>> = ed.ears.iter().map(|e| Some((e.clone(), false))).collect();
    let mut added: Vec<(Ear, bool)> = Vec::new();
    for (k, src) in inst.source.iter().enumerate() {
        if let (FamilySource::ShortEar(q), Some(seq)) = (src, &chosen[k]) {
            if !near_outer4(*q) {
                slot[*q] = Some((path_ear(g, seq)?, true));
            }
        }
    }
    let first_in = |v: usize, avoid: Option<usize>| -> Option<usize> {
        let mut nb: Vec<usize> = g.adj(v).iter().map(|&(_, w)| w).filter(|&w| in_v[w]).collect();
        nb.sort_unstable();
        nb.into_iter().find(|&w| Some(w) != avoid)
    };
    for (&vi, (a, members)) in inst.vertical.iter().zip(&inst.paths.groups) {
        let a = *a;
        let unused: Vec<usize> = members.iter().copied().filter(|&k| chosen[k].is_none()).collect();
        if unused.len() < 2 {
            return Err(Error::Structure(format!("M({a}) has fewer than two unused members")));
        }
        let (u, w) = (inst.paths.families[unused[0]].vertices[0], inst.paths.families[unused[1]].vertices[0]);
        let x = first_in(u, None).ok_or_else(|| Error::Structure(format!("{u} has no neighbour in V_in")))?;
        let y = first_in(w, Some(x)).or_else(|| first_in(w, None)).expect("U_f is nonempty");
        let x = if x == y { first_in(u, Some(y)).unwrap_or(x) } else { x };
        for q in 0..l {
            let e = &ed.ears[q];
            if q == vi || (e.len() == 2 && e.is_endpoint(a)) {
                slot[q] = None;
            }
        }
        slot[vi] = Some((path_ear(g, &[x, u, a, w, y])?, false));
        for &k in &members[..] {
            if unused[..2].contains(&k) {
                continue;
            }
            let v = inst.paths.families[k].vertices[0];
            match &chosen[k] {
                Some(seq) => added.push((path_ear(g, seq)?, true)),
                None => {
                    let z = first_in(v, None).expect("U_f is nonempty");
                    added.push((path_ear(g, &[a, v, z])?, false));
                }
            }
        }
    }

    let items: Vec<(Ear, bool)> = slot.into_iter().flatten().chain(added).collect();
    let mut is_end = vec![false; n];
    for (e, _) in &items {
        let (a, b) = e.ends();
        is_end[a] = true;
        is_end[b] = true;
    }
    let key = |(e, in_i): &(Ear, bool)| -> (u8, Reverse<usize>) {
        let pendant = e.internal().iter().all(|&v| !is_end[v]);
        if e.vertices.iter().all(|&v| in_v[v]) {
            (0, Reverse(0))
        } else if *in_i && is_clean(e, terminals) {
            (1, Reverse(e.len()))
        } else if !pendant {
            (2, Reverse(0))
        } else {
            (3, Reverse(e.len()))
        }
    };
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&i| key(&items[i]));
    let groups: Vec<u8> = order.iter().map(|&i| key(&items[i]).0).collect();
    let ears: Vec<Ear> = order.iter().map(|&i| items[i].0.clone()).collect();
    let new_ed = EarDecomposition::in_order(ed.graph.clone(), ears)
        .ok_or_else(|| Error::Internal("re-designed ears do not form an ear-decomposition".into()))?;
    let p = groups.iter().filter(|&&k| k <= 1).count();
    let oriented: Vec<usize> = (0..groups.len()).filter(|&i| groups[i] == 1).collect();
    let mut optimized = orient_clean_forest(&new_ed, &oriented)?;
    optimized.primary = p;

    let skip = usize::from(inst.promoted_first);
    let count = |range: std::ops::Range<usize>, pred: &dyn Fn(&Ear) -> bool| {
        range.filter(|&i| pred(&new_ed.ears[i])).count()
    };
    let check = RaiseLbCheck {
        k4_primary: count(skip..p, &|e| e.len() == 4),
        k_ge5_primary: count(skip..p, &|e| e.len() >= 5),
        k4_secondary: count(p..new_ed.ears.len(), &|e| e.len() == 4),
        k_clean_secondary: count(p..new_ed.ears.len(), &|e| is_clean(e, terminals)),
        promoted_first: inst.promoted_first,
    };
    if !check.blocked_inequality() {
        return Err(Error::Internal(format!(
            "k4 primary {} exceeds 2 k5 primary {} plus k4 secondary {}",
            check.k4_primary, check.k_ge5_primary, check.k4_secondary
        )));
    }
    for i in skip..new_ed.ears.len() {
        let e = &new_ed.ears[i];
        let short_primary = e.len() <= 3 && i < p;
        if short_primary && !is_clean(e, terminals) {
            return Err(Error::Internal(format!("primary short ear {} is not clean", i + 1)));
        }
        if short_primary != optimized.oriented[i] {
            return Err(Error::Internal(format!("ear {} oriented without being short and primary", i + 1)));
        }
    }

    Ok(OuterOptimization {
        instance: inst,
        common,
        certificate,
        optimized,
        check,
        terminals: terminals.clone(),
    })
}

/// Maximum of `μ(W, A')` over all partitions of `V_in` and subsets of `A`.
fn brute_max_mu(paths: &PathFamilies) -> i64 {
    let k = paths.v_in.len();
    let mut best = i64::MIN;
    let mut label = vec![0usize; k];
    let a: Vec<usize> = paths.groups.iter().map(|(a, _)| *a).collect();
    loop {
        let parts = label.iter().max().map_or(0, |m| m + 1);
        let mut partition = vec![Vec::new(); parts];
        for (i, &b) in label.iter().enumerate() {
            partition[b].push(paths.v_in[i]);
        }
        for mask in 0..1usize << a.len() {
            let a_prime: Vec<usize> = (0..a.len()).filter(|&j| mask >> j & 1 == 1).map(|j| a[j]).collect();
            best = best.max(paths.mu(&partition, &a_prime));
        }
        // Next restricted growth string.
        let mut i = k;
        loop {
            if i <= 1 {
                return if k == 0 { best.max(0) } else { best };
            }
            i -= 1;
            let cap = label[..i].iter().max().copied().unwrap_or(0) + 1;
            if label[i] < cap {
                label[i] += 1;
                for x in &mut label[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}
