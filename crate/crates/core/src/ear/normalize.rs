use super::{Ear, EarDecomposition, FourEarKind, Layout, NO_EAR};
use crate::error::{Error, Result};
use serde::Serialize;
use std::cmp::Ordering;

/// Normalization measure, compared lexicographically: fewer even ears, then more
/// trivial ears, then fewer 4-ears, then fewer trivial ears at middles of outer 4-ears.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Potential {
    pub even: usize,
    pub trivial: usize,
    pub four_ears: usize,
    pub middle_trivial: usize,
}

impl Potential {
    pub fn of(ed: &EarDecomposition) -> Potential {
        let layout = ed.layout();
        let mut middle = vec![false; ed.n()];
        for (i, ear) in ed.ears.iter().enumerate() {
            if ear.len() == 4 && layout.outer[i] {
                middle[ear.vertices[2]] = true;
            }
        }
        let g = &ed.graph;
        Potential {
            even: ed.even_ears(),
            trivial: ed.trivial.len(),
            four_ears: ed.ears.iter().filter(|e| e.len() == 4).count(),
            middle_trivial: ed
                .trivial
                .iter()
                .filter(|&&e| middle[g.edge(e).u] || middle[g.edge(e).v])
                .count(),
        }
    }

    fn key(&self) -> (usize, std::cmp::Reverse<usize>, usize, usize) {
        (self.even, std::cmp::Reverse(self.trivial), self.four_ears, self.middle_trivial)
    }
}

impl PartialOrd for Potential {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Potential {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct NormalizeTrace {
    /// Rule applied at each step with the potential after it.
    pub steps: Vec<(&'static str, Potential)>,
}

impl NormalizeTrace {
    pub fn fired(&self, rule: &str) -> bool {
        self.steps.iter().any(|(r, _)| *r == rule)
    }
}

type Candidate = (&'static str, Vec<Ear>);

fn piece(ear: &Ear, i: usize, j: usize) -> Ear {
    Ear::new(ear.vertices[i..=j].to_vec(), ear.edges[i..j].to_vec())
}

fn single(a: usize, b: usize, e: usize) -> Ear {
    Ear::new(vec![a, b], vec![e])
}

fn trivial_between(ed: &EarDecomposition, layout: &Layout, a: usize, b: usize) -> Option<usize> {
    ed.graph
        .adj(a)
        .iter()
        .filter(|&&(e, x)| x == b && layout.trivial_edge[e])
        .map(|&(e, _)| e)
        .min()
}

/// `ears` without the ears in `remove`, with `add` placed where the first removed ear was.
fn rewrite(ears: &[Ear], remove: &[usize], add: Vec<Ear>) -> Vec<Ear> {
    let at = *remove.iter().min().expect("nonempty removal");
    let mut out = Vec::with_capacity(ears.len() + add.len());
    let mut add = Some(add);
    for (i, e) in ears.iter().enumerate() {
        if i == at {
            out.extend(add.take().unwrap());
        }
        if !remove.contains(&i) {
            out.push(e.clone());
        }
    }
    out
}

fn short_ok(ed: &EarDecomposition, layout: &Layout, i: usize) -> bool {
    ed.ears[i].len() > 3 || (ed.is_open_ear(i) && layout.pendant_ear[i])
}

fn four_ok(ed: &EarDecomposition, layout: &Layout, i: usize) -> bool {
    !matches!(layout.four_kind[i], Some(FourEarKind::Other)) && {
        let closed4 = |j: usize| ed.ears[j].len() == 4 && !ed.is_open_ear(j);
        !(closed4(i) && ed.attached(layout, i).iter().any(|&(q, _)| closed4(q)))
    }
}

fn holds_ab(ed: &EarDecomposition, layout: &Layout) -> bool {
    (0..ed.ears.len()).all(|i| short_ok(ed, layout, i) && four_ok(ed, layout, i))
}

/// O1: a nonpendant 2-ear is absorbed by the first ear attached to it.
fn rule_o1(ed: &EarDecomposition, layout: &Layout, out: &mut Vec<Candidate>) {
    for (p, ear) in ed.ears.iter().enumerate() {
        if ear.len() != 2 || layout.pendant_ear[p] {
            continue;
        }
        let (q, m) = ed.attached(layout, p)[0];
        let qe = &ed.ears[q];
        if qe.has_closed_shape() {
            continue;
        }
        let into_m = qe.starting_at(m).reversed();
        let mut opts = Vec::new();
        for k in [0, 1] {
            let (x, e) = (ear.vertices[2 * k], ear.edges[k]);
            let ext = into_m.join(&single(m, x, e));
            opts.push((ext.has_closed_shape(), ext));
        }
        opts.sort_by_key(|o| o.0);
        for (_, ext) in opts {
            out.push(("O1", rewrite(&ed.ears, &[p, q], vec![ext])));
        }
    }
}

/// O2/O3: the first nonpendant 3-ear absorbs or is absorbed by its first attached ear.
fn rule_o2_o3(ed: &EarDecomposition, layout: &Layout, out: &mut Vec<Candidate>) {
    for (p, ear) in ed.ears.iter().enumerate() {
        if ear.len() != 3 || layout.pendant_ear[p] {
            continue;
        }
        let (q, at) = ed.attached(layout, p)[0];
        let pe = if ear.vertices[1] == at { ear.clone() } else { ear.reversed() };
        let (v1, v2) = (pe.vertices[1], pe.vertices[2]);
        let qe = &ed.ears[q];
        let (a, b) = qe.ends();
        if (a == v1 && b == v2) || (a == v2 && b == v1) {
            let merged = piece(&pe, 0, 1).join(&qe.starting_at(v1)).join(&piece(&pe, 2, 3));
            out.push(("O2", rewrite(&ed.ears, &[p, q], vec![merged])));
        } else if !qe.has_closed_shape() {
            let ext = qe.starting_at(v1).reversed().join(&piece(&pe, 1, 3));
            out.push(("O3", rewrite(&ed.ears, &[p, q], vec![ext])));
        }
    }
}

/// O8-O10 for a 4-ear that is not blocked, pendant, vertical or horizontal.
fn rule_o8_o10(ed: &EarDecomposition, layout: &Layout, p: usize, out: &mut Vec<Candidate>) {
    let ear = &ed.ears[p];
    for (q, _) in dedup_ears(ed.attached(layout, p)) {
        let qe = &ed.ears[q];
        if qe.has_closed_shape() {
            continue;
        }
        let (a, b) = qe.ends();
        let at = |v: usize| a == v || b == v;
        let (v1, v2, v3) = (ear.vertices[1], ear.vertices[2], ear.vertices[3]);
        if at(v1) && at(v3) {
            if qe.len() >= 3 {
                let np = piece(ear, 0, 1).join(&qe.starting_at(v1)).join(&piece(ear, 3, 4));
                out.push(("O9", rewrite(&ed.ears, &[p, q], vec![np, piece(ear, 1, 3)])));
            }
        } else if at(v1) || at(v3) {
            let pe = if at(v1) { ear.clone() } else { ear.reversed() };
            let (u1, u2) = (pe.vertices[1], pe.vertices[2]);
            let qq = qe.starting_at(u1);
            let x = *qq.vertices.last().unwrap();
            let np = if x == u2 {
                piece(&pe, 0, 1).join(&qq).join(&piece(&pe, 2, 4))
            } else {
                qq.reversed().join(&piece(&pe, 1, 4))
            };
            out.push(("O8", rewrite(&ed.ears, &[p, q], vec![np])));
        } else if at(v2) && qe.len() >= 3 {
            for pe in [ear.clone(), ear.reversed()] {
                let np = piece(&pe, 0, 2).join(&qe.starting_at(v2));
                out.push(("O10", rewrite(&ed.ears, &[p, q], vec![np, piece(&pe, 2, 4)])));
            }
        }
    }
}

fn dedup_ears(mut v: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    v.dedup_by_key(|x| x.0);
    v
}

/// Whether every nontrivial ear attached to 4-ear `p` is a 2-ear at `v1,v3` or only at `v2`.
fn only_two_ear_pattern(ed: &EarDecomposition, layout: &Layout, p: usize) -> bool {
    let ear = &ed.ears[p];
    let (v1, v2, v3) = (ear.vertices[1], ear.vertices[2], ear.vertices[3]);
    dedup_ears(ed.attached(layout, p)).iter().all(|&(q, _)| {
        let qe = &ed.ears[q];
        let (a, b) = qe.ends();
        qe.len() == 2
            && !qe.has_closed_shape()
            && (((a == v1 && b == v3) || (a == v3 && b == v1))
                || ((a == v2) != (b == v2) && ![v1, v3].contains(&a) && ![v1, v3].contains(&b)))
    })
}

/// O4-O7: even-ear reducing moves for a 4-ear whose attached ears are all 2-ears.
fn rule_o4_o7(ed: &EarDecomposition, layout: &Layout, p: usize, out: &mut Vec<Candidate>) {
    let g = &ed.graph;
    let ear = &ed.ears[p];
    let attached = dedup_ears(ed.attached(layout, p));
    for pe in [ear.clone(), ear.reversed()] {
        let (v1, v2, v3) = (pe.vertices[1], pe.vertices[2], pe.vertices[3]);
        let e01 = single(pe.vertices[0], v1, pe.edges[0]);
        for &(q, _) in &attached {
            let qe = &ed.ears[q];
            let (a, b) = qe.ends();
            let w = qe.vertices[1];
            if (a == v1 && b == v3) || (a == v3 && b == v1) {
                let q1 = qe.starting_at(v1);
                let (e1w, ew3) = (q1.edges[0], q1.edges[1]);
                if let Some(e) = trivial_between(ed, layout, w, v2) {
                    let np = e01
                        .join(&single(v1, w, e1w))
                        .join(&single(w, v2, e))
                        .join(&piece(&pe, 2, 4));
                    out.push(("O4", rewrite(&ed.ears, &[p, q], vec![np])));
                }
                // Extend through v2 or w along any other ear or trivial edge.
                for (x, head) in [
                    (v2, e01.join(&single(v1, w, e1w)).join(&single(w, v3, ew3)).join(&piece(&pe, 2, 3).reversed())),
                    (w, e01.join(&piece(&pe, 1, 3)).join(&single(v3, w, ew3))),
                ] {
                    for &(e, y) in g.adj(x) {
                        if [w, v1, v2, v3].contains(&y) {
                            continue;
                        }
                        if layout.trivial_edge[e] {
                            let np = head.join(&single(x, y, e));
                            out.push(("O5", rewrite(&ed.ears, &[p, q], vec![np])));
                        }
                    }
                    for &(r, _) in &attached {
                        let re = &ed.ears[r];
                        if r == q || re.has_closed_shape() || !re.is_endpoint(x) {
                            continue;
                        }
                        let rr = re.starting_at(x);
                        if [w, v1, v2, v3].contains(rr.vertices.last().unwrap()) {
                            continue;
                        }
                        out.push(("O5", rewrite(&ed.ears, &[p, q, r], vec![head.join(&rr)])));
                    }
                }
            } else if a == v2 || b == v2 {
                let q2 = qe.starting_at(v2);
                let e2w = q2.edges[0];
                if let Some(e) = trivial_between(ed, layout, w, v1) {
                    let np = e01
                        .join(&single(v1, w, e))
                        .join(&single(w, v2, e2w))
                        .join(&piece(&pe, 2, 4));
                    out.push(("O6", rewrite(&ed.ears, &[p, q], vec![np])));
                }
                if let Some(e) = trivial_between(ed, layout, v1, v3) {
                    let np = e01
                        .join(&single(v1, v3, e))
                        .join(&piece(&pe, 2, 3).reversed())
                        .join(&q2);
                    out.push(("O7", rewrite(&ed.ears, &[p, q], vec![np])));
                }
            }
        }
    }
}

fn rule_b(ed: &EarDecomposition, layout: &Layout, out: &mut Vec<Candidate>) {
    for p in 0..ed.ears.len() {
        if layout.four_kind[p] != Some(FourEarKind::Other) {
            continue;
        }
        if only_two_ear_pattern(ed, layout, p) {
            rule_o4_o7(ed, layout, p, out);
        } else {
            rule_o8_o10(ed, layout, p, out);
        }
    }
}

/// O11: two pendant 3-ears with adjacent internal vertices merge into a 5-ear.
fn rule_o11(ed: &EarDecomposition, layout: &Layout, out: &mut Vec<Candidate>) {
    let g = &ed.graph;
    for &e in &ed.trivial {
        let (v, w) = (g.edge(e).u, g.edge(e).v);
        let (p, q) = (layout.ear_of[v], layout.ear_of[w]);
        if p == NO_EAR || q == NO_EAR || p == q {
            continue;
        }
        let (pe, qe) = (&ed.ears[p], &ed.ears[q]);
        if pe.len() != 3 || qe.len() != 3 || !layout.pendant_ear[p] || !layout.pendant_ear[q] {
            continue;
        }
        let pp = if pe.vertices[2] == v { pe.clone() } else { pe.reversed() };
        let qq = if qe.vertices[1] == w { qe.clone() } else { qe.reversed() };
        let merged = piece(&pp, 0, 2).join(&single(v, w, e)).join(&piece(&qq, 1, 3));
        out.push(("O11", rewrite(&ed.ears, &[p, q], vec![merged])));
    }
}

/// O12: two outer 4-ears whose middles both see the middle of a 2-ear.
fn rule_o12(ed: &EarDecomposition, layout: &Layout, out: &mut Vec<Candidate>) {
    let g = &ed.graph;
    let fours: Vec<usize> = (0..ed.ears.len())
        .filter(|&i| ed.ears[i].len() == 4 && layout.outer[i])
        .collect();
    for (r, re) in ed.ears.iter().enumerate() {
        if re.len() != 2 {
            continue;
        }
        let x = re.vertices[1];
        let link = |m: usize| -> Option<usize> {
            if let Some(k) = (0..2).find(|&k| re.vertices[2 * k] == m) {
                return Some(re.edges[k]);
            }
            g.adj(x)
                .iter()
                .filter(|&&(e, y)| y == m && layout.trivial_edge[e])
                .map(|&(e, _)| e)
                .min()
        };
        for (ai, &p) in fours.iter().enumerate() {
            for &q in &fours[ai + 1..] {
                let (pm, qm) = (ed.ears[p].vertices[2], ed.ears[q].vertices[2]);
                let (Some(ep), Some(eq)) = (link(pm), link(qm)) else {
                    continue;
                };
                for pe in [ed.ears[p].clone(), ed.ears[p].reversed()] {
                    for qe in [ed.ears[q].clone(), ed.ears[q].reversed()] {
                        let six = piece(&pe, 0, 2)
                            .join(&single(pm, x, ep))
                            .join(&single(x, qm, eq))
                            .join(&piece(&qe, 0, 2).reversed());
                        let add = vec![six, piece(&pe, 2, 4), piece(&qe, 2, 4)];
                        out.push(("O12", rewrite(&ed.ears, &[p, q, r], add)));
                    }
                }
            }
        }
    }
}

/// O13: an outer ear re-attaches to an adjacent outer ear.
fn rule_o13(ed: &EarDecomposition, layout: &Layout, out: &mut Vec<Candidate>) {
    let g = &ed.graph;
    let attached_to = |a: usize, b: usize| {
        let (x, y) = ed.ears[a].ends();
        layout.ear_of[x] == b || layout.ear_of[y] == b
    };
    for &e in &ed.trivial {
        let (u0, u1) = (g.edge(e).u, g.edge(e).v);
        for (v, w) in [(u0, u1), (u1, u0)] {
            let (p, q) = (layout.ear_of[v], layout.ear_of[w]);
            if p == NO_EAR || q == NO_EAR || p == q || !layout.outer[p] || !layout.outer[q] {
                continue;
            }
            if ed.ears[q].len() == 3 || attached_to(p, q) || attached_to(q, p) {
                continue;
            }
            let pe = &ed.ears[p];
            for pp in [pe.clone(), pe.reversed()] {
                if pp.vertices[1] != v {
                    continue;
                }
                let mut np = pp.clone();
                np.vertices[0] = w;
                np.edges[0] = e;
                out.push(("O13", rewrite(&ed.ears, &[p], vec![np])));
            }
        }
    }
}

fn candidates(ed: &EarDecomposition, layout: &Layout, allow_c: bool) -> Vec<Candidate> {
    let mut out = Vec::new();
    rule_o1(ed, layout, &mut out);
    rule_o2_o3(ed, layout, &mut out);
    rule_b(ed, layout, &mut out);
    if allow_c && holds_ab(ed, layout) {
        rule_o11(ed, layout, &mut out);
        rule_o12(ed, layout, &mut out);
        rule_o13(ed, layout, &mut out);
    }
    out
}

/// One accepted rewrite: the first candidate that yields a valid decomposition of
/// smaller potential. O13 is followed by repairs of (a) and (b) before comparing.
fn step(ed: &EarDecomposition, allow_c: bool, budget: usize) -> Option<(&'static str, EarDecomposition)> {
    let before = Potential::of(ed);
    let layout = ed.layout();
    for (rule, ears) in candidates(ed, &layout, allow_c) {
        let Some(next) = EarDecomposition::from_ears(ed.graph.clone(), ears) else {
            continue;
        };
        let next = if rule == "O13" { repair_ab(next, budget) } else { next };
        if Potential::of(&next) < before {
            return Some((rule, next));
        }
    }
    None
}

fn repair_ab(mut ed: EarDecomposition, budget: usize) -> EarDecomposition {
    for _ in 0..budget {
        if holds_ab(&ed, &ed.layout()) {
            break;
        }
        match step(&ed, false, budget) {
            Some((_, next)) => ed = next,
            None => break,
        }
    }
    ed
}

/// Applies the rewrite rules until none improves the potential, then returns the
/// decomposition with pendant ears last by nonincreasing length.
pub fn normalize(ed: &EarDecomposition) -> Result<EarDecomposition> {
    normalize_traced(ed).map(|(ed, _)| ed)
}

pub fn normalize_traced(ed: &EarDecomposition) -> Result<(EarDecomposition, NormalizeTrace)> {
    let mut cur = EarDecomposition::from_ears(ed.graph.clone(), ed.ears.clone())
        .ok_or_else(|| Error::Structure("input is not an ear-decomposition".into()))?;
    let n = ed.n().max(2);
    let budget = n.pow(4);
    let mut trace = NormalizeTrace::default();
    loop {
        let before = Potential::of(&cur);
        let Some((rule, next)) = step(&cur, true, budget) else {
            return Ok((cur, trace));
        };
        let after = Potential::of(&next);
        assert!(after.even <= before.even, "{rule} increased the even-ear count");
        trace.steps.push((rule, after));
        if trace.steps.len() > budget {
            return Err(Error::Internal(format!(
                "normalization exceeded {budget} steps at potential {after:?}"
            )));
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiGraph;
    use std::sync::Arc;

    fn ear_on(g: &MultiGraph, vs: &[usize]) -> Ear {
        let es = vs.windows(2).map(|w| g.find_edge(w[0], w[1]).unwrap()).collect();
        Ear::new(vs.to_vec(), es)
    }

    #[test]
    fn o1_removes_nonpendant_two_ear() {
        // Circuit 0-1-2-3-0, 2-ear 0-4-2, and a 2-ear 4-5-1 attached at 4.
        let g = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2), (4, 5), (5, 1)])
            .unwrap();
        let ears = vec![
            ear_on(&g, &[0, 1, 2, 3, 0]),
            ear_on(&g, &[0, 4, 2]),
            ear_on(&g, &[4, 5, 1]),
        ];
        let g = Arc::new(g);
        let ed = EarDecomposition::from_ears(g, ears).unwrap();
        let before = ed.trivial.len();
        let (out, trace) = normalize_traced(&ed).unwrap();
        assert_eq!(trace.steps[0].0, "O1");
        assert!(out.trivial.len() > before);
        assert!(out.even_ears() <= ed.even_ears());
    }

    /// Builds the graph from `extra` edges plus the ears, and decomposes it.
    fn build(n: usize, ears: &[&[usize]], extra: &[(usize, usize)]) -> EarDecomposition {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for ear in ears {
            edges.extend(ear.windows(2).map(|w| (w[0], w[1])));
        }
        edges.extend_from_slice(extra);
        let g = MultiGraph::from_edges(n, &edges).unwrap();
        let list = ears.iter().map(|vs| ear_on(&g, vs)).collect();
        EarDecomposition::from_ears(Arc::new(g), list).unwrap()
    }

    fn first_rule(ed: &EarDecomposition) -> (&'static str, EarDecomposition) {
        let (out, trace) = normalize_traced(ed).unwrap();
        assert!(super::super::verify_nice(&out).is_nice());
        (trace.steps[0].0, out)
    }

    #[test]
    fn o8_on_three_ear_at_v1() {
        let ed = build(9, &[&[0, 1, 2, 3, 0], &[1, 4, 5, 0], &[0, 6, 2], &[0, 7, 2], &[0, 8, 2]], &[]);
        assert_eq!(ed.classify_4ear(0).unwrap(), FourEarKind::Other);
        let (rule, out) = first_rule(&ed);
        assert_eq!(rule, "O8");
        assert!(out.ears.iter().any(|e| e.len() >= 5));
    }

    #[test]
    fn o4_uses_edge_to_middle() {
        let ed = build(5, &[&[0, 1, 2, 3, 0], &[1, 4, 3]], &[(4, 2)]);
        assert_eq!(ed.even_ears(), 2);
        let (rule, out) = first_rule(&ed);
        assert_eq!(rule, "O4");
        assert_eq!(out.even_ears(), 0);
        assert_eq!(out.ears[0].len(), 5);
    }

    #[test]
    fn o5_extends_through_middle_of_two_ear() {
        let ed = build(5, &[&[0, 1, 2, 3, 0], &[1, 4, 3]], &[(4, 0)]);
        let (rule, out) = first_rule(&ed);
        assert_eq!(rule, "O5");
        assert_eq!(out.even_ears(), 0);
    }

    #[test]
    fn o6_and_o7() {
        let ed = build(5, &[&[0, 1, 2, 3, 0], &[2, 4, 0]], &[(4, 1)]);
        assert_eq!(first_rule(&ed).0, "O6");
        let ed = build(5, &[&[0, 1, 2, 3, 0], &[2, 4, 0]], &[(1, 3)]);
        let (rule, out) = first_rule(&ed);
        assert_eq!(rule, "O7");
        assert_eq!(out.ears[0].vertices, vec![0, 1, 3, 2, 4, 0]);
    }

    #[test]
    fn o11_merges_adjacent_three_ears() {
        let ed = build(10, &[&[0, 1, 2, 3, 4, 5, 0], &[0, 6, 7, 2], &[3, 8, 9, 5]], &[(7, 8)]);
        let before = ed.trivial.len();
        let (rule, out) = first_rule(&ed);
        assert_eq!(rule, "O11");
        assert_eq!(out.trivial.len(), before + 1);
        assert!(out.ears.iter().any(|e| e.len() == 5));
    }

    #[test]
    fn o12_builds_six_ear() {
        let ed = build(
            13,
            &[&[0, 1, 2, 3, 4, 5, 0], &[0, 6, 7, 8, 2], &[3, 9, 10, 11, 5], &[1, 12, 4]],
            &[(12, 7), (12, 10)],
        );
        let (rule, out) = first_rule(&ed);
        assert_eq!(rule, "O12");
        assert!(out.ears.iter().any(|e| e.len() == 6));
        assert_eq!(out.stats().k4, 0);
    }

    #[test]
    fn o13_reattaches_two_ear_to_middle() {
        let ed = build(10, &[&[0, 1, 2, 3, 4, 5, 0], &[0, 6, 7, 8, 3], &[1, 9, 2]], &[(9, 7)]);
        assert!(!super::super::verify_nice(&ed).c.holds);
        let (rule, out) = first_rule(&ed);
        assert_eq!(rule, "O13");
        let q = out.ears.iter().position(|e| e.vertices == vec![0, 6, 7, 8, 3]).unwrap();
        assert_eq!(out.classify_4ear(q).unwrap(), FourEarKind::Vertical);
    }

    #[test]
    fn normalize_is_idempotent() {
        let ed = build(9, &[&[0, 1, 2, 3, 0], &[1, 4, 5, 0], &[0, 6, 2], &[0, 7, 2], &[0, 8, 2]], &[]);
        let once = normalize(&ed).unwrap();
        assert_eq!(normalize(&once).unwrap(), once);
    }

    #[test]
    fn circuit_is_fixpoint() {
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let ed = EarDecomposition::from_ears(Arc::new(g.clone()), vec![ear_on(&g, &[0, 1, 2, 3, 4, 0])]).unwrap();
        let (out, trace) = normalize_traced(&ed).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(out, ed);
    }
}
