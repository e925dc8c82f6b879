use super::circuit::{circuit_tjoin, circuit_tjoin_with_parity_twin, size, Circuit};
use super::connectivity::{connectivity_run, ConnectivityRun};
use super::{Frame, PairClass};
use crate::ear::WellOrientedEarDecomposition;
use crate::error::{Error, Result};
use crate::graph::{sym_diff, toggle, EdgeMultiset, VertexSet};
use serde::Serialize;

/// Which construction produced `F'_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCase {
    /// Bad ear with at least five edges, sides of unequal colour counts.
    BadUnequal,
    /// Bad ear with at least five edges, both sides balanced.
    BadBalanced,
    /// Circuit lemma with a parity twin, picking the better endpoint parity.
    Twin,
    /// Bad 4-ear with `T'_i = ∅`: `F'_i = F_i`.
    Reuse,
    /// 4-ear that is not bad: plain circuit lemma.
    Plain,
    /// Short non-oriented ear: plain circuit lemma.
    Short,
}

impl ParityCase {
    /// Lower bound on `gain'_i - Δ_i / 4`, in quarter units.
    pub fn required_quarters(self) -> Option<i64> {
        match self {
            ParityCase::BadUnequal | ParityCase::BadBalanced => Some(4),
            ParityCase::Twin | ParityCase::Reuse => Some(2),
            ParityCase::Plain => Some(0),
            ParityCase::Short => None,
        }
    }
}

/// Result of the induction that uses clean ears for parity correction.
#[derive(Debug, Clone)]
pub struct ParityRun {
    pub tour: EdgeMultiset,
    pub connectivity: ConnectivityRun,
    /// `T'_i` before ear `i` is processed.
    pub t_prime_before: Vec<VertexSet>,
    pub f_prime_local: Vec<Vec<u8>>,
    pub case: Vec<ParityCase>,
    /// `gain'_i(F'_i)` in half units.
    pub gain_prime_halves: Vec<i64>,
    pub delta: Vec<i64>,
    /// `w` for ears with `W_i = {w}`.
    pub w_vertex: Vec<Option<usize>>,
    pub t_gamma: VertexSet,
    /// The `T^γ_0`-join inside `E_γ`.
    pub j: EdgeMultiset,
    pub h: EdgeMultiset,
}

pub fn induct_parity(w: &WellOrientedEarDecomposition, t: &VertexSet) -> Result<ParityRun> {
    let fr = Frame::new(w, t)?;
    let conn = connectivity_run(&fr, t)?;
    parity_run(&fr, t, conn)
}

/// Bad ear with at least five edges entered at its middle vertex: double
/// one colour class on each side of the middle.
fn bad_split(c: &Circuit, t_prime: &VertexSet, f: &[u8]) -> (Vec<u8>, ParityCase) {
    let len = c.len();
    let m = len / 2;
    let mut red = vec![false; len];
    let mut colour = true;
    for (j, r) in red.iter_mut().enumerate() {
        *r = colour;
        if j + 1 < len && t_prime.contains(&c.labels[j + 1]) {
            colour = !colour;
        }
    }
    let count = |range: std::ops::Range<usize>, want: bool| range.filter(|&j| red[j] == want).count();
    let (r1, b1, r2, b2) = (count(0..m, true), count(0..m, false), count(m..len, true), count(m..len, false));
    let (x1, x2, case) = if r1 != b1 || r2 != b2 {
        (r1 <= b1, r2 <= b2, ParityCase::BadUnequal)
    } else {
        // Edge 0 is doubled exactly when it is even in F_i, likewise the last edge.
        let x1 = red[0] == (f[0] % 2 == 0);
        let x2 = red[len - 1] == (f[len - 1] % 2 == 0);
        (x1, x2, ParityCase::BadBalanced)
    };
    let mut mult: Vec<u8> = (0..len)
        .map(|j| {
            let want = if j < m { x1 } else { x2 };
            if red[j] == want {
                2
            } else {
                1
            }
        })
        .collect();
    if let Some(j) = (0..len).find(|&j| mult[j] == 2) {
        mult[j] = 0;
    }
    (mult, case)
}

pub(crate) fn parity_run(fr: &Frame, t: &VertexSet, conn: ConnectivityRun) -> Result<ParityRun> {
    let w = fr.w;
    let g = fr.g;
    let k = fr.ears.len();
    let mut run = ParityRun {
        tour: EdgeMultiset::new(),
        t_prime_before: vec![VertexSet::new(); k],
        f_prime_local: vec![Vec::new(); k],
        case: vec![ParityCase::Plain; k],
        gain_prime_halves: vec![0; k],
        delta: vec![0; k],
        w_vertex: vec![None; k],
        t_gamma: VertexSet::new(),
        j: EdgeMultiset::new(),
        h: EdgeMultiset::new(),
        connectivity: conn,
    };
    let conn = &run.connectivity;
    let mut cur = conn.t_l.clone();
    let mut t_gamma = VertexSet::new();
    for idx in (0..k).rev() {
        let i = fr.ears[idx];
        let ear = &w.ed.ears[i];
        let len = ear.len();
        let circ = Circuit::of_ear(ear);
        let class = conn.class[idx];
        let t_i = &conn.t_before[idx];
        let t_prev = if idx > 0 { conn.t_before[idx - 1].clone() } else { VertexSet::new() };
        let tp = circ.contract_terminals(&cur);
        let t_in: VertexSet = ear.internal().iter().filter(|v| cur.contains(v)).copied().collect();
        let w_i = (class == PairClass::Bad && len != 4).then(|| fr.entry[w.entering[i][0]]);

        // T'_{i-1}, the T^γ toggle and Δ_i for a candidate F'_i.
        let before = sym_diff(t_i, &cur).len() as i64;
        let advance = |mult: &[u8]| -> (VertexSet, bool, i64) {
            let odd = circ.to_multiset(mult).odd_vertices(g);
            let mut next = sym_diff(&cur, &odd);
            let flip = w_i.is_some_and(|wv| odd.contains(&wv) != cur.contains(&wv));
            if flip {
                let wv = w_i.unwrap();
                toggle(&mut next, wv);
                toggle(&mut next, w.root_of[wv]);
            }
            let delta = sym_diff(&t_prev, &next).len() as i64 - before;
            (next, flip, delta)
        };

        let (mult, case) = if len < 4 {
            (circuit_tjoin(&circ, &tp)?, ParityCase::Short)
        } else if class == PairClass::Bad && len >= 5 {
            bad_split(&circ, &t_in, &conn.f_local[idx])
        } else if len >= 5 || class == PairClass::Bad {
            if len >= 5 || !tp.is_empty() {
                let (f, twin) = circuit_tjoin_with_parity_twin(&circ, &tp)?;
                let best = match twin {
                    Some(t2) if advance(&t2).2 < advance(&f).2 => t2,
                    _ => f,
                };
                (best, ParityCase::Twin)
            } else {
                (conn.f_local[idx].clone(), ParityCase::Reuse)
            }
        } else {
            (circuit_tjoin(&circ, &tp)?, ParityCase::Plain)
        };

        let odd = circ.to_multiset(&mult).odd_vertices(g);
        for &v in ear.internal() {
            if Some(v) != w_i && odd.contains(&v) != cur.contains(&v) {
                return Err(Error::Internal(format!("F'_{} has the wrong parity at {v}", i + 1)));
            }
        }
        let (next, flip, delta) = advance(&mult);
        if flip {
            let wv = w_i.unwrap();
            toggle(&mut t_gamma, wv);
            toggle(&mut t_gamma, w.root_of[wv]);
        }
        if let Some(v) = next.iter().find(|&&v| fr.rank[v] > i) {
            return Err(Error::Internal(format!("T' after ear {} contains {v} outside V_{}", i + 1, i)));
        }
        if delta % 2 != 0 || delta > 2 {
            return Err(Error::Internal(format!("Δ_{} = {delta}", i + 1)));
        }
        let gain = 3 * (len as i64 - 1) - 2 * size(&mult) as i64;
        if let Some(req) = case.required_quarters() {
            if 2 * gain - delta < req {
                return Err(Error::Internal(format!(
                    "ear {} ({case:?}): gain' - Δ/4 = {}/4 below {req}/4",
                    i + 1,
                    2 * gain - delta
                )));
            }
        }
        run.t_prime_before[idx] = cur;
        run.f_prime_local[idx] = mult;
        run.case[idx] = case;
        run.gain_prime_halves[idx] = gain;
        run.delta[idx] = delta;
        run.w_vertex[idx] = w_i;
        cur = next;
    }
    if !cur.is_empty() {
        return Err(Error::Internal(format!("T'_0 = {cur:?} is not empty")));
    }
    let sum: i64 = run.delta.iter().sum();
    if sum != 0 {
        return Err(Error::Internal(format!("Δ sums to {sum}")));
    }

    // T^γ-join in the branching: an edge is in J iff the subtree below it
    // holds an odd number of T^γ vertices.
    let n_all = g.n();
    let depth: Vec<usize> = (0..n_all)
        .map(|v| {
            let (mut d, mut x) = (0, v);
            while let Some(e) = fr.parent[x] {
                x = w.direction[e].unwrap().0;
                d += 1;
            }
            d
        })
        .collect();
    let mut order: Vec<usize> = (0..n_all).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(depth[v]));
    let mut odd_below: Vec<bool> = (0..n_all).map(|v| t_gamma.contains(&v)).collect();
    let mut j = EdgeMultiset::new();
    for &v in &order {
        if let Some(e) = fr.parent[v] {
            if odd_below[v] {
                j.add(e, 1);
                let up = w.direction[e].unwrap().0;
                odd_below[up] ^= true;
            }
        } else if odd_below[v] {
            return Err(Error::Internal(format!("E_γ has no T^γ-join: component of {v} is odd")));
        }
    }
    let mut h = EdgeMultiset::new();
    for &q in &fr.clean {
        let edges = &w.ed.ears[q].edges;
        let inside = edges.iter().filter(|&&e| j.contains(e)).count();
        if inside == edges.len() {
            for &e in &edges[..edges.len() - 1] {
                h.add(e, 2);
            }
        } else if inside == 0 {
            for &e in edges {
                h.add(e, 1);
            }
        } else {
            return Err(Error::Internal(format!("J splits clean ear {}", q + 1)));
        }
    }
    let mut tour = h.clone();
    for (idx, &i) in fr.ears.iter().enumerate() {
        tour.union(&Circuit::of_ear(&w.ed.ears[i]).to_multiset(&run.f_prime_local[idx]));
    }
    fr.check_tour(&tour, t, "parity-mode tour")?;
    run.tour = tour;
    run.t_gamma = t_gamma;
    run.j = j;
    run.h = h;
    Ok(run)
}
