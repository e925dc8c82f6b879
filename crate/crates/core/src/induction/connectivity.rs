use super::circuit::{circuit_tjoin, enhanced_circuit_tjoin, size, Circuit, EnhancedOutcome};
use super::{entry_vertex, Frame, PairClass};
use crate::ear::WellOrientedEarDecomposition;
use crate::error::{Error, Result};
use crate::graph::{sym_diff, EdgeMultiset, VertexSet};
use std::collections::BTreeSet;

/// Result of the induction that uses clean ears for connectivity. Per-ear
/// vectors follow the order of the non-oriented primary ears.
#[derive(Debug, Clone)]
pub struct ConnectivityRun {
    pub tour: EdgeMultiset,
    pub ears: Vec<usize>,
    /// `T_i`, the target before ear `i` is processed.
    pub t_before: Vec<VertexSet>,
    /// `F_i` as local multiplicities on `Circuit::of_ear`, before any flip.
    pub f_local: Vec<Vec<u8>>,
    pub class: Vec<PairClass>,
    /// `gain_i(F_i)` in half units.
    pub gain_halves: Vec<i64>,
    /// `C_i` as clean ear indices.
    pub c: Vec<Vec<usize>>,
    /// Good ears where the enhanced lemma returned an exceptional case and
    /// the plain circuit lemma was used instead.
    pub fallback: Vec<bool>,
    /// Special ears replaced by `E(P_i)` in the post-process.
    pub flipped: Vec<usize>,
    pub t_l: VertexSet,
    /// Size before the special-ear post-process.
    pub unflipped_size: usize,
}

/// Classifies `(P_i, T_i ∩ in(P_i))` for a long ear `i` as bad, special or good.
pub fn classify_pair(w: &WellOrientedEarDecomposition, i: usize, t_in: &VertexSet) -> Result<PairClass> {
    let ear = &w.ed.ears[i];
    let len = ear.len();
    if len < 4 {
        return Err(Error::Argument(format!("ear {} has {len} < 4 edges", i + 1)));
    }
    if w.h[i] != 1 || len % 2 == 1 {
        return Ok(PairClass::Good);
    }
    let wv = entry_vertex(w, w.entering[i][0])?;
    let r = w.root_of[wv];
    let pos = |v: usize| ear.internal().iter().position(|&x| x == v).map(|p| p + 1);
    if len == 4 && t_in.is_empty() {
        return Ok(PairClass::Bad);
    }
    let single_w = t_in.len() == 1 && t_in.contains(&wv);
    if len > 4 && ear.middle() == Some(wv) && single_w && pos(r).is_none() {
        return Ok(PairClass::Bad);
    }
    if len >= 6 {
        if let (Some(a), Some(b)) = (pos(r), pos(wv)) {
            if a.abs_diff(b) == len / 2 && t_in.len() == 2 && t_in.contains(&r) && t_in.contains(&wv) {
                return Ok(PairClass::Special);
            }
        }
    }
    Ok(PairClass::Good)
}

/// `E(P)` with the `w`-`r(w)` path doubled and both copies of its first edge removed.
fn special_join(c: &Circuit, a: usize, b: usize) -> Vec<u8> {
    let (lo, hi) = (a.min(b), a.max(b));
    let mut mult = vec![1u8; c.len()];
    for m in &mut mult[lo..hi] {
        *m = 2;
    }
    mult[lo] = 0;
    mult
}

pub fn induct_connectivity(w: &WellOrientedEarDecomposition, t: &VertexSet) -> Result<ConnectivityRun> {
    let fr = Frame::new(w, t)?;
    connectivity_run(&fr, t)
}

pub(crate) fn connectivity_run(fr: &Frame, t: &VertexSet) -> Result<ConnectivityRun> {
    let w = fr.w;
    let g = fr.g;
    let e_gamma = fr.e_gamma();
    let t_l = sym_diff(t, &e_gamma.odd_vertices(g));
    let k = fr.ears.len();
    let mut run = ConnectivityRun {
        tour: EdgeMultiset::new(),
        ears: fr.ears.clone(),
        t_before: vec![VertexSet::new(); k],
        f_local: vec![Vec::new(); k],
        class: vec![PairClass::Good; k],
        gain_halves: vec![0; k],
        c: vec![Vec::new(); k],
        fallback: vec![false; k],
        flipped: Vec::new(),
        t_l: t_l.clone(),
        unflipped_size: 0,
    };
    let mut cur = t_l;
    for idx in (0..k).rev() {
        let i = fr.ears[idx];
        let ear = &w.ed.ears[i];
        let len = ear.len();
        let circ = Circuit::of_ear(ear);
        let t_in: VertexSet = ear.internal().iter().filter(|v| cur.contains(v)).copied().collect();
        let tp = circ.contract_terminals(&cur);
        let mut cs = Vec::new();
        let (mult, class) = if len < 4 {
            (circuit_tjoin(&circ, &tp)?, PairClass::Short)
        } else {
            match classify_pair(w, i, &t_in)? {
                PairClass::Special => {
                    let wv = fr.entry[w.entering[i][0]];
                    let (a, b) = (circ.position(wv), circ.position(w.root_of[wv]));
                    let (Some(a), Some(b)) = (a, b) else {
                        return Err(Error::Internal(format!("special ear {} lost its pair", i + 1)));
                    };
                    (special_join(&circ, a, b), PairClass::Special)
                }
                PairClass::Good => {
                    let mut u = Vec::new();
                    for &q in &w.entering[i] {
                        let wv = fr.entry[q];
                        let r = w.root_of[wv];
                        let pw = circ
                            .position(wv)
                            .ok_or_else(|| Error::Internal(format!("ear {} enters outside ear {}", q + 1, i + 1)))?;
                        let pr = match circ.position(r) {
                            Some(p) => p,
                            None if fr.rank[r] <= i => 0,
                            None => {
                                return Err(Error::Structure(format!("root {r} of {wv} lies after ear {}", i + 1)))
                            }
                        };
                        u.push((pr, pw));
                    }
                    match enhanced_circuit_tjoin(&circ, &tp, &u)? {
                        EnhancedOutcome::Join { f, c } => {
                            cs = c.into_iter().map(|x| w.entering[i][x]).collect();
                            (f, PairClass::Good)
                        }
                        EnhancedOutcome::CaseI | EnhancedOutcome::CaseII => {
                            run.fallback[idx] = true;
                            (circuit_tjoin(&circ, &tp)?, PairClass::Good)
                        }
                    }
                }
                other => (circuit_tjoin(&circ, &tp)?, other),
            }
        };
        let f = circ.to_multiset(&mult);
        let odd = f.odd_vertices(g);
        let odd_in: VertexSet = ear.internal().iter().filter(|v| odd.contains(v)).copied().collect();
        if odd_in != t_in {
            return Err(Error::Internal(format!("F_{} has odd internal set {odd_in:?}, expected {t_in:?}", i + 1)));
        }
        let next = sym_diff(&cur, &odd);
        if let Some(v) = next.iter().find(|&&v| fr.rank[v] > i) {
            return Err(Error::Internal(format!("T after ear {} contains {v} outside V_{}", i + 1, i)));
        }
        let h = w.h[i] as i64;
        let gain = 3 * (len as i64 - 1) - h - 2 * size(&mult) as i64;
        let checks_gain = class != PairClass::Short;
        if checks_gain && gain < 0 {
            return Err(Error::Internal(format!("gain of ear {} is {gain}/2 < 0", i + 1)));
        }
        if cs.len() as i64 > gain.max(0) {
            return Err(Error::Internal(format!("|C_{}| = {} exceeds 2 gain", i + 1, cs.len())));
        }
        if class == PairClass::Good && !run.fallback[idx] && gain < (h - 1).max(1) {
            return Err(Error::Internal(format!("good ear {} gains only {gain}/2", i + 1)));
        }
        if class == PairClass::Special && (gain != 0 || mult[0] != 1 || mult[len - 1] != 1) {
            return Err(Error::Internal(format!("special ear {} violates its shape", i + 1)));
        }
        run.t_before[idx] = cur;
        run.f_local[idx] = mult;
        run.class[idx] = class;
        run.gain_halves[idx] = gain;
        run.c[idx] = cs;
        cur = next;
    }
    if !cur.is_empty() {
        return Err(Error::Internal(format!("T_0 = {cur:?} is not empty")));
    }

    // Components of G_γ by root; those holding an ear of some C_i make up Ē_γ.
    let comp = |q: usize| w.root_of[fr.entry[q]];
    let used: BTreeSet<usize> = run.c.iter().flatten().map(|&q| comp(q)).collect();
    let with_three: BTreeSet<usize> =
        fr.clean.iter().filter(|&&q| w.ed.ears[q].len() == 3).map(|&q| comp(q)).collect();

    let mut gamma = e_gamma.clone();
    let mut f_final: Vec<Vec<u8>> = run.f_local.clone();
    let total = |gamma: &EdgeMultiset, f: &[Vec<u8>]| gamma.size() + f.iter().map(|m| size(m)).sum::<usize>();
    run.unflipped_size = total(&gamma, &f_final);
    let n = fr.n as i64;
    let lhs = 2 * run.unflipped_size as i64;
    let rhs = 3 * (n - 1) - fr.k(3) as i64 - run.gain_halves.iter().sum::<i64>();
    if lhs != rhs {
        return Err(Error::Internal(format!("counting identity fails: {lhs}/2 != {rhs}/2")));
    }

    let mut done = BTreeSet::new();
    for idx in (0..k).rev() {
        if run.class[idx] != PairClass::Special {
            continue;
        }
        let i = fr.ears[idx];
        let wv = fr.entry[w.entering[i][0]];
        let root = w.root_of[wv];
        if used.contains(&root) || with_three.contains(&root) || !done.insert(root) {
            continue;
        }
        let path = fr.root_path(wv);
        if path.len() % 2 == 1 {
            return Err(Error::Internal(format!("root path of {wv} has odd length")));
        }
        for (pos, &e) in path.iter().enumerate() {
            gamma.set(e, if pos % 2 == 0 { 2 } else { 0 });
        }
        let before = size(&f_final[idx]);
        f_final[idx] = vec![1; w.ed.ears[i].len()];
        if size(&f_final[idx]) >= before {
            return Err(Error::Internal(format!("flipping special ear {} saves nothing", i + 1)));
        }
        run.flipped.push(i);
    }

    let mut tour = gamma;
    for (idx, &i) in fr.ears.iter().enumerate() {
        tour.union(&Circuit::of_ear(&w.ed.ears[i]).to_multiset(&f_final[idx]));
    }
    fr.check_tour(&tour, t, "connectivity-mode tour")?;
    run.tour = tour;
    Ok(run)
}
