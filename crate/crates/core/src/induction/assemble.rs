use super::circuit::{circuit_tjoin, size, Circuit};
use super::connectivity::connectivity_run;
use super::parity::{parity_run, ParityCase, ParityRun};
use super::{check_tour_on, ConnectivityRun, Frame, PairClass};
use crate::ear::{check_two_connected, normalize, open_min_even_ears, EarBackend, EarDecomposition, WellOrientedEarDecomposition};
use crate::error::{Error, Result};
use crate::graph::{st_terminals, sym_diff, EdgeMultiset, MultiGraph, VertexSet};
use crate::outer::{optimize_outer_ears, OuterOptimization};
use crate::Rational;
use serde::{Serialize, Serializer};
use std::sync::Arc;

fn as_text<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Connectivity,
    Parity,
}

/// Per-ear record of both inductions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EarCertificate {
    pub ear: usize,
    pub len: usize,
    pub h: usize,
    pub class: PairClass,
    #[serde(serialize_with = "as_text")]
    pub gain: Rational,
    #[serde(rename = "gain_prime", serialize_with = "as_text")]
    pub gain_prime: Rational,
    pub delta: i64,
    #[serde(rename = "F")]
    pub f: usize,
    #[serde(rename = "F_prime")]
    pub f_prime: usize,
    #[serde(rename = "C")]
    pub c: usize,
    pub parity_case: ParityCase,
    pub fallback: bool,
    pub flipped: bool,
}

/// The three upper bounds, with the counts they are computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionBounds {
    pub n: usize,
    pub k2: usize,
    pub k3: usize,
    pub k4: usize,
    pub k_ge5: usize,
    pub k_bad: usize,
    pub pi: usize,
    #[serde(serialize_with = "as_text")]
    pub connectivity: Rational,
    #[serde(serialize_with = "as_text")]
    pub parity: Rational,
    #[serde(serialize_with = "as_text")]
    pub theorem: Rational,
    /// All short primary ears are oriented, so the bounds apply.
    pub applies: bool,
}

#[derive(Debug, Clone)]
pub struct InductionResult {
    pub tour: EdgeMultiset,
    pub mode: Mode,
    pub parity: ParityRun,
    pub bounds: InductionBounds,
    pub certificates: Vec<EarCertificate>,
}

impl InductionResult {
    pub fn connectivity(&self) -> &ConnectivityRun {
        &self.parity.connectivity
    }

    /// One JSON object per ear.
    pub fn certificate_lines(&self) -> String {
        self.certificates
            .iter()
            .map(|c| serde_json::to_string(c).expect("serializable") + "\n")
            .collect()
    }
}

fn bounds(fr: &Frame, conn: &ConnectivityRun) -> InductionBounds {
    let w = fr.w;
    let r = |a: i64, b: i64| Rational::new(a, b);
    let (k2, k3) = (fr.k(2), fr.k(3));
    let len = |i: usize| w.ed.ears[i].len();
    let k4 = fr.ears.iter().filter(|&&i| len(i) == 4).count();
    let k_ge5 = fr.ears.iter().filter(|&&i| len(i) >= 5).count();
    let k_bad = conn.class.iter().filter(|&&c| c == PairClass::Bad).count();
    let p = w.primary.min(w.ed.ears.len());
    let pi = (0..p).filter(|&i| w.h[i] == 0).count();
    let base = r(3, 2) * Rational::from_integer(fr.n as i64 - 1);
    let mut conn_bound = base - r(7, 20) * Rational::from_integer(k3 as i64);
    for (idx, &i) in fr.ears.iter().enumerate() {
        if matches!(conn.class[idx], PairClass::Good | PairClass::Special) {
            let h = w.h[i] as i64;
            conn_bound -= (r(7, 20) * Rational::from_integer(h - 1)).max(r(3, 20));
        }
    }
    let parity = base + r(1, 2) * Rational::from_integer((k2 + k3) as i64 - k_ge5 as i64)
        + r(1, 2) * Rational::from_integer(k3 as i64)
        - r(1, 2) * Rational::from_integer(k_bad as i64);
    let theorem = base - r(pi as i64, 26) + r(k4 as i64 - 2 * k_ge5 as i64, 26);
    InductionBounds {
        n: fr.n,
        k2,
        k3,
        k4,
        k_ge5,
        k_bad,
        pi,
        connectivity: conn_bound,
        parity,
        theorem,
        applies: fr.standing,
    }
}

/// Runs both inductions on the primary ears and returns the smaller tour;
/// ties go to the connectivity-mode tour.
pub fn best_t_tour(w: &WellOrientedEarDecomposition, t: &VertexSet) -> Result<InductionResult> {
    let fr = Frame::new(w, t)?;
    let conn = connectivity_run(&fr, t)?;
    let parity = parity_run(&fr, t, conn)?;
    let conn = &parity.connectivity;
    let bounds = bounds(&fr, conn);
    let (cs, ps) = (conn.tour.size(), parity.tour.size());
    let (mode, tour) = if cs <= ps {
        (Mode::Connectivity, conn.tour.clone())
    } else {
        (Mode::Parity, parity.tour.clone())
    };
    let certificates = fr
        .ears
        .iter()
        .enumerate()
        .map(|(idx, &i)| EarCertificate {
            ear: i,
            len: w.ed.ears[i].len(),
            h: w.h[i],
            class: conn.class[idx],
            gain: Rational::new(conn.gain_halves[idx], 2),
            gain_prime: Rational::new(parity.gain_prime_halves[idx], 2),
            delta: parity.delta[idx],
            f: size(&conn.f_local[idx]),
            f_prime: size(&parity.f_prime_local[idx]),
            c: conn.c[idx].len(),
            parity_case: parity.case[idx],
            fallback: conn.fallback[idx],
            flipped: conn.flipped.contains(&i),
        })
        .collect();
    Ok(InductionResult {
        tour,
        mode,
        parity,
        bounds,
        certificates,
    })
}

/// Simple induction over a range of ears in reverse order.
#[derive(Debug, Clone, Serialize)]
pub struct SimpleRun {
    pub join: EdgeMultiset,
    /// Target left for the ears before the range.
    pub remaining: VertexSet,
    /// `(ear, |F_i|, γ_i)`.
    pub per_ear: Vec<(usize, usize, bool)>,
}

pub fn simple_induction_range(ed: &EarDecomposition, t: &VertexSet, range: std::ops::Range<usize>) -> Result<SimpleRun> {
    let g = &*ed.graph;
    if t.len() % 2 == 1 {
        return Err(Error::OddTerminals(t.len()));
    }
    let mut cur = t.clone();
    let mut join = EdgeMultiset::new();
    let mut per_ear = Vec::new();
    for i in range.rev() {
        let ear = &ed.ears[i];
        let circ = Circuit::of_ear(ear);
        let tp = circ.contract_terminals(&cur);
        let mult = circuit_tjoin(&circ, &tp)?;
        let gamma = ear.len() <= 3 && tp.is_empty();
        let budget = 3 * (ear.len() as i64 - 1) - 1 + 2 * i64::from(gamma);
        if 2 * size(&mult) as i64 > budget {
            return Err(Error::Internal(format!("F_{} has {} edges, over the bound", i + 1, size(&mult))));
        }
        let f = circ.to_multiset(&mult);
        cur = sym_diff(&cur, &f.odd_vertices(g));
        if let Some(&v) = ear.internal().iter().find(|v| cur.contains(v)) {
            return Err(Error::Internal(format!("{v} stays odd after ear {}", i + 1)));
        }
        join.union(&f);
        per_ear.push((i, size(&mult), gamma));
    }
    per_ear.reverse();
    Ok(SimpleRun {
        join,
        remaining: cur,
        per_ear,
    })
}

/// `T`-tour from the plain circuit lemma applied to every ear in reverse order.
pub fn simple_induction(ed: &EarDecomposition, t: &VertexSet) -> Result<EdgeMultiset> {
    let run = simple_induction_range(ed, t, 0..ed.ears.len())?;
    if !run.remaining.is_empty() {
        return Err(Error::Internal(format!("T_0 = {:?} is not empty", run.remaining)));
    }
    let all = vec![true; ed.graph.n()];
    check_tour_on(&ed.graph, &run.join, t, &all).map_err(|e| Error::Internal(format!("simple induction: {e}")))?;
    Ok(run.join)
}

#[derive(Debug, Clone)]
pub struct ManyPendant {
    pub tour: EdgeMultiset,
    pub pi: usize,
    pub outer: OuterOptimization,
    pub secondary: SimpleRun,
    pub primary: InductionResult,
    pub n_primary: usize,
    /// `n - 3 + k_clean,secondary / 2`, a lower bound on the LP value.
    pub lower_bound: Rational,
    /// `(3/2 - π / (26 (n - 1))) * lower_bound + 3`.
    pub guarantee: Rational,
}

/// `s`-`t`-tour from an optimized decomposition: simple induction on the
/// secondary ears, then the better of the two inductions on the primary ears.
pub fn st_tour_many_pendant(g: &MultiGraph, s: usize, t: usize) -> Result<ManyPendant> {
    check_two_connected(g)?;
    let ed = normalize(&open_min_even_ears(g, EarBackend::Auto)?)?;
    st_tour_many_pendant_from(&ed, s, t)
}

pub fn st_tour_many_pendant_from(ed: &EarDecomposition, s: usize, t: usize) -> Result<ManyPendant> {
    let g: &Arc<MultiGraph> = &ed.graph;
    let n = g.n();
    if s >= n || t >= n {
        return Err(Error::Argument(format!("terminals {s}, {t} out of range")));
    }
    let terminals = st_terminals(s, t);
    let outer = optimize_outer_ears(ed, &terminals)?;
    let woed = &outer.optimized;
    let p = woed.primary;
    let l = woed.ed.ears.len();
    let secondary = simple_induction_range(&woed.ed, &terminals, p..l)?;
    let primary = best_t_tour(woed, &secondary.remaining)?;
    let n_primary = primary.bounds.n;
    let kcs = outer.check.k_clean_secondary as i64;
    let budget = 3 * (n - n_primary) as i64 - (l - p) as i64 + 2 * kcs;
    if 2 * secondary.join.size() as i64 > budget {
        return Err(Error::Internal(format!(
            "secondary ears use {} edges, over {budget}/2",
            secondary.join.size()
        )));
    }
    let mut tour = secondary.join.clone();
    tour.union(&primary.tour);
    let all = vec![true; n];
    check_tour_on(g, &tour, &terminals, &all).map_err(|e| Error::Internal(format!("s-t-tour: {e}")))?;
    let pi = woed.pi;
    let lower_bound = Rational::from_integer(n as i64 - 3) + Rational::new(kcs, 2);
    let guarantee = if n > 1 {
        (Rational::new(3, 2) - Rational::new(pi as i64, 26 * (n as i64 - 1))) * lower_bound + 3
    } else {
        Rational::from_integer(0)
    };
    Ok(ManyPendant {
        tour,
        pi,
        outer,
        secondary,
        primary,
        n_primary,
        lower_bound,
        guarantee,
    })
}
