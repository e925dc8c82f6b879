use super::OuterOptimization;
use crate::error::{Error, Result};
use crate::{MultiGraph, Rational, VertexSet};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Dual solution of the subtour LP with values in quarter units.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DualSolution {
    /// `(U, y(U) * 4)`, sets sorted, no duplicates.
    pub sets: Vec<(Vec<usize>, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DualViolation {
    Negative { set: Vec<usize>, quarters: i64 },
    InvalidSet(Vec<usize>),
    Edge { edge: usize, load: Rational },
}

impl fmt::Display for DualViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualViolation::Negative { set, quarters } => write!(f, "y({set:?}) = {quarters}/4 is negative"),
            DualViolation::InvalidSet(set) => write!(f, "{set:?} is not a proper nonempty vertex subset"),
            DualViolation::Edge { edge, load } => write!(f, "edge {edge} carries {load} > 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCheck {
    pub feasible: bool,
    pub objective: Rational,
    pub max_stack: Rational,
    pub violations: Vec<DualViolation>,
}

impl DualSolution {
    /// Adds `quarters` to `y(U)`, merging with an existing entry.
    pub fn add(&mut self, set: impl IntoIterator<Item = usize>, quarters: i64) {
        let mut set: Vec<usize> = set.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        match self.sets.binary_search_by(|(s, _)| s.cmp(&set)) {
            Ok(i) => self.sets[i].1 += quarters,
            Err(i) => self.sets.insert(i, (set, quarters)),
        }
    }

    pub fn value(&self, set: &[usize]) -> Rational {
        self.sets
            .iter()
            .find(|(s, _)| s == set)
            .map_or(Rational::from_integer(0), |(_, q)| Rational::new(*q, 4))
    }

    /// `Σ 2y(U) - Σ_{|U ∩ T| odd} y(U)`.
    pub fn objective(&self, terminals: &VertexSet) -> Rational {
        let quarters: i64 = self
            .sets
            .iter()
            .map(|(s, q)| {
                let odd = s.iter().filter(|v| terminals.contains(v)).count() % 2 == 1;
                if odd {
                    *q
                } else {
                    2 * q
                }
            })
            .sum();
        Rational::new(quarters, 4)
    }

    /// One line `y <quarters> <k> <v1> .. <vk>` per set.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, q) in &self.sets {
            out.push_str(&format!("y {q} {}", s.len()));
            for v in s {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<DualSolution> {
        let mut y = DualSolution::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: no + 1,
                msg: msg.to_string(),
            };
            let mut tok = line.split_whitespace();
            if tok.next() != Some("y") {
                return Err(err("expected 'y'"));
            }
            let q: i64 = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("bad value"))?;
            let k: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("bad set size"))?;
            let vs: Vec<usize> = tok
                .map(|t| t.parse().map_err(|_| err("bad vertex")))
                .collect::<Result<_>>()?;
            if vs.len() != k {
                return Err(err(&format!("expected {k} vertices, found {}", vs.len())));
            }
            y.add(vs, q);
        }
        Ok(y)
    }
}

/// Checks nonnegativity, that every set is a proper nonempty subset of `V`,
/// and `Σ_{U : e ∈ δ(U)} y(U) ≤ 1` for every edge, all exactly.
pub fn verify_dual(g: &MultiGraph, y: &DualSolution, terminals: &VertexSet) -> DualCheck {
    let n = g.n();
    let mut violations = Vec::new();
    let mut stack = vec![0i64; n];
    let mut member: Vec<Vec<bool>> = Vec::with_capacity(y.sets.len());
    for (s, q) in &y.sets {
        if *q < 0 {
            violations.push(DualViolation::Negative {
                set: s.clone(),
                quarters: *q,
            });
        }
        if s.is_empty() || s.len() >= n || s.iter().any(|&v| v >= n) {
            violations.push(DualViolation::InvalidSet(s.clone()));
            member.push(vec![false; n]);
            continue;
        }
        let mut inside = vec![false; n];
        for &v in s {
            inside[v] = true;
            stack[v] += q;
        }
        member.push(inside);
    }
    for (id, e) in g.edges().iter().enumerate() {
        let load: i64 = y
            .sets
            .iter()
            .zip(&member)
            .filter(|(_, inside)| inside[e.u] != inside[e.v])
            .map(|((_, q), _)| *q)
            .sum();
        if load > 4 {
            violations.push(DualViolation::Edge {
                edge: id,
                load: Rational::new(load, 4),
            });
        }
    }
    DualCheck {
        feasible: violations.is_empty(),
        objective: y.objective(terminals),
        max_stack: Rational::new(stack.into_iter().max().unwrap_or(0), 4),
        violations,
    }
}

/// Builds `y = y' + y_hor` from the certificate `(W, A')` of the intersection.
pub fn dual_lower_bound(opt: &OuterOptimization) -> Result<DualSolution> {
    let inst = &opt.instance;
    let ed = &opt.optimized.ed;
    let g = &*ed.graph;
    let n = g.n();
    let paths = &inst.paths;
    let mark = |vs: &[usize]| {
        let mut b = vec![false; n];
        for &v in vs {
            b[v] = true;
        }
        b
    };
    let in_hor = mark(&inst.v_hor);
    let in_v = mark(&paths.v_in);
    let in_a = mark(&inst.a);
    let in_a_prime = mark(&opt.certificate.a_prime);

    let mut grouped = vec![false; paths.families.len()];
    for (a, members) in &paths.groups {
        if in_a_prime[*a] {
            for &k in members {
                grouped[k] = true;
            }
        }
    }
    let part_of: BTreeMap<usize, usize> = opt
        .certificate
        .partition
        .iter()
        .enumerate()
        .flat_map(|(i, w)| w.iter().map(move |&v| (v, i)))
        .collect();
    // Part containing U_f, if any, for every f in M-bar.
    let m_bar: Vec<Option<usize>> = paths
        .families
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let p = part_of.get(&f.neighbours[0]).copied()?;
            (!grouped[k] && f.neighbours.iter().all(|u| part_of.get(u) == Some(&p))).then_some(p)
        })
        .collect();

    let mut y = DualSolution::default();
    for v in 0..n {
        if in_hor[v] {
            continue;
        }
        let q = if in_a[v] && !in_a_prime[v] {
            0
        } else if in_v[v] {
            1
        } else {
            2
        };
        if q > 0 {
            y.add([v], q);
        }
    }
    for (i, w) in opt.certificate.partition.iter().enumerate() {
        let mut set = w.clone();
        for (k, f) in paths.families.iter().enumerate() {
            if m_bar[k] == Some(i) {
                set.extend(&f.vertices);
            }
        }
        y.add(set, 1);
    }
    for (k, f) in paths.families.iter().enumerate() {
        if m_bar[k].is_some() {
            y.add(f.vertices.iter().copied(), 1);
        }
    }

    for b in &inst.blocks {
        y.add([b.middle], 4);
        for x in &b.two_ears {
            y.add(x.iter().copied(), 4);
        }
        y.add(b.vertices.iter().copied(), 2);
    }

    let check = verify_dual(g, &y, &opt.terminals);
    if let Some(v) = check.violations.first() {
        return Err(Error::Internal(format!("dual infeasible: {v}")));
    }
    if check.max_stack > Rational::new(3, 2) {
        return Err(Error::Internal(format!("dual stacks {} on a vertex", check.max_stack)));
    }
    let bound = Rational::from_integer(n as i64 - 3) + Rational::new(opt.check.k_clean_secondary as i64, 2);
    if check.objective < bound {
        return Err(Error::Internal(format!(
            "dual objective {} below n - 3 + k_clean_secondary / 2 = {bound}",
            check.objective
        )));
    }
    Ok(y)
}
