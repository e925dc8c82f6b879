//! Cutting-plane oracle for the path-TSP cut relaxation
//!
//! ```text
//! min c(x)  s.t.  x(δ(U)) ≥ 2 if |U ∩ T| is even, ≥ 1 if odd,  x ≥ 0
//! ```
//!
//! with `T = {s} △ {t}`. The dual `max Σ b_U y_U, Σ_{U: e ∈ δ(U)} y_U ≤ c_e`
//! starts feasible at `y = 0`, so the simplex runs on the dual and every
//! separated cut becomes a new dual column. The primal point is read off
//! the slack prices.

use crate::error::{Error, Result};
use crate::graph::{MultiGraph, ProblemInstance};
use crate::scalar::Scalar;
use crate::BigRational;
use std::collections::{BTreeSet, VecDeque};

pub const DEFAULT_LP_LIMIT: usize = 40;

/// A cut `δ(U)` with `U` normalised to contain vertex 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cut {
    pub side: Vec<usize>,
    pub rhs: i64,
}

#[derive(Debug, Clone)]
pub struct LpSolution<S> {
    pub value: S,
    /// Optimal primal point, one entry per edge.
    pub x: Vec<S>,
    /// Cuts in the final model with their dual values.
    pub cuts: Vec<(Cut, S)>,
    pub rounds: usize,
}

/// Exact LP value with [`BigRational`] pivoting.
pub fn lp_value(inst: &ProblemInstance, limit: usize) -> Result<LpSolution<BigRational>> {
    solve_cut_lp(inst, limit)
}

pub fn solve_cut_lp<S: Scalar>(inst: &ProblemInstance, limit: usize) -> Result<LpSolution<S>> {
    let g = &inst.graph;
    let n = g.n();
    if n > limit {
        return Err(Error::TooLarge { what: "LP oracle", size: n, limit });
    }
    if n <= 1 {
        return Ok(LpSolution { value: S::zero(), x: vec![S::zero(); g.m()], cuts: Vec::new(), rounds: 0 });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (s, t) = (inst.s, inst.t);
    let mut model = DualSimplex::<S>::new(g);
    let mut known = BTreeSet::new();
    for v in 0..n {
        let cut = make_cut(n, &[v], s, t);
        if known.insert(cut.clone()) {
            model.add_cut(g, cut);
        }
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        model.optimise()?;
        let x = model.primal();
        let mut fresh = 0;
        for cut in separate(g, &x, s, t) {
            if known.insert(cut.clone()) {
                model.add_cut(g, cut);
                fresh += 1;
            }
        }
        if fresh == 0 {
            break;
        }
    }
    let x = model.primal();
    let value = model.objective();
    let primal: S = g.edges().iter().zip(&x).fold(S::zero(), |acc, (e, xe)| acc + S::from_u64(e.w).unwrap() * xe.clone());
    if S::EXACT && primal != value {
        return Err(Error::Internal(format!("primal {primal} and dual {value} differ")));
    }
    Ok(LpSolution { value, x, cuts: model.cut_values(), rounds })
}

fn make_cut(n: usize, side: &[usize], s: usize, t: usize) -> Cut {
    let inside: BTreeSet<usize> = side.iter().copied().collect();
    let side: Vec<usize> = if inside.contains(&0) {
        inside.into_iter().collect()
    } else {
        (0..n).filter(|v| !inside.contains(v)).collect()
    };
    let odd = (side.contains(&s) != side.contains(&t)) as i64;
    Cut { side, rhs: 2 - odd }
}

/// Violated cuts: the minimum `s`-`t` cut against 1, and with `s` and `t`
/// merged, the minimum cut to each other vertex against 2.
fn separate<S: Scalar>(g: &MultiGraph, x: &[S], s: usize, t: usize) -> Vec<Cut> {
    let n = g.n();
    let mut cap = vec![vec![S::zero(); n]; n];
    for (e, xe) in g.edges().iter().zip(x) {
        cap[e.u][e.v] += xe.clone();
        cap[e.v][e.u] += xe.clone();
    }
    let mut out = Vec::new();
    let two = S::from_i64(2).unwrap();
    if s != t {
        let (val, side) = max_flow(&cap, &[s], t);
        if (S::one() - val).is_pos() {
            out.push(make_cut(n, &side, s, t));
        }
    }
    for v in 0..n {
        if v == s || v == t {
            continue;
        }
        let (val, side) = max_flow(&cap, &[s, t], v);
        if (two.clone() - val).is_pos() {
            out.push(make_cut(n, &side, s, t));
        }
    }
    out
}

/// Edmonds–Karp from a set of sources; returns the value and the source side
/// of a minimum cut.
fn max_flow<S: Scalar>(cap: &[Vec<S>], sources: &[usize], sink: usize) -> (S, Vec<usize>) {
    let n = cap.len();
    let mut flow = vec![vec![S::zero(); n]; n];
    let residual = |flow: &Vec<Vec<S>>, u: usize, v: usize| cap[u][v].clone() - flow[u][v].clone();
    let mut total = S::zero();
    loop {
        let mut prev = vec![usize::MAX; n];
        let mut queue: VecDeque<usize> = sources.iter().copied().collect();
        for &src in sources {
            prev[src] = src;
        }
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for v in 0..n {
                if prev[v] == usize::MAX && residual(&flow, u, v).is_pos() {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            let side = (0..n).filter(|&v| prev[v] != usize::MAX).collect();
            return (total, side);
        }
        let mut push: Option<S> = None;
        let mut v = sink;
        while prev[v] != v {
            let u = prev[v];
            let r = residual(&flow, u, v);
            push = Some(match push {
                Some(p) if p < r => p,
                _ => r,
            });
            v = u;
        }
        let push = push.expect("sink differs from the sources");
        let mut v = sink;
        while prev[v] != v {
            let u = prev[v];
            flow[u][v] += push.clone();
            flow[v][u] -= push.clone();
            v = u;
        }
        total += push;
    }
}

/// Tableau for `max b·y, A^T y + r = c, y, r ≥ 0`: one row per edge, one
/// column per cut followed by one slack column per edge.
struct DualSimplex<S> {
    m: usize,
    cuts: Vec<Cut>,
    /// Rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<S>>,
    /// Reduced costs `z_j - b_j`, one per column in the same layout.
    reduced: Vec<S>,
    objective: S,
    /// Basic column per row; cut columns are `0..k`, slack `e` is `SLACK + e`.
    basis: Vec<usize>,
}

const SLACK: usize = usize::MAX / 2;

impl<S: Scalar> DualSimplex<S> {
    fn new(g: &MultiGraph) -> Self {
        let m = g.m();
        let rows = (0..m)
            .map(|i| {
                let mut r = vec![S::zero(); m + 1];
                r[i] = S::one();
                r[m] = S::from_u64(g.edge(i).w).unwrap();
                r
            })
            .collect();
        DualSimplex {
            m,
            cuts: Vec::new(),
            rows,
            reduced: vec![S::zero(); m],
            objective: S::zero(),
            basis: (0..m).map(|e| SLACK + e).collect(),
        }
    }

    fn k(&self) -> usize {
        self.cuts.len()
    }

    /// Column index of slack `e` inside a row.
    fn slack_col(&self, e: usize) -> usize {
        self.k() + e
    }

    fn add_cut(&mut self, g: &MultiGraph, cut: Cut) {
        let inside = {
            let mut v = vec![false; g.n()];
            for &x in &cut.side {
                v[x] = true;
            }
            v
        };
        let crossing: Vec<usize> = g.edges().iter().filter(|e| inside[e.u] != inside[e.v]).map(|e| e.id).collect();
        let k = self.k();
        // Column in the current basis is B^{-1} a, read from the slack block.
        for row in &mut self.rows {
            let mut val = S::zero();
            for &e in &crossing {
                val += row[k + e].clone();
            }
            row.insert(k, val);
        }
        let mut red = -S::from_i64(cut.rhs).unwrap();
        for &e in &crossing {
            red += self.reduced[k + e].clone();
        }
        self.reduced.insert(k, red);
        self.cuts.push(cut);
    }

    fn col_id(&self, j: usize) -> usize {
        if j < self.k() {
            j
        } else {
            SLACK + (j - self.k())
        }
    }

    fn optimise(&mut self) -> Result<()> {
        let width = self.k() + self.m;
        loop {
            // Bland's rule on a fixed column order: cuts first, then slacks.
            let Some(enter) = (0..width).find(|&j| self.reduced[j].is_neg()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_pos() {
                    continue;
                }
                let ratio = row[width].clone() / row[enter].clone();
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Infeasible("cut relaxation has no feasible point".into()));
            };
            self.pivot(r, enter);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in &mut self.rows[r] {
            *v /= p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= f.clone() * pv.clone();
                }
            }
        }
        let f = self.reduced[c].clone();
        let width = pivot_row.len() - 1;
        for (v, pv) in self.reduced.iter_mut().zip(&pivot_row[..width]) {
            *v -= f.clone() * pv.clone();
        }
        self.objective -= f * pivot_row[width].clone();
        self.basis[r] = self.col_id(c);
    }

    fn objective(&self) -> S {
        self.objective.clone()
    }

    /// Slack prices `x_e`.
    fn primal(&self) -> Vec<S> {
        (0..self.m).map(|e| self.reduced[self.slack_col(e)].clone()).collect()
    }

    fn cut_values(&self) -> Vec<(Cut, S)> {
        let width = self.k() + self.m;
        let mut y = vec![S::zero(); self.k()];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < SLACK {
                y[b] = self.rows[i][width].clone();
            }
        }
        self.cuts.iter().cloned().zip(y).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, t: usize) -> ProblemInstance {
        let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ProblemInstance::new(MultiGraph::from_edges(n, &e).unwrap(), 0, t).unwrap()
    }

    #[test]
    fn circuit_values() {
        for n in 3..=9 {
            if n % 2 == 0 {
                let lp = lp_value(&cycle(n, n / 2), 40).unwrap();
                assert_eq!(lp.value, BigRational::from_integer(n.into()));
            }
            let lp = lp_value(&cycle(n, 0), 40).unwrap();
            assert_eq!(lp.value, BigRational::from_integer(n.into()));
        }
    }

    #[test]
    fn path_is_tight() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let lp = lp_value(&ProblemInstance::new(g, 0, 3).unwrap(), 40).unwrap();
        assert_eq!(lp.value, BigRational::from_integer(3.into()));
    }

    #[test]
    fn refuses_large() {
        assert!(matches!(lp_value(&cycle(12, 6), 10), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn float_scalar_agrees() {
        let lp: LpSolution<f64> = solve_cut_lp(&cycle(8, 4), 40).unwrap();
        assert!((lp.value - 8.0).abs() < 1e-9);
    }
}
