//! Prefix dynamic program over a distance embedding, and the recursion that
//! uses it to improve an `s`-`t`-tour solver on instances where `s` and `t`
//! are far apart.

use crate::error::{Error, Result};
use crate::graph::{block_decompose, is_t_tour, shortest_distances, st_terminals, EdgeMultiset, MultiGraph, ProblemInstance};
use crate::BigRational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use std::cell::RefCell;
use std::collections::HashMap;

/// `s`-`t`-tour solver for a connected instance; returns a multiset over the
/// instance's own edge ids.
pub type Solver<'a> = dyn Fn(&MultiGraph, usize, usize) -> Result<EdgeMultiset> + 'a;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub f: Vec<u64>,
    /// `v_1, .., v_n`: `s` first, `t` last (when distinct), `f` nondecreasing.
    pub order: Vec<usize>,
    pub pos: Vec<usize>,
}

/// `f(v) = min(dist(s, v), dist(s, t))`, with ties in the order broken by id.
pub fn embed(g: &MultiGraph, s: usize, t: usize) -> Result<Embedding> {
    let n = g.n();
    if s >= n || t >= n {
        return Err(Error::Argument(format!("terminals {s}, {t} out of range")));
    }
    let dist = shortest_distances(g, s)?;
    let cap = dist[t];
    let f: Vec<u64> = dist.iter().map(|&d| d.min(cap)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let rank = |v: usize| (v != s, s != t && v == t, f[v], v);
    order.sort_by_key(|&v| rank(v));
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for e in g.edges() {
        if f[e.u].abs_diff(f[e.v]) > e.w {
            return Err(Error::Internal(format!("edge {} is shorter than its embedded length", e.id)));
        }
    }
    Ok(Embedding { f, order, pos })
}

/// A node `(U, u, w)` of the prefix digraph with `U = {v_1, .., v_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DpNode {
    pub k: usize,
    pub u: Option<usize>,
    pub w: Option<usize>,
    pub edge: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DpTour {
    pub tour: EdgeMultiset,
    pub length: u64,
    /// The shortest path from the source to the sink, both included.
    pub path: Vec<DpNode>,
    /// Length of the subroutine's tour on the whole graph (the direct arc).
    pub direct_length: u64,
    /// Distinct sub-instances handed to the subroutine.
    pub subproblems: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct DpConfig {
    /// Upper limit on the sub-instances one pass may solve.
    pub max_subproblems: usize,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig { max_subproblems: 100_000 }
    }
}

type Key = (usize, usize, usize, usize);

struct Segments<'a> {
    g: &'a MultiGraph,
    emb: &'a Embedding,
    solver: &'a Solver<'a>,
    cache: HashMap<Key, Option<(u64, EdgeMultiset)>>,
}

impl Segments<'_> {
    /// Subroutine tour from `w` to `u` in `G[{v_k, .., v_{k'-1}}]`; `None` if
    /// that subgraph is disconnected.
    fn tour(&mut self, k: usize, k2: usize, w: usize, u: usize) -> Result<Option<(u64, EdgeMultiset)>> {
        if let Some(hit) = self.cache.get(&(k, k2, w, u)) {
            return Ok(hit.clone());
        }
        let vertices = &self.emb.order[k..k2];
        let (sub, vmap, emap) = self.g.induced(vertices);
        let out = if sub.is_connected() {
            let local = |x: usize| vmap.iter().position(|&y| y == x).expect("in segment");
            let j = (self.solver)(&sub, local(w), local(u)).map_err(|e| {
                Error::Internal(format!("subroutine failed on {vertices:?} from {w} to {u}: {e}"))
            })?;
            let j = j.mapped(&emap);
            Some((j.weight(self.g), j))
        } else {
            None
        };
        self.cache.insert((k, k2, w, u), out.clone());
        Ok(out)
    }
}

/// Candidate `(k, w)` entry points and `(k', u')` exit points, as the prefix
/// digraph allows them.
fn crossing(g: &MultiGraph, emb: &Embedding) -> (Vec<Vec<usize>>, Vec<Vec<(usize, usize)>>) {
    let n = g.n();
    // enter[k]: vertices w outside U_k with an edge into U_k; exits[k]: (u, e) leaving U_k.
    let mut enter = vec![Vec::new(); n + 1];
    let mut exits = vec![Vec::new(); n + 1];
    for e in g.edges() {
        let (a, b) = if emb.pos[e.u] < emb.pos[e.v] { (e.u, e.v) } else { (e.v, e.u) };
        for k in emb.pos[a] + 1..=emb.pos[b] {
            enter[k].push(b);
            exits[k].push((a, e.id));
        }
    }
    for v in &mut enter {
        v.sort_unstable();
        v.dedup();
    }
    (enter, exits)
}

/// Shortest source-sink path in the prefix digraph, with arc weights from `solver`.
pub fn dp_tour(g: &MultiGraph, s: usize, t: usize, solver: &Solver<'_>, config: DpConfig) -> Result<DpTour> {
    let n = g.n();
    let emb = embed(g, s, t)?;
    let (mut enter, exits) = crossing(g, &emb);
    enter[0] = vec![s];
    let exit_vertices = |k2: usize| -> Vec<usize> {
        if k2 == n {
            return vec![t];
        }
        let mut us: Vec<usize> = exits[k2].iter().map(|&(u, _)| u).collect();
        us.sort_unstable();
        us.dedup();
        us
    };
    let mut planned = 0usize;
    for k in 0..n {
        for k2 in k + 1..=n {
            let inside = |v: usize| (k..k2).contains(&emb.pos[v]);
            let ws = enter[k].iter().filter(|&&w| inside(w)).count();
            let us = exit_vertices(k2).into_iter().filter(|&u| inside(u)).count();
            planned += ws * us;
        }
    }
    if planned > config.max_subproblems {
        return Err(Error::TooLarge {
            what: "prefix dynamic program",
            size: planned,
            limit: config.max_subproblems,
        });
    }

    let mut seg = Segments {
        g,
        emb: &emb,
        solver,
        cache: HashMap::new(),
    };
    // Nodes: (node, dist, pred) with pred = (k, w, previous node).
    let mut nodes: Vec<(DpNode, u64, Option<(usize, usize, usize)>)> = vec![(
        DpNode {
            k: 0,
            u: None,
            w: Some(s),
            edge: None,
        },
        0,
        None,
    )];
    // best[k][w] = cheapest node at level k entering at w.
    let mut best: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n + 1];
    best[0].insert(s, 0);
    let mut sink: Option<(u64, usize, usize, usize)> = None;
    for k2 in 1..=n {
        for u in exit_vertices(k2) {
            let pu = emb.pos[u];
            if pu >= k2 {
                continue;
            }
            let mut arrive: Option<(u64, usize, usize, usize)> = None;
            for k in 0..=pu {
                let mut entries: Vec<(&usize, &usize)> = best[k].iter().collect();
                entries.sort_unstable();
                for (&w, &id) in entries {
                    if emb.pos[w] >= k2 {
                        continue;
                    }
                    let Some((len, _)) = seg.tour(k, k2, w, u)? else { continue };
                    let total = nodes[id].1 + len;
                    if arrive.map_or(true, |a| total < a.0) {
                        arrive = Some((total, k, w, id));
                    }
                }
            }
            let Some(arrive) = arrive else { continue };
            if k2 == n {
                sink = Some(arrive);
                continue;
            }
            for &(a, e) in &exits[k2] {
                if a != u {
                    continue;
                }
                let w2 = g.edge(e).other(u);
                let dist = arrive.0 + g.edge(e).w;
                let id = nodes.len();
                nodes.push((
                    DpNode {
                        k: k2,
                        u: Some(u),
                        w: Some(w2),
                        edge: Some(e),
                    },
                    dist,
                    Some((arrive.1, arrive.2, arrive.3)),
                ));
                let slot = best[k2].entry(w2).or_insert(id);
                if nodes[*slot].1 > dist {
                    *slot = id;
                }
            }
        }
    }
    let (length, mut k, mut w, mut id) = sink.ok_or_else(|| Error::Internal("sink unreachable in the prefix digraph".into()))?;
    let mut tour = EdgeMultiset::new();
    let mut path = vec![DpNode {
        k: n,
        u: Some(t),
        w: None,
        edge: None,
    }];
    let mut exit = (n, t);
    loop {
        let (_, part) = seg.tour(k, exit.0, w, exit.1)?.expect("cached");
        tour.union(&part);
        let (node, _, pred) = &nodes[id];
        path.push(node.clone());
        if let Some(e) = node.edge {
            tour.add(e, 1);
        }
        match pred {
            Some(p) => {
                exit = (node.k, node.u.expect("internal node"));
                (k, w, id) = *p;
            }
            None => break,
        }
    }
    path.reverse();
    let check = is_t_tour(g, &tour, &st_terminals(s, t));
    if !check.is_valid() {
        return Err(Error::Internal(format!("prefix tour: {:?}", check.violations)));
    }
    if tour.weight(g) != length {
        return Err(Error::Internal(format!("prefix tour weighs {} instead of {length}", tour.weight(g))));
    }
    let direct_length = seg.tour(0, n, s, t)?.map(|(l, _)| l).ok_or(Error::Disconnected)?;
    if length > direct_length {
        return Err(Error::Internal("the direct arc was not considered".into()));
    }
    Ok(DpTour {
        tour,
        length,
        path,
        direct_length,
        subproblems: seg.cache.len(),
    })
}

/// Runs `solver` on every block of the instance with its own terminal pair.
pub fn solve_by_blocks(g: &MultiGraph, s: usize, t: usize, solver: &Solver<'_>) -> Result<EdgeMultiset> {
    let inst = ProblemInstance::new(g.clone(), s, t)?;
    let tree = block_decompose(&inst);
    let mut tour = EdgeMultiset::new();
    for b in &tree.blocks {
        if b.vertices.len() <= 1 {
            continue;
        }
        let (sub, vmap, emap) = g.induced(&b.vertices);
        let local = |x: usize| vmap.iter().position(|&y| y == x).expect("block terminal");
        tour.union(&solver(&sub, local(b.s), local(b.t))?.mapped(&emap));
    }
    Ok(tour)
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelRecord {
    pub level: usize,
    pub direct: u64,
    /// `None` when the prefix program was too large and skipped.
    pub dp: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecursiveOutcome {
    pub tour: EdgeMultiset,
    pub length: u64,
    /// Top-level comparison per block, for the outermost level.
    pub levels: Vec<LevelRecord>,
}

fn level_solver<'a>(level: usize, base: &'a Solver<'a>, config: DpConfig) -> Box<Solver<'a>> {
    if level == 0 {
        return Box::new(move |g: &MultiGraph, s, t| base(g, s, t));
    }
    Box::new(move |g: &MultiGraph, s, t| {
        let inner = level_solver(level - 1, base, config);
        solve_by_blocks(g, s, t, &|b: &MultiGraph, bs, bt| {
            let direct = inner(b, bs, bt)?;
            match dp_tour(b, bs, bt, &*inner, config) {
                Ok(dp) if dp.length < direct.weight(b) => Ok(dp.tour),
                Ok(_) | Err(Error::TooLarge { .. }) => Ok(direct),
                Err(e) => Err(e),
            }
        })
    })
}

/// Level 0 is `base`; level `i` takes, per block, the shorter of the level
/// `i - 1` tour and the prefix program with level `i - 1` as subroutine.
pub fn recursive_solve(g: &MultiGraph, s: usize, t: usize, depth: usize, base: &Solver<'_>, config: DpConfig) -> Result<RecursiveOutcome> {
    let records = RefCell::new(Vec::new());
    let tour = if depth == 0 {
        base(g, s, t)?
    } else {
        let inner = level_solver(depth - 1, base, config);
        solve_by_blocks(g, s, t, &|b: &MultiGraph, bs, bt| {
            let direct = inner(b, bs, bt)?;
            let dl = direct.weight(b);
            let dp = match dp_tour(b, bs, bt, &*inner, config) {
                Ok(dp) => Some(dp),
                Err(Error::TooLarge { .. }) => None,
                Err(e) => return Err(e),
            };
            records.borrow_mut().push(LevelRecord {
                level: depth,
                direct: dl,
                dp: dp.as_ref().map(|d| d.length),
            });
            Ok(match dp {
                Some(dp) if dp.length < dl => dp.tour,
                _ => direct,
            })
        })?
    };
    let check = is_t_tour(g, &tour, &st_terminals(s, t));
    if !check.is_valid() {
        return Err(Error::Internal(format!("recursive tour: {:?}", check.violations)));
    }
    Ok(RecursiveOutcome {
        length: tour.weight(g),
        tour,
        levels: records.into_inner(),
    })
}

/// `β_0 = 2`, `β_i = max(α, β_{i-1} - (3/2)(β_{i-1} - 1)δ)`.
pub fn beta_sequence(alpha: &BigRational, delta: &BigRational, levels: usize) -> Vec<BigRational> {
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    let mut out = vec![BigRational::from_integer(BigInt::from(2))];
    for _ in 0..levels {
        let prev = out.last().expect("nonempty");
        let next = prev - &three_halves * (prev - BigRational::one()) * delta;
        out.push(if &next < alpha { alpha.clone() } else { next });
    }
    out
}

/// `⌈(2 - α) / ((α - 1)(3/2)δ)⌉`, the depth after which `β_k = α`.
pub fn levels_to_alpha(alpha: &BigRational, delta: &BigRational) -> Result<u64> {
    let one = BigRational::one();
    if alpha <= &one || delta <= &BigRational::from_integer(BigInt::from(0)) {
        return Err(Error::Argument("need α > 1 and δ > 0".into()));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    if alpha >= &two {
        return Ok(0);
    }
    let q = (&two - alpha) / ((alpha - &one) * BigRational::new(BigInt::from(3), BigInt::from(2)) * delta);
    q.ceil().to_integer().to_u64().ok_or_else(|| Error::Argument("depth out of range".into()))
}
