use super::{Ear, EarDecomposition};
use crate::error::{Error, Result};
use crate::graph::{cut_vertices, MultiGraph};
use std::sync::Arc;

/// Largest vertex count handled by the exhaustive backend.
pub const EXACT_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EarBackend {
    /// Exhaustive search up to `EXACT_LIMIT` vertices, heuristic above.
    #[default]
    Auto,
    Exact,
    Heuristic,
}

impl EarBackend {
    /// Whether the backend certifies a minimum number of even ears on `n` vertices.
    pub fn is_exact_for(self, n: usize) -> bool {
        match self {
            EarBackend::Auto => n <= EXACT_LIMIT,
            EarBackend::Exact => true,
            EarBackend::Heuristic => false,
        }
    }
}

pub fn check_two_connected(g: &MultiGraph) -> Result<()> {
    match g.n() {
        0 => Err(Error::Structure("empty graph".into())),
        1 => Ok(()),
        n => {
            if !g.is_connected() {
                return Err(Error::Disconnected);
            }
            if let Some(&v) = cut_vertices(g).first() {
                return Err(Error::CutVertex(v));
            }
            if n == 2 && g.m() < 2 {
                return Err(Error::Structure("single edge is a bridge".into()));
            }
            Ok(())
        }
    }
}

/// Open ear-decomposition with few even ears, using the requested backend.
pub fn open_min_even_ears(g: &MultiGraph, backend: EarBackend) -> Result<EarDecomposition> {
    if backend.is_exact_for(g.n()) {
        exact_min_even_ears(g)
    } else {
        heuristic_open_ears(g)
    }
}

/// Open ear-decomposition with the minimum number of even ears, by dynamic
/// programming over the set of vertices covered so far.
pub fn exact_min_even_ears(g: &MultiGraph) -> Result<EarDecomposition> {
    check_two_connected(g)?;
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge {
            what: "exact ear search vertices",
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    let graph = Arc::new(g.clone());
    if n == 1 {
        return Ok(EarDecomposition::from_ears(graph, Vec::new()).expect("single vertex"));
    }
    let mut mult = vec![vec![0usize; n]; n];
    for e in g.edges() {
        mult[e.u][e.v] += 1;
        mult[e.v][e.u] += 1;
    }
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for r in 0..n {
        let (cost, chain) = best_chain(&mult, r);
        if best.as_ref().map_or(true, |b| cost < b.0) {
            best = Some((cost, r, chain));
        }
    }
    let (_, r, chain) = best.ok_or_else(|| Error::Internal("no ear-decomposition found".into()))?;
    let mut ears = Vec::new();
    for w in chain.windows(2) {
        let path = find_ear(&mult, r, w[0], w[1] & !w[0])
            .ok_or_else(|| Error::Internal("ear witness lost".into()))?;
        ears.push(path_to_ear(g, &path));
    }
    EarDecomposition::from_ears(graph, ears).ok_or_else(|| Error::Internal("exact ears invalid".into()))
}

/// Returns the minimum even-ear count from root `r` and the chain of covered sets.
fn best_chain(mult: &[Vec<usize>], r: usize) -> (usize, Vec<usize>) {
    let n = mult.len();
    let full = (1usize << n) - 1;
    const INF: usize = usize::MAX;
    let mut best = vec![INF; 1 << n];
    let mut parent = vec![usize::MAX; 1 << n];
    let start = 1usize << r;
    best[start] = 0;
    let mut starts = vec![0u16; (1 << n) * n];
    for s in start..=full {
        if s & start == 0 || best[s] == INF || s == full {
            continue;
        }
        starts.iter_mut().for_each(|x| *x = 0);
        let nbr_s = |v: usize| -> u16 {
            (0..n).filter(|&a| s >> a & 1 == 1 && mult[v][a] > 0).fold(0u16, |m, a| m | 1 << a)
        };
        for v in 0..n {
            if s >> v & 1 == 0 {
                starts[(1 << v) * n + v] = nbr_s(v);
            }
        }
        for i in 1..=full {
            if i & s != 0 {
                continue;
            }
            for v in 0..n {
                let from = starts[i * n + v];
                if i >> v & 1 == 0 || from == 0 {
                    continue;
                }
                for u in 0..n {
                    if mult[v][u] > 0 && (s | i) >> u & 1 == 0 {
                        starts[(i | 1 << u) * n + u] |= from;
                    }
                }
                let closes = if s == start {
                    let size = i.count_ones();
                    mult[v][r] >= if size == 1 { 2 } else { 1 }
                } else {
                    let nb = nbr_s(v);
                    nb != 0 && (from | nb).count_ones() >= 2
                };
                if closes {
                    let cost = best[s] + (i.count_ones() % 2) as usize;
                    let t = s | i;
                    if cost < best[t] {
                        best[t] = cost;
                        parent[t] = s;
                    }
                }
            }
        }
    }
    if best[full] == INF {
        return (INF, Vec::new());
    }
    let mut chain = vec![full];
    let mut cur = full;
    while cur != start {
        cur = parent[cur];
        chain.push(cur);
    }
    chain.reverse();
    (best[full], chain)
}

/// Vertex sequence of an ear from covered set `s` through exactly the vertices of `inner`.
fn find_ear(mult: &[Vec<usize>], r: usize, s: usize, inner: usize) -> Option<Vec<usize>> {
    let n = mult.len();
    let first = s == 1 << r;
    fn extend(
        mult: &[Vec<usize>],
        path: &mut Vec<usize>,
        left: usize,
        s: usize,
        first: bool,
    ) -> bool {
        let n = mult.len();
        let v = *path.last().unwrap();
        if left == 0 {
            let a = path[0];
            for b in 0..n {
                if s >> b & 1 == 1 && mult[v][b] > 0 {
                    let ok = if first {
                        b == a && (path.len() > 2 || mult[v][b] >= 2)
                    } else {
                        b != a
                    };
                    if ok {
                        path.push(b);
                        return true;
                    }
                }
            }
            return false;
        }
        for u in 0..n {
            if left >> u & 1 == 1 && mult[v][u] > 0 {
                path.push(u);
                if extend(mult, path, left & !(1 << u), s, first) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    for a in 0..n {
        if s >> a & 1 == 1 {
            let mut path = vec![a];
            if extend(mult, &mut path, inner, s, first) {
                return Some(path);
            }
        }
    }
    None
}

/// Picks the lowest-id edges along a vertex path, never reusing an edge.
fn path_to_ear(g: &MultiGraph, path: &[usize]) -> Ear {
    let mut edges: Vec<usize> = Vec::new();
    for w in path.windows(2) {
        let e = g
            .adj(w[0])
            .iter()
            .filter(|&&(e, x)| x == w[1] && !edges.contains(&e))
            .map(|&(e, _)| e)
            .min()
            .expect("consecutive path vertices are adjacent");
        edges.push(e);
    }
    Ear::new(path.to_vec(), edges)
}

/// Chain decomposition of a depth-first search tree rooted at `root`.
fn chain_decomposition(g: &MultiGraph, root: usize, reverse: bool) -> Option<Vec<Ear>> {
    let n = g.n();
    let mut pre = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut is_tree = vec![false; g.m()];
    let neighbours = |v: usize| -> Vec<(usize, usize)> {
        let mut a = g.adj(v).to_vec();
        if reverse {
            a.reverse();
        }
        a
    };
    let mut stack: Vec<(usize, Vec<(usize, usize)>, usize)> = vec![(root, neighbours(root), 0)];
    pre[root] = 0;
    order.push(root);
    while let Some(top) = stack.last_mut() {
        if top.2 == top.1.len() {
            stack.pop();
            continue;
        }
        let (e, u) = top.1[top.2];
        top.2 += 1;
        if pre[u] == usize::MAX {
            pre[u] = order.len();
            order.push(u);
            parent_edge[u] = e;
            is_tree[e] = true;
            stack.push((u, neighbours(u), 0));
        }
    }
    if order.len() != n {
        return None;
    }
    let mut visited = vec![false; n];
    visited[root] = true;
    let mut ears = Vec::new();
    for &v in &order {
        let mut back: Vec<(usize, usize)> = g
            .adj(v)
            .iter()
            .filter(|&&(e, w)| !is_tree[e] && pre[w] > pre[v])
            .copied()
            .collect();
        back.sort_by_key(|&(e, w)| (pre[w], e));
        for (e, w) in back {
            let mut vs = vec![v, w];
            let mut es = vec![e];
            if !visited[w] {
                visited[w] = true;
                let mut cur = w;
                loop {
                    let pe = parent_edge[cur];
                    let p = g.edge(pe).other(cur);
                    vs.push(p);
                    es.push(pe);
                    if visited[p] {
                        break;
                    }
                    visited[p] = true;
                    cur = p;
                }
                ears.push(Ear::new(vs, es));
            }
        }
    }
    visited.iter().all(|&x| x).then_some(ears)
}

/// Open ear-decomposition from depth-first chain decompositions, keeping the
/// one with fewest even ears over all roots and two neighbour orders.
pub fn heuristic_open_ears(g: &MultiGraph) -> Result<EarDecomposition> {
    check_two_connected(g)?;
    let graph = Arc::new(g.clone());
    let mut best: Option<EarDecomposition> = None;
    for root in 0..g.n() {
        for reverse in [false, true] {
            let Some(ears) = chain_decomposition(g, root, reverse) else {
                continue;
            };
            let Some(ed) = EarDecomposition::from_ears(graph.clone(), ears) else {
                continue;
            };
            if !ed.is_open() {
                continue;
            }
            if best.as_ref().map_or(true, |b| ed.even_ears() < b.even_ears()) {
                best = Some(ed);
            }
        }
    }
    best.ok_or_else(|| Error::Internal("no open chain decomposition found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(n: usize) -> MultiGraph {
        let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::from_edges(n, &e).unwrap()
    }

    fn k4() -> MultiGraph {
        MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn theta222() -> MultiGraph {
        MultiGraph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap()
    }

    #[test]
    fn circuits_are_single_ears() {
        for n in 3..9 {
            for backend in [EarBackend::Exact, EarBackend::Heuristic] {
                let ed = open_min_even_ears(&circuit(n), backend).unwrap();
                assert_eq!(ed.ears.len(), 1);
                assert_eq!(ed.even_ears(), (n + 1) % 2);
            }
        }
    }

    #[test]
    fn k4_and_theta() {
        let ed = exact_min_even_ears(&k4()).unwrap();
        assert_eq!(ed.even_ears(), 1);
        assert!(ed.is_open());
        let ed = exact_min_even_ears(&theta222()).unwrap();
        assert_eq!(ed.even_ears(), 2);
        assert!(heuristic_open_ears(&theta222()).unwrap().even_ears() >= 2);
    }

    #[test]
    fn cut_vertex_reported() {
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(matches!(exact_min_even_ears(&g), Err(Error::CutVertex(2))));
        assert!(matches!(heuristic_open_ears(&g), Err(Error::CutVertex(2))));
    }

    #[test]
    fn parallel_pair() {
        let g = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let ed = exact_min_even_ears(&g).unwrap();
        assert_eq!(ed.ears.len(), 1);
        assert_eq!(ed.even_ears(), 1);
    }
}
