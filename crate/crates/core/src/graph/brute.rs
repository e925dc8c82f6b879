use super::paths::ShortestPaths;
use super::{EdgeMultiset, ProblemInstance};
use crate::error::{Error, Result};

pub const DEFAULT_ENUM_LIMIT: usize = 14;

/// Largest edge count accepted when `|T| > 2` and the enumeration runs over
/// all sub-multisets of `2E(G)`.
const MULTISET_EDGE_LIMIT: usize = 12;

/// Exact minimum T-tour.
///
/// For `|T| <= 2` an optimal tour is an Euler trail, so the optimum is a
/// shortest Hamiltonian s–t path (cycle when `T` is empty) in the metric
/// closure, found by Held–Karp; shortest paths are expanded back into edges.
/// Larger terminal sets fall back to enumerating sub-multisets of `2E(G)`.
pub fn brute_force_opt(inst: &ProblemInstance, limit: usize) -> Result<(u64, EdgeMultiset)> {
    let g = &inst.graph;
    let n = g.n();
    if n > limit {
        return Err(Error::TooLarge {
            what: "exact enumeration",
            size: n,
            limit,
        });
    }
    if n <= 1 {
        return Ok((0, EdgeMultiset::new()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if inst.terminals.len() > 2 {
        return enumerate_multisets(inst);
    }
    let (s, t) = match inst.terminals.len() {
        2 => {
            let mut it = inst.terminals.iter().copied();
            (it.next().unwrap(), it.next().unwrap())
        }
        _ => (inst.s, inst.s),
    };
    let trees: Vec<ShortestPaths> = (0..n).map(|v| ShortestPaths::compute(g, v)).collect();
    let d = |a: usize, b: usize| trees[a].dist[b];
    let full = (1usize << n) - 1;
    let inf = u64::MAX;
    let mut dp = vec![inf; (1 << n) * n];
    let mut pred = vec![u8::MAX; (1 << n) * n];
    dp[(1 << s) * n + s] = 0;
    for mask in 1..=full {
        if mask & (1 << s) == 0 {
            continue;
        }
        for v in 0..n {
            let cur = dp[mask * n + v];
            if cur == inf {
                continue;
            }
            for x in 0..n {
                if mask & (1 << x) != 0 {
                    continue;
                }
                // With s ≠ t the end vertex t must come last.
                if s != t && x == t && mask | (1 << x) != full {
                    continue;
                }
                let nm = mask | (1 << x);
                let c = cur + d(v, x);
                if c < dp[nm * n + x] || (c == dp[nm * n + x] && (v as u8) < pred[nm * n + x]) {
                    dp[nm * n + x] = c;
                    pred[nm * n + x] = v as u8;
                }
            }
        }
    }
    let (last, best) = if s != t {
        (t, dp[full * n + t])
    } else {
        (0..n)
            .filter(|&v| dp[full * n + v] != inf)
            .map(|v| (v, dp[full * n + v] + d(v, s)))
            .min_by_key(|&(v, c)| (c, v))
            .expect("connected graph has a closed walk")
    };
    let mut order = vec![last];
    let mut mask = full;
    let mut v = last;
    while v != s || mask != 1 << s {
        let p = pred[mask * n + v] as usize;
        mask &= !(1 << v);
        v = p;
        order.push(v);
    }
    order.reverse();
    if s == t {
        order.push(s);
    }
    let mut tour = EdgeMultiset::new();
    for w in order.windows(2) {
        for e in trees[w[0]].path_to(g, w[1]).expect("connected") {
            tour.add(e, 1);
        }
    }
    debug_assert!(tour.weight(g) <= best);
    Ok((tour.weight(g), tour))
}

fn enumerate_multisets(inst: &ProblemInstance) -> Result<(u64, EdgeMultiset)> {
    let g = &inst.graph;
    let m = g.m();
    if m > MULTISET_EDGE_LIMIT {
        return Err(Error::TooLarge {
            what: "multiset enumeration",
            size: m,
            limit: MULTISET_EDGE_LIMIT,
        });
    }
    let mut best: Option<(u64, EdgeMultiset)> = None;
    let mut mult = vec![0u8; m];
    loop {
        let j: EdgeMultiset = (0..m).filter(|&e| mult[e] > 0).map(|e| (e, mult[e])).collect();
        let w = j.weight(g);
        if best.as_ref().map_or(true, |(b, _)| w < *b) && super::is_t_tour(g, &j, &inst.terminals).is_valid() {
            best = Some((w, j));
        }
        let mut i = 0;
        while i < m && mult[i] == 2 {
            mult[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        mult[i] += 1;
    }
    best.ok_or_else(|| Error::Infeasible("no T-tour exists".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_t_tour, MultiGraph};

    fn circuit(n: usize) -> MultiGraph {
        let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn c4_antipodal() {
        let inst = ProblemInstance::new(circuit(4), 0, 2).unwrap();
        let (len, j) = brute_force_opt(&inst, 14).unwrap();
        assert_eq!(len, 4);
        assert!(is_t_tour(&inst.graph, &j, &inst.terminals).is_valid());
    }

    #[test]
    fn c5_distance_two() {
        let inst = ProblemInstance::new(circuit(5), 0, 2).unwrap();
        assert_eq!(brute_force_opt(&inst, 14).unwrap().0, 5);
    }

    #[test]
    fn path_graph() {
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let inst = ProblemInstance::new(g, 0, 4).unwrap();
        assert_eq!(brute_force_opt(&inst, 14).unwrap().0, 4);
    }

    #[test]
    fn over_limit_refused() {
        let inst = ProblemInstance::new(circuit(6), 0, 3).unwrap();
        assert!(matches!(brute_force_opt(&inst, 5), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn held_karp_agrees_with_multiset_enumeration() {
        for (n, s, t) in [(4, 0, 2), (5, 0, 2), (5, 1, 1), (6, 0, 1)] {
            let inst = ProblemInstance::new(circuit(n), s, t).unwrap();
            let (a, _) = brute_force_opt(&inst, 14).unwrap();
            let (b, _) = enumerate_multisets(&inst).unwrap();
            assert_eq!(a, b, "C{n} s={s} t={t}");
        }
    }
}
