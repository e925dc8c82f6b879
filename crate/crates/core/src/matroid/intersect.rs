use super::MatroidOracle;
use crate::error::{Error, Result};
use std::collections::{BTreeSet, VecDeque};

fn with_swap(i: &[usize], out: Option<usize>, add: usize) -> Vec<usize> {
    let mut s: Vec<usize> = i.iter().copied().filter(|&x| Some(x) != out).collect();
    s.push(add);
    s
}

struct Exchange {
    /// BFS parent of each reached element (itself for sources).
    parent: Vec<(usize, usize)>,
    reached: BTreeSet<usize>,
    sink: Option<usize>,
}

/// BFS in the exchange graph of `I`; stops at the first sink reached.
fn explore<A: MatroidOracle + ?Sized, B: MatroidOracle + ?Sized>(
    m1: &A,
    m2: &B,
    ground: &[usize],
    current: &[usize],
) -> Exchange {
    let in_i: BTreeSet<usize> = current.iter().copied().collect();
    let outside: Vec<usize> = ground.iter().copied().filter(|x| !in_i.contains(x)).collect();
    let mut parent = Vec::new();
    let mut reached = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &y in &outside {
        if m1.is_independent(&with_swap(current, None, y)) {
            reached.insert(y);
            parent.push((y, y));
            queue.push_back(y);
        }
    }
    while let Some(x) = queue.pop_front() {
        if !in_i.contains(&x) && m2.is_independent(&with_swap(current, None, x)) {
            return Exchange {
                parent,
                reached,
                sink: Some(x),
            };
        }
        if in_i.contains(&x) {
            for &y in &outside {
                if !reached.contains(&y) && m1.is_independent(&with_swap(current, Some(x), y)) {
                    reached.insert(y);
                    parent.push((y, x));
                    queue.push_back(y);
                }
            }
        } else {
            for &z in current {
                if !reached.contains(&z) && m2.is_independent(&with_swap(current, Some(z), x)) {
                    reached.insert(z);
                    parent.push((z, x));
                    queue.push_back(z);
                }
            }
        }
    }
    Exchange {
        parent,
        reached,
        sink: None,
    }
}

fn check_ground<A: MatroidOracle + ?Sized, B: MatroidOracle + ?Sized>(m1: &A, m2: &B) -> Result<Vec<usize>> {
    let mut g1 = m1.ground();
    let mut g2 = m2.ground();
    g1.sort_unstable();
    g2.sort_unstable();
    if g1 != g2 {
        return Err(Error::Argument(format!(
            "matroids disagree on the ground set ({} vs {} elements)",
            g1.len(),
            g2.len()
        )));
    }
    Ok(g1)
}

/// Maximum-cardinality common independent set by shortest augmenting paths.
pub fn matroid_intersect_max<A: MatroidOracle + ?Sized, B: MatroidOracle + ?Sized>(
    m1: &A,
    m2: &B,
) -> Result<Vec<usize>> {
    let ground = check_ground(m1, m2)?;
    let mut current: Vec<usize> = Vec::new();
    loop {
        let ex = explore(m1, m2, &ground, &current);
        let Some(sink) = ex.sink else { break };
        let lookup = |x: usize| ex.parent.iter().find(|(c, _)| *c == x).map(|&(_, p)| p).unwrap();
        let mut flip = BTreeSet::from([sink]);
        let mut x = sink;
        loop {
            let p = lookup(x);
            if p == x {
                break;
            }
            flip.insert(p);
            x = p;
        }
        let mut next: BTreeSet<usize> = current.iter().copied().collect();
        for e in flip {
            if !next.remove(&e) {
                next.insert(e);
            }
        }
        current = next.into_iter().collect();
        debug_assert!(m1.is_independent(&current) && m2.is_independent(&current));
    }
    current.sort_unstable();
    Ok(current)
}

/// Elements reachable from the sources in the exchange graph of a maximum `I`.
pub fn exchange_reachable<A: MatroidOracle + ?Sized, B: MatroidOracle + ?Sized>(
    m1: &A,
    m2: &B,
    current: &[usize],
) -> Result<BTreeSet<usize>> {
    let ground = check_ground(m1, m2)?;
    let ex = explore(m1, m2, &ground, current);
    if ex.sink.is_some() {
        return Err(Error::Internal("common independent set is not maximum".into()));
    }
    Ok(ex.reached)
}

/// The inclusion-maximal `Q` minimizing `r1(Q) + r2(E \ Q)`: every element not
/// reachable from a source of the final exchange graph.
pub fn maximal_minimizer<A: MatroidOracle + ?Sized, B: MatroidOracle + ?Sized>(
    m1: &A,
    m2: &B,
    current: &[usize],
) -> Result<Vec<usize>> {
    let reached = exchange_reachable(m1, m2, current)?;
    let mut g = m1.ground();
    g.sort_unstable();
    Ok(g.into_iter().filter(|x| !reached.contains(x)).collect())
}
