use super::matching::min_weight_perfect_matching;
use super::paths::ShortestPaths;
use super::{toggle, EdgeMultiset, MultiGraph, VertexSet};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Minimum-weight T-join via metric closure and perfect matching on T.
pub fn min_t_join(g: &MultiGraph, terminals: &VertexSet) -> Result<EdgeMultiset> {
    let edges = nonneg_join(g, |e| g.edge(e).w, terminals)?;
    Ok(EdgeMultiset::from_edges(edges))
}

/// Minimum simple T-join under nonnegative costs `cost(e)`; ids of the chosen edges.
fn nonneg_join(g: &MultiGraph, cost: impl Fn(usize) -> u64, terminals: &VertexSet) -> Result<BTreeSet<usize>> {
    if terminals.len() % 2 == 1 {
        return Err(Error::OddTerminals(terminals.len()));
    }
    let term: Vec<usize> = terminals.iter().copied().collect();
    if term.is_empty() {
        return Ok(BTreeSet::new());
    }
    let mut h = MultiGraph::new(g.n());
    for e in g.edges() {
        h.add_edge(e.u, e.v, cost(e.id)).expect("copy of a valid edge");
    }
    let trees: Vec<ShortestPaths> = term.iter().map(|&x| ShortestPaths::compute(&h, x)).collect();
    let cm: Vec<Vec<u64>> = trees
        .iter()
        .map(|sp| term.iter().map(|&y| sp.dist[y]).collect())
        .collect();
    let pairs = min_weight_perfect_matching(&cm).ok_or_else(|| {
        Error::Infeasible("terminals cannot be paired inside their components".into())
    })?;
    let mut chosen = BTreeSet::new();
    for (i, j) in pairs {
        for e in trees[i].path_to(&h, term[j]).expect("matched pair is connected") {
            if !chosen.remove(&e) {
                chosen.insert(e);
            }
        }
    }
    Ok(chosen)
}

/// Minimum simple T-join under signed costs. Negative edges are taken first and the
/// residual parity is repaired with a nonnegative join on absolute costs.
pub fn min_signed_simple_t_join(
    g: &MultiGraph,
    cost: &[i64],
    terminals: &VertexSet,
) -> Result<(BTreeSet<usize>, i64)> {
    if terminals.len() % 2 == 1 {
        return Err(Error::OddTerminals(terminals.len()));
    }
    let mut residual = terminals.clone();
    let negative: BTreeSet<usize> = (0..g.m()).filter(|&e| cost[e] < 0).collect();
    for &e in &negative {
        toggle(&mut residual, g.edge(e).u);
        toggle(&mut residual, g.edge(e).v);
    }
    let fix = nonneg_join(g, |e| cost[e].unsigned_abs(), &residual)?;
    let join: BTreeSet<usize> = negative.symmetric_difference(&fix).copied().collect();
    let total = join.iter().map(|&e| cost[e]).sum();
    Ok((join, total))
}

/// Minimum simple T-join in which every vertex of `forced_deg1` has exactly one
/// incident join edge. Branch and bound over the incident-edge choice at violated
/// forced vertices; subproblems whose relaxation exceeds `upper` are pruned.
pub fn constrained_simple_t_join(
    g: &MultiGraph,
    cost: &[i64],
    terminals: &VertexSet,
    forced_deg1: &VertexSet,
    upper: Option<i64>,
) -> Result<(BTreeSet<usize>, i64)> {
    if terminals.len() % 2 == 1 {
        return Err(Error::OddTerminals(terminals.len()));
    }
    let mut best: Option<(BTreeSet<usize>, i64)> = None;
    let mut state = vec![Fix::Free; g.m()];
    search(g, cost, terminals, forced_deg1, upper, &mut state, &mut best)?;
    best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no simple T-join with degree one at {:?}",
            forced_deg1.iter().collect::<Vec<_>>()
        ))
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fix {
    Free,
    In,
    Out,
}

fn search(
    g: &MultiGraph,
    cost: &[i64],
    terminals: &VertexSet,
    forced: &VertexSet,
    upper: Option<i64>,
    state: &mut Vec<Fix>,
    best: &mut Option<(BTreeSet<usize>, i64)>,
) -> Result<()> {
    let mut residual = terminals.clone();
    let mut base = 0i64;
    let mut h = MultiGraph::new(g.n());
    let mut hmap = Vec::new();
    let mut hcost = Vec::new();
    for e in g.edges() {
        match state[e.id] {
            Fix::In => {
                base += cost[e.id];
                toggle(&mut residual, e.u);
                toggle(&mut residual, e.v);
            }
            Fix::Free => {
                h.add_edge(e.u, e.v, 0).expect("copy of a valid edge");
                hmap.push(e.id);
                hcost.push(cost[e.id]);
            }
            Fix::Out => {}
        }
    }
    let (relaxed, value) = match min_signed_simple_t_join(&h, &hcost, &residual) {
        Ok(r) => r,
        Err(Error::Infeasible(_)) => return Ok(()),
        Err(e) => return Err(e),
    };
    let bound = base + value;
    if upper.is_some_and(|u| bound > u) || best.as_ref().is_some_and(|(_, b)| bound >= *b) {
        return Ok(());
    }
    let mut join: BTreeSet<usize> = relaxed.into_iter().map(|e| hmap[e]).collect();
    join.extend((0..g.m()).filter(|&e| state[e] == Fix::In));
    let violated = forced
        .iter()
        .copied()
        .find(|&v| g.adj(v).iter().filter(|(e, _)| join.contains(e)).count() != 1);
    let Some(v) = violated else {
        *best = Some((join, bound));
        return Ok(());
    };
    let incident: Vec<usize> = g.adj(v).iter().map(|&(e, _)| e).collect();
    if incident.iter().any(|&e| state[e] == Fix::In) {
        // A fixed edge already covers v, so the remaining ones must stay out.
        let saved = state.clone();
        for &e in &incident {
            if state[e] == Fix::Free {
                state[e] = Fix::Out;
            }
        }
        let r = search(g, cost, terminals, forced, upper, state, best);
        *state = saved;
        return r;
    }
    for &chosen in &incident {
        if state[chosen] != Fix::Free {
            continue;
        }
        let saved = state.clone();
        for &e in &incident {
            if state[e] == Fix::Free {
                state[e] = if e == chosen { Fix::In } else { Fix::Out };
            }
        }
        search(g, cost, terminals, forced, upper, state, best)?;
        *state = saved;
    }
    Ok(())
}
