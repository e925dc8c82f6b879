use super::{MultiGraph, VertexSet};

/// Result of contracting a vertex set into one vertex.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: MultiGraph,
    pub terminals: VertexSet,
    /// Old vertex id -> new vertex id.
    pub vertex_map: Vec<usize>,
    /// New edge id -> old edge id.
    pub edge_origin: Vec<usize>,
    pub contracted: usize,
}

/// `(G, T)/W`: the vertices of `w` merge into the position of the smallest one.
/// Edges inside `w` vanish, parallel edges survive, and the merged vertex is a
/// terminal iff `|T ∩ W|` is odd.
pub fn contract(g: &MultiGraph, w: &VertexSet, t: &VertexSet) -> Contraction {
    assert!(!w.is_empty(), "contracted set must be nonempty");
    let mut vertex_map = vec![usize::MAX; g.n()];
    let mut next = 0;
    let mut contracted = usize::MAX;
    for v in 0..g.n() {
        if w.contains(&v) {
            if contracted == usize::MAX {
                contracted = next;
                next += 1;
            }
            vertex_map[v] = contracted;
        } else {
            vertex_map[v] = next;
            next += 1;
        }
    }
    let mut graph = MultiGraph::new(next);
    let mut edge_origin = Vec::new();
    for e in g.edges() {
        let (a, b) = (vertex_map[e.u], vertex_map[e.v]);
        if a != b {
            graph.add_edge(a, b, e.w).expect("contracted edge is valid");
            edge_origin.push(e.id);
        }
    }
    let mut terminals: VertexSet = t.iter().filter(|v| !w.contains(v)).map(|&v| vertex_map[v]).collect();
    if t.iter().filter(|v| w.contains(v)).count() % 2 == 1 {
        terminals.insert(contracted);
    }
    Contraction {
        graph,
        terminals,
        vertex_map,
        edge_origin,
        contracted,
    }
}
