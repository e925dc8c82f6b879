use super::MultiGraph;
use crate::error::{Error, Result};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub const UNREACHABLE: u64 = u64::MAX;

/// Single-source Dijkstra tree. Ties keep the lowest-id predecessor edge.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    pub source: usize,
    pub dist: Vec<u64>,
    pub pred: Vec<Option<usize>>,
}

impl ShortestPaths {
    pub fn compute(g: &MultiGraph, source: usize) -> Self {
        let n = g.n();
        let mut dist = vec![UNREACHABLE; n];
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0;
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if done[x] || d > dist[x] {
                continue;
            }
            done[x] = true;
            for &(e, y) in g.adj(x) {
                if done[y] {
                    continue;
                }
                let nd = d + g.edge(e).w;
                let better = nd < dist[y] || (nd == dist[y] && pred[y].map_or(true, |p| e < p));
                if better {
                    if nd < dist[y] {
                        heap.push(Reverse((nd, y)));
                    }
                    dist[y] = nd;
                    pred[y] = Some(e);
                }
            }
        }
        ShortestPaths { source, dist, pred }
    }

    /// Edge ids of the tree path from the source to `t`, in walking order.
    pub fn path_to(&self, g: &MultiGraph, t: usize) -> Option<Vec<usize>> {
        if self.dist[t] == UNREACHABLE {
            return None;
        }
        let mut path = Vec::new();
        let mut x = t;
        while x != self.source {
            let e = self.pred[x]?;
            path.push(e);
            x = g.edge(e).other(x);
        }
        path.reverse();
        Some(path)
    }
}

/// Exact distances from `source`; errors on the lowest-id unreachable vertex.
pub fn shortest_distances(g: &MultiGraph, source: usize) -> Result<Vec<u64>> {
    let sp = ShortestPaths::compute(g, source);
    if let Some(v) = sp.dist.iter().position(|&d| d == UNREACHABLE) {
        return Err(Error::Unreachable(v));
    }
    Ok(sp.dist)
}

pub fn shortest_path(g: &MultiGraph, s: usize, t: usize) -> Option<Vec<usize>> {
    ShortestPaths::compute(g, s).path_to(g, t)
}

/// All-pairs distances; unreachable pairs hold `u64::MAX`.
pub fn distance_matrix(g: &MultiGraph) -> Vec<Vec<u64>> {
    (0..g.n()).map(|v| ShortestPaths::compute(g, v).dist).collect()
}
