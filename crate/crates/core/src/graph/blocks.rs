use super::{MultiGraph, ProblemInstance};
use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Terminals of the block instance; equal when the block is off the s–t path.
    pub s: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTree {
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<usize>,
}

/// Biconnected components as edge lists (bridges are single-edge blocks).
fn biconnected_edges(g: &MultiGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut comps = Vec::new();
    let mut estack: Vec<usize> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // (vertex, parent edge, next adjacency index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (x, pe, ref mut idx)) = stack.last_mut() {
            if *idx < g.adj(x).len() {
                let (e, y) = g.adj(x)[*idx];
                *idx += 1;
                if e == pe {
                    continue;
                }
                if disc[y] == usize::MAX {
                    estack.push(e);
                    disc[y] = timer;
                    low[y] = timer;
                    timer += 1;
                    stack.push((y, e, 0));
                } else if disc[y] < disc[x] {
                    estack.push(e);
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if low[x] >= disc[p] {
                        let mut comp = Vec::new();
                        while let Some(e) = estack.pop() {
                            comp.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
    }
    comps
}

/// Cut vertices in increasing order.
pub fn cut_vertices(g: &MultiGraph) -> Vec<usize> {
    let mut count = vec![0usize; g.n()];
    for comp in biconnected_edges(g) {
        for v in comp_vertices(g, &comp) {
            count[v] += 1;
        }
    }
    (0..g.n()).filter(|&v| count[v] > 1).collect()
}

fn comp_vertices(g: &MultiGraph, comp: &[usize]) -> Vec<usize> {
    let mut vs: Vec<usize> = comp.iter().flat_map(|&e| [g.edge(e).u, g.edge(e).v]).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Splits a connected instance into blocks with their own terminal pairs.
pub fn block_decompose(inst: &ProblemInstance) -> BlockTree {
    let g = &inst.graph;
    let (s, t) = (inst.s, inst.t);
    let comps = biconnected_edges(g);
    if comps.is_empty() {
        return BlockTree {
            blocks: (0..g.n())
                .map(|v| Block {
                    vertices: vec![v],
                    edges: vec![],
                    s: v,
                    t: v,
                })
                .collect(),
            cut_vertices: vec![],
        };
    }
    let vsets: Vec<Vec<usize>> = comps.iter().map(|c| comp_vertices(g, c)).collect();
    let mut member: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (b, vs) in vsets.iter().enumerate() {
        for &v in vs {
            member[v].push(b);
        }
    }
    let cuts: Vec<usize> = (0..g.n()).filter(|&v| member[v].len() > 1).collect();
    let nb = comps.len();
    let mut cut_index = vec![usize::MAX; g.n()];
    for (i, &c) in cuts.iter().enumerate() {
        cut_index[c] = nb + i;
    }
    let node_of = |v: usize| if cut_index[v] != usize::MAX { cut_index[v] } else { member[v][0] };
    let total = nb + cuts.len();
    let mut parent = vec![usize::MAX; total];
    let mut seen = vec![false; total];
    let root = node_of(s);
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let nbrs: Vec<usize> = if x < nb {
            vsets[x].iter().filter(|&&v| cut_index[v] != usize::MAX).map(|&v| cut_index[v]).collect()
        } else {
            member[cuts[x - nb]].clone()
        };
        for y in nbrs {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![node_of(t)];
    while let Some(&x) = path.last() {
        if parent[x] == usize::MAX {
            break;
        }
        path.push(parent[x]);
    }
    path.reverse();
    let vertex_of_cut = |x: usize| cuts[x - nb];
    let mut blocks = Vec::with_capacity(nb);
    for b in 0..nb {
        let toward_s = if parent[b] == usize::MAX { s } else { vertex_of_cut(parent[b]) };
        let (bs, bt) = match path.iter().position(|&x| x == b) {
            Some(i) => {
                let exit = if i + 1 < path.len() { vertex_of_cut(path[i + 1]) } else { t };
                (toward_s, exit)
            }
            None => (toward_s, toward_s),
        };
        blocks.push(Block {
            vertices: vsets[b].clone(),
            edges: comps[b].clone(),
            s: bs,
            t: bt,
        });
    }
    BlockTree {
        blocks,
        cut_vertices: cuts,
    }
}
