use super::{EarDecomposition, NO_EAR};
use crate::error::{Error, Result};
use std::collections::VecDeque;

/// An ear-decomposition together with a rooted orientation of a forest of pendant ears.
#[derive(Debug, Clone)]
pub struct WellOrientedEarDecomposition {
    pub ed: EarDecomposition,
    pub oriented: Vec<bool>,
    /// `(tail, head)` for every oriented edge, indexed by edge id.
    pub direction: Vec<Option<(usize, usize)>>,
    /// Root of the arborescence containing each vertex (the vertex itself if isolated).
    pub root_of: Vec<usize>,
    /// Oriented ears entering each ear.
    pub entering: Vec<Vec<usize>>,
    pub h: Vec<usize>,
    pub pi: usize,
    /// Ears `0..primary` are primary, the rest secondary.
    pub primary: usize,
}

impl WellOrientedEarDecomposition {
    /// Index of the ear owning `v`, counting the initial vertex as ear 0.
    pub fn ear_index(&self, v: usize) -> usize {
        ear_index(&self.ed.layout().ear_of, v)
    }

    pub fn is_entered(&self, i: usize) -> bool {
        !self.entering[i].is_empty()
    }

    /// Length of the longest directed path in the branching.
    pub fn depth(&self) -> usize {
        let g = &self.ed.graph;
        let n = g.n();
        let mut out = vec![Vec::new(); n];
        for d in self.direction.iter().flatten() {
            out[d.0].push(d.1);
        }
        let mut best = 0;
        for r in 0..n {
            if self.root_of[r] != r {
                continue;
            }
            let mut q = VecDeque::from([(r, 0usize)]);
            while let Some((v, d)) = q.pop_front() {
                best = best.max(d);
                for &w in &out[v] {
                    q.push_back((w, d + 1));
                }
            }
        }
        best
    }
}

fn ear_index(ear_of: &[usize], v: usize) -> usize {
    if ear_of[v] == NO_EAR {
        0
    } else {
        ear_of[v] + 1
    }
}

/// Orients the edges of the chosen pendant ears as arborescences rooted at
/// vertices of minimum ear index, and records which ears they enter.
pub fn orient_clean_forest(ed: &EarDecomposition, chosen: &[usize]) -> Result<WellOrientedEarDecomposition> {
    let g = &ed.graph;
    let layout = ed.layout();
    let n = g.n();
    let mut oriented = vec![false; ed.ears.len()];
    for &i in chosen {
        if i >= ed.ears.len() {
            return Err(Error::Argument(format!("no ear {i}")));
        }
        if !layout.pendant_ear[i] {
            return Err(Error::Argument(format!("ear {} is not pendant", i + 1)));
        }
        oriented[i] = true;
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for (i, ear) in ed.ears.iter().enumerate() {
        if !oriented[i] {
            continue;
        }
        for &e in &ear.edges {
            let (u, v) = (g.edge(e).u, g.edge(e).v);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                let mut cycle = forest_path(&adj, u, v);
                cycle.push(u);
                return Err(Error::Structure(format!("chosen ears contain the cycle {cycle:?}")));
            }
            parent[ru] = rv;
            adj[u].push((e, v));
            adj[v].push((e, u));
        }
    }
    let key = |v: usize| (ear_index(&layout.ear_of, v), v);
    let mut root_of: Vec<usize> = (0..n).collect();
    let mut direction = vec![None; g.m()];
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] || adj[s].is_empty() {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            k += 1;
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        let root = *comp.iter().min_by_key(|&&v| key(v)).unwrap();
        let mut q = VecDeque::from([root]);
        let mut visited = vec![false; n];
        visited[root] = true;
        while let Some(v) = q.pop_front() {
            root_of[v] = root;
            for &(e, w) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    direction[e] = Some((v, w));
                    q.push_back(w);
                }
            }
        }
    }
    let mut entering = vec![Vec::new(); ed.ears.len()];
    for (i, ear) in ed.ears.iter().enumerate() {
        if !oriented[i] {
            continue;
        }
        for &e in &ear.edges {
            let (_, head) = direction[e].expect("oriented edge");
            let p = layout.ear_of[head];
            if p != NO_EAR && p != i && !entering[p].contains(&i) {
                entering[p].push(i);
            }
        }
    }
    let h: Vec<usize> = entering.iter().map(Vec::len).collect();
    let pi = h.iter().filter(|&&x| x == 0).count();
    Ok(WellOrientedEarDecomposition {
        ed: ed.clone(),
        oriented,
        direction,
        root_of,
        entering,
        h,
        pi,
        primary: ed.ears.len(),
    })
}

/// Vertex path from `a` to `b` in a forest given by adjacency lists.
fn forest_path(adj: &[Vec<(usize, usize)>], a: usize, b: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[a] = a;
    let mut q = VecDeque::from([a]);
    while let Some(v) = q.pop_front() {
        for &(_, w) in &adj[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                q.push_back(w);
            }
        }
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}
