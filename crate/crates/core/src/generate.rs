//! Seeded instance generators.

use crate::ear::check_two_connected;
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, ProblemInstance};
use crate::Rational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Circuit,
    ThetaLb,
    Random2vc,
    Path,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circuit" => Ok(Family::Circuit),
            "theta_lb" => Ok(Family::ThetaLb),
            "random2vc" => Ok(Family::Random2vc),
            "path" => Ok(Family::Path),
            _ => Err(Error::Argument(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    /// Distance parameter of the theta family.
    pub d: Rational,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize) -> Self {
        GeneratorSpec {
            family,
            n,
            d: Rational::zero(),
            seed: 0,
        }
    }

    pub fn with_d(mut self, d: Rational) -> Self {
        self.d = d;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<ProblemInstance> {
    let n = spec.n;
    match spec.family {
        Family::Circuit => {
            if n < 3 {
                return Err(Error::Argument("circuit needs n >= 3".into()));
            }
            let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            ProblemInstance::new(MultiGraph::from_edges(n, &edges)?, 0, n / 2)
        }
        Family::Path => {
            if n == 0 {
                return Err(Error::Argument("path needs n >= 1".into()));
            }
            let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
            ProblemInstance::new(MultiGraph::from_edges(n, &edges)?, 0, n - 1)
        }
        Family::ThetaLb => theta_lb(n, spec.d),
        Family::Random2vc => random_2vc(n, spec.seed),
    }
}

/// Segment lengths `s-v, t-v, s-w, t-w, v-w` of the theta family.
pub fn theta_segments(n: usize, d: Rational) -> Result<[usize; 5]> {
    let nr = Rational::from_integer(n as i64);
    let third = nr / 3;
    let dn = d * nr;
    let raw = [
        dn / 2,
        dn / 2,
        third - dn / 6,
        third - dn / 6,
        Rational::from_integer(1) + third - dn * 2 / 3,
    ];
    let mut out = [0usize; 5];
    for (k, x) in raw.iter().enumerate() {
        if !x.is_integer() || *x < Rational::from_integer(1) {
            return Err(Error::Argument(format!(
                "theta_lb with n = {n}, d = {d}: segment {k} has length {x}, not a positive integer"
            )));
        }
        out[k] = x.to_integer().to_usize().expect("positive");
    }
    Ok(out)
}

fn theta_lb(n: usize, d: Rational) -> Result<ProblemInstance> {
    let seg = theta_segments(n, d)?;
    let (s, t, v, w) = (0, 1, 2, 3);
    let mut g = MultiGraph::new(4);
    for (len, (a, b)) in seg.iter().zip([(s, v), (t, v), (s, w), (t, w), (v, w)]) {
        let mut prev = a;
        for _ in 1..*len {
            let x = g.add_vertex();
            g.add_edge(prev, x, 1)?;
            prev = x;
        }
        g.add_edge(prev, b, 1)?;
    }
    assert_eq!(g.n(), n, "theta construction vertex count");
    ProblemInstance::new(g, s, t)
}

/// Uniform simple graphs on `n` vertices, kept once 2-vertex-connected; the edge
/// count starts near `1.2 n` and grows slowly with rejections.
fn random_2vc(n: usize, seed: u64) -> Result<ProblemInstance> {
    if n < 3 {
        return Err(Error::Argument("random2vc needs n >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut m = (6 * n).div_ceil(5).min(pairs.len());
    let mut tries = 0;
    loop {
        let mut chosen: Vec<usize> = sample(&mut rng, pairs.len(), m).into_vec();
        chosen.sort_unstable();
        let edges: Vec<(usize, usize)> = chosen.iter().map(|&i| pairs[i]).collect();
        let g = MultiGraph::from_edges(n, &edges)?;
        if check_two_connected(&g).is_ok() {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            return ProblemInstance::new(g, s, t);
        }
        tries += 1;
        if tries % 20 == 0 && m < pairs.len() {
            m += 1;
        }
    }
}
