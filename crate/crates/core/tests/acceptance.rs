//! One PASS/FAIL line per acceptance criterion. Every check recomputes the
//! quantity it certifies with code local to this file wherever that is
//! feasible (tour validity, distances, ranks, dual loads, exhaustive optima).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;
use stt_core::bench::{bench, parse_corpus, to_csv, BenchConfig};
use stt_core::dp::{dp_tour, DpConfig};
use stt_core::ear::{heuristic_open_ears, normalize_traced, verify_nice, FourEarKind, Potential};
use stt_core::generate::{generate, theta_segments, Family, GeneratorSpec};
use stt_core::graph::{brute_force_opt, st_terminals};
use stt_core::induction::{circuit_tjoin, st_tour_many_pendant, Circuit};
use stt_core::io::write_instance;
use stt_core::lp::lp_value;
use stt_core::matroid::{forest_color, union_color, GraphicMatroid};
use stt_core::outer::{dual_lower_bound, is_clean};
use stt_core::pairing::st_tour_few_pendant;
use stt_core::solve::{base_solver, solve, SolveConfig};
use stt_core::{BigRational, EdgeMultiset, MultiGraph, ProblemInstance, Rational};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn int(k: i64) -> Rational {
    Rational::from_integer(k)
}

fn big(x: Rational) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// Checks an `s`-`t`-tour from scratch and returns its weight.
fn tour_weight(g: &MultiGraph, j: &EdgeMultiset, s: usize, t: usize) -> Result<u64, String> {
    let n = g.n();
    let mut deg = vec![0usize; n];
    let mut dsu = Dsu::new(n);
    let mut w = 0;
    for (e, k) in j.iter() {
        ensure!(e < g.m(), "edge {e} does not exist");
        ensure!((1..=2).contains(&k), "edge {e} used {k} times");
        let ed = g.edge(e);
        deg[ed.u] += k as usize;
        deg[ed.v] += k as usize;
        dsu.union(ed.u, ed.v);
        w += k as u64 * ed.w;
    }
    for v in 0..n {
        let odd = deg[v] % 2 == 1;
        ensure!(odd == (s != t && (v == s || v == t)), "vertex {v} has degree {}", deg[v]);
        ensure!(n == 1 || deg[v] > 0, "vertex {v} uncovered");
        ensure!(dsu.find(v) == dsu.find(0), "vertex {v} not connected");
    }
    Ok(w)
}

fn bfs_dist(g: &MultiGraph, s: usize, t: usize) -> u64 {
    let mut d = vec![u64::MAX; g.n()];
    d[s] = 0;
    let mut q = std::collections::VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &(_, y) in g.adj(x) {
            if d[y] == u64::MAX {
                d[y] = d[x] + 1;
                q.push_back(y);
            }
        }
    }
    d[t]
}

/// Minimum tour weight over all multiplicity vectors in `{0, 1, 2}^m`.
fn enum_opt(g: &MultiGraph, s: usize, t: usize) -> u64 {
    let m = g.m();
    assert!(m <= 14);
    let mut mult = vec![0u8; m];
    let mut best = u64::MAX;
    loop {
        let j = EdgeMultiset::from_edges((0..m).flat_map(|e| std::iter::repeat(e).take(mult[e] as usize)));
        if let Ok(w) = tour_weight(g, &j, s, t) {
            best = best.min(w);
        }
        let Some(i) = mult.iter().position(|&k| k < 2) else { break };
        mult[i] += 1;
        mult[..i].fill(0);
    }
    best
}

fn random_instance(seed: u64, n: usize) -> ProblemInstance {
    generate(&GeneratorSpec::new(Family::Random2vc, n).with_seed(seed)).expect("generator")
}

/// The shared corpus for the ear-induction criteria: 500 graphs with 5 to 60
/// vertices, every fifth one with `s = t`.
fn corpus() -> Vec<(u64, ProblemInstance)> {
    (0..500u64)
        .map(|seed| {
            let n = 5 + (seed as usize * 7) % 56;
            let inst = random_instance(seed, n);
            let inst = if seed % 5 == 4 { ProblemInstance::new(inst.graph, inst.s, inst.s).unwrap() } else { inst };
            (seed, inst)
        })
        .collect()
}

fn c1_circuit_lemma() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for len in 1..=10usize {
        // Brute force: minimum connected spanning join per odd set.
        let mut best: BTreeMap<u32, usize> = BTreeMap::new();
        let mut mult = vec![0u8; len];
        loop {
            let zero = mult.iter().filter(|&&k| k == 0).count();
            if len == 1 || zero <= 1 {
                let mut odd = 0u32;
                for (j, &k) in mult.iter().enumerate() {
                    if k % 2 == 1 {
                        odd ^= 1 << j | 1 << ((j + 1) % len);
                    }
                }
                let size: usize = mult.iter().map(|&k| k as usize).sum();
                let b = best.entry(odd).or_insert(size);
                *b = (*b).min(size);
            }
            let Some(i) = mult.iter().position(|&k| k < 2) else { break };
            mult[i] += 1;
            mult[..i].fill(0);
        }
        let c = Circuit::cycle(len);
        for mask in (0u32..1 << len).filter(|m| m.count_ones() % 2 == 0) {
            let tp: Vec<usize> = (0..len).filter(|&p| mask >> p & 1 == 1).collect();
            let f = circuit_tjoin(&c, &tp).map_err(|e| format!("len {len}, T_P {tp:?}: {e}"))?;
            let mut odd = 0u32;
            let mut dsu = Dsu::new(len);
            for (j, &k) in f.iter().enumerate() {
                ensure!(k <= 2, "len {len}: multiplicity {k}");
                if k % 2 == 1 {
                    odd ^= 1 << j | 1 << ((j + 1) % len);
                }
                if k > 0 {
                    dsu.union(j, (j + 1) % len);
                }
            }
            ensure!(odd == mask, "len {len}, T_P {tp:?}: wrong odd set");
            ensure!((0..len).all(|v| dsu.find(v) == dsu.find(0)), "len {len}, T_P {tp:?}: not connected");
            let size: usize = f.iter().map(|&k| k as usize).sum();
            let gamma = i64::from(len <= 3 && tp.is_empty());
            let bound_halves = 3 * (len as i64 - 1) - 1 + 2 * gamma;
            ensure!(2 * size as i64 <= bound_halves, "len {len}, T_P {tp:?}: |F| = {size}");
            let opt = best[&mask];
            ensure!(opt <= size && 2 * opt as i64 <= bound_halves, "len {len}, T_P {tp:?}: optimum {opt}");
            cases += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1} s");
    Ok(format!("{cases} (circuit, T_P) pairs in {secs:.2} s"))
}

/// Graphic rank from scratch.
fn grank(edges: &[(usize, usize)]) -> usize {
    let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let mut d = Dsu::new(n);
    edges.iter().filter(|&&(a, b)| d.union(a, b)).count()
}

fn check_coloring(red: &[(usize, usize, usize)], blue: &[(usize, usize, usize)], u: &[(usize, usize, usize)]) -> Result<(), String> {
    let what = || format!("R {red:?}, B {blue:?}, U {u:?}");
    let ends: BTreeMap<usize, (usize, usize)> = red.iter().chain(blue).chain(u).map(|&(e, a, b)| (e, (a, b))).collect();
    let pick = |ids: &[usize]| -> Vec<(usize, usize)> { ids.iter().map(|e| ends[e]).collect() };
    let ids = |s: &[(usize, usize, usize)]| -> Vec<usize> { s.iter().map(|e| e.0).collect() };
    let (rid, bid, uid) = (ids(red), ids(blue), ids(u));

    let m = GraphicMatroid::new(ends.iter().map(|(&e, &(a, b))| (e, a, b)));
    let (x, y) = union_color(&m, &rid, &bid, &uid).map_err(|e| format!("{}: {e}", what()))?;
    let mut xy: Vec<usize> = x.iter().chain(&y).copied().collect();
    xy.sort_unstable();
    let mut us = uid.clone();
    us.sort_unstable();
    ensure!(xy == us, "{}: X, Y do not partition U", what());
    let with = |a: &[usize], b: &[usize]| grank(&pick(&[a, b].concat()));
    ensure!(
        with(&rid, &x) + with(&bid, &y) >= with(&rid, &bid) + grank(&pick(&uid)),
        "{}: union inequality fails",
        what()
    );

    let fc = forest_color(red, blue, u).map_err(|e| format!("{}: {e}", what()))?;
    ensure!(fc.z.len() <= 1, "{}: Z = {:?}", what(), fc.z);
    let mut all: Vec<usize> = fc.u_r.iter().chain(&fc.u_b).chain(&fc.z).copied().collect();
    all.sort_unstable();
    ensure!(all == us, "{}: coloring does not partition U", what());
    let forest = |s: &[usize]| grank(&pick(s)) == s.len();
    ensure!(forest(&[rid.clone(), fc.u_r].concat()), "{}: R ∪ U_R has a cycle", what());
    ensure!(forest(&[bid.clone(), fc.u_b].concat()), "{}: B ∪ U_B has a cycle", what());
    Ok(())
}

fn forests_on(n: usize, max: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<(usize, usize)>, usize)> = vec![(Vec::new(), 0)];
    while let Some((cur, from)) = stack.pop() {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            continue;
        }
        for (k, &p) in pairs.iter().enumerate().skip(from) {
            let mut next = cur.clone();
            next.push(p);
            if grank(&next) == next.len() {
                stack.push((next, k + 1));
            }
        }
    }
    out
}

fn c2_matroid_coloring() -> Outcome {
    let mut exhaustive = 0;
    for len in 2..=8usize {
        let circuit: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        let us = forests_on(len, 4);
        // Red/blue patterns up to rotation and reflection of the circuit.
        let canon = |mask: u32| -> u32 {
            let mut best = u32::MAX;
            for rot in 0..len {
                for flip in [false, true] {
                    let mut m2 = 0;
                    for i in 0..len {
                        let j = if flip { (len - i) % len } else { i };
                        let j = (j + rot) % len;
                        if mask >> i & 1 == 1 {
                            m2 |= 1 << j;
                        }
                    }
                    best = best.min(m2);
                }
            }
            best
        };
        for mask in (1u32..(1 << len) - 1).filter(|&m| canon(m) == m) {
            let red: Vec<(usize, usize, usize)> = (0..len).filter(|i| mask >> i & 1 == 1).map(|i| (i, circuit[i].0, circuit[i].1)).collect();
            let blue: Vec<(usize, usize, usize)> = (0..len).filter(|i| mask >> i & 1 == 0).map(|i| (i, circuit[i].0, circuit[i].1)).collect();
            for u in &us {
                let u: Vec<(usize, usize, usize)> = u.iter().enumerate().map(|(k, &(a, b))| (len + k, a, b)).collect();
                check_coloring(&red, &blue, &u)?;
                exhaustive += 1;
            }
        }
    }
    // Random graphic instances: circuits up to 12 edges, forests over the
    // circuit and up to 4 extra vertices.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let len = rng.gen_range(2..=12usize);
        let extra = rng.gen_range(0..=4usize);
        let n = len + extra;
        let mut ids = 0..;
        let mut red = Vec::new();
        let mut blue = Vec::new();
        let split = rng.gen_range(1..len);
        let mut order: Vec<usize> = (0..len).collect();
        for i in (1..len).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        for (k, &i) in order.iter().enumerate() {
            let e = (ids.next().unwrap(), i, (i + 1) % len);
            if k < split { red.push(e) } else { blue.push(e) }
        }
        let mut u: Vec<(usize, usize, usize)> = Vec::new();
        for _ in 0..rng.gen_range(1..=n) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let mut ends: Vec<(usize, usize)> = u.iter().map(|&(_, x, y)| (x, y)).collect();
            ends.push((a, b));
            if a != b && grank(&ends) == ends.len() {
                u.push((ids.next().unwrap(), a, b));
            }
        }
        if u.is_empty() {
            u.push((ids.next().unwrap(), 0, len / 2));
        }
        check_coloring(&red, &blue, &u)?;
    }
    Ok(format!("{exhaustive} exhaustive and 1000 random instances"))
}

fn c3_ear_decomposition() -> Outcome {
    let mut steps = 0;
    for seed in 0..200u64 {
        let n = 6 + (seed as usize * 7) % 55;
        let inst = random_instance(1000 + seed, n);
        let ed = heuristic_open_ears(&inst.graph).map_err(|e| format!("seed {seed}: {e}"))?;
        let (out, trace) = normalize_traced(&ed).map_err(|e| format!("seed {seed}: {e}"))?;
        let evens = |lens: Vec<usize>| lens.iter().filter(|&&l| l % 2 == 0).count();
        let before = evens(ed.ears.iter().map(|e| e.len()).collect());
        let after = evens(out.ears.iter().map(|e| e.len()).collect());
        let mut prev = Potential::of(&ed).even;
        ensure!(prev == before, "seed {seed}: even count {prev} != {before}");
        for (rule, p) in &trace.steps {
            ensure!(p.even <= prev, "seed {seed}: rule {rule} raised the even-ear count");
            prev = p.even;
            steps += 1;
        }
        ensure!(prev == after && after <= before, "seed {seed}: {before} -> {after} even ears");
        let report = verify_nice(&out);
        for (name, p) in [("a", &report.a), ("b", &report.b), ("c", &report.c)] {
            ensure!(p.holds, "seed {seed}: property ({name}) fails: {:?}", p.witness);
        }
        let kinds = out.layout().four_kind;
        let blocked = kinds.iter().filter(|k| **k == Some(FourEarKind::Blocked)).count();
        let other4 = kinds.iter().flatten().count() - blocked;
        let long = out.ears.iter().filter(|e| e.len() >= 5).count();
        ensure!(blocked <= 2 * long + other4, "seed {seed}: {blocked} blocked > 2*{long} + {other4}");
    }
    Ok(format!("200 graphs, {steps} rewrite steps"))
}

fn c4_dual_certificates() -> Outcome {
    let mut small = 0;
    for (seed, inst) in corpus() {
        let g = &inst.graph;
        let n = g.n();
        let many = st_tour_many_pendant(g, inst.s, inst.t).map_err(|e| format!("seed {seed}: {e}"))?;
        let y = dual_lower_bound(&many.outer).map_err(|e| format!("seed {seed}: {e}"))?;
        let term = st_terminals(inst.s, inst.t);
        let mut load = vec![0i64; g.m()];
        let mut objective = int(0);
        for (set, q) in &y.sets {
            ensure!(*q >= 0, "seed {seed}: negative dual");
            let mut inside = vec![false; n];
            for &v in set {
                inside[v] = true;
            }
            let k = set.len();
            ensure!(k > 0 && k < n, "seed {seed}: improper set");
            for e in g.edges() {
                if inside[e.u] != inside[e.v] {
                    load[e.id] += q;
                }
            }
            let odd = term.iter().filter(|&&v| inside[v]).count() % 2 == 1;
            objective += r(*q * if odd { 1 } else { 2 }, 4);
        }
        ensure!(load.iter().all(|&l| l <= 4), "seed {seed}: an edge is overloaded");
        let woed = &many.outer.optimized;
        let kcs = woed.ed.ears[woed.primary..].iter().filter(|e| is_clean(e, &term)).count();
        let floor = int(n as i64 - 3) + r(kcs as i64, 2);
        ensure!(objective >= floor, "seed {seed}: dual {objective} < {floor}");
        if n <= 12 {
            let lp = lp_value(&inst, 12).map_err(|e| format!("seed {seed}: {e}"))?.value;
            let opt = brute_force_opt(&inst, 12).map_err(|e| format!("seed {seed}: {e}"))?.0;
            ensure!(big(objective) <= lp, "seed {seed}: dual {objective} > LP {lp}");
            ensure!(lp <= big(int(opt as i64)), "seed {seed}: LP {lp} > OPT {opt}");
            small += 1;
        }
    }
    Ok(format!("500 duals feasible, {small} with n <= 12 checked against LP and OPT"))
}

fn c5_circuits() -> Outcome {
    let mut out = Vec::new();
    for n in [6usize, 8, 10, 12] {
        let inst = generate(&GeneratorSpec::new(Family::Circuit, n)).unwrap();
        let lp = lp_value(&inst, 40).map_err(|e| e.to_string())?.value;
        ensure!(lp == big(int(n as i64)), "C{n}: LP {lp}");
        let opt = brute_force_opt(&inst, 14).map_err(|e| e.to_string())?.0;
        let want = (3 * n / 2 - 2) as u64;
        ensure!(opt == want, "C{n}: OPT {opt}, expected {want}");
        ensure!(enum_opt(&inst.graph, inst.s, inst.t) == want, "C{n}: enumeration disagrees");
        let rep = solve(&inst, &SolveConfig::default()).map_err(|e| e.to_string())?;
        ensure!(rep.branch.to_string() == "enumeration", "C{n}: branch {}", rep.branch);
        ensure!(tour_weight(&inst.graph, &rep.multiset(), inst.s, inst.t)? == want, "C{n}: solver tour");
        out.push(format!("C{n}: {opt}/{lp}"));
    }
    Ok(out.join(", "))
}

fn c6_theta() -> Outcome {
    let mut out = Vec::new();
    let mut corpus = String::new();
    let mut cases = Vec::new();
    for n in 4..=14usize {
        for k in 1..=n as i64 {
            let d = r(k, n as i64);
            if theta_segments(n, d).is_err() {
                continue;
            }
            let inst = generate(&GeneratorSpec::new(Family::ThetaLb, n).with_d(d)).unwrap();
            let lp = lp_value(&inst, 40).map_err(|e| e.to_string())?.value;
            ensure!(lp <= big(int(n as i64 + 1)), "n {n}, d {d}: LP {lp}");
            let opt = brute_force_opt(&inst, 14).map_err(|e| e.to_string())?.0;
            if inst.graph.m() <= 13 {
                ensure!(enum_opt(&inst.graph, inst.s, inst.t) == opt, "n {n}, d {d}: enumeration disagrees");
            }
            let floor = (int(4) + d) * int(n as i64) / 3 - 3;
            ensure!(int(opt as i64) >= floor, "n {n}, d {d}: OPT {opt} < {floor}");
            corpus += &format!("theta_lb {n} d={d}\n");
            out.push(format!("(n {n}, d {d}): OPT {opt}, LP {lp}"));
            cases.push((n, d, lp, opt));
        }
    }
    ensure!(!cases.is_empty(), "no integral theta instance");
    let rows = bench(&parse_corpus(&corpus).unwrap(), &BenchConfig::default());
    for (row, (n, d, lp, opt)) in rows.iter().zip(&cases) {
        ensure!(row.error.is_none(), "bench n {n}: {:?}", row.error);
        ensure!(row.tour == Some(*opt), "bench n {n}: tour {:?}", row.tour);
        let ratio: f64 = row.ratio_lp.as_deref().unwrap_or("nan").parse().unwrap();
        let lp = lp.to_f64().unwrap();
        let target = (4.0 + d.to_f64().unwrap()) / 3.0 * (*n as f64) / lp - 3.0 / lp;
        ensure!(ratio >= target - 5e-7, "bench n {n}, d {d}: ratio {ratio} below {target}");
    }
    Ok(out.join("; "))
}

struct EarCorpusStats {
    applies: usize,
    few: usize,
    lp: usize,
}

/// Criteria 7, 8 and 9 share one pass over the corpus.
fn ear_corpus() -> Result<EarCorpusStats, String> {
    let mut st = EarCorpusStats { applies: 0, few: 0, lp: 0 };
    for (seed, inst) in corpus() {
        let g = Arc::new(inst.graph.clone());
        let (s, t) = (inst.s, inst.t);
        let n = g.n();
        let many = st_tour_many_pendant(&g, s, t).map_err(|e| format!("seed {seed}: {e}"))?;
        let len = tour_weight(&g, &many.tour, s, t).map_err(|e| format!("seed {seed}: {e}"))?;
        let woed = &many.outer.optimized;
        let res = &many.primary;
        if res.bounds.applies {
            let p = woed.primary;
            let oriented = |i: usize| woed.oriented[i];
            let k4 = (0..p).filter(|&i| !oriented(i) && woed.ed.ears[i].len() == 4).count() as i64;
            let k5 = (0..p).filter(|&i| !oriented(i) && woed.ed.ears[i].len() >= 5).count() as i64;
            let np = res.bounds.n as i64;
            let bound = r(3, 2) * int(np - 1) - r(woed.pi as i64, 26) + r(k4 - 2 * k5, 26);
            ensure!(int(res.tour.size() as i64) <= bound, "seed {seed}: best_t_tour {} > {bound}", res.tour.size());
            st.applies += 1;
        }

        let few = st_tour_few_pendant(woed, s, t).map_err(|e| format!("seed {seed}: {e}"))?;
        let few_len = tour_weight(&g, &few.tour, s, t).map_err(|e| format!("seed {seed}: few: {e}"))?;
        let pi = few.pairing.pi as i64;
        let bound = r(4, 3) * int(n as i64 - 1) + r(2 * pi, 3) + r(bfs_dist(&g, s, t) as i64, 3);
        ensure!(int(few_len as i64) <= bound, "seed {seed}: few-pendant {few_len} > {bound}");
        let c_j: i64 = few.j_aux.iter().map(|&e| few.aux.cost[e]).sum();
        let c_x = few.aux.cost.iter().fold(int(0), |a, &c| a + r(c, 3));
        ensure!(int(c_j) <= c_x, "seed {seed}: c(J'') = {c_j} > c(x) = {c_x}");
        st.few += 1;

        if n <= 30 {
            let lp = lp_value(&inst, 30).map_err(|e| format!("seed {seed}: {e}"))?.value;
            let ratio = r(3, 2) - r(many.pi as i64, 26 * (n as i64 - 1));
            let cap = big(ratio) * lp.clone() + big(int(3));
            ensure!(big(int(len as i64)) <= cap, "seed {seed}: many-pendant {len} > {cap}");
            st.lp += 1;
        }
    }
    Ok(st)
}

fn c10_dp() -> Outcome {
    let mut exact_runs = 0;
    let mut pipeline_runs = 0;
    let mut worst_beta = int(1);
    for seed in 0..400u64 {
        if pipeline_runs >= 100 && exact_runs >= 100 {
            break;
        }
        let n = 4 + (seed as usize) % 9;
        let mut inst = random_instance(5000 + seed, n);
        // Put t as far from s as possible so that the distance condition holds often.
        let far = (0..n).max_by_key(|&v| (bfs_dist(&inst.graph, inst.s, v), v)).unwrap();
        inst = ProblemInstance::new(inst.graph, inst.s, far).unwrap();
        let g = &inst.graph;
        let (s, t) = (inst.s, inst.t);
        let opt = brute_force_opt(&inst, 12).map_err(|e| e.to_string())?.0 as i64;
        let delta = r(bfs_dist(g, s, t) as i64, opt) - r(1, 3);
        if delta <= int(0) {
            continue;
        }
        let exact = |h: &MultiGraph, a: usize, b: usize| {
            let sub = ProblemInstance::new(h.clone(), a, b)?;
            Ok(brute_force_opt(&sub, 12)?.1)
        };
        let dp = dp_tour(g, s, t, &exact, DpConfig::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(tour_weight(g, &dp.tour, s, t)? as i64 == opt, "seed {seed}: exact dp {} != OPT {opt}", dp.length);
        exact_runs += 1;

        // β is the worst ratio the pipeline attains on the sub-instances of this run.
        let beta = RefCell::new(int(1));
        let base = base_solver(2);
        let measured = |h: &MultiGraph, a: usize, b: usize| {
            let tour = base(h, a, b)?;
            let sub = ProblemInstance::new(h.clone(), a, b)?;
            let o = brute_force_opt(&sub, 12)?.0;
            if o > 0 {
                let q = r(tour.weight(h) as i64, o as i64);
                let mut bb = beta.borrow_mut();
                if q > *bb {
                    *bb = q;
                }
            }
            Ok(tour)
        };
        let dp = dp_tour(g, s, t, &measured, DpConfig::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        let len = tour_weight(g, &dp.tour, s, t)? as i64;
        let beta = beta.into_inner();
        let bound = (beta - r(3, 2) * (beta - 1) * delta) * opt;
        ensure!(int(len) <= bound, "seed {seed}: dp {len} > {bound} (β {beta}, δ {delta})");
        worst_beta = worst_beta.max(beta);
        pipeline_runs += 1;
    }
    ensure!(pipeline_runs >= 100, "only {pipeline_runs} instances met the distance condition");
    Ok(format!("{exact_runs} exact and {pipeline_runs} pipeline runs, largest β {worst_beta}"))
}

fn c11_end_to_end() -> Outcome {
    let mut checked = 0;
    for seed in 0..150u64 {
        let n = 3 + (seed as usize) % 10;
        let inst = random_instance(9000 + seed, n);
        let inst = if seed % 4 == 3 { ProblemInstance::new(inst.graph, inst.t, inst.t).unwrap() } else { inst };
        // Enumeration off for everything but bridges, so the ear pipeline and the DP are what is measured.
        let cfg = SolveConfig { enum_limit: 2, ..SolveConfig::default() };
        let rep = solve(&inst, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        let len = tour_weight(&inst.graph, &rep.multiset(), inst.s, inst.t).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(len == rep.length, "seed {seed}: reported length {} != {len}", rep.length);
        let opt = brute_force_opt(&inst, 12).map_err(|e| e.to_string())?.0;
        if opt > 0 {
            ensure!(
                r(len as i64, opt as i64) <= r(3, 2) + r(3, opt as i64),
                "seed {seed}: {len} over OPT {opt}"
            );
        }
        ensure!(rep.to_json() == solve(&inst, &cfg).unwrap().to_json(), "seed {seed}: report differs between runs");
        checked += 1;
    }
    let spec = GeneratorSpec::new(Family::Random2vc, 40).with_seed(77);
    ensure!(write_instance(&generate(&spec).unwrap()) == write_instance(&generate(&spec).unwrap()), "generator");
    let large = generate(&spec).unwrap();
    let cfg = SolveConfig { depth: 0, ..SolveConfig::default() };
    let a = solve(&large, &cfg).map_err(|e| e.to_string())?;
    tour_weight(&large.graph, &a.multiset(), large.s, large.t)?;
    ensure!(a.to_json() == solve(&large, &cfg).unwrap().to_json(), "n = 40 report differs between runs");
    let corpus = parse_corpus("circuit 6..12:2\nrandom2vc 8..12:2 seeds=0..2\n").unwrap();
    let cfg = BenchConfig::default();
    ensure!(to_csv(&bench(&corpus, &cfg)) == to_csv(&bench(&corpus, &cfg)), "bench rows differ between runs");
    Ok(format!("{checked} instances with n <= 12, byte-identical reports"))
}

fn main() {
    let start = Instant::now();
    let ear = RefCell::new(None);
    let shared = || -> Result<(usize, usize, usize), String> {
        let mut cached = ear.borrow_mut();
        match cached.get_or_insert_with(|| ear_corpus().map(|s| (s.applies, s.few, s.lp))) {
            Ok(v) => Ok(*v),
            Err(e) => Err(e.clone()),
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("circuit lemma, exhaustive", Box::new(c1_circuit_lemma)),
        ("matroid and forest coloring", Box::new(c2_matroid_coloring)),
        ("nice ear decompositions", Box::new(c3_ear_decomposition)),
        ("dual certificates", Box::new(c4_dual_certificates)),
        ("circuit calibration", Box::new(c5_circuits)),
        ("theta family", Box::new(c6_theta)),
        ("ear induction bound", Box::new(|| shared().map(|(a, _, _)| format!("{a} runs with the bound in force, 500 tours checked")))),
        ("few-pendant bound", Box::new(|| shared().map(|(_, f, _)| format!("{f} runs")))),
        ("many-pendant against LP", Box::new(|| shared().map(|(_, _, l)| format!("{l} runs with n <= 30")))),
        ("dynamic program", Box::new(c10_dp)),
        ("end-to-end soundness", Box::new(c11_end_to_end)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{detail}] ({secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{why}] ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
