use std::sync::Arc;
use stt_core::ear::{normalize, open_min_even_ears, Ear, EarBackend, EarDecomposition, FourEarKind};
use stt_core::generate::{generate, Family, GeneratorSpec};
use stt_core::matroid::PathFamilies;
use stt_core::outer::{
    build_outer_instance, dual_lower_bound, is_clean, optimize_outer_ears, verify_dual, DualSolution,
    DualViolation,
};
use stt_core::{MultiGraph, Rational, VertexSet};

fn ear(g: &MultiGraph, vs: &[usize]) -> Ear {
    let edges = vs.windows(2).map(|w| g.find_edge(w[0], w[1]).unwrap()).collect();
    Ear::new(vs.to_vec(), edges)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Every set partition of `items`.
fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for p in partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(first);
            out.push(q);
        }
        let mut q = p.clone();
        q.push(vec![first]);
        out.push(q);
    }
    out
}

/// `μ` evaluated from its definition, maximized over all `(W, A')`.
fn brute_mu(paths: &PathFamilies) -> i64 {
    let a: Vec<usize> = paths.groups.iter().map(|g| g.0).collect();
    let mut best = i64::MIN;
    for w in partitions(&paths.v_in) {
        let within = |k: usize, part: &Vec<usize>| paths.families[k].neighbours.iter().all(|u| part.contains(u));
        let base: i64 = w
            .iter()
            .map(|part| (0..paths.families.len()).filter(|&k| within(k, part)).count() as i64 - part.len() as i64 + 1)
            .sum();
        for mask in 0..1u32 << a.len() {
            let mut mu = base;
            for (j, (_, members)) in paths.groups.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    let hit: i64 = w
                        .iter()
                        .map(|part| members.iter().filter(|&&k| within(k, part)).count() as i64)
                        .sum();
                    mu += 2 - hit;
                }
            }
            best = best.max(mu);
        }
    }
    best
}

/// Maximum common independent set size by trying every subset of paths.
fn brute_intersection(paths: &PathFamilies) -> usize {
    let all: Vec<(usize, usize, usize, usize)> = paths
        .families
        .iter()
        .enumerate()
        .flat_map(|(k, f)| f.paths.iter().map(move |(_, s)| (k, s[0], *s.last().unwrap(), 0)))
        .collect();
    assert!(all.len() <= 18, "too many paths for enumeration");
    let n = paths.v_in.iter().max().map_or(0, |m| m + 1);
    let mut best = 0;
    for mask in 0u32..1 << all.len() {
        let pick: Vec<_> = (0..all.len()).filter(|&i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        if pick.len() <= best {
            continue;
        }
        let mut per = vec![0usize; paths.families.len()];
        for p in &pick {
            per[p.0] += 1;
        }
        if per.iter().any(|&c| c > 1) {
            continue;
        }
        if paths.groups.iter().any(|(_, m)| m.iter().map(|&k| per[k]).sum::<usize>() + 2 > m.len()) {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut forest = true;
        for p in &pick {
            let (a, b) = (find(&mut parent, p.1), find(&mut parent, p.2));
            if a == b {
                forest = false;
                break;
            }
            parent[a] = b;
        }
        if forest {
            best = pick.len();
        }
    }
    best
}

fn instance_graph(seed: u64, n: usize) -> (Arc<MultiGraph>, VertexSet) {
    let inst = generate(&GeneratorSpec::new(Family::Random2vc, n).with_seed(seed)).unwrap();
    (Arc::new(inst.graph), inst.terminals)
}

#[test]
fn circuit_dual_is_n_minus_one() {
    let g = Arc::new(MultiGraph::from_edges(8, &(0..8).map(|i| (i, (i + 1) % 8)).collect::<Vec<_>>()).unwrap());
    let ed = EarDecomposition::from_ears(g.clone(), vec![ear(&g, &[0, 1, 2, 3, 4, 5, 6, 7, 0])]).unwrap();
    let t: VertexSet = [0, 4].into();
    let opt = optimize_outer_ears(&ed, &t).unwrap();
    assert_eq!(opt.optimized.primary, 1);
    assert_eq!(opt.certificate.partition, (0..8).map(|v| vec![v]).collect::<Vec<_>>());
    let y = dual_lower_bound(&opt).unwrap();
    for v in 0..8 {
        assert_eq!(y.value(&[v]), r(1, 2));
    }
    assert_eq!(y.sets.len(), 8);
    assert_eq!(y.objective(&t), r(7, 1));
}

#[test]
fn horizontal_block_identity() {
    // C5 on 0..4, horizontal 4-ear 0 - 5 - 6 - 7 - 2 with the 2-ear 5 - 8 - 7.
    let g = Arc::new(
        MultiGraph::from_edges(
            9,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 7), (7, 2), (5, 8), (8, 7)],
        )
        .unwrap(),
    );
    let ed = EarDecomposition::from_ears(
        g.clone(),
        vec![ear(&g, &[0, 1, 2, 3, 4, 0]), ear(&g, &[0, 5, 6, 7, 2]), ear(&g, &[5, 8, 7])],
    )
    .unwrap();
    assert_eq!(ed.classify_4ear(1).unwrap(), FourEarKind::Horizontal);
    let t = VertexSet::new();
    let opt = optimize_outer_ears(&ed, &t).unwrap();
    assert_eq!(opt.instance.v_hor, vec![5, 6, 7, 8]);
    assert_eq!(opt.instance.m(), 0);
    let y = dual_lower_bound(&opt).unwrap();
    let h = 1;
    let hor: Rational = [vec![6], vec![8], vec![5, 6, 7, 8]].iter().map(|s| y.value(s)).sum();
    assert_eq!(hor, Rational::from_integer(1 + h) + r(1, 2));
    assert_eq!(hor * 2, Rational::from_integer(4 + h));
    // y' puts 1/4 on each V_in vertex and 1/4 on each part of the partition.
    let total = y.objective(&t);
    assert_eq!(total, r(5, 2) + r(5, 2) + Rational::from_integer(3 + 2 * h));
    assert!(verify_dual(&g, &y, &t).feasible);
}

#[test]
fn zero_dual_and_planted_violation() {
    let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    let t: VertexSet = [0, 1].into();
    let zero = verify_dual(&g, &DualSolution::default(), &t);
    assert!(zero.feasible);
    assert_eq!(zero.objective, r(0, 1));
    let mut y = DualSolution::default();
    y.add([1], 4);
    y.add([2], 4);
    let bad = verify_dual(&g, &y, &t);
    assert!(!bad.feasible);
    assert_eq!(
        bad.violations,
        vec![DualViolation::Edge {
            edge: 1,
            load: r(2, 1)
        }]
    );
    let mut full = DualSolution::default();
    full.add([0, 1, 2], 1);
    assert_eq!(verify_dual(&g, &full, &t).violations, vec![DualViolation::InvalidSet(vec![0, 1, 2])]);
}

#[test]
fn dual_text_round_trip() {
    let mut y = DualSolution::default();
    y.add([3, 1], 2);
    y.add([0], 1);
    y.add([1, 3], 1);
    assert_eq!(y.to_text(), "y 1 1 0\ny 3 2 1 3\n");
    assert_eq!(DualSolution::parse(&y.to_text()).unwrap(), y);
    assert!(DualSolution::parse("y 1 2 0\n").is_err());
}

#[test]
fn interchangeable_clean_two_ears() {
    // C5 with two 2-ears 0 - 5 - 2 and 0 - 6 - 2.
    let g = Arc::new(
        MultiGraph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 2), (0, 6), (6, 2)]).unwrap(),
    );
    let ed = EarDecomposition::from_ears(
        g.clone(),
        vec![ear(&g, &[0, 1, 2, 3, 4, 0]), ear(&g, &[0, 5, 2]), ear(&g, &[0, 6, 2])],
    )
    .unwrap();
    let t = VertexSet::new();
    let opt = optimize_outer_ears(&ed, &t).unwrap();
    assert_eq!(opt.common.len(), brute_intersection(&opt.instance.paths));
    assert_eq!(opt.common.len(), 1);
    let wo = &opt.optimized;
    assert_eq!(wo.oriented.iter().filter(|&&o| o).count(), 1);
    assert_eq!(wo.primary, 2);
    assert!(wo.oriented[1] && !wo.oriented[2]);
    assert_eq!(opt.check.k_clean_secondary, 1);
    let y = dual_lower_bound(&opt).unwrap();
    assert!(y.objective(&t) >= Rational::from_integer(7 - 3) + r(1, 2));
}

#[test]
fn vertical_ear_is_rebuilt() {
    // C6 on 0..5; vertical 4-ear 0 - 6 - 7 - 8 - 3 with 2-ears at 7 through 9, 10, 11;
    // chords 6 - 5 and 9 - 2 give the members 6 and 9 a path each.
    let edges = [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 0),
        (0, 6),
        (6, 7),
        (7, 8),
        (8, 3),
        (7, 9),
        (9, 1),
        (7, 10),
        (10, 2),
        (7, 11),
        (11, 4),
        (6, 5),
        (9, 2),
    ];
    let g = Arc::new(MultiGraph::from_edges(12, &edges).unwrap());
    let ed = EarDecomposition::from_ears(
        g.clone(),
        vec![
            ear(&g, &[0, 1, 2, 3, 4, 5, 0]),
            ear(&g, &[0, 6, 7, 8, 3]),
            ear(&g, &[7, 9, 1]),
            ear(&g, &[7, 10, 2]),
            ear(&g, &[7, 11, 4]),
        ],
    )
    .unwrap();
    assert_eq!(ed.classify_4ear(1).unwrap(), FourEarKind::Vertical);
    let t = VertexSet::new();
    let opt = optimize_outer_ears(&ed, &t).unwrap();
    let inst = &opt.instance;
    assert_eq!(inst.a, vec![7]);
    assert_eq!(inst.group(7).unwrap().len(), 5);
    assert_eq!(opt.common.len(), brute_intersection(&inst.paths));
    assert_eq!(opt.common.len(), 2);

    let used: Vec<usize> = opt
        .common
        .iter()
        .map(|&id| inst.paths.path(id).unwrap().1[1])
        .collect();
    assert_eq!(used, vec![6, 9]);
    let new = &opt.optimized.ed;
    let fours: Vec<&Ear> = new.ears.iter().filter(|e| e.len() == 4).collect();
    assert_eq!(fours.len(), 1);
    assert_eq!(fours[0].vertices, vec![3, 8, 7, 10, 2]);
    let twos: Vec<Vec<usize>> = new.ears.iter().filter(|e| e.len() == 2).map(|e| e.vertices.clone()).collect();
    assert_eq!(twos, vec![vec![0, 6, 5], vec![1, 9, 2], vec![7, 11, 4]]);
    assert_eq!(opt.optimized.primary, 3);
    assert_eq!(opt.optimized.oriented, vec![false, true, true, false, false]);
    let y = dual_lower_bound(&opt).unwrap();
    assert!(verify_dual(&g, &y, &t).feasible);
}

/// Loads of every edge recomputed with rationals, independent of `verify_dual`.
fn edge_loads(g: &MultiGraph, y: &DualSolution) -> Vec<Rational> {
    g.edges()
        .iter()
        .map(|e| {
            y.sets
                .iter()
                .filter(|(s, _)| s.contains(&e.u) != s.contains(&e.v))
                .map(|(_, q)| r(*q, 4))
                .sum()
        })
        .collect()
}

#[test]
fn corpus_duals_are_feasible_and_certified() {
    let mut with_m = 0;
    for seed in 0..120u64 {
        let n = 6 + (seed as usize * 5) % 40;
        let (g, t) = instance_graph(seed, n);
        let ed = normalize(&open_min_even_ears(&g, EarBackend::Auto).unwrap()).unwrap();
        let stats = ed.stats();
        let opt = optimize_outer_ears(&ed, &t).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        if opt.instance.m() > 0 {
            with_m += 1;
        }
        let inst = &opt.instance;
        if n <= 10 {
            assert_eq!(opt.certificate.mu, brute_mu(&inst.paths), "seed {seed}");
        }
        let paths = inst.paths.path_count();
        if paths <= 14 {
            assert_eq!(opt.common.len(), brute_intersection(&inst.paths), "seed {seed}");
        }
        assert_eq!(opt.common.len() as i64, inst.m() as i64 - opt.certificate.mu);

        let y = dual_lower_bound(&opt).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let check = verify_dual(&g, &y, &t);
        assert!(check.feasible, "seed {seed}: {:?}", check.violations);
        assert!(check.max_stack <= r(3, 2));
        assert!(edge_loads(&g, &y).iter().all(|l| *l <= r(1, 1)), "seed {seed}");
        assert!(y.sets.iter().all(|(_, q)| *q >= 0));

        let nn = n as i64;
        let by_ears = Rational::from_integer(nn - 3)
            + r(stats.k2 as i64 + stats.k3 as i64 - opt.common.len() as i64, 2);
        assert!(check.objective >= by_ears, "seed {seed}: {} < {by_ears}", check.objective);
        let clean_secondary = opt.optimized.ed.ears[opt.optimized.primary..]
            .iter()
            .filter(|e| is_clean(e, &t))
            .count();
        assert_eq!(clean_secondary, opt.check.k_clean_secondary);
        assert!(check.objective >= Rational::from_integer(nn - 3) + r(clean_secondary as i64, 2));

        // Oriented ears are the short primary ones and form a forest.
        let wo = &opt.optimized;
        for (i, e) in wo.ed.ears.iter().enumerate().skip(usize::from(opt.check.promoted_first)) {
            assert_eq!(wo.oriented[i], e.len() <= 3 && i < wo.primary, "seed {seed} ear {i}");
        }
        assert!(opt.check.blocked_inequality());
        let rebuilt = build_outer_instance(&wo.ed).unwrap();
        assert_eq!(rebuilt.paths.v_in, inst.paths.v_in, "seed {seed}");
    }
    assert!(with_m > 30, "only {with_m} instances had outer short ears");
}
