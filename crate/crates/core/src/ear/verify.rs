use super::{EarDecomposition, FourEarKind, Layout, NO_EAR};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PropertyCheck {
    pub holds: bool,
    /// Offending ears, as indices into `EarDecomposition::ears`.
    pub ears: Vec<usize>,
    pub vertices: Vec<usize>,
    pub witness: Option<String>,
}

impl PropertyCheck {
    fn ok() -> Self {
        PropertyCheck {
            holds: true,
            ..Default::default()
        }
    }

    fn fail(ears: Vec<usize>, vertices: Vec<usize>, msg: String) -> Self {
        PropertyCheck {
            holds: false,
            ears,
            vertices,
            witness: Some(msg),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NiceReport {
    pub a: PropertyCheck,
    pub b: PropertyCheck,
    pub c: PropertyCheck,
    pub d: PropertyCheck,
    pub e: PropertyCheck,
    pub f: PropertyCheck,
    /// Blocked 4-ears are at most twice the long ears plus the other 4-ears.
    pub blocked_bound: PropertyCheck,
}

impl NiceReport {
    pub fn is_nice(&self) -> bool {
        self.a.holds && self.b.holds && self.c.holds
    }
}

fn check_a(ed: &EarDecomposition, l: &Layout) -> PropertyCheck {
    for (i, ear) in ed.ears.iter().enumerate() {
        if ear.len() <= 3 && !(ed.is_open_ear(i) && l.pendant_ear[i]) {
            let why = if ed.is_open_ear(i) { "not pendant" } else { "closed" };
            return PropertyCheck::fail(vec![i], ear.vertices.clone(), format!("short ear {} is {why}", i + 1));
        }
    }
    PropertyCheck::ok()
}

fn closed_four(ed: &EarDecomposition, i: usize) -> bool {
    ed.ears[i].len() == 4 && !ed.is_open_ear(i)
}

fn check_b(ed: &EarDecomposition, l: &Layout) -> PropertyCheck {
    for i in 0..ed.ears.len() {
        if l.four_kind[i] == Some(FourEarKind::Other) {
            return PropertyCheck::fail(
                vec![i],
                ed.ears[i].vertices.clone(),
                format!("4-ear {} is not pendant, blocked, vertical or horizontal", i + 1),
            );
        }
        if closed_four(ed, i) {
            if let Some(&(q, v)) = ed.attached(l, i).iter().find(|&&(q, _)| closed_four(ed, q)) {
                return PropertyCheck::fail(
                    vec![q, i],
                    vec![v],
                    format!("closed 4-ear {} attached to closed 4-ear {}", q + 1, i + 1),
                );
            }
        }
    }
    PropertyCheck::ok()
}

fn check_c(ed: &EarDecomposition, l: &Layout) -> PropertyCheck {
    let g = &ed.graph;
    let middle4 = |v: usize| {
        let p = l.ear_of[v];
        p != NO_EAR && ed.ears[p].len() == 4 && ed.ears[p].vertices[2] == v
    };
    for e in g.edges() {
        let (v, w) = (e.u, e.v);
        let (p, q) = (l.ear_of[v], l.ear_of[w]);
        if p == NO_EAR || q == NO_EAR || p == q || !l.outer[p] || !l.outer[q] {
            continue;
        }
        if ed.ears[p].is_endpoint(w) || ed.ears[q].is_endpoint(v) || (middle4(v) && middle4(w)) {
            continue;
        }
        return PropertyCheck::fail(
            vec![p, q],
            vec![v, w],
            format!("outer ears {} and {} adjacent at {v}-{w}", p + 1, q + 1),
        );
    }
    for (r, ear) in ed.ears.iter().enumerate() {
        if ear.len() != 2 {
            continue;
        }
        let (a, b) = ear.ends();
        let hosts: Vec<usize> = [a, b]
            .iter()
            .map(|&x| l.ear_of[x])
            .filter(|&p| p != NO_EAR && ed.ears[p].len() == 4 && l.outer[p])
            .collect();
        if hosts.len() == 2 && hosts[0] != hosts[1] {
            return PropertyCheck::fail(
                vec![r, hosts[0], hosts[1]],
                vec![a, b],
                format!("2-ear {} attached to outer 4-ears {} and {}", r + 1, hosts[0] + 1, hosts[1] + 1),
            );
        }
    }
    PropertyCheck::ok()
}

fn check_d(ed: &EarDecomposition) -> PropertyCheck {
    match (0..ed.ears.len()).find(|&i| ed.ears[i].len() <= 3 && !ed.is_open_ear(i)) {
        Some(i) => PropertyCheck::fail(vec![i], ed.ears[i].vertices.clone(), format!("short ear {} closed", i + 1)),
        None => PropertyCheck::ok(),
    }
}

fn check_e(ed: &EarDecomposition, l: &Layout) -> PropertyCheck {
    for i in 0..ed.ears.len() {
        if ed.ears[i].len() > 3 {
            continue;
        }
        if let Some(&(q, v)) = ed.attached(l, i).iter().find(|&&(q, _)| !ed.is_open_ear(q)) {
            return PropertyCheck::fail(vec![q, i], vec![v], format!("closed ear {} attached to short ear {}", q + 1, i + 1));
        }
    }
    PropertyCheck::ok()
}

fn check_f(ed: &EarDecomposition, l: &Layout) -> PropertyCheck {
    for i in 0..ed.ears.len() {
        if !closed_four(ed, i) {
            continue;
        }
        let bad = ed.attached(l, i).into_iter().find(|&(q, _)| {
            closed_four(ed, q) || (ed.ears[q].len() == 3 && !l.pendant_ear[q])
        });
        if let Some((q, v)) = bad {
            return PropertyCheck::fail(vec![q, i], vec![v], format!("ear {} attached to closed 4-ear {}", q + 1, i + 1));
        }
    }
    PropertyCheck::ok()
}

fn check_blocked(ed: &EarDecomposition, l: &Layout) -> PropertyCheck {
    let blocked = l.four_kind.iter().filter(|k| **k == Some(FourEarKind::Blocked)).count();
    let other4 = l.four_kind.iter().filter(|k| k.is_some()).count() - blocked;
    let long = ed.ears.iter().filter(|e| e.len() >= 5).count();
    if blocked <= 2 * long + other4 {
        PropertyCheck::ok()
    } else {
        PropertyCheck::fail(
            Vec::new(),
            Vec::new(),
            format!("{blocked} blocked 4-ears exceed 2*{long} + {other4}"),
        )
    }
}

/// Checks the niceness properties and the invariants maintained during normalization.
pub fn verify_nice(ed: &EarDecomposition) -> NiceReport {
    let l = ed.layout();
    NiceReport {
        a: check_a(ed, &l),
        b: check_b(ed, &l),
        c: check_c(ed, &l),
        d: check_d(ed),
        e: check_e(ed, &l),
        f: check_f(ed, &l),
        blocked_bound: check_blocked(ed, &l),
    }
}
