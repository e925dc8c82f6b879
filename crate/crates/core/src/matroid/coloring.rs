use super::{greedy_basis, matroid_intersect_max, Contracted, GraphicMatroid, LaminarMatroid, MatroidOracle};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// `M/R'` on the even copies and `M/B'` on the odd copies of `base`.
struct Doubled<'a, M: MatroidOracle + ?Sized> {
    red: Contracted<'a, M>,
    blue: Contracted<'a, M>,
    base: Vec<usize>,
}

impl<M: MatroidOracle + ?Sized> MatroidOracle for Doubled<'_, M> {
    fn ground(&self) -> Vec<usize> {
        (0..2 * self.base.len()).collect()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.last().is_some_and(|&x| x >= 2 * self.base.len()) {
            return false;
        }
        let pick = |parity: usize| -> Vec<usize> {
            set.iter().filter(|&&x| x % 2 == parity).map(|&x| self.base[x / 2]).collect()
        };
        self.red.is_independent(&pick(0)) && self.blue.is_independent(&pick(1))
    }
}

/// Splits `U` into `(X, Y)` with `r(R ∪ X) + r(B ∪ Y) >= r(R ∪ B) + r(U)`.
///
/// Bases `R' ∪ B'` of `R ∪ B` and `U'` of `U` are chosen greedily; `U'` is then
/// partitioned into a part independent in `M/R'` and one independent in `M/B'`
/// by intersecting the direct sum of both contractions (on two copies of `U'`)
/// with the matroid allowing one copy per element. Leftovers go to `X`.
pub fn union_color<M: MatroidOracle + ?Sized>(
    m: &M,
    red: &[usize],
    blue: &[usize],
    uncolored: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut rb: Vec<usize> = red.iter().chain(blue).copied().collect();
    rb.sort_unstable();
    let basis_rb = greedy_basis(m, &rb);
    let r_prime: Vec<usize> = basis_rb.iter().copied().filter(|x| red.contains(x)).collect();
    let b_prime: Vec<usize> = basis_rb.iter().copied().filter(|x| blue.contains(x)).collect();
    let u_prime = greedy_basis(m, uncolored);
    let doubled = Doubled {
        red: Contracted::new(m, r_prime),
        blue: Contracted::new(m, b_prime),
        base: u_prime.clone(),
    };
    let groups = (0..u_prime.len()).map(|i| ([2 * i, 2 * i + 1].into(), 1)).collect();
    let one_copy = LaminarMatroid::new((0..2 * u_prime.len()).collect(), groups);
    let common = matroid_intersect_max(&doubled, &one_copy)?;
    let mut x: Vec<usize> = common.iter().filter(|&&c| c % 2 == 0).map(|&c| u_prime[c / 2]).collect();
    let y: Vec<usize> = common.iter().filter(|&&c| c % 2 == 1).map(|&c| u_prime[c / 2]).collect();
    let leftover: Vec<usize> = uncolored.iter().copied().filter(|e| !x.contains(e) && !y.contains(e)).collect();
    x.extend(leftover);
    x.sort_unstable();
    let rank_of = |a: &[usize], b: &[usize]| {
        let mut s = a.to_vec();
        s.extend_from_slice(b);
        m.rank(&s)
    };
    let lhs = rank_of(red, &x) + rank_of(blue, &y);
    let rhs = basis_rb.len() + u_prime.len();
    if lhs < rhs {
        return Err(Error::Internal(format!(
            "coloring inequality violated: {lhs} < {rhs}"
        )));
    }
    Ok((x, y))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestColoring {
    pub u_r: Vec<usize>,
    pub u_b: Vec<usize>,
    pub z: Vec<usize>,
}

/// Colors a forest `U` against a circuit split into `R` and `B` so that both
/// `R ∪ U_R` and `B ∪ U_B` are forests and at most one edge stays uncolored.
/// Edges are `(id, u, v)`.
pub fn forest_color(
    red: &[(usize, usize, usize)],
    blue: &[(usize, usize, usize)],
    uncolored: &[(usize, usize, usize)],
) -> Result<ForestColoring> {
    if red.is_empty() || blue.is_empty() || uncolored.is_empty() {
        return Err(Error::Structure("R, B and U must be nonempty".into()));
    }
    let all: Vec<(usize, usize, usize)> = red.iter().chain(blue).chain(uncolored).copied().collect();
    let m = GraphicMatroid::new(all.iter().copied());
    if m.len() != all.len() {
        return Err(Error::Structure("edge ids must be distinct".into()));
    }
    let ids = |s: &[(usize, usize, usize)]| -> Vec<usize> { s.iter().map(|e| e.0).collect() };
    let (r, b, u) = (ids(red), ids(blue), ids(uncolored));
    if !m.is_independent(&u) {
        return Err(Error::Structure("U is not a forest".into()));
    }
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for &(_, x, y) in red.iter().chain(blue) {
        *deg.entry(x).or_default() += 1;
        *deg.entry(y).or_default() += 1;
    }
    let rb: Vec<usize> = r.iter().chain(&b).copied().collect();
    let circuit = deg.values().all(|&d| d == 2) && m.rank(&rb) == rb.len() - 1 && deg.len() == rb.len();
    if !circuit {
        return Err(Error::Structure("R ∪ B is not a circuit".into()));
    }
    let (x, y) = union_color(&m, &r, &b, &u)?;
    let trim = |side: &[usize], chosen: Vec<usize>| -> Result<Vec<usize>> {
        let mut s = side.to_vec();
        s.extend_from_slice(&chosen);
        if m.is_independent(&s) {
            return Ok(chosen);
        }
        for (i, _) in chosen.iter().enumerate() {
            let mut rest = chosen.clone();
            rest.remove(i);
            let mut t = side.to_vec();
            t.extend_from_slice(&rest);
            if m.is_independent(&t) {
                return Ok(rest);
            }
        }
        Err(Error::Internal("no single element restores independence".into()))
    };
    let mut u_r = trim(&r, x)?;
    let mut u_b = trim(&b, y)?;
    let mut z = Vec::new();
    // A trimmed edge may still fit on the other side.
    let left: Vec<usize> = u.iter().copied().filter(|e| !u_r.contains(e) && !u_b.contains(e)).collect();
    for e in left {
        let fits = |side: &[usize], own: &[usize]| {
            let mut s: Vec<usize> = side.iter().chain(own).copied().collect();
            s.push(e);
            m.is_independent(&s)
        };
        if fits(&r, &u_r) {
            u_r.push(e);
        } else if fits(&b, &u_b) {
            u_b.push(e);
        } else {
            z.push(e);
        }
    }
    if z.len() > 1 {
        return Err(Error::Internal(format!("{} edges left uncolored", z.len())));
    }
    Ok(ForestColoring { u_r, u_b, z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::FreeMatroid;

    #[test]
    fn empty_u() {
        let m = GraphicMatroid::new([(0, 0, 1), (1, 1, 2)]);
        assert_eq!(union_color(&m, &[0], &[1], &[]).unwrap(), (vec![], vec![]));
    }

    #[test]
    fn free_matroid_takes_all_red() {
        let m = FreeMatroid { elements: vec![0, 1, 2, 3] };
        assert_eq!(union_color(&m, &[0], &[1], &[2, 3]).unwrap(), (vec![2, 3], vec![]));
    }

    #[test]
    fn triangle_single_uncolored() {
        let m = GraphicMatroid::new([(1, 0, 1), (2, 1, 2), (3, 2, 0)]);
        let (x, y) = union_color(&m, &[1], &[2], &[3]).unwrap();
        assert_eq!((x, y), (vec![3], vec![]));
    }

    #[test]
    fn parallel_to_red_edge_is_uncolorable() {
        // Circuit 0-1-2-0 with R = {01}, B = {12, 20}; U = a second 0-1 edge.
        let c = forest_color(&[(0, 0, 1)], &[(1, 1, 2), (2, 2, 0)], &[(3, 0, 1)]).unwrap();
        assert_eq!(c.z, vec![3]);
        assert!(c.u_r.is_empty() && c.u_b.is_empty());
    }

    #[test]
    fn chord_is_colored() {
        // 4-circuit 0-1-2-3, R = {01}, B = {12, 23, 30}, chord 0-2 fits on the red side.
        let c = forest_color(&[(0, 0, 1)], &[(1, 1, 2), (2, 2, 3), (3, 3, 0)], &[(4, 0, 2)]).unwrap();
        assert!(c.z.is_empty());
        assert_eq!(c.u_r, vec![4]);
    }

    #[test]
    fn rejects_cyclic_u() {
        let r = forest_color(&[(0, 0, 1)], &[(1, 1, 2), (2, 2, 0)], &[(3, 0, 1), (4, 1, 0)]);
        assert!(matches!(r, Err(Error::Structure(_))));
    }
}
