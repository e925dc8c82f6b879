use super::Dsu;
use crate::ear::Ear;
use crate::error::{Error, Result};
use crate::graph::{EdgeMultiset, VertexSet};
use crate::matroid::forest_color;
use serde::Serialize;

/// The circuit `G_i / V_{i-1}` of an ear. Position 0 is the contracted
/// vertex and edge `j` joins positions `j` and `j + 1 mod len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    /// Vertex id at each position, used for tie-breaking and mapping back.
    pub labels: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Circuit {
    /// The cycle `0, 1, .., len - 1` with edge `j` between `j` and `j + 1`.
    pub fn cycle(len: usize) -> Circuit {
        Circuit {
            labels: (0..len).collect(),
            edges: (0..len).collect(),
        }
    }

    pub fn of_ear(ear: &Ear) -> Circuit {
        Circuit {
            labels: ear.vertices[..ear.len()].to_vec(),
            edges: ear.edges.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `(T ∩ in(P))` as positions, plus the contracted vertex if that set is odd.
    pub fn contract_terminals(&self, t: &VertexSet) -> Vec<usize> {
        let mut tp: Vec<usize> = (1..self.len()).filter(|&j| t.contains(&self.labels[j])).collect();
        if tp.len() % 2 == 1 {
            tp.insert(0, 0);
        }
        tp
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        (1..self.len()).find(|&j| self.labels[j] == v)
    }

    pub fn to_multiset(&self, mult: &[u8]) -> EdgeMultiset {
        self.edges.iter().zip(mult).filter(|(_, &k)| k > 0).map(|(&e, &k)| (e, k)).collect()
    }

    fn ends(&self, j: usize) -> (usize, usize) {
        (j, (j + 1) % self.len())
    }
}

/// Positions of odd degree under the local multiplicities `mult`.
pub fn odd_positions(len: usize, mult: &[u8]) -> Vec<usize> {
    let mut odd = vec![false; len];
    for j in 0..len {
        if mult[j] % 2 == 1 {
            odd[j] ^= true;
            odd[(j + 1) % len] ^= true;
        }
    }
    (0..len).filter(|&v| odd[v]).collect()
}

/// Whether the positions are connected by the support of `mult` and the extra edges.
pub fn spans(len: usize, mult: &[u8], extra: &[(usize, usize)]) -> bool {
    let mut d = Dsu::new(len);
    for j in 0..len {
        if mult[j] > 0 {
            d.union(j, (j + 1) % len);
        }
    }
    for &(a, b) in extra {
        d.union(a, b);
    }
    d.count() == 1
}

fn check_terminals(c: &Circuit, tp: &[usize]) -> Result<()> {
    if tp.iter().any(|&v| v >= c.len()) || tp.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!("terminal positions {tp:?} are not sorted positions of the circuit")));
    }
    if tp.len() % 2 == 1 {
        return Err(Error::OddTerminals(tp.len()));
    }
    Ok(())
}

/// Red/blue colouring of a circuit split at `tp` (nonempty).
struct Colouring {
    red: Vec<bool>,
    /// Edge positions in walk order from the start vertex.
    walk: Vec<usize>,
}

impl Colouring {
    /// Red starts at the `tp` vertex with the lowest label.
    fn new(c: &Circuit, tp: &[usize]) -> Colouring {
        let len = c.len();
        let start = *tp.iter().min_by_key(|&&v| c.labels[v]).expect("nonempty");
        let mut is_t = vec![false; len];
        for &v in tp {
            is_t[v] = true;
        }
        let walk: Vec<usize> = (0..len).map(|k| (start + k) % len).collect();
        let mut red = vec![false; len];
        let mut colour = true;
        for &j in &walk {
            red[j] = colour;
            if is_t[(j + 1) % len] {
                colour = !colour;
            }
        }
        Colouring { red, walk }
    }

    fn count(&self, red: bool) -> usize {
        self.red.iter().filter(|&&r| r == red).count()
    }

    /// Doubles the edges of one colour, keeps the others once and drops both
    /// copies of the first doubled edge in walk order.
    fn doubled(&self, red: bool) -> Vec<u8> {
        let mut mult: Vec<u8> = self.red.iter().map(|&r| if r == red { 2 } else { 1 }).collect();
        if let Some(&j) = self.walk.iter().find(|&&j| mult[j] == 2) {
            mult[j] = 0;
        }
        mult
    }
}

/// Connected `T_P`-join in `2E(P)` by red/blue alternation.
pub fn circuit_tjoin(c: &Circuit, tp: &[usize]) -> Result<Vec<u8>> {
    check_terminals(c, tp)?;
    if tp.is_empty() {
        // A loop spans its only vertex without being used.
        return Ok(vec![u8::from(c.len() > 1); c.len()]);
    }
    let col = Colouring::new(c, tp);
    let red_smaller = col.count(true) <= col.count(false);
    Ok(col.doubled(red_smaller))
}

/// As [`circuit_tjoin`] for circuits with at least four edges; when the
/// bound `3/2 (|E| - 1) - 1/2` is attained and `|E| + |T_P| ≥ 5`, also returns
/// a second join of equal size such that every edge has an odd total number
/// of copies in both.
pub fn circuit_tjoin_with_parity_twin(c: &Circuit, tp: &[usize]) -> Result<(Vec<u8>, Option<Vec<u8>>)> {
    if c.len() < 4 {
        return Err(Error::Argument(format!("circuit has {} < 4 edges", c.len())));
    }
    check_terminals(c, tp)?;
    if tp.is_empty() {
        return Ok((vec![1; c.len()], None));
    }
    let col = Colouring::new(c, tp);
    let (r, b) = (col.doubled(true), col.doubled(false));
    let (sr, sb) = (size(&r), size(&b));
    Ok(match sr.cmp(&sb) {
        std::cmp::Ordering::Equal => (r, Some(b)),
        std::cmp::Ordering::Less => (r, None),
        std::cmp::Ordering::Greater => (b, None),
    })
}

pub fn size(mult: &[u8]) -> usize {
    mult.iter().map(|&k| k as usize).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EnhancedOutcome {
    /// `|E| = 4`, `|U| = 1` and `T_P = ∅`.
    CaseI,
    /// `T_P` is an antipodal pair joined by the only edge of `U`.
    CaseII,
    /// Local multiplicities `f` and the indices into `U` of the edges in `C`.
    Join { f: Vec<u8>, c: Vec<usize> },
}

/// Doubles circuit edges in walk order until the support of `base` plus
/// `extra` is connected.
fn connect(len: usize, base: &mut [u8], extra: &[(usize, usize)], walk: &[usize], candidates: &[bool]) {
    let mut d = Dsu::new(len);
    for j in 0..len {
        if base[j] > 0 {
            d.union(j, (j + 1) % len);
        }
    }
    for &(a, b) in extra {
        d.union(a, b);
    }
    for &j in walk {
        if candidates[j] && d.union(j, (j + 1) % len) {
            base[j] = 2;
        }
    }
}

/// The circuit lemma with a forest `U` of extra edges (pairs of positions)
/// that may be used for connectivity.
pub fn enhanced_circuit_tjoin(c: &Circuit, tp: &[usize], u: &[(usize, usize)]) -> Result<EnhancedOutcome> {
    let len = c.len();
    if len < 4 {
        return Err(Error::Argument(format!("circuit has {len} < 4 edges")));
    }
    check_terminals(c, tp)?;
    let mut d = Dsu::new(len);
    for &(a, b) in u {
        if a >= len || b >= len {
            return Err(Error::Argument(format!("U edge ({a}, {b}) leaves the circuit")));
        }
        if !d.union(a, b) {
            return Err(Error::Structure("U is not a forest".into()));
        }
    }

    let outcome = if tp.is_empty() {
        if u.len() <= 1 {
            if len == 4 && u.len() == 1 {
                return Ok(EnhancedOutcome::CaseI);
            }
            EnhancedOutcome::Join {
                f: vec![1; len],
                c: Vec::new(),
            }
        } else {
            let mut f = vec![0u8; len];
            let walk: Vec<usize> = (0..len).collect();
            connect(len, &mut f, u, &walk, &vec![true; len]);
            if size(&f) < len {
                EnhancedOutcome::Join {
                    f,
                    c: (0..u.len()).collect(),
                }
            } else {
                EnhancedOutcome::Join {
                    f: vec![1; len],
                    c: Vec::new(),
                }
            }
        }
    } else {
        if tp.len() == 2 && u.len() == 1 && tp[1] - tp[0] == len / 2 && len % 2 == 0 {
            let (a, b) = (u[0].0.min(u[0].1), u[0].0.max(u[0].1));
            if (a, b) == (tp[0], tp[1]) {
                return Ok(EnhancedOutcome::CaseII);
            }
        }
        let col = Colouring::new(c, tp);
        let side = |red: bool| -> Vec<(usize, usize, usize)> {
            (0..len)
                .filter(|&j| col.red[j] == red)
                .map(|j| {
                    let (a, b) = c.ends(j);
                    (j, a, b)
                })
                .collect()
        };
        let (u_r, u_b) = if u.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let un: Vec<(usize, usize, usize)> = u.iter().enumerate().map(|(k, &(a, b))| (len + k, a, b)).collect();
            let fc = forest_color(&side(true), &side(false), &un)?;
            let back = |s: Vec<usize>| -> Vec<usize> { s.into_iter().map(|x| x - len).collect() };
            (back(fc.u_r), back(fc.u_b))
        };
        let build = |red: bool, own: &[usize]| -> Vec<u8> {
            let mut f: Vec<u8> = col.red.iter().map(|&r| u8::from(r == red)).collect();
            let extra: Vec<(usize, usize)> = own.iter().map(|&k| u[k]).collect();
            let other: Vec<bool> = col.red.iter().map(|&r| r != red).collect();
            connect(len, &mut f, &extra, &col.walk, &other);
            f
        };
        let (f_r, f_b) = (build(true, &u_r), build(false, &u_b));
        let mut colored: Vec<usize> = u_r.iter().chain(&u_b).copied().collect();
        colored.sort_unstable();
        EnhancedOutcome::Join {
            f: if size(&f_r) <= size(&f_b) { f_r } else { f_b },
            c: colored,
        }
    };

    if let EnhancedOutcome::Join { f, c: cs } = &outcome {
        // Bounds in half units.
        let budget = 3 * (len as i64 - 1) - u.len() as i64;
        let slack = budget - 2 * size(f) as i64;
        if slack < (u.len() as i64 - 1).max(1) {
            return Err(Error::Internal(format!(
                "|F| = {} exceeds the bound for |E| = {len}, |U| = {} (T_P {tp:?}, U {u:?})",
                size(f),
                u.len()
            )));
        }
        if cs.len() as i64 > slack {
            return Err(Error::Internal(format!("|C| = {} exceeds 2 gain = {slack}", cs.len())));
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_without_terminals() {
        assert_eq!(circuit_tjoin(&Circuit::cycle(3), &[]).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn antipodal_hexagon() {
        let f = circuit_tjoin(&Circuit::cycle(6), &[0, 3]).unwrap();
        assert_eq!(size(&f), 7);
        assert_eq!(odd_positions(6, &f), vec![0, 3]);
        assert!(spans(6, &f, &[]));
    }

    #[test]
    fn odd_terminals_rejected() {
        assert_eq!(circuit_tjoin(&Circuit::cycle(5), &[1]), Err(Error::OddTerminals(1)));
    }

    #[test]
    fn twin_on_antipodal_square() {
        let (f, twin) = circuit_tjoin_with_parity_twin(&Circuit::cycle(4), &[0, 2]).unwrap();
        let twin = twin.unwrap();
        assert_eq!((size(&f), size(&twin)), (4, 4));
        assert!(f.iter().zip(&twin).all(|(a, b)| (a + b) % 2 == 1));
    }

    #[test]
    fn unequal_split_has_no_twin() {
        let (f, twin) = circuit_tjoin_with_parity_twin(&Circuit::cycle(6), &[0, 2]).unwrap();
        assert_eq!(size(&f), 6);
        assert!(twin.is_none());
    }

    #[test]
    fn enhanced_exceptions() {
        let c4 = Circuit::cycle(4);
        assert_eq!(enhanced_circuit_tjoin(&c4, &[], &[(0, 2)]).unwrap(), EnhancedOutcome::CaseI);
        let c6 = Circuit::cycle(6);
        assert_eq!(enhanced_circuit_tjoin(&c6, &[1, 4], &[(4, 1)]).unwrap(), EnhancedOutcome::CaseII);
        assert!(matches!(
            enhanced_circuit_tjoin(&c6, &[], &[(0, 2), (2, 4), (4, 0)]),
            Err(Error::Structure(_))
        ));
    }
}
