//! Text formats for instances and tours.
//!
//! Instances: `p stt <n> <m>`, `s <id>`, `t <id>`, then `m` lines
//! `e <u> <v> [w]`. Blank lines and lines starting with `c` or `#` are
//! skipped. Tours: one `use <edge-id> <multiplicity>` line per edge.

use crate::error::{Error, Result};
use crate::graph::{EdgeMultiset, MultiGraph, ProblemInstance};
use std::fmt::Write as _;
use std::str::FromStr;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("c ") || line == "c" {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<ProblemInstance> {
    let mut lines = content_lines(text);
    let last = text.lines().count().max(1);
    let (hl, head) = lines.next().ok_or_else(|| parse_err(last, "missing `p stt <n> <m>` header"))?;
    if head.len() != 4 || head[0] != "p" || head[1] != "stt" {
        return Err(parse_err(hl, "expected `p stt <n> <m>`"));
    }
    let n: usize = field(hl, head[2], "vertex count")?;
    let m: usize = field(hl, head[3], "edge count")?;
    let mut terminal = |tag: &str| -> Result<usize> {
        let (l, tok) = lines.next().ok_or_else(|| parse_err(last, format!("missing `{tag} <id>` line")))?;
        if tok.len() != 2 || tok[0] != tag {
            return Err(parse_err(l, format!("expected `{tag} <id>`")));
        }
        let v: usize = field(l, tok[1], "vertex")?;
        if v >= n {
            return Err(parse_err(l, format!("vertex {v} outside 0..{n}")));
        }
        Ok(v)
    };
    let s = terminal("s")?;
    let t = terminal("t")?;
    let mut g = MultiGraph::new(n);
    for (l, tok) in lines {
        if tok[0] != "e" || !(3..=4).contains(&tok.len()) {
            return Err(parse_err(l, "expected `e <u> <v> [w]`"));
        }
        let u: usize = field(l, tok[1], "vertex")?;
        let v: usize = field(l, tok[2], "vertex")?;
        let w: u64 = match tok.get(3) {
            Some(x) => field(l, x, "weight")?,
            None => 1,
        };
        if w == 0 {
            return Err(parse_err(l, "edge weights must be positive"));
        }
        if g.m() == m {
            return Err(parse_err(l, format!("more than the {m} declared edges")));
        }
        g.add_edge(u, v, w).map_err(|e| parse_err(l, e.to_string()))?;
    }
    if g.m() != m {
        return Err(parse_err(last, format!("header declares {m} edges, found {}", g.m())));
    }
    ProblemInstance::new(g, s, t)
}

/// Weights are written only when some edge is not unit.
pub fn write_instance(inst: &ProblemInstance) -> String {
    let g = &inst.graph;
    let unit = g.is_unit();
    let mut out = format!("p stt {} {}\ns {}\nt {}\n", g.n(), g.m(), inst.s, inst.t);
    for e in g.edges() {
        if unit {
            writeln!(out, "e {} {}", e.u, e.v).unwrap();
        } else {
            writeln!(out, "e {} {} {}", e.u, e.v, e.w).unwrap();
        }
    }
    out
}

/// Multiplicities are kept as written so that the tour checker can name
/// out-of-range values; edges listed twice are summed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TourFile {
    pub uses: Vec<(usize, u32)>,
}

impl TourFile {
    /// The tour as a multiset, or the first edge used more than twice.
    pub fn to_multiset(&self) -> std::result::Result<EdgeMultiset, (usize, u32)> {
        let mut total = std::collections::BTreeMap::<usize, u32>::new();
        for &(e, k) in &self.uses {
            *total.entry(e).or_default() += k;
        }
        let mut j = EdgeMultiset::new();
        for (e, k) in total {
            if k > 2 {
                return Err((e, k));
            }
            j.add(e, k);
        }
        Ok(j)
    }
}

pub fn parse_tour(text: &str) -> Result<TourFile> {
    let mut uses = Vec::new();
    for (l, tok) in content_lines(text) {
        if tok.len() != 3 || tok[0] != "use" {
            return Err(parse_err(l, "expected `use <edge-id> <multiplicity>`"));
        }
        uses.push((field(l, tok[1], "edge id")?, field(l, tok[2], "multiplicity")?));
    }
    Ok(TourFile { uses })
}

pub fn write_tour(j: &EdgeMultiset) -> String {
    let mut out = String::new();
    for (e, k) in j.iter() {
        writeln!(out, "use {e} {k}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "p stt 3 3\ns 0\nt 2\ne 0 1\ne 1 2\ne 0 1 4\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.graph.m(), 3);
        assert_eq!(inst.graph.edge(2).w, 4);
        assert_eq!(write_instance(&inst), "p stt 3 3\ns 0\nt 2\ne 0 1 1\ne 1 2 1\ne 0 1 4\n");
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_instance("p stt 3 2\ns 0\n\nt 2\ne 0 1\ne 1 x\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 6, msg: "bad vertex `x`".into() });
        let err = parse_instance("# header\np stt 2 2\ns 0\nt 1\ne 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }));
        let err = parse_instance("p stt 2 1\ns 0\nt 1\ne 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = parse_instance("p stt 2 1\ns 0\nt 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn tour_files() {
        let f = parse_tour("use 0 1\nuse 3 2\n").unwrap();
        let j = f.to_multiset().unwrap();
        assert_eq!(write_tour(&j), "use 0 1\nuse 3 2\n");
        assert_eq!(parse_tour("use 1 3\n").unwrap().to_multiset(), Err((1, 3)));
        assert!(matches!(parse_tour("use 1\n"), Err(Error::Parse { line: 1, .. })));
    }
}
