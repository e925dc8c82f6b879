//! Benchmark corpora and result tables.
//!
//! A corpus file holds one entry per line:
//!
//! ```text
//! circuit 6..14:2
//! theta_lb 18 d=1/3
//! random2vc 20..30:5 seeds=0..3
//! ```
//!
//! `n` is a single value or an inclusive range with optional step; `seeds`
//! is inclusive as well and defaults to `0`. `#` starts a comment.

use crate::error::{Error, Result};
use crate::generate::{generate, Family, GeneratorSpec};
use crate::solve::{solve, SolveConfig};
use crate::Rational;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub family: Family,
    pub family_name: String,
    pub n: Vec<usize>,
    pub d: Rational,
    pub seeds: Vec<u64>,
}

fn range(line: usize, tok: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse { line, msg: format!("bad range `{tok}`") };
    let (span, step) = match tok.split_once(':') {
        Some((a, b)) => (a, b.parse::<u64>().map_err(|_| bad())?),
        None => (tok, 1),
    };
    if step == 0 {
        return Err(bad());
    }
    match span.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).step_by(step as usize).collect())
        }
        None => Ok(vec![span.parse().map_err(|_| bad())?]),
    }
}

fn ratio(line: usize, tok: &str) -> Result<Rational> {
    let bad = || Error::Parse { line, msg: format!("bad fraction `{tok}`") };
    match tok.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational::new(a, b))
        }
        None => Ok(Rational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tok: Vec<&str> = body.split_whitespace().collect();
        if tok.len() < 2 {
            return Err(Error::Parse { line, msg: "expected `<family> <n> [d=p/q] [seeds=a..b]`".into() });
        }
        let family: Family = tok[0].parse().map_err(|e: Error| Error::Parse { line, msg: e.to_string() })?;
        let n = range(line, tok[1])?.into_iter().map(|v| v as usize).collect();
        let mut entry = CorpusEntry {
            family,
            family_name: tok[0].to_string(),
            n,
            d: Rational::from_integer(0),
            seeds: vec![0],
        };
        for opt in &tok[2..] {
            match opt.split_once('=') {
                Some(("d", v)) => entry.d = ratio(line, v)?,
                Some(("seeds", v)) => entry.seeds = range(line, v)?,
                _ => return Err(Error::Parse { line, msg: format!("unknown option `{opt}`") }),
            }
        }
        out.push(entry);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub d: String,
    pub seed: u64,
    pub m: Option<usize>,
    pub tour: Option<u64>,
    pub lp: Option<String>,
    pub opt: Option<u64>,
    /// Tour over LP, six decimals.
    pub ratio_lp: Option<String>,
    pub ratio_opt: Option<String>,
    /// Tour over the best lower bound of the report.
    pub ratio_bound: Option<String>,
    pub branch: Option<String>,
    pub error: Option<String>,
    /// Wall-clock milliseconds; only filled when timings are requested.
    pub millis: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub solve: SolveConfig,
    pub timings: bool,
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            solve: SolveConfig { lp: true, ..SolveConfig::default() },
            timings: false,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn run_one(family: &str, spec: &GeneratorSpec, cfg: &BenchConfig) -> BenchRow {
    let mut row = BenchRow {
        family: family.to_string(),
        n: spec.n,
        d: spec.d.to_string(),
        seed: spec.seed,
        ..Default::default()
    };
    let start = Instant::now();
    let result = generate(spec).and_then(|inst| {
        row.m = Some(inst.graph.m());
        solve(&inst, &cfg.solve)
    });
    match result {
        Ok(r) => {
            row.tour = Some(r.length);
            let len = r.length as f64;
            if let Some(lp) = &r.bounds.lp {
                row.lp = Some(lp.to_string());
                let lp = lp.to_f64().unwrap_or(f64::NAN);
                if lp > 0.0 {
                    row.ratio_lp = Some(fmt6(len / lp));
                }
            }
            row.opt = r.bounds.opt;
            if let Some(o) = r.bounds.opt.filter(|&o| o > 0) {
                row.ratio_opt = Some(fmt6(len / o as f64));
            }
            row.ratio_bound = Some(fmt6(r.ratio_f64()));
            row.branch = Some(r.branch.to_string());
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    if cfg.timings {
        row.millis = Some(start.elapsed().as_millis() as u64);
    }
    row
}

/// Rows in corpus order: entries, then `n`, then seeds.
pub fn bench(corpus: &[CorpusEntry], cfg: &BenchConfig) -> Vec<BenchRow> {
    let jobs: Vec<(&str, GeneratorSpec)> = corpus
        .iter()
        .flat_map(|c| {
            c.n.iter().flat_map(move |&n| {
                c.seeds
                    .iter()
                    .map(move |&seed| (c.family_name.as_str(), GeneratorSpec::new(c.family, n).with_d(c.d).with_seed(seed)))
            })
        })
        .collect();
    let threads = cfg.threads.max(1).min(jobs.len().max(1));
    let mut rows: Vec<Option<BenchRow>> = vec![None; jobs.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<_> = rows
            .chunks_mut(jobs.len().div_ceil(threads).max(1))
            .zip(jobs.chunks(jobs.len().div_ceil(threads).max(1)))
            .map(|(out, work)| {
                scope.spawn(move || {
                    for (slot, (family, spec)) in out.iter_mut().zip(work) {
                        *slot = Some(run_one(family, spec, cfg));
                    }
                })
            })
            .collect();
        for c in chunks {
            c.join().expect("bench worker panicked");
        }
    });
    rows.into_iter().map(|r| r.expect("every job ran")).collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record([
            "family", "n", "d", "seed", "m", "tour", "lp", "opt", "ratio_lp", "ratio_opt", "ratio_bound", "branch", "error", "millis",
        ])
        .expect("in-memory write");
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn to_json(rows: &[BenchRow]) -> String {
    serde_json::to_string_pretty(rows).expect("serializable") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_syntax() {
        let c = parse_corpus("circuit 6..14:2\n# note\ntheta_lb 18 d=1/3 seeds=1..2\n").unwrap();
        assert_eq!(c[0].n, vec![6, 8, 10, 12, 14]);
        assert_eq!(c[1].d, Rational::new(1, 3));
        assert_eq!(c[1].seeds, vec![1, 2]);
        assert!(matches!(parse_corpus("circuit 6\nwheel 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_corpus("circuit 9..6\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_corpus_gives_header_only() {
        let rows = bench(&[], &BenchConfig::default());
        assert!(rows.is_empty());
        assert_eq!(to_csv(&rows).lines().count(), 1);
        assert_eq!(to_json(&rows), "[]\n");
    }

    #[test]
    fn circuit_rows() {
        let rows = bench(&parse_corpus("circuit 6..8:2").unwrap(), &BenchConfig::default());
        assert_eq!(rows[0].tour, Some(7));
        assert_eq!(rows[0].lp.as_deref(), Some("6"));
        assert_eq!(rows[1].ratio_lp.as_deref(), Some("1.250000"));
        assert_eq!(to_csv(&rows).lines().count(), 3);
    }
}
