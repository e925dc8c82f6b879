use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use stt_core::bench::{bench, parse_corpus, to_csv, to_json, BenchConfig};
use stt_core::generate::{generate, Family, GeneratorSpec};
use stt_core::graph::{brute_force_opt, is_t_tour, DEFAULT_ENUM_LIMIT};
use stt_core::io::{parse_instance, parse_tour, write_instance, write_tour};
use stt_core::lp::{lp_value, DEFAULT_LP_LIMIT};
use stt_core::solve::{solve, SolveConfig};
use stt_core::{ProblemInstance, Rational};

#[derive(Parser)]
#[command(name = "stt", version, about = "Approximate shortest s-t-tours in graphs with certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and report the tour with its lower bounds.
    Solve {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        tuning: Tuning,
        /// Also compute the LP value for instances up to this many vertices.
        #[arg(long)]
        lp_limit: Option<usize>,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Distance parameter for theta_lb, as `p/q`.
        #[arg(long, default_value = "0")]
        d: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Validate a tour file against an instance.
    Check {
        #[command(flatten)]
        io: Io,
        /// Tour file with `use <edge-id> <multiplicity>` lines.
        #[arg(long)]
        tour: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
        enum_limit: usize,
    },
    /// Exact optimum by enumeration.
    Oracle {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
        enum_limit: usize,
    },
    /// Exact value of the cut relaxation.
    Lp {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = DEFAULT_LP_LIMIT)]
        lp_limit: usize,
    },
    /// Run a corpus and print one row per instance.
    Bench {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long, default_value_t = DEFAULT_LP_LIMIT)]
        lp_limit: usize,
        /// Add a wall-clock column; rows are then no longer reproducible.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
struct Io {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Tuning {
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long, default_value = "1/15000")]
    delta: Rational,
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    enum_limit: usize,
}

impl Tuning {
    fn config(&self) -> SolveConfig {
        SolveConfig {
            enum_limit: self.enum_limit,
            depth: self.depth,
            delta: self.delta,
            ..SolveConfig::default()
        }
    }
}

fn read_instance(path: &Path) -> Result<ProblemInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { io, tuning, lp_limit } => {
            let inst = read_instance(&io.input)?;
            let mut cfg = tuning.config();
            if let Some(limit) = lp_limit {
                cfg.lp = true;
                cfg.lp_limit = limit;
            }
            let report = solve(&inst, &cfg)?;
            if let Some(p) = &io.output {
                emit(Some(p), &write_tour(&report.multiset()))?;
            }
            print!("{}", if io.json { report.to_json() } else { report.summary() });
        }
        Command::Gen { family, n, d, seed, output } => {
            let inst = generate(&GeneratorSpec::new(family, n).with_d(d).with_seed(seed))?;
            emit(output.as_deref(), &write_instance(&inst))?;
        }
        Command::Check { io, tour, enum_limit } => {
            let inst = read_instance(&io.input)?;
            let text = fs::read_to_string(&tour).with_context(|| format!("reading {}", tour.display()))?;
            let file = parse_tour(&text).with_context(|| format!("parsing {}", tour.display()))?;
            let mut violations: Vec<String> = Vec::new();
            let j = match file.to_multiset() {
                Ok(j) => Some(j),
                Err((e, k)) => {
                    violations.push(format!("multiplicity: edge {e} used {k} times (at most 2 allowed)"));
                    None
                }
            };
            let mut length = None;
            if let Some(j) = &j {
                let check = is_t_tour(&inst.graph, j, &inst.terminals);
                violations.extend(check.violations.iter().map(|v| format!("{}: {v}", violation_name(v))));
                length = Some(check.weight);
            }
            let cfg = SolveConfig { enum_limit, depth: 0, ..SolveConfig::default() };
            let bound = solve(&inst, &cfg)?.bounds;
            let best = bound.best();
            let ratio = match length {
                Some(l) if violations.is_empty() && best > num_traits::Zero::zero() => {
                    Some(stt_core::solve::big(Rational::from_integer(l as i64)) / best.clone())
                }
                _ => None,
            };
            let valid = violations.is_empty();
            let out = if io.json {
                serde_json::to_string_pretty(&json!({
                    "valid": valid,
                    "violations": violations,
                    "length": length,
                    "lower_bound": best.to_string(),
                    "bounds": bound,
                    "ratio": ratio.as_ref().map(|r| r.to_string()),
                }))? + "\n"
            } else {
                let mut s = if valid { "valid\n".to_string() } else { "invalid\n".to_string() };
                for v in &violations {
                    s += &format!("  {v}\n");
                }
                if let Some(l) = length.filter(|_| valid) {
                    s += &format!("length {l}\nlower bound {best}\n");
                }
                if let Some(r) = &ratio {
                    s += &format!("ratio {r}\n");
                }
                s
            };
            emit(io.output.as_deref(), &out)?;
            if !valid {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Oracle { io, enum_limit } => {
            let inst = read_instance(&io.input)?;
            let (opt, tour) = brute_force_opt(&inst, enum_limit)?;
            let out = if io.json {
                serde_json::to_string_pretty(&json!({ "opt": opt, "tour": tour.iter().collect::<Vec<_>>() }))? + "\n"
            } else {
                format!("opt {opt}\n{}", write_tour(&tour))
            };
            emit(io.output.as_deref(), &out)?;
        }
        Command::Lp { io, lp_limit } => {
            let inst = read_instance(&io.input)?;
            let lp = lp_value(&inst, lp_limit)?;
            let out = if io.json {
                let x: Vec<String> = lp.x.iter().map(|v| v.to_string()).collect();
                serde_json::to_string_pretty(&json!({ "value": lp.value.to_string(), "x": x, "cuts": lp.cuts.len(), "rounds": lp.rounds }))? + "\n"
            } else {
                let mut s = format!("lp {}\n", lp.value);
                for (e, v) in lp.x.iter().enumerate() {
                    if *v != num_traits::Zero::zero() {
                        s += &format!("x {e} {v}\n");
                    }
                }
                s
            };
            emit(io.output.as_deref(), &out)?;
        }
        Command::Bench { io, tuning, lp_limit, timings } => {
            let text = fs::read_to_string(&io.input).with_context(|| format!("reading {}", io.input.display()))?;
            let corpus = parse_corpus(&text).with_context(|| format!("parsing {}", io.input.display()))?;
            let mut cfg = BenchConfig { timings, ..BenchConfig::default() };
            cfg.solve = SolveConfig { lp: true, lp_limit, ..tuning.config() };
            let rows = bench(&corpus, &cfg);
            emit(io.output.as_deref(), &if io.json { to_json(&rows) } else { to_csv(&rows) })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn violation_name(v: &stt_core::graph::TourViolation) -> &'static str {
    use stt_core::graph::TourViolation::*;
    match v {
        UnknownEdge(_) => "unknown edge",
        Multiplicity { .. } => "multiplicity",
        ParityMismatch { .. } => "parity mismatch",
        UncoveredVertex(_) => "uncovered vertex",
        Disconnected { .. } => "disconnected",
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| matches!(c.downcast_ref::<stt_core::Error>(), Some(stt_core::Error::Parse { .. }))) {
                return ExitCode::from(3);
            }
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_delta_is_rejected() {
        assert!(Cli::try_parse_from(["stt", "solve", "--input", "x", "--delta", "a/b"]).is_err());
    }
}
