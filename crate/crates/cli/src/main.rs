use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use permclass::blocks::minimal_block_systems;
use permclass::classes::{class_count_with_limit, DEFAULT_ENUMERATION_LIMIT};
use permclass::constructions::GroupSpec;
use permclass::harness::{self, RunOptions, RunReport};
use permclass::partitions::{bound_sandwich, partition_number};
use permclass::verify::{chain_bound, main_bound_check, BoundVerdict, ChainIndices};
use permclass::{Error, PermGroup};

/// Permutation groups, exact class counts and class-number bounds.
#[derive(Parser)]
#[command(name = "permclass", version)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Most group elements to enumerate when counting classes.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    limit: u64,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Order of a group.
    Order { spec: String },
    /// Number of conjugacy classes.
    Classes { spec: String },
    /// Minimal nontrivial block systems of a transitive group.
    Blocks { spec: String },
    /// The partition number p(n).
    Pn { n: usize },
    /// Check 2.5√n − ln(13n) < ln p(n) < π√(2n/3).
    PnBounds { n: usize },
    #[command(subcommand)]
    Bound(BoundCommand),
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum BoundCommand {
    /// Π p(a_i)^(a_{i+1}⋯a_t) for a chain of block sizes.
    Chain {
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
    /// k³ ≤ 5^(n−1).
    Main {
        #[arg(long)]
        k: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Run a claims manifest (the built-in one by default).
    Claims {
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Exit with 3 when a claim is skipped for exceeding the limit.
        #[arg(long)]
        strict: bool,
        /// Add per-claim wall-clock times to the report.
        #[arg(long)]
        timings: bool,
    },
    /// Check every catalog group of degree 4..=N.
    Sweep {
        #[arg(long)]
        max_degree: usize,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

/// `@path` reads a generator file: a `degree=<n>` line, then one
/// permutation per line. Anything else is a group spec.
fn load_spec(arg: &str) -> Result<String> {
    let Some(path) = arg.strip_prefix('@') else {
        return Ok(arg.to_string());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().context("generator file is empty")?;
    let degree = header
        .strip_prefix("degree=")
        .with_context(|| format!("expected degree=<n>, found {header:?}"))?;
    let mut spec = format!("gens{{degree={degree}");
    for line in lines {
        spec.push(';');
        spec.push_str(line);
    }
    spec.push('}');
    Ok(spec)
}

fn build(arg: &str) -> Result<(String, PermGroup)> {
    let text = load_spec(arg)?;
    let spec = GroupSpec::parse(&text).map_err(|e| with_caret(e, &text))?;
    let group = spec.build()?;
    Ok((spec.to_string(), group))
}

/// Echoes the input with a caret under the failing position (1-based
/// column), then passes the error on.
fn with_caret(err: Error, text: &str) -> anyhow::Error {
    if let Error::Parse { offset, .. } = &err {
        let column = text[..(*offset).min(text.len())].chars().count();
        eprintln!("  {text}\n  {}^ column {}", " ".repeat(column), column + 1);
    }
    err.into()
}

fn print_verdict(v: &BoundVerdict, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(v).expect("verdict serializes")
        );
    } else {
        println!(
            "claim_id={} lhs={} relation={} rhs={} holds={} context={}",
            v.claim_id,
            v.lhs,
            v.relation,
            v.rhs,
            v.holds,
            permclass::report::kv_value(&v.context)
        );
    }
}

fn print_report(report: &RunReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_lines());
    }
}

fn run(cli: Cli) -> Result<u8> {
    let Global { limit, seed, json } = cli.global;
    match cli.command {
        Command::Order { spec } => {
            let (name, g) = build(&spec)?;
            if json {
                println!(
                    "{}",
                    json!({"spec": name, "degree": g.degree(), "order": g.order().to_string()})
                );
            } else {
                println!("{}", g.order());
            }
        }
        Command::Classes { spec } => {
            let (name, g) = build(&spec)?;
            let r = class_count_with_limit(&g, limit)?;
            if json {
                println!(
                    "{}",
                    json!({
                        "spec": name,
                        "order": g.order().to_string(),
                        "classes": r.count.to_string(),
                        "method": format!("{:?}", r.method),
                    })
                );
            } else {
                println!("{}", r.count);
            }
        }
        Command::Blocks { spec } => {
            let (name, g) = build(&spec)?;
            let systems = minimal_block_systems(&g)?;
            let rendered: Vec<String> = systems
                .iter()
                .map(|s| {
                    let blocks: Vec<String> = s
                        .blocks()
                        .iter()
                        .map(|b| {
                            let pts: Vec<String> = b.iter().map(|x| (x + 1).to_string()).collect();
                            format!("{{{}}}", pts.join(","))
                        })
                        .collect();
                    blocks.join(" ")
                })
                .collect();
            if json {
                println!(
                    "{}",
                    json!({"spec": name, "primitive": systems.is_empty(), "systems": rendered})
                );
            } else if rendered.is_empty() {
                println!("primitive");
            } else {
                for line in rendered {
                    println!("{line}");
                }
            }
        }
        Command::Pn { n } => {
            let p = partition_number(n);
            if json {
                println!("{}", json!({"n": n, "p": p.to_string()}));
            } else {
                println!("{p}");
            }
        }
        Command::PnBounds { n } => {
            let r = bound_sandwich(n)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                println!(
                    "n={} p={} lower_ok={} upper_ok={} lower_margin={} upper_margin={} precision_bits={}",
                    r.n, r.p_n, r.lower_ok, r.upper_ok, r.lower_margin, r.upper_margin, r.precision_bits
                );
            }
            if !r.holds() {
                return Ok(EXIT_FAIL);
            }
        }
        Command::Bound(BoundCommand::Chain { indices }) => {
            let indices = ChainIndices::new(indices)?;
            let bound = chain_bound(&indices);
            if json {
                println!(
                    "{}",
                    json!({"indices": indices.as_slice(), "degree": indices.degree(), "bound": bound.to_string()})
                );
            } else {
                println!("{bound}");
            }
        }
        Command::Bound(BoundCommand::Main { k, n }) => {
            let k = k.parse().map_err(|_| {
                Error::ParamOutOfRange(format!("--k {k:?} is not a nonnegative integer"))
            })?;
            let v = main_bound_check(&k, n)?;
            print_verdict(&v, json);
            if !v.holds {
                return Ok(EXIT_FAIL);
            }
        }
        Command::Verify(VerifyCommand::Claims {
            manifest,
            strict,
            timings,
        }) => {
            let text = match &manifest {
                Some(path) => fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?,
                None => harness::BUILTIN_MANIFEST.to_string(),
            };
            let claims = harness::parse_manifest(&text)?;
            let report = harness::run_claims(
                &claims,
                RunOptions {
                    seed,
                    limit,
                    timings,
                },
            );
            print_report(&report, json);
            if !report.passed() {
                return Ok(EXIT_FAIL);
            }
            if strict && report.skipped_count() > 0 {
                return Ok(EXIT_LIMIT);
            }
        }
        Command::Verify(VerifyCommand::Sweep { max_degree }) => {
            let report = harness::catalog_sweep(max_degree, seed, limit)?;
            print_report(&report, json);
            if !report.passed() {
                return Ok(EXIT_FAIL);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let limit = err.chain().any(|e| {
                e.downcast_ref::<Error>()
                    .is_some_and(Error::is_resource_limit)
            });
            ExitCode::from(if limit { EXIT_LIMIT } else { EXIT_USAGE })
        }
    }
}
