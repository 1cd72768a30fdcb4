//! `deepsift` command-line tool.
//!
//! Reads a generator set (JSON or cycle text) from `--in` or stdin and
//! prints JSON to stdout. Exit status: 0 on any verdict, 2 on bad input or
//! usage, 1 on internal failure.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deepsift::corpus::GroupSpec;
use deepsift::primitivity::{main_cap, primitivity_with_cap};
use deepsift::transversal::build_point_transversal_traced;
use deepsift::{
    atkinson_baseline, emit_cycles, emit_json, minimal_block, parse_generators, primitivity_main,
    primitivity_subquadratic, ss_uncapped, BaselineVerdict, Certificate, Error, GeneratorSet,
    SiftKind, TransversalResult, Verdict, VerdictKind,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "deepsift",
    version,
    about = "Primitivity testing for transitive permutation groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide primitivity with the capped deep-sift driver.
    Primitive {
        #[command(flatten)]
        input: Input,
        /// Cap law for the base-length bound.
        #[arg(long, value_enum, default_value_t = Law::Main)]
        law: Law,
        /// Explicit cap; overrides --law.
        #[arg(long, conflicts_with = "uncapped")]
        cap: Option<usize>,
        /// Run without a cap (always decides).
        #[arg(long)]
        uncapped: bool,
    },
    /// Decide primitivity with the quadratic minimal-block baseline.
    Baseline {
        #[command(flatten)]
        input: Input,
    },
    /// Smallest block containing the given 0-based points.
    Minblock {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', required = true)]
        seed: Vec<usize>,
    },
    /// Dump the sift structure after every sift of a transversal build.
    SiftTrace {
        #[command(flatten)]
        input: Input,
        /// Base point of the transversal.
        #[arg(long, default_value_t = 0)]
        alpha: usize,
        /// Base-length cap (default: the main law).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Emit generators of a standard group.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Time the driver over a family; prints CSV.
    Bench {
        #[command(flatten)]
        family: FamilyArgs,
        /// Values of the family's size parameter (n, m, or d for wreath).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Law::Main)]
        law: Law,
    },
}

#[derive(Args)]
struct Input {
    /// Generator file; stdin when absent.
    #[arg(long = "in")]
    path: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    Main,
    FiveThirds,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Cycles,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cyclic,
    Dihedral,
    Symmetric,
    Alternating,
    Subsets,
    Wreath,
    Product,
    M24,
    File,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum, required_unless_present = "spec")]
    family: Option<Family>,
    /// Full spec string instead of --family, e.g. `wreath(alternating(8),2)`.
    #[arg(long, conflicts_with = "family")]
    spec: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Inner group spec for `wreath`.
    #[arg(long)]
    inner: Option<String>,
    #[arg(long)]
    path: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(m) => Failure::Internal(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn need(v: Option<usize>, flag: &str, family: &str) -> CliResult<usize> {
    v.ok_or_else(|| Failure::Input(format!("--family {family} needs --{flag}")))
}

impl FamilyArgs {
    /// The spec, with the size parameter replaced by `size` when given.
    fn spec(&self, size: Option<usize>) -> CliResult<GroupSpec> {
        if let Some(s) = &self.spec {
            if size.is_some() {
                return Err(Failure::Input(
                    "--spec cannot be combined with --sizes; use --family".into(),
                ));
            }
            return Ok(s.parse()?);
        }
        let family = self.family.expect("clap enforces --family or --spec");
        let name = family.to_possible_value().unwrap().get_name().to_owned();
        let n = || need(size.or(self.n), "n", &name);
        let m = || need(size.or(self.m), "m", &name);
        Ok(match family {
            Family::Cyclic => GroupSpec::Cyclic(n()?),
            Family::Dihedral => GroupSpec::Dihedral(n()?),
            Family::Symmetric => GroupSpec::Symmetric(m()?),
            Family::Alternating => GroupSpec::Alternating(m()?),
            Family::Subsets => GroupSpec::Subsets {
                m: m()?,
                k: need(self.k, "k", &name)?,
            },
            Family::Wreath => {
                let inner = self
                    .inner
                    .as_deref()
                    .ok_or_else(|| Failure::Input("--family wreath needs --inner".into()))?;
                GroupSpec::wreath(inner.parse()?, need(size.or(self.d), "d", &name)?)
            }
            Family::Product => GroupSpec::ProductAction {
                m: m()?,
                d: need(self.d, "d", &name)?,
            },
            Family::M24 => GroupSpec::M24,
            Family::File => GroupSpec::FromFile(
                self.path
                    .clone()
                    .ok_or_else(|| Failure::Input("--family file needs --path".into()))?,
            ),
        })
    }
}

fn read_input(input: &Input) -> CliResult<GeneratorSet> {
    let text = match &input.path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(parse_generators(&text)?)
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

#[derive(Serialize)]
struct CertEntry<'a> {
    base_point: usize,
    element: &'a deepsift::Permutation,
}

fn certificate_json(cert: &Certificate) -> Value {
    let entries: Vec<CertEntry> = cert
        .entries
        .iter()
        .map(|(b, g)| CertEntry {
            base_point: *b,
            element: g,
        })
        .collect();
    serde_json::to_value(entries).expect("plain data serializes")
}

fn verdict_json(v: &Verdict, time_ms: f64) -> Value {
    let (blocks, certificate) = match &v.kind {
        VerdictKind::Blocks(bs) => (json!(bs.blocks()), Value::Null),
        VerdictKind::PartialBase(c) => (Value::Null, certificate_json(c)),
        _ => (Value::Null, Value::Null),
    };
    json!({
        "verdict": v.kind.name(),
        "blocks": blocks,
        "certificate": certificate,
        "diagnostics": v.diagnostics,
        "time_ms": time_ms,
    })
}

fn run_driver(
    gens: &GeneratorSet,
    law: Law,
    cap: Option<usize>,
    uncapped: bool,
) -> deepsift::Result<Verdict> {
    if uncapped {
        ss_uncapped(gens, 0)
    } else if let Some(cap) = cap {
        primitivity_with_cap(gens, cap)
    } else {
        match law {
            Law::Main => primitivity_main(gens),
            Law::FiveThirds => primitivity_subquadratic(gens),
        }
    }
}

fn sift_kind_name(k: SiftKind) -> Value {
    serde_json::to_value(k).expect("plain data serializes")
}

fn run(cli: Cli, out: &mut impl Write) -> CliResult<()> {
    let value = match cli.command {
        Command::Primitive {
            input,
            law,
            cap,
            uncapped,
        } => {
            let gens = read_input(&input)?;
            let t = Instant::now();
            let v = run_driver(&gens, law, cap, uncapped)?;
            verdict_json(&v, elapsed_ms(t))
        }
        Command::Baseline { input } => {
            let gens = read_input(&input)?;
            let t = Instant::now();
            let v = atkinson_baseline(&gens)?;
            let time_ms = elapsed_ms(t);
            let (verdict, blocks) = match &v {
                BaselineVerdict::Primitive => ("primitive", Value::Null),
                BaselineVerdict::Blocks(bs) => ("blocks", json!(bs.blocks())),
            };
            json!({
                "verdict": verdict,
                "blocks": blocks,
                "certificate": null,
                "diagnostics": null,
                "time_ms": time_ms,
            })
        }
        Command::Minblock { input, seed } => {
            let gens = read_input(&input)?;
            let t = Instant::now();
            let block = minimal_block(&gens, &seed)?;
            json!({ "seed": seed, "block": block, "time_ms": elapsed_ms(t) })
        }
        Command::SiftTrace { input, alpha, cap } => {
            let gens = read_input(&input)?;
            let cap = cap.unwrap_or_else(|| main_cap(gens.degree()));
            let mut steps = Vec::new();
            let (result, state) =
                build_point_transversal_traced(&gens, alpha, cap, |state, outcome| {
                    steps.push(json!({
                        "sift": state.sift_count(),
                        "outcome": sift_kind_name(outcome.kind),
                        "state": state.dump(),
                    }));
                })?;
            let result = match &result {
                TransversalResult::Transversal(t) => {
                    json!({ "kind": "transversal", "orbit": t.orbit() })
                }
                TransversalResult::PartialBase(c) => {
                    json!({ "kind": "partial_base", "certificate": certificate_json(c) })
                }
            };
            json!({ "alpha": alpha, "steps": steps, "result": result, "final": state.dump() })
        }
        Command::Gen { family, format } => {
            let gens = family.spec(None)?.build()?;
            let text = match format {
                Format::Json => emit_json(&gens),
                Format::Cycles => emit_cycles(&gens),
            };
            writeln!(out, "{}", text.trim_end()).map_err(|e| Failure::Internal(e.to_string()))?;
            return Ok(());
        }
        Command::Bench { family, sizes, law } => {
            writeln!(out, "family,n,|S|,time_ms,sifts,h_updates,sum_Xi")
                .map_err(|e| Failure::Internal(e.to_string()))?;
            for size in sizes {
                let spec = family.spec(Some(size))?;
                let gens = spec.build()?;
                let mut times = Vec::with_capacity(5);
                let mut last = None;
                for _ in 0..5 {
                    let t = Instant::now();
                    let v = run_driver(&gens, law, None, false)?;
                    times.push(elapsed_ms(t));
                    last = Some(v);
                }
                times.sort_by(f64::total_cmp);
                let d = last.expect("five runs").diagnostics;
                writeln!(
                    out,
                    "{},{},{},{:.3},{},{},{}",
                    spec.family(),
                    gens.degree(),
                    gens.len(),
                    times[2],
                    d.sifts,
                    d.h_updates,
                    d.sum_xi
                )
                .map_err(|e| Failure::Internal(e.to_string()))?;
            }
            return Ok(());
        }
    };
    writeln!(out, "{value}").map_err(|e| Failure::Internal(e.to_string()))
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("deepsift: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("deepsift: internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
