//! `reebkit`: command-line front end.
//!
//! Exit status is 0 on success, 1 when the input is well formed but fails
//! the check being asked about, and 2 on usage, I/O or parse errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use reebkit::classify::{
    self, parse_description, realizable_family, ConditionBVariant, ConditionSet, ManifoldClass, PrimeToken, Summand,
};
use reebkit::digraph::{export_dot, is_isomorphic, parse_dot, parse_reeb, validate_pre_m, write_reeb, LabeledDigraph};
use reebkit::realize::{manifold_witness, realize, RealizationParams};
use reebkit::sim::{parse_surgery, simulate, trace, write_surgery, SimError, SurgerySequence};
use reebkit::verify::{verify, Suite};

#[derive(Parser)]
#[command(name = "reebkit", version, about = "Fiber-labeled Reeb digraphs of Morse functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Conditions {
    /// Reading of condition (b).
    #[arg(long, default_value = "no-through-klein")]
    variant: ConditionBVariant,
    /// Drop condition (b): the target manifold has vanishing w2.
    #[arg(long)]
    vanishing_w2: bool,
}

impl Conditions {
    fn set(&self) -> ConditionSet {
        if self.vanishing_w2 {
            ConditionSet::VanishingW2
        } else {
            ConditionSet::WithConditionB(self.variant)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the pre-M conditions.
    Validate { file: PathBuf },
    /// Print the family of connected sums realizable with the given Reeb data.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        conditions: Conditions,
        /// Accepted for symmetry with `isomorphic`; families ignore levels.
        #[arg(long)]
        strict_levels: bool,
    },
    /// Compile a digraph into a certificate surgery sequence.
    Realize {
        file: PathBuf,
        #[command(flatten)]
        conditions: Conditions,
        /// Split-merge pairs at a degree-2 sphere vertex, as VERTEX=N.
        #[arg(long = "bundle-pairs", value_name = "VERTEX=N")]
        bundle_pairs: Vec<String>,
        /// Close a torus edge off as a lens space, as EDGE=TAG.
        #[arg(long, value_name = "EDGE=TAG")]
        lens: Vec<String>,
        /// Summand a Klein-bottle edge stands for, as EDGE=TwS1xS2 or EDGE=NOr1(tag).
        #[arg(long, value_name = "EDGE=SUMMAND")]
        klein: Vec<String>,
        /// Number of sphere bundles to make twisted.
        #[arg(long, default_value_t = 0)]
        twisted: usize,
        /// Write the sequence here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay a surgery sequence; prints its Reeb digraph and level trace.
    Simulate { file: PathBuf },
    /// Decide whether two digraphs are isomorphic.
    Isomorphic {
        a: PathBuf,
        b: PathBuf,
        /// Also require the vertex bijection to preserve level order.
        #[arg(long)]
        strict_levels: bool,
    },
    /// Minimal genus of an orientable surface with the given Reeb data.
    MinGenus {
        file: PathBuf,
        /// Instead, decide whether the surface of this genus works.
        #[arg(long, value_name = "G")]
        check_genus: Option<usize>,
    },
    /// Print a DOT rendering.
    ExportDot { file: PathBuf },
    /// Run a brute-force verification suite.
    Verify {
        /// thm5, thm6, roundtrip or algebra.
        suite: Suite,
        #[arg(long)]
        bounds: Option<usize>,
        /// Worker count (default: $REEBKIT_SHARDS, else the number of CPUs).
        #[arg(long)]
        shards: Option<usize>,
    },
    /// Decide whether a connected sum admits a Morse function with level
    /// components among S2, T2 and K2.
    Decide {
        description: String,
        #[command(flatten)]
        conditions: Conditions,
        /// Also print a witness digraph and sequence.
        #[arg(long)]
        witness: bool,
    },
}

struct Failure {
    code: String,
    message: String,
    status: u8,
}

impl Failure {
    fn usage(code: &str, message: impl ToString) -> Self {
        Failure { code: code.into(), message: message.to_string(), status: 2 }
    }

    fn domain(code: &str, message: impl ToString) -> Self {
        Failure { code: code.into(), message: message.to_string(), status: 1 }
    }
}

/// What a successful command prints, and whether it counts as a pass.
struct Outcome {
    stdout: String,
    pass: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, pass: true }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))
}

/// Reads a `reeb v1` file, or DOT if the text starts with `digraph`.
fn load_digraph(path: &Path) -> Result<LabeledDigraph, Failure> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with("digraph") { parse_dot(&text) } else { parse_reeb(&text) };
    parsed.map_err(|e| Failure::usage("parse", format!("{}: {e}", path.display())))
}

fn load_surgery(path: &Path) -> Result<SurgerySequence, Failure> {
    let text = read(path)?;
    parse_surgery(&text).map_err(|e| Failure::usage("parse", format!("{}: {e}", path.display())))
}

fn key_value<'a>(flag: &str, s: &'a str) -> Result<(&'a str, &'a str), Failure> {
    s.split_once('=')
        .filter(|(k, v)| !k.is_empty() && !v.is_empty())
        .ok_or_else(|| Failure::usage("usage", format!("--{flag} expects KEY=VALUE, got `{s}`")))
}

fn summand(s: &str) -> Result<Summand, Failure> {
    match parse_description(s).map_err(|e| Failure::usage("usage", e))?.as_slice() {
        [PrimeToken::Known(x)] => Ok(x.clone()),
        _ => Err(Failure::usage("usage", format!("`{s}` is not a single summand"))),
    }
}

fn sim_failure(e: SimError) -> Failure {
    Failure::domain("invalid-sequence", e)
}

fn default_shards() -> usize {
    std::env::var("REEBKIT_SHARDS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Validate { file } => {
            let g = load_digraph(&file)?;
            let report = validate_pre_m(&g);
            let mut out = String::new();
            if report.is_pre_m() {
                out.push_str("pre-M\n");
            } else {
                for v in &report.violations {
                    writeln!(out, "{v}").unwrap();
                }
            }
            Ok(Outcome { stdout: out, pass: report.is_pre_m() })
        }
        Command::Classify { file, conditions, strict_levels: _ } => {
            let g = load_digraph(&file)?;
            let fam = realizable_family(&g, conditions.set()).map_err(|e| Failure::domain(e.code(), e))?;
            Ok(Outcome::ok(format!("{fam}\n{}\n", fam.describe())))
        }
        Command::Realize { file, conditions, bundle_pairs, lens, klein, twisted, output } => {
            let g = load_digraph(&file)?;
            let mut params = RealizationParams { twisted_bundles: twisted, ..Default::default() };
            for s in &bundle_pairs {
                let (v, n) = key_value("bundle-pairs", s)?;
                let n = n.parse().map_err(|_| Failure::usage("usage", format!("--bundle-pairs count `{n}` is not a number")))?;
                params.extra_bundle_pairs.insert(v.to_string(), n);
            }
            for s in &lens {
                let (e, tag) = key_value("lens", s)?;
                params.lens_assignment.insert(e.to_string(), tag.to_string());
            }
            for s in &klein {
                let (e, tok) = key_value("klein", s)?;
                params.klein_assignment.insert(e.to_string(), summand(tok)?);
            }
            let seq = realize(&g, &params, conditions.set()).map_err(|e| Failure::domain(e.code(), e))?;
            let text = write_surgery(&seq);
            match output {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
        Command::Simulate { file } => {
            let seq = load_surgery(&file)?;
            match simulate(&seq) {
                Ok(sim) => {
                    let mut out = write_reeb(&sim.reeb);
                    for entry in &sim.trace.entries {
                        writeln!(out, "# trace {entry}").unwrap();
                    }
                    Ok(Outcome::ok(out))
                }
                Err(e @ SimError::Unlabelable { .. }) => {
                    // the trace is still meaningful; show where it leaves the labels
                    let t = trace(&seq).map_err(sim_failure)?;
                    let out: String = t.entries.iter().map(|entry| format!("# trace {entry}\n")).collect();
                    print!("{out}");
                    Err(sim_failure(e))
                }
                Err(e) => Err(sim_failure(e)),
            }
        }
        Command::Isomorphic { a, b, strict_levels } => {
            let (ga, gb) = (load_digraph(&a)?, load_digraph(&b)?);
            Ok(match is_isomorphic(&ga, &gb, strict_levels) {
                Some(map) => {
                    let mut out = String::from("isomorphic\n");
                    for (x, y) in map {
                        writeln!(out, "{x} -> {y}").unwrap();
                    }
                    Outcome::ok(out)
                }
                None => Outcome { stdout: "not isomorphic\n".into(), pass: false },
            })
        }
        Command::MinGenus { file, check_genus } => {
            let g = load_digraph(&file)?;
            let genus = classify::min_genus(&g).map_err(|e| Failure::domain(e.code(), e))?;
            Ok(match check_genus {
                None => Outcome::ok(format!("{genus}\n")),
                Some(h) if h >= genus => Outcome::ok(format!("realizable on genus {h}\n")),
                Some(h) => Outcome { stdout: format!("not realizable on genus {h} (minimum {genus})\n"), pass: false },
            })
        }
        Command::ExportDot { file } => Ok(Outcome::ok(export_dot(&load_digraph(&file)?))),
        Command::Verify { suite, bounds, shards } => {
            let shards = shards.unwrap_or_else(default_shards);
            let report = verify(suite, bounds, shards).map_err(|e| Failure::usage("bounds", e))?;
            Ok(Outcome { pass: report.is_success(), stdout: report.to_string() })
        }
        Command::Decide { description, conditions, witness } => {
            let yes = classify::decide_description(&description, conditions.set()).map_err(|e| Failure::usage("parse", e))?;
            let mut out = String::from(if yes { "yes\n" } else { "no\n" });
            if yes && witness {
                let summands = parse_description(&description)
                    .map_err(|e| Failure::usage("parse", e))?
                    .into_iter()
                    .filter_map(|t| match t {
                        PrimeToken::Known(s) => Some(s),
                        PrimeToken::Foreign(_) => None,
                    });
                let (g, seq) = manifold_witness(&ManifoldClass::new(summands));
                out.push_str(&write_reeb(&g));
                out.push_str(&write_surgery(&seq));
            }
            Ok(Outcome { stdout: out, pass: yes })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(if o.pass { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error[{}]: {}", f.code, f.message);
            ExitCode::from(f.status)
        }
    }
}
