//! The `fik` command-line driver.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fik_core::{check_derivation, find_countermodel_bruteforce, prove_with, Formula, Model, ProveError, ProveOptions, Verdict};
use serde_json::json;

use crate::corpus;
use crate::derivation_out::{render_text, DerivationDoc};
use crate::dot::{self, DotOptions};
use crate::hilbert_file;
use crate::model_file::{CountermodelDoc, ModelDoc};

/// Largest model size the `oracle` command accepts.
pub const ORACLE_CAP: usize = 4;

/// Version of the stdout formats.
pub const OUTPUT_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "fik", version, about = "Decision procedure and countermodel builder for the intuitionistic modal logic FIK")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide a formula; `-` or no argument reads stdin, `@path` reads a file.
    Prove {
        formula: Option<String>,
        /// Write the derivation (text, or JSON with `--format json`).
        #[arg(long, value_name = "PATH")]
        derivation: Option<PathBuf>,
        /// Write the annotated countermodel as JSON.
        #[arg(long, value_name = "PATH")]
        model: Option<PathBuf>,
        /// Write the countermodel as Graphviz DOT.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        #[arg(long)]
        elide_preorder_closure: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Stop after this many rule applications.
        #[arg(long, value_name = "STEPS")]
        budget: Option<u64>,
    },
    /// Check a formula at a world of a model file, or at every world.
    CheckModel {
        model: PathBuf,
        formula: String,
        #[arg(long, short)]
        world: Option<String>,
        /// Add the reflexive pairs of the pre-order before validating.
        #[arg(long)]
        close_leq: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Search all models up to a size for a countermodel.
    Oracle {
        formula: Option<String>,
        #[arg(short = 'n', long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Prove every formula of a corpus file and compare with its annotations.
    Bench {
        corpus: PathBuf,
        #[arg(long, short, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_name = "STEPS")]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check a Hilbert-style derivation file.
    CheckDerivation { file: PathBuf },
}

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET: i32 = 3;
}

/// Terminal output settings, from `FIK_COLOR` and whether stdout is a tty.
#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub color: bool,
}

impl Style {
    pub fn from_env() -> Style {
        let never = std::env::var("FIK_COLOR").is_ok_and(|v| v == "never");
        Style { color: !never && std::io::stdout().is_terminal() }
    }

    fn verdict(&self, v: Verdict) -> String {
        match (self.color, v) {
            (false, _) => v.to_string(),
            (true, Verdict::Provable) => format!("\x1b[32m{v}\x1b[0m"),
            (true, Verdict::Unprovable) => format!("\x1b[31m{v}\x1b[0m"),
        }
    }
}

pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    pub style: Style,
}

/// A failure carrying the exit status it maps to.
#[derive(Debug)]
struct Exit(i32, anyhow::Error);

fn usage<E: Into<anyhow::Error>>(e: E) -> Exit {
    Exit(exit::USAGE, e.into())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { io.stderr } else { io.stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, io) {
        Ok(code) => code,
        Err(Exit(code, e)) => {
            let _ = writeln!(io.stderr, "error: {e:#}");
            code
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, Exit> {
    match command {
        Command::Prove { formula, derivation, model, dot, elide_preorder_closure, format, budget } => {
            let a = read_formula(formula.as_deref(), io.stdin)?;
            let artifacts = Artifacts { derivation, model, dot, elide: elide_preorder_closure };
            cmd_prove(&a, &artifacts, format, budget, io)
        }
        Command::CheckModel { model, formula, world, close_leq, format } => {
            let text = std::fs::read_to_string(&model).with_context(|| format!("reading {}", model.display())).map_err(usage)?;
            let doc = ModelDoc::parse(&text).map_err(usage)?;
            let m = doc.to_model(close_leq).map_err(usage)?;
            let a = read_formula(Some(&formula), io.stdin)?;
            cmd_check_model(&m, &a, world.as_deref(), format, io)
        }
        Command::Oracle { formula, max_worlds, format } => {
            let a = read_formula(formula.as_deref(), io.stdin)?;
            cmd_oracle(&a, max_worlds, format, io)
        }
        Command::Bench { corpus, jobs, budget, format } => {
            let text = std::fs::read_to_string(&corpus).with_context(|| format!("reading {}", corpus.display())).map_err(usage)?;
            let entries = corpus::parse(&text).map_err(usage)?;
            cmd_bench(&entries, jobs, budget, format, io)
        }
        Command::CheckDerivation { file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display())).map_err(usage)?;
            let d = hilbert_file::parse(&text).map_err(usage)?;
            let out = match check_derivation(&d) {
                Ok(()) => {
                    let conclusion = d.conclusion().map(Formula::render).unwrap_or_default();
                    let n = d.steps.len();
                    let plural = if n == 1 { "" } else { "s" };
                    (exit::OK, format!("valid: {n} step{plural}, conclusion {conclusion}"))
                }
                Err(f) => (exit::NEGATIVE, format!("invalid: {f}")),
            };
            writeln!(io.stdout, "{}", out.1).map_err(usage)?;
            Ok(out.0)
        }
    }
}

fn read_formula(arg: Option<&str>, stdin: &mut dyn Read) -> Result<Formula, Exit> {
    let text = match arg {
        None | Some("-") => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).context("reading stdin").map_err(usage)?;
            s
        }
        Some(a) => match a.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}")).map_err(usage)?,
            None => a.to_string(),
        },
    };
    Formula::parse(text.trim()).map_err(usage)
}

struct Artifacts {
    derivation: Option<PathBuf>,
    model: Option<PathBuf>,
    dot: Option<PathBuf>,
    elide: bool,
}

fn write_file(path: &Path, contents: &str) -> Result<(), Exit> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display())).map_err(usage)
}

fn cmd_prove(a: &Formula, artifacts: &Artifacts, format: Format, budget: Option<u64>, io: &mut Io<'_>) -> Result<i32, Exit> {
    let start = Instant::now();
    let result = match prove_with(a, &ProveOptions { budget }) {
        Ok(r) => r,
        Err(e @ ProveError::BudgetExceeded(_)) => return Err(Exit(exit::BUDGET, e.into())),
        Err(e) => return Err(Exit(exit::NEGATIVE, e.into())),
    };
    let elapsed = start.elapsed();
    if let Some(path) = &artifacts.derivation {
        let text = match format {
            Format::Text => render_text(result.derivation()),
            Format::Json => DerivationDoc::from_derivation(result.derivation()).to_json(),
        };
        write_file(path, &text)?;
    }
    let report = result.countermodel();
    if let Some(report) = report {
        if let Some(path) = &artifacts.model {
            write_file(path, &CountermodelDoc::from_report(report).to_json())?;
        }
        if let Some(path) = &artifacts.dot {
            let labels: Vec<String> = report.worlds.iter().map(|s| s.render()).collect();
            write_file(path, &dot::render(&report.model, Some(&labels), DotOptions { elide_preorder_closure: artifacts.elide }))?;
        }
    }
    let stats = result.stats();
    let verdict = result.verdict();
    let text = match format {
        Format::Json => {
            let doc = json!({
                "version": OUTPUT_VERSION,
                "formula": a.render(),
                "result": verdict.to_string(),
                "stats": {
                    "rule_applications": stats.rule_applications,
                    "expansions": stats.expansions,
                    "blocking": stats.blocking,
                    "max_sequent_size": stats.max_sequent_size,
                    "nodes": stats.nodes,
                    "elapsed_ms": elapsed.as_secs_f64() * 1000.0,
                },
                "derivation": artifacts.derivation.as_ref().map(|p| p.display().to_string()),
                "countermodel": report.map(CountermodelDoc::from_report),
            });
            serde_json::to_string_pretty(&doc).expect("json values serialise") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{}", io.style.verdict(verdict)).unwrap();
            writeln!(s, "formula: {a}").unwrap();
            writeln!(s, "rule applications: {}", stats.rule_applications).unwrap();
            writeln!(s, "max sequent size: {}", stats.max_sequent_size).unwrap();
            writeln!(s, "derivation nodes: {}", stats.nodes).unwrap();
            if let Some(report) = report {
                writeln!(s, "countermodel: {} worlds, refuted at {}", report.model.len(), report.model.name(report.root)).unwrap();
                s.push_str(&report.model.to_string());
                if !s.ends_with('\n') {
                    s.push('\n');
                }
            }
            writeln!(s, "time: {:.3} ms", elapsed.as_secs_f64() * 1000.0).unwrap();
            s
        }
    };
    io.stdout.write_all(text.as_bytes()).map_err(usage)?;
    Ok(if result.is_provable() { exit::OK } else { exit::NEGATIVE })
}

fn cmd_check_model(m: &Model, a: &Formula, world: Option<&str>, format: Format, io: &mut Io<'_>) -> Result<i32, Exit> {
    let violations = m.validate();
    if !violations.is_empty() {
        let mut s = String::from("invalid model:\n");
        for v in &violations {
            writeln!(s, "  {}", v.describe(m)).unwrap();
        }
        io.stdout.write_all(s.as_bytes()).map_err(usage)?;
        return Ok(exit::USAGE);
    }
    let truth = m.truth_set(a);
    let worlds: Vec<usize> = match world {
        Some(w) => vec![m.index_of(w).map_err(usage)?],
        None => (0..m.len()).collect(),
    };
    let forced = worlds.iter().all(|&w| truth[w]);
    match format {
        Format::Json => {
            let per: serde_json::Map<String, serde_json::Value> =
                worlds.iter().map(|&w| (m.name(w).to_string(), json!(truth[w]))).collect();
            let doc = json!({"version": OUTPUT_VERSION, "formula": a.render(), "forced": forced, "worlds": per});
            writeln!(io.stdout, "{}", serde_json::to_string_pretty(&doc).expect("json values serialise")).map_err(usage)?;
        }
        Format::Text => {
            for &w in &worlds {
                let word = if truth[w] { "forced" } else { "not forced" };
                writeln!(io.stdout, "{}: {word}", m.name(w)).map_err(usage)?;
            }
        }
    }
    Ok(if forced { exit::OK } else { exit::NEGATIVE })
}

fn cmd_oracle(a: &Formula, max_worlds: usize, format: Format, io: &mut Io<'_>) -> Result<i32, Exit> {
    if max_worlds == 0 || max_worlds > ORACLE_CAP {
        return Err(usage(anyhow::anyhow!("-n must be between 1 and {ORACLE_CAP}")));
    }
    let found = find_countermodel_bruteforce(a, max_worlds);
    let text = match (&found, format) {
        (Some((m, w)), Format::Json) => {
            let doc = json!({"version": OUTPUT_VERSION, "formula": a.render(), "countermodel": ModelDoc::from_model(m), "world": m.name(*w)});
            serde_json::to_string_pretty(&doc).expect("json values serialise") + "\n"
        }
        (None, Format::Json) => {
            let doc = json!({"version": OUTPUT_VERSION, "formula": a.render(), "countermodel": null, "max_worlds": max_worlds});
            serde_json::to_string_pretty(&doc).expect("json values serialise") + "\n"
        }
        (Some((m, w)), Format::Text) => format!("countermodel found, refuted at {}\n{m}\n", m.name(*w)),
        (None, Format::Text) => format!("none up to {max_worlds} worlds\n"),
    };
    io.stdout.write_all(text.as_bytes()).map_err(usage)?;
    Ok(if found.is_some() { exit::NEGATIVE } else { exit::OK })
}

fn cmd_bench(entries: &[corpus::Entry], jobs: usize, budget: Option<u64>, format: Format, io: &mut Io<'_>) -> Result<i32, Exit> {
    let outcomes = corpus::bench(entries, &ProveOptions { budget }, jobs);
    let failed: Vec<&corpus::Outcome> = outcomes.iter().filter(|o| !o.ok()).collect();
    let verdict_text = |o: &corpus::Outcome| match &o.verdict {
        Ok(v) => v.to_string(),
        Err(e) => format!("ERROR ({e})"),
    };
    match format {
        Format::Json => {
            let rows: Vec<_> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "line": o.entry.line,
                        "formula": o.entry.formula.render(),
                        "expected": o.entry.expect.map(|v| v.to_string()),
                        "result": verdict_text(o),
                        "ok": o.ok(),
                        "elapsed_ms": o.elapsed.as_secs_f64() * 1000.0,
                        "rule_applications": o.rule_applications,
                        "max_sequent_size": o.max_sequent_size,
                    })
                })
                .collect();
            let doc = json!({"version": OUTPUT_VERSION, "results": rows, "failures": failed.len()});
            writeln!(io.stdout, "{}", serde_json::to_string_pretty(&doc).expect("json values serialise")).map_err(usage)?;
        }
        Format::Text => {
            let mut s = String::new();
            if !outcomes.is_empty() {
                writeln!(s, "{:>5}  {:<10}  {:>10}  {:>6}  {:>5}  formula", "line", "result", "time_ms", "rules", "size").unwrap();
            }
            for o in &outcomes {
                let mark = if o.ok() { "" } else { "  <-- MISMATCH" };
                writeln!(
                    s,
                    "{:>5}  {:<10}  {:>10.3}  {:>6}  {:>5}  {}{mark}",
                    o.entry.line,
                    verdict_text(o),
                    o.elapsed.as_secs_f64() * 1000.0,
                    o.rule_applications,
                    o.max_sequent_size,
                    o.entry.formula
                )
                .unwrap();
            }
            for o in &failed {
                let expected = o.entry.expect.map(|v| v.to_string()).unwrap_or_default();
                writeln!(s, "line {}: expected {expected}, got {}", o.entry.line, verdict_text(o)).unwrap();
            }
            writeln!(s, "{} formulas, {} mismatches", outcomes.len(), failed.len()).unwrap();
            io.stdout.write_all(s.as_bytes()).map_err(usage)?;
        }
    }
    Ok(if failed.is_empty() { exit::OK } else { exit::NEGATIVE })
}

/// Runs the binary against the real process streams.
pub fn main() -> i32 {
    let stdin = &mut std::io::stdin().lock();
    let stdout = &mut std::io::stdout().lock();
    let stderr = &mut std::io::stderr().lock();
    let mut io = Io { stdin, stdout, stderr, style: Style::from_env() };
    run(std::env::args_os(), &mut io)
}
