//! Command-line front end.
//!
//! Exit codes: 0 valid/true, 1 invalid/false, 2 parse or usage error,
//! 3 resource limit.

use std::ffi::OsString;
use std::io::Write;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::axiomgen::{self, AxiomOptions, FiniteForm, LambdaReading};
use crate::decider::{DecideError, Decider, Limits, Status};
use crate::evaluator::EvalError;
use crate::formula::{parse_formula, parse_sentence, Var};
use crate::ordinal::{parse_ordinal, Ordinal};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RESOURCES: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wellorder",
    version,
    about = "Decide first-order sentences over well orders"
)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Config {
    /// Include the empty order
    #[arg(long, global = true)]
    allow_empty: bool,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Wall-clock budget in seconds
    #[arg(long, global = true, default_value_t = 120, value_parser = clap::value_parser!(u64).range(1..))]
    max_seconds: u64,
    /// Cap on interned types
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_closure: u64,
    /// Print statistics to stderr
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a sentence over all well orders
    Decide { formula: String },
    /// Check a sentence in one ordinal
    Holds { ordinal: String, formula: String },
    /// Test rank-k equivalence of two ordinals
    Equiv { a: String, b: String, k: u32 },
    /// Print the axiomatization of an ordinal's theory
    Axiom {
        ordinal: String,
        /// Use one "exactly n elements" sentence for the finite part
        #[arg(long)]
        direct_finite: bool,
        /// Use the literal non-successor formula
        #[arg(long)]
        literal_lambda: bool,
    },
    /// Print the transfinite induction instance for a formula
    Ti { formula: String },
    /// Print statistics of an ordinal's rank-k type
    Type { ordinal: String, k: u32 },
    /// List the reachable rank-k types with witness terms
    Closure { k: u32 },
}

enum Failure {
    Parse(String),
    Resources(String),
}

impl From<DecideError> for Failure {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::NotSentence(_) => Failure::Parse(e.to_string()),
            _ => Failure::Resources(e.to_string()),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Deadline => Failure::Resources(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}

struct Output<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Output<'_> {
    fn emit(&mut self, text: &str, value: Value) {
        if self.json {
            let _ = writeln!(self.out, "{value}");
        } else {
            let _ = writeln!(self.out, "{text}");
        }
    }
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_TRUE
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_PARSE
                }
            };
        }
    };
    let start = Instant::now();
    let limits = Limits {
        max_time: Some(Duration::from_secs(cli.config.max_seconds)),
        max_types: usize::try_from(cli.config.max_closure).unwrap_or(usize::MAX),
        ..Limits::default()
    };
    let mut decider = Decider::new(limits);
    let json = cli.config.json;
    let mut output = Output { out, json };
    let result = execute(&cli.command, &cli.config, &mut decider, &mut output);
    if cli.config.trace {
        let st = decider.evaluator().stats();
        let _ = writeln!(
            err,
            "[trace] {:.3}s, {} interned types, {} evaluations, {} memo hits, {} splits",
            start.elapsed().as_secs_f64(),
            decider.table().len(),
            st.evaluations,
            st.memo_hits,
            st.splits
        );
    }
    match result {
        Ok(code) => code,
        Err(Failure::Parse(msg)) => {
            if json {
                output.emit("", json!({ "error": msg, "status": "ERROR" }));
            }
            let _ = writeln!(err, "error: {msg}");
            EXIT_PARSE
        }
        Err(Failure::Resources(msg)) => {
            if json {
                output.emit(
                    "",
                    json!({ "error": msg, "status": "UNDECIDED-BY-RESOURCES" }),
                );
            }
            let _ = writeln!(err, "error: {msg}");
            EXIT_RESOURCES
        }
    }
}

fn ordinal_arg(s: &str) -> Result<Ordinal, Failure> {
    parse_ordinal(s).map_err(|e| Failure::Parse(format!("ordinal `{s}`: {e}")))
}

fn sentence_arg(s: &str) -> Result<crate::formula::Formula, Failure> {
    parse_sentence(s).map_err(|e| Failure::Parse(format!("formula: {e}")))
}

fn bool_code(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn execute(
    cmd: &Command,
    config: &Config,
    decider: &mut Decider,
    out: &mut Output<'_>,
) -> Result<i32, Failure> {
    match cmd {
        Command::Decide { formula } => {
            let f = sentence_arg(formula)?;
            let v = decider.decide(&f, config.allow_empty)?;
            let cex = v.counterexample.as_ref().map(|a| a.to_string());
            let text = match v.status {
                Status::Valid => format!(
                    "VALID (WO ⊨ φ, TI ⊢ φ)\nrank: {}\nclosure_size: {}",
                    v.rank, v.closure_size
                ),
                Status::Invalid => format!(
                    "INVALID\ncounterexample: {}\nwitness: {}\nrank: {}\nclosure_size: {}",
                    cex.as_deref().unwrap_or("?"),
                    v.witness_term
                        .as_ref()
                        .map(|t| t.to_string())
                        .unwrap_or_default(),
                    v.rank,
                    v.closure_size
                ),
            };
            out.emit(
                &text,
                json!({
                    "closure_size": v.closure_size,
                    "counterexample": cex,
                    "rank": v.rank,
                    "status": v.status.to_string(),
                }),
            );
            Ok(bool_code(v.is_valid()))
        }
        Command::Holds { ordinal, formula } => {
            let a = ordinal_arg(ordinal)?;
            let f = sentence_arg(formula)?;
            let b = decider.holds(&a, &f)?;
            out.emit(
                &b.to_string(),
                json!({ "holds": b, "ordinal": a.to_string(), "rank": f.quantifier_rank() }),
            );
            Ok(bool_code(b))
        }
        Command::Equiv { a, b, k } => {
            let (x, y) = (ordinal_arg(a)?, ordinal_arg(b)?);
            let e = decider.equiv(&x, &y, *k);
            out.emit(
                &e.to_string(),
                json!({ "a": x.to_string(), "b": y.to_string(), "equiv": e, "k": k }),
            );
            Ok(bool_code(e))
        }
        Command::Axiom {
            ordinal,
            direct_finite,
            literal_lambda,
        } => {
            let a = ordinal_arg(ordinal)?;
            let opts = AxiomOptions {
                lambda: if *literal_lambda {
                    LambdaReading::Literal
                } else {
                    LambdaReading::Corrected
                },
                finite: if *direct_finite {
                    FiniteForm::Direct
                } else {
                    FiniteForm::IteratedSum
                },
            };
            let r = axiomgen::t_alpha_with(&a, opts).map_err(|e| Failure::Parse(e.to_string()))?;
            let trace: Vec<String> = r.trace.iter().map(|s| s.to_string()).collect();
            out.emit(
                &format!("{}\nrank: {}\ntrace: {}", r.sentence, r.rank, trace.join(" ")),
                json!({ "ordinal": a.to_string(), "rank": r.rank, "sentence": r.sentence.to_string(), "trace": trace }),
            );
            Ok(EXIT_TRUE)
        }
        Command::Ti { formula } => {
            let phi =
                parse_formula(formula).map_err(|e| Failure::Parse(format!("formula: {e}")))?;
            let used = phi.all_variables();
            let x = crate::formula::fresh_var(&Var::new("x"), &used);
            let mut used = used;
            used.insert(x.clone());
            let y = crate::formula::fresh_var(&Var::new("y"), &used);
            let inst =
                axiomgen::ti_instance(&phi, &x, &y).map_err(|e| Failure::Parse(e.to_string()))?;
            let rank = inst.quantifier_rank();
            out.emit(
                &format!("{inst}\nrank: {rank}"),
                json!({ "instance": inst.to_string(), "rank": rank }),
            );
            Ok(EXIT_TRUE)
        }
        Command::Type { ordinal, k } => {
            let a = ordinal_arg(ordinal)?;
            let t = decider.type_of(&a, *k);
            let st = decider.table().stats(t);
            let enc = decider.table_mut().encoding(t);
            let per_level: Vec<String> = st
                .nodes_per_level
                .iter()
                .enumerate()
                .map(|(i, n)| format!("{}:{}", st.level as usize - i, n))
                .collect();
            out.emit(
                &format!(
                    "id: {}\nlevel: {}\ncardinality: {}\nnodes per level: {}\ntotal nodes: {}\ninterned: {}\nencoding: {}",
                    t.index(),
                    st.level,
                    st.cardinality,
                    per_level.join(" "),
                    st.total_nodes,
                    decider.table().len(),
                    enc
                ),
                json!({
                    "cardinality": st.cardinality,
                    "encoding": enc,
                    "id": t.index(),
                    "interned": decider.table().len(),
                    "level": st.level,
                    "nodes_per_level": st.nodes_per_level,
                    "ordinal": a.to_string(),
                    "total_nodes": st.total_nodes,
                }),
            );
            Ok(EXIT_TRUE)
        }
        Command::Closure { k } => {
            let c = decider.reachable_closure(*k, config.allow_empty)?;
            let mut lines = vec![format!("closure level {}: {} entries", k, c.len())];
            let mut entries = Vec::new();
            for (i, e) in c.entries.iter().enumerate() {
                lines.push(format!(
                    "{i} depth={} {} = {}",
                    e.depth, e.ordinal, e.witness
                ));
                entries.push(json!({
                    "depth": e.depth,
                    "ordinal": e.ordinal.to_string(),
                    "witness": e.witness.to_string(),
                }));
            }
            out.emit(
                &lines.join("\n"),
                json!({ "entries": entries, "level": k, "size": c.len() }),
            );
            Ok(EXIT_TRUE)
        }
    }
}
