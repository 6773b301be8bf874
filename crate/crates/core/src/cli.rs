//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when resolve or generate find nothing,
//! 2 on diagnostics, unreadable input or usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::avm::{render_avm, render_tree, Avm};
use crate::dsl::{Diagnostic, Lexicon};
use crate::fs::FeatureStructure;
use crate::resolver::{self, ResolutionResult, DEFAULT_DEPTH_LIMIT};

#[derive(Parser, Debug)]
#[command(name = "caseframe", version, about = "Resolve case frames against a constraint-based verb lexicon")]
struct Cli {
    /// Lexicon file; may be repeated.
    #[arg(long = "lexicon", global = true)]
    lexicons: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Avm, global = true)]
    format: Format,
    /// Maximum nesting of embedded clauses, counting the top frame.
    #[arg(long, default_value_t = DEFAULT_DEPTH_LIMIT, global = true)]
    depth: usize,
    /// Print only the best reading.
    #[arg(long, global = true)]
    rank1: bool,
    /// Print per-constraint records with each reading.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resolve frame files to ranked verb senses.
    Resolve { inputs: Vec<String> },
    /// Produce the most general frames for a semantic query.
    Generate { query: String },
    /// Load the lexicons and report diagnostics.
    Validate,
    /// Show which constraints of a sense accept or reject a frame.
    Explain {
        #[arg(long)]
        sense: String,
        input: String,
    },
    /// Parse a frame and print it in canonical form.
    Print { input: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Avm,
    Tree,
}

struct Failure(i32);

type Out<'a> = &'a mut dyn Write;

pub fn run<I, S>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) | Err(Failure(code)) => code,
    }
}

fn dispatch(cli: &Cli, out: Out, err: Out) -> Result<i32, Failure> {
    match &cli.command {
        Command::Validate => {
            let _ = load(cli, err)?;
            let _ = writeln!(out, "0 diagnostics");
            Ok(0)
        }
        Command::Print { input } => {
            let text = read_input(input, err)?;
            if cli.lexicons.is_empty() {
                let avm = Avm::parse_named(&input_name(input), &text).map_err(|d| report(err, &[d]))?;
                emit_one(cli, out, &avm.normalized().to_text(), || tree_of_avm(&avm.normalized()));
            } else {
                let lex = load(cli, err)?;
                let fs = frame(&lex, input, &text, err)?;
                emit_one(cli, out, &render_avm(lex.lattice(), &fs), || render_tree(lex.lattice(), &fs));
            }
            Ok(0)
        }
        Command::Resolve { inputs } => {
            if inputs.is_empty() {
                let _ = writeln!(err, "error: resolve needs at least one frame");
                return Err(Failure(2));
            }
            let lex = load(cli, err)?;
            let mut any = false;
            let mut trees = Vec::new();
            for input in inputs {
                let text = read_input(input, err)?;
                let fs = frame(&lex, input, &text, err)?;
                let mut results = resolver::resolve(&lex, &fs, cli.depth).map_err(|e| {
                    let _ = writeln!(err, "{}: error: {e}", input_name(input));
                    Failure(2)
                })?;
                if cli.rank1 {
                    results.truncate(1);
                }
                any |= !results.is_empty();
                if inputs.len() > 1 && cli.format == Format::Avm {
                    let _ = writeln!(out, "; frame {}\n", input_name(input));
                }
                match cli.format {
                    Format::Avm => write_results(cli, &lex, &results, out),
                    Format::Tree => trees.push(json!({
                        "input": input_name(input),
                        "results": results.iter().map(|r| result_tree(cli, &lex, r)).collect::<Vec<_>>(),
                    })),
                }
            }
            if cli.format == Format::Tree {
                let v = if inputs.len() == 1 { trees.pop().unwrap()["results"].take() } else { Value::Array(trees) };
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            Ok(if any { 0 } else { 1 })
        }
        Command::Generate { query } => {
            let lex = load(cli, err)?;
            let text = read_input(query, err)?;
            let q = frame(&lex, query, &text, err)?;
            let mut frames = resolver::generate(&lex, &q);
            if cli.rank1 {
                frames.truncate(1);
            }
            match cli.format {
                Format::Avm => {
                    for g in &frames {
                        let _ =
                            writeln!(out, "; rank {} {}\n{}\n", g.rank, g.sense, render_avm(lex.lattice(), &g.frame));
                    }
                }
                Format::Tree => {
                    let v: Vec<Value> = frames
                        .iter()
                        .map(|g| json!({"rank": g.rank, "sense": g.sense, "frame": render_tree(lex.lattice(), &g.frame)}))
                        .collect();
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
                }
            }
            Ok(if frames.is_empty() { 1 } else { 0 })
        }
        Command::Explain { sense, input } => {
            let lex = load(cli, err)?;
            let text = read_input(input, err)?;
            let fs = frame(&lex, input, &text, err)?;
            let trace = resolver::explain(&lex, &fs, sense).map_err(|e| {
                let _ = writeln!(err, "error: {e}");
                Failure(2)
            })?;
            for r in &trace {
                let _ = writeln!(out, "{r}");
            }
            Ok(0)
        }
    }
}

fn write_results(cli: &Cli, lex: &Lexicon, results: &[ResolutionResult], out: Out) {
    for r in results {
        let _ = writeln!(out, "{}", result_header(r));
        for f in &r.flags {
            let _ = writeln!(out, "; flag {f}");
        }
        if cli.trace {
            for t in &r.trace {
                let _ = writeln!(out, "; trace {t}");
            }
        }
        let _ = writeln!(out, "{}\n", render_avm(lex.lattice(), &r.frame));
    }
}

/// The comment line that precedes each reading in AVM output.
pub fn result_header(r: &ResolutionResult) -> String {
    format!("; rank {} {} priority {} specificity {}", r.rank, r.sense, r.priority, r.specificity)
}

fn result_tree(cli: &Cli, lex: &Lexicon, r: &ResolutionResult) -> Value {
    let mut v = json!({
        "rank": r.rank,
        "sense": r.sense,
        "priority": r.priority,
        "specificity": r.specificity,
        "flags": r.flags.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "frame": render_tree(lex.lattice(), &r.frame),
    });
    if cli.trace {
        v["trace"] = json!(r.trace.iter().map(|t| t.to_string()).collect::<Vec<_>>());
    }
    v
}

fn emit_one(cli: &Cli, out: Out, avm_text: &str, tree: impl FnOnce() -> Value) {
    let _ = match cli.format {
        Format::Avm => writeln!(out, "{avm_text}"),
        Format::Tree => writeln!(out, "{}", serde_json::to_string_pretty(&tree()).expect("json")),
    };
}

/// Tree rendering of an untyped AVM, used by `print` without a lexicon.
fn tree_of_avm(avm: &Avm) -> Value {
    match avm {
        Avm::Node { ty, features } => {
            let mut v = json!({ "type": ty.clone().unwrap_or_else(|| "top".into()) });
            if !features.is_empty() {
                let map: serde_json::Map<String, Value> =
                    features.iter().map(|(f, x)| (f.clone(), tree_of_avm(x))).collect();
                v["features"] = Value::Object(map);
            }
            v
        }
        Avm::Atom(a) => json!({ "type": a }),
        Avm::Str(s) => json!({ "type": "string", "value": s }),
        Avm::Tag(t, None) => json!({ "ref": t }),
        Avm::Tag(t, Some(inner)) => {
            let mut v = tree_of_avm(inner);
            v["tag"] = json!(t);
            v
        }
        Avm::Param(p) => json!({ "param": p }),
    }
}

fn load(cli: &Cli, err: Out) -> Result<Lexicon, Failure> {
    if cli.lexicons.is_empty() {
        let _ = writeln!(err, "error: at least one --lexicon is required");
        return Err(Failure(2));
    }
    Lexicon::load_files(&cli.lexicons).map_err(|ds| report(err, &ds))
}

fn report(err: Out, diags: &[Diagnostic]) -> Failure {
    for d in diags {
        let _ = writeln!(err, "{d}");
    }
    let _ = writeln!(err, "{} diagnostic{}", diags.len(), if diags.len() == 1 { "" } else { "s" });
    Failure(2)
}

fn is_inline(input: &str) -> bool {
    input.trim_start().starts_with('[')
}

fn input_name(input: &str) -> String {
    if is_inline(input) {
        "<inline>".into()
    } else {
        input.to_string()
    }
}

fn read_input(input: &str, err: Out) -> Result<String, Failure> {
    if is_inline(input) {
        return Ok(input.to_string());
    }
    std::fs::read_to_string(Path::new(input)).map_err(|e| {
        let _ = writeln!(err, "{input}: error: {e}");
        Failure(2)
    })
}

fn frame(lex: &Lexicon, input: &str, text: &str, err: Out) -> Result<FeatureStructure, Failure> {
    lex.read_frame(&input_name(input), text).map_err(|d| report(err, &[d]))
}
