//! Command-line front end: model counting, CNF transformation, exhaustive
//! enumeration and documentation analytics, with text or JSON reports.
//!
//! Exit codes: 0 complete, 1 input or usage error, 2 timeout or resource
//! limit, 3 the analysis found a refused order or a documentation error.

mod input;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use pofcount::config::{
    compare_versions, option_frequency, overlap_count, position_report,
    process_order, redundancy_check, total_configurations, ConfigError, Order, ProductDocumentation,
    Redundancy,
};
use pofcount::counter::{
    count_conjunction, BranchHeuristic, CountError, CountResult, CountStatus, CounterConfig,
};
use pofcount::formula::{FormulaError, Literal};
use pofcount::oracle::{enumerate_count, enumerate_models, OracleError, OracleLimit};
use pofcount::render::scientific;
use pofcount::synth;
use pofcount::transform::{tseitin, write_dimacs, write_dimacs_annotated, TransformError, TseitinVariant};

pub use input::Format;
use input::{load_formula, Input};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_FINDING: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Formula { path: String, source: FormulaError },
    #[error("{path}: {source}")]
    Document { path: String, source: ConfigError },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("refused: {0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(ConfigError::Incomplete(_)) => EXIT_LIMIT,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "pofcount", version, about = "Exact model counting and product-documentation analytics")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the models of a formula or DIMACS file.
    Count(CountArgs),
    /// Write a Tseitin encoding of a formula as DIMACS.
    Transform(TransformArgs),
    /// Run an analysis over a rules file.
    Analyze(AnalyzeArgs),
    /// Count (and optionally list) models by exhaustive enumeration.
    Oracle(OracleArgs),
    /// Write synthetic inputs.
    Generate(GenerateArgs),
}

#[derive(Args, Debug)]
struct FormulaInput {
    /// Input file, or `-` for stdin.
    input: String,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    format: Format,
    /// `declared` for every variable of the input, or a comma-separated list.
    #[arg(long, default_value = "declared")]
    scope: String,
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|_| format!("`{s}` is not a number of seconds"))?;
    Duration::try_from_secs_f64(secs).map_err(|_| format!("`{s}` is not a valid duration"))
}

#[derive(Args, Debug)]
struct CounterArgs {
    /// Stop after this many seconds and report a timeout.
    #[arg(long, global = true, value_parser = parse_seconds)]
    timeout: Option<Duration>,
    /// Maximum number of cached components; 0 disables the cache.
    #[arg(long, global = true)]
    cache_max: Option<usize>,
    /// Branching heuristic: most-parents, lowest-id or most-parents-random.
    #[arg(long, global = true, default_value = "most-parents")]
    heuristic: BranchHeuristic,
    /// Seed for randomized tie-breaking.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report a resource limit once the search holds this many formula nodes.
    #[arg(long, global = true)]
    node_limit: Option<usize>,
}

impl CounterArgs {
    fn config(&self) -> CounterConfig {
        CounterConfig {
            timeout: self.timeout,
            cache_capacity: self.cache_max,
            branch_heuristic: self.heuristic,
            seed: self.seed,
            node_limit: self.node_limit,
        }
    }
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    input: FormulaInput,
    /// Literals to assume, e.g. `a,!b` (`-b` also negates).
    #[arg(long)]
    assume: Option<String>,
    #[command(flatten)]
    counter: CounterArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    Impl,
    Equiv,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[command(flatten)]
    input: FormulaInput,
    #[arg(long, value_enum, default_value_t = Variant::Equiv)]
    variant: Variant,
    /// Output file; DIMACS goes to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Prefix the DIMACS text with variable and auxiliary comment lines.
    #[arg(long)]
    annotate: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Rules file, or `-` for stdin.
    doc: String,
    #[command(subcommand)]
    query: Query,
    #[command(flatten)]
    counter: CounterArgs,
}

#[derive(Subcommand, Debug)]
enum Query {
    /// Number of valid configurations.
    Total,
    /// Relative frequency of one code.
    Freq { code: String },
    /// Per-variant counts and pairwise overlaps of a position.
    Parts { position: String },
    /// Configurations installing both parts, given as `position.variant`.
    Overlap { first: String, second: String },
    /// Whether conjoining the formula in a file changes the count.
    Redundant { formula_file: String },
    /// Compare against another version of the rules file.
    Compare {
        other: String,
        /// Codes whose frequency change to report, comma-separated.
        #[arg(long, value_delimiter = ',')]
        codes: Vec<String>,
    },
    /// Process a customer order (whitespace-separated codes).
    Order { order_file: String },
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    input: FormulaInput,
    /// Refuse scopes larger than this.
    #[arg(long, default_value_t = 30)]
    max_vars: usize,
    /// Also list up to this many models in lexicographic order.
    #[arg(long)]
    list: Option<usize>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: Generated,
    /// Output file; stdout when omitted.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Generated {
    /// Block-structured rules file with a known configuration count.
    Documentation {
        #[arg(long, default_value_t = 1500)]
        codes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random clause set in formula syntax.
    Clauses {
        #[arg(long, default_value_t = 200)]
        vars: usize,
        #[arg(long, default_value_t = 600)]
        clauses: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a command produced: text for humans, a JSON payload, and the exit
/// status. `notes` go to stderr in text mode.
struct Outcome {
    text: String,
    notes: String,
    result: Value,
    exit: i32,
    inputs: Vec<Input>,
}

impl Outcome {
    fn new(text: String, result: Value, exit: i32, inputs: Vec<Input>) -> Self {
        Outcome {
            text,
            notes: String::new(),
            result,
            exit,
            inputs,
        }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: Vec<String>,
    inputs: &'a [Input],
    result: &'a Value,
    time_seconds: f64,
    exit_code: i32,
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let target: &mut dyn Write = if informational { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if informational { EXIT_OK } else { EXIT_INPUT };
        }
    };
    let start = Instant::now();
    let outcome = match dispatch(&cli.command, stdin) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    if cli.json {
        let report = RunReport {
            command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
            inputs: &outcome.inputs,
            result: &outcome.result,
            time_seconds: start.elapsed().as_secs_f64(),
            exit_code: outcome.exit,
        };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        let _ = write!(out, "{}", outcome.text);
        let _ = write!(err, "{}", outcome.notes);
        let _ = writeln!(out, "{:<13}{:.3}s", "time", start.elapsed().as_secs_f64());
    }
    outcome.exit
}

fn dispatch(command: &Command, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    match command {
        Command::Count(a) => cmd_count(a, stdin),
        Command::Transform(a) => cmd_transform(a, stdin),
        Command::Analyze(a) => cmd_analyze(a, stdin),
        Command::Oracle(a) => cmd_oracle(a, stdin),
        Command::Generate(a) => cmd_generate(a),
    }
}

fn status_exit(status: CountStatus) -> i32 {
    match status {
        CountStatus::Complete => EXIT_OK,
        CountStatus::Timeout | CountStatus::MemoryLimit => EXIT_LIMIT,
    }
}

fn status_name(status: CountStatus) -> &'static str {
    match status {
        CountStatus::Complete => "complete",
        CountStatus::Timeout => "timeout",
        CountStatus::MemoryLimit => "memory_limit",
    }
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<13}{value}");
}

fn count_text(r: &CountResult) -> String {
    let mut t = String::new();
    row(&mut t, "status", status_name(r.status));
    if let Some(n) = &r.count {
        row(&mut t, "count", n);
        row(&mut t, "scientific", scientific(n));
    }
    row(&mut t, "scope", format!("{} variables", r.scope_size));
    if r.trivially_inconsistent {
        row(&mut t, "note", "assumptions contradict each other");
    }
    let s = &r.stats;
    row(
        &mut t,
        "search",
        format!(
            "{} decisions, {} propagations, {} conflicts, {} splits",
            s.decisions, s.propagations, s.conflicts, s.component_splits
        ),
    );
    row(
        &mut t,
        "cache",
        format!("{} hits / {} lookups, peak {} entries", s.cache_hits, s.cache_lookups, s.peak_cache_entries),
    );
    t
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn parse_assumptions(text: &str, arena: &pofcount::FormulaArena) -> Result<Vec<Literal>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|lit| {
            let (positive, name) = match lit.strip_prefix(['!', '-']) {
                Some(rest) => (false, rest.trim()),
                None => (true, lit),
            };
            arena
                .pool()
                .get(name)
                .map(|v| Literal::new(v, positive))
                .ok_or_else(|| CliError::Usage(format!("--assume: unknown variable `{name}`")))
        })
        .collect()
}

fn cmd_count(a: &CountArgs, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let input = input::read(&a.input.input, stdin)?;
    let loaded = load_formula(&input, a.input.format, &a.input.scope)?;
    let assumed = match &a.assume {
        Some(text) => parse_assumptions(text, &loaded.arena)?,
        None => Vec::new(),
    };
    let r = count_conjunction(&loaded.arena, &[loaded.formula], &loaded.scope, &assumed, &a.counter.config())?;
    let mut result = to_value(&r);
    result["format"] = json!(loaded.format);
    Ok(Outcome::new(count_text(&r), result, status_exit(r.status), vec![input]))
}

fn cmd_transform(a: &TransformArgs, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let input = input::read(&a.input.input, stdin)?;
    let loaded = load_formula(&input, a.input.format, &a.input.scope)?;
    let variant = match a.variant {
        Variant::Impl => TseitinVariant::Implication,
        Variant::Equiv => TseitinVariant::Equivalence,
    };
    let doc = tseitin(&loaded.arena, loaded.formula, &loaded.scope, variant)?;
    let dimacs = if a.annotate {
        write_dimacs_annotated(&doc, &loaded.arena)
    } else {
        write_dimacs(&doc)
    };
    let summary = format!(
        "{} variables ({} source, {} auxiliary), {} clauses\n",
        doc.var_count,
        doc.source_vars.len(),
        doc.aux.len(),
        doc.clauses.len()
    );
    let aux_map: Vec<Value> = doc
        .aux
        .iter()
        .map(|&(index, node)| {
            json!({
                "index": index,
                "node": node.id(),
                "formula": loaded.arena.display(node).to_string(),
            })
        })
        .collect();
    let source_map: Vec<Value> = doc
        .source_vars
        .iter()
        .enumerate()
        .map(|(i, &v)| json!({"index": i + 1, "name": loaded.arena.name(v)}))
        .collect();
    let mut result = json!({
        "variant": match a.variant { Variant::Impl => "impl", Variant::Equiv => "equiv" },
        "var_count": doc.var_count,
        "clause_count": doc.clauses.len(),
        "aux_count": doc.aux.len(),
        "root": doc.root,
        "source_map": source_map,
        "aux_map": aux_map,
    });
    let mut outcome = match &a.output {
        Some(path) => {
            std::fs::write(path, &dimacs).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            result["output"] = json!(path.display().to_string());
            Outcome::new(format!("wrote {}\n{summary}", path.display()), result, EXIT_OK, vec![input])
        }
        None => {
            result["dimacs"] = json!(dimacs);
            let mut o = Outcome::new(dimacs, result, EXIT_OK, vec![input]);
            o.notes = summary;
            o
        }
    };
    outcome.result["format"] = json!(loaded.format);
    Ok(outcome)
}

fn cmd_oracle(a: &OracleArgs, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let input = input::read(&a.input.input, stdin)?;
    let loaded = load_formula(&input, a.input.format, &a.input.scope)?;
    let lim = OracleLimit { max_scope_size: a.max_vars };
    let n = enumerate_count(&loaded.arena, loaded.formula, &loaded.scope, lim)?;
    let mut text = String::new();
    row(&mut text, "count", &n);
    row(&mut text, "scientific", scientific(&n));
    row(&mut text, "scope", format!("{} variables", loaded.scope.len()));
    let mut result = json!({
        "count": n.to_string(),
        "count_scientific": scientific(&n),
        "scope_size": loaded.scope.len(),
        "format": loaded.format,
    });
    if let Some(limit) = a.list {
        let models = enumerate_models(&loaded.arena, loaded.formula, &loaded.scope, limit, lim)?;
        let listed: Vec<Vec<String>> = models
            .iter()
            .map(|m| {
                m.iter()
                    .map(|(v, b)| format!("{}{}", if b { "" } else { "!" }, loaded.arena.name(v)))
                    .collect()
            })
            .collect();
        for m in &listed {
            row(&mut text, "model", m.join(" "));
        }
        result["models"] = json!(listed);
    }
    Ok(Outcome::new(text, result, EXIT_OK, vec![input]))
}

fn cmd_generate(a: &GenerateArgs) -> Result<Outcome, CliError> {
    let (body, mut result) = match a.kind {
        Generated::Documentation { codes, seed } => {
            let d = synth::synthetic_documentation(codes, seed);
            let result = json!({
                "kind": "documentation",
                "codes": d.code_count,
                "blocks": d.block_count,
                "expected_total": d.expected_total.to_string(),
                "expected_total_scientific": scientific(&d.expected_total),
            });
            let header = format!(
                "# synthetic documentation: {} codes, {} blocks, {} valid configurations\n",
                d.code_count, d.block_count, d.expected_total
            );
            (header + &d.text, result)
        }
        Generated::Clauses { vars, clauses, width, seed } => (
            synth::random_clauses(vars, clauses, width, seed),
            json!({"kind": "clauses", "vars": vars, "clauses": clauses, "width": width}),
        ),
    };
    match &a.output {
        Some(path) => {
            std::fs::write(path, &body).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            result["output"] = json!(path.display().to_string());
            Ok(Outcome::new(format!("wrote {}\n", path.display()), result, EXIT_OK, vec![]))
        }
        None => {
            result["text"] = json!(body);
            Ok(Outcome::new(body, result, EXIT_OK, vec![]))
        }
    }
}

fn load_doc(path: &str, stdin: &mut dyn Read) -> Result<(ProductDocumentation, Input), CliError> {
    let input = input::read(path, stdin)?;
    let doc = ProductDocumentation::parse(&input.text).map_err(|source| CliError::Document {
        path: path.to_string(),
        source,
    })?;
    Ok((doc, input))
}

fn part_selection(doc: &ProductDocumentation, label: &str) -> Result<pofcount::Formula, CliError> {
    let (position, variant) = label
        .rsplit_once('.')
        .ok_or_else(|| CliError::Usage(format!("`{label}` is not `<position>.<variant>`")))?;
    Ok(doc.selection(position, variant)?)
}

fn cmd_analyze(a: &AnalyzeArgs, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let (mut doc, input) = load_doc(&a.doc, stdin)?;
    let cfg = a.counter.config();
    let mut inputs = vec![input];
    let outcome = match &a.query {
        Query::Total => {
            let r = total_configurations(&doc, &cfg)?;
            Outcome::new(count_text(&r), to_value(&r), status_exit(r.status), vec![])
        }
        Query::Freq { code } => {
            let f = option_frequency(&doc, code, &cfg)?;
            let mut t = String::new();
            row(&mut t, "code", code);
            row(&mut t, "frequency", format!("{}/{} = {}", f.numerator, f.denominator, f.decimal));
            row(&mut t, "reduced", &f.rational);
            Outcome::new(t, to_value(&f), EXIT_OK, vec![])
        }
        Query::Parts { position } => {
            let r = position_report(&doc, position, &cfg)?;
            let mut t = String::new();
            row(&mut t, "position", &r.position);
            if r.has_null_variant {
                row(&mut t, "null variant", pofcount::config::NULL_VARIANT);
            }
            let show = |c: &CountResult| match &c.count {
                Some(n) => format!("{n} ({})", scientific(n)),
                None => status_name(c.status).to_string(),
            };
            for v in &r.variants {
                row(&mut t, &format!("variant {}", v.variant), show(&v.count));
            }
            for o in &r.overlaps {
                let flag = if o.error { "  ERROR" } else { "" };
                row(&mut t, &format!("{} x {}", o.first, o.second), format!("{}{flag}", show(&o.count)));
            }
            row(&mut t, "errors", r.errors);
            let incomplete = r.variants.iter().map(|v| &v.count).chain(r.overlaps.iter().map(|o| &o.count)).find(|c| !c.is_complete());
            let exit = match incomplete {
                Some(c) => status_exit(c.status),
                None if r.errors > 0 => EXIT_FINDING,
                None => EXIT_OK,
            };
            Outcome::new(t, to_value(&r), exit, vec![])
        }
        Query::Overlap { first, second } => {
            let s1 = part_selection(&doc, first)?;
            let s2 = part_selection(&doc, second)?;
            let r = overlap_count(&doc, s1, s2, &cfg)?;
            let exit = match &r.count {
                None => status_exit(r.status),
                Some(n) if *n > num_bigint::BigUint::ZERO => EXIT_FINDING,
                Some(_) => EXIT_OK,
            };
            let mut result = to_value(&r);
            result["parts"] = json!([first, second]);
            Outcome::new(count_text(&r), result, exit, vec![])
        }
        Query::Redundant { formula_file } => {
            let candidate_input = input::read(formula_file, stdin)?;
            let candidate = doc.parse_condition(&candidate_input.text).map_err(|source| CliError::Document {
                path: formula_file.clone(),
                source,
            })?;
            inputs.push(candidate_input);
            let r = redundancy_check(&doc, candidate, &cfg)?;
            let text = match &r {
                Redundancy::RedundantCandidate { count } => {
                    format!("{:<13}redundant (count stays {count})\n", "verdict")
                }
                Redundancy::CountChanged { before, after } => {
                    format!("{:<13}count changes from {before} to {after}\n", "verdict")
                }
            };
            Outcome::new(text, to_value(&r), EXIT_OK, vec![])
        }
        Query::Compare { other, codes } => {
            let (other_doc, other_input) = load_doc(other, stdin)?;
            inputs.push(other_input);
            let codes: Vec<&str> = codes.iter().map(String::as_str).collect();
            let r = compare_versions(&doc, &other_doc, &codes, &cfg)?;
            let mut t = String::new();
            row(&mut t, "union", format!("{} codes", r.union_size));
            for (label, c) in [("first", &r.first), ("second", &r.second)] {
                let shown = match &c.count {
                    Some(n) => format!("{n} ({})", scientific(n)),
                    None => status_name(c.status).to_string(),
                };
                row(&mut t, label, shown);
            }
            if let Some(ratio) = &r.ratio {
                row(&mut t, "ratio", format!("{} = {}", ratio.rational, ratio.decimal));
            }
            if !r.only_in_first.is_empty() {
                row(&mut t, "only first", r.only_in_first.join(" "));
            }
            if !r.only_in_second.is_empty() {
                row(&mut t, "only second", r.only_in_second.join(" "));
            }
            for d in &r.deltas {
                let side = |f: &Option<pofcount::config::Frequency>| {
                    f.as_ref().map_or("?".to_string(), |f| f.decimal.clone())
                };
                row(
                    &mut t,
                    &format!("freq {}", d.code),
                    format!("{} -> {} ({})", side(&d.first), side(&d.second), d.delta.as_deref().unwrap_or("?")),
                );
            }
            Outcome::new(t, to_value(&r), status_exit(r.status), vec![])
        }
        Query::Order { order_file } => {
            let order_input = input::read(order_file, stdin)?;
            let order = Order::parse(&doc, &order_input.text)?;
            inputs.push(order_input);
            let v = process_order(&doc, &order);
            let mut t = String::new();
            row(&mut t, "status", if v.is_constructible() { "constructible" } else { "refused" });
            row(&mut t, "supplemented", v.supplemented.join(" "));
            if !v.added.is_empty() {
                row(&mut t, "added", v.added.join(" "));
            }
            if !v.violated.is_empty() {
                row(&mut t, "violated", v.violated.join(" "));
            }
            let exit = if v.is_constructible() { EXIT_OK } else { EXIT_FINDING };
            Outcome::new(t, to_value(&v), exit, vec![])
        }
    };
    Ok(Outcome { inputs, ..outcome })
}
