//! The `computon` command-line tool.
//!
//! Exit codes: 0 on success, 1 when the input is well formed but rejected
//! (an invalid computon, a failed composition, no isomorphism), 2 for usage,
//! I/O, syntax and reference errors. Reports go to standard output, either
//! as `key: value` lines or, with `--format json`, as one flat JSON object.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use computon_core::compose::{
    check_sequential, is_pushable, parallel_compose, pushout, sequential_compose, ParallelError, PushoutError,
    SequentialError, SUM_OBJECT,
};
use computon_core::morphism::validate_morphism;
use computon_core::semantics::{run, Policy, DEFAULT_STEP_LIMIT};
use computon_core::{classify, find_isomorphism, Computon, ComputonMorphism, Id};

use crate::dot::{export_dot, export_marked_dot, validate_dot, Syntax};
use crate::dsl::{parse, quote, Document, DocumentError, Item, ParseError};

#[derive(Debug, Parser)]
#[command(name = "computon", version, about = "Build, compose and run computons")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every declaration of a document, or only the named one.
    Validate { file: PathBuf, name: Option<String> },
    /// Print the class and external interface of a computon.
    Classify { file: PathBuf, name: String },
    /// Compose two computons.
    #[command(subcommand)]
    Compose(ComposeCommand),
    /// Glue the two operands of a declared span.
    Pushout {
        file: PathBuf,
        span: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Name of the result in the written document.
        #[arg(long, default_value = "Pushout")]
        name: String,
    },
    /// Search for an isomorphism between two computons.
    Iso { file: PathBuf, a: String, b: String },
    /// Play the token game from a declared marking.
    Simulate {
        file: PathBuf,
        name: String,
        #[arg(long)]
        marking: String,
        #[arg(long, value_enum, default_value_t = PolicyArg::LeastId)]
        policy: PolicyArg,
        /// Seed for `--policy random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        steps: usize,
        /// Write the trace, one firing per line.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Write a computon or a marking as Graphviz DOT.
    Export {
        file: PathBuf,
        name: String,
        #[arg(long, value_enum)]
        syntax: SyntaxArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Draw this marking of the computon instead of the bare computon.
        #[arg(long)]
        marking: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ComposeCommand {
    /// Sequential composition `L ▷ R`.
    Seq {
        file: PathBuf,
        left: String,
        right: String,
        /// Fuse left e-outport LPORT with right e-inport RPORT. Without any
        /// pair, the least control ports are fused.
        #[arg(long = "pair", value_name = "LPORT=RPORT", value_parser = parse_pair)]
        pairs: Vec<(Id, Id)>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the apex, operands, legs and injections.
        #[arg(long)]
        provenance: bool,
        #[arg(long, default_value = "Seq")]
        name: String,
    },
    /// Parallel composition `A | B`.
    Par {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write every intermediate object and morphism of the
        /// construction, as `lambda0..lambda16`, `sum` and `alpha1..alpha26`.
        #[arg(long)]
        provenance: bool,
        #[arg(long, default_value = "Par")]
        name: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    LeastId,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SyntaxArg {
    Petri,
    Computon,
}

fn parse_pair(s: &str) -> Result<(Id, Id), String> {
    match s.split_once('=') {
        Some((l, r)) if !l.is_empty() && !r.is_empty() => Ok((l.into(), r.into())),
        _ => Err(format!("expected LPORT=RPORT, got `{s}`")),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{}:{error}", path.display())]
    Parse { path: PathBuf, error: ParseError },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { error, .. } if error.only_invalid() => 1,
            _ => 2,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// The result of one subcommand: ordered report fields, plus an optional
/// document, DOT graph or trace that follows the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub fields: Vec<(String, Value)>,
    pub body: Option<(String, String)>,
}

impl Outcome {
    fn ok() -> Self {
        Outcome {
            code: 0,
            fields: vec![("status".into(), "ok".into())],
            body: None,
        }
    }

    fn rejected(violations: impl IntoIterator<Item = String>) -> Self {
        let violations: Vec<Value> = violations.into_iter().map(Value::String).collect();
        assert!(!violations.is_empty(), "a rejection names at least one violation");
        Outcome {
            code: 1,
            fields: vec![
                ("status".into(), "rejected".into()),
                ("violations".into(), Value::Array(violations)),
            ],
            body: None,
        }
    }

    fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    fn body(mut self, key: &str, text: String) -> Self {
        self.body = Some((key.into(), text));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut map = Map::new();
                for (k, v) in &self.fields {
                    map.insert(k.clone(), v.clone());
                }
                if let Some((k, text)) = &self.body {
                    map.insert(k.clone(), Value::String(text.clone()));
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                for (k, v) in &self.fields {
                    let v = text_value(v);
                    s.push_str(k);
                    s.push(':');
                    if !v.is_empty() {
                        s.push(' ');
                        s.push_str(&v);
                    }
                    s.push('\n');
                }
                if let Some((_, text)) = &self.body {
                    s.push('\n');
                    s.push_str(text);
                }
                s
            }
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(text_value).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

/// Names and name pairs are written as in a document, quoted where needed.
fn strings<I: IntoIterator<Item = S>, S: ToString>(items: I) -> Value {
    Value::Array(items.into_iter().map(|s| Value::String(s.to_string())).collect())
}

fn names(ids: impl IntoIterator<Item = impl AsRef<str>>) -> Value {
    strings(ids.into_iter().map(|s| quote(s.as_ref())))
}

fn load(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    parse(&text).map_err(|error| CliError::Parse {
        path: path.into(),
        error,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.into(),
        source,
    })
}

fn computon<'d>(doc: &'d Document, name: &str) -> Result<&'d Arc<Computon>, CliError> {
    doc.computon(name)
        .ok_or_else(|| CliError::Usage(format!("no computon named {name}")))
}

/// Writes `doc` to `output`, or attaches it to the report.
fn emit(outcome: Outcome, doc: &Document, output: Option<&Path>) -> Result<Outcome, CliError> {
    let text = doc.to_text();
    match output {
        Some(path) => {
            write(path, &text)?;
            Ok(outcome.field("written", path.display().to_string()))
        }
        None => Ok(outcome.body("document", text)),
    }
}

fn map_pairs(m: &BTreeMap<Id, Id>) -> Value {
    strings(m.iter().map(|(k, v)| format!("{} => {}", quote(k), quote(v))))
}

fn shape(outcome: Outcome, c: &Computon) -> Outcome {
    outcome
        .field("units", c.units().len())
        .field("ports", c.ports().len())
        .field("inports", names(c.inports()))
        .field("outports", names(c.outports()))
        .field("iports", names(c.iports()))
        .field("connected", c.is_connected())
}

fn validate_cmd(file: &Path, name: Option<&str>) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let decls: Vec<_> = match name {
        Some(n) => vec![doc
            .get(n)
            .ok_or_else(|| CliError::Usage(format!("no declaration named {n}")))?],
        None => doc.declarations().iter().collect(),
    };
    let mut problems = Vec::new();
    let mut checked = Vec::new();
    for d in &decls {
        match &d.item {
            Item::Computon(c) => match computon_core::computon::validate_computon(&c.to_raw()) {
                Ok(r) if r.is_ok() => {}
                Ok(r) => problems.push(format!("{}: {r}", d.name)),
                Err(e) => problems.push(format!("{}: {e}", d.name)),
            },
            Item::Morphism { value, .. } => match validate_morphism(value.data()) {
                Ok(r) if r.is_ok() => {}
                Ok(r) => problems.push(format!("{}: {r}", d.name)),
                Err(e) => problems.push(format!("{}: {e}", d.name)),
            },
            Item::Span { .. } => {}
            Item::Marking { value, .. } => {
                if !value.colours_agree() {
                    problems.push(format!("{}: a token's colour differs from its port's", d.name));
                }
            }
        }
        checked.push(format!("{} {}", d.item.kind(), d.name));
    }
    if !problems.is_empty() {
        return Ok(Outcome::rejected(problems));
    }
    Ok(Outcome::ok().field("checked", strings(checked)))
}

fn classify_cmd(file: &Path, name: &str) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let c = computon(&doc, name)?;
    let iface = c.interface();
    let inout: Vec<&Id> = iface.inports.intersection(&iface.outports).collect();
    Ok(Outcome::ok()
        .field("computon", name)
        .field("class", classify(c).tag())
        .field("units", c.units().len())
        .field("control_inports", names(iface.control_inports()))
        .field("data_inports", names(iface.data_inports()))
        .field("control_outports", names(iface.control_outports()))
        .field("data_outports", names(iface.data_outports()))
        .field("inoutports", names(inout))
        .field("iports", names(iface.iports()))
        .field("connected", c.is_connected()))
}

fn push_computon_once(doc: &mut Document, name: &str, c: &Arc<Computon>) -> Result<(), CliError> {
    match doc.computon(name) {
        Some(existing) if **existing == **c => Ok(()),
        _ => Ok(doc.push_computon(name, c.clone())?),
    }
}

#[allow(clippy::too_many_arguments)]
fn seq_cmd(
    file: &Path,
    left: &str,
    right: &str,
    pairs: &[(Id, Id)],
    output: Option<&Path>,
    provenance: bool,
    name: &str,
) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let (l, r) = (computon(&doc, left)?, computon(&doc, right)?);
    let pairing = (!pairs.is_empty()).then_some(pairs);
    let res = match sequential_compose(l, r, pairing) {
        Ok(res) => res,
        Err(SequentialError::ElementNotFound(e)) => return Err(CliError::Usage(e.to_string())),
        Err(SequentialError::Rejected(rej)) => return Ok(Outcome::rejected(rej.failed.iter().map(|f| f.to_string()))),
        Err(e) => return Ok(Outcome::rejected([e.to_string()])),
    };
    let outcome = Outcome::ok().field("mode", res.report.mode.to_string()).field(
        "fused",
        strings(
            res.report
                .fused_ports
                .iter()
                .map(|(a, b)| format!("{} = {}", quote(a), quote(b))),
        ),
    );
    let outcome = shape(outcome, &res.pushout.result);

    let mut out = Document::new();
    if provenance {
        out.push_computon("Apex", res.span.apex().clone())?;
        push_computon_once(&mut out, left, l)?;
        push_computon_once(&mut out, right, r)?;
        out.push_morphism("left", "Apex", left, res.span.left().clone())?;
        out.push_morphism("right", "Apex", right, res.span.right().clone())?;
        out.push_span("span", "Apex", "left", "right")?;
    }
    out.push_computon(name, res.pushout.result.clone())?;
    if provenance {
        out.push_morphism("inl", left, name, res.pushout.left_inj.clone())?;
        out.push_morphism("inr", right, name, res.pushout.right_inj.clone())?;
    }
    emit(outcome, &out, output)
}

fn par_cmd(
    file: &Path,
    a: &str,
    b: &str,
    output: Option<&Path>,
    provenance: bool,
    name: &str,
) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let (ca, cb) = (computon(&doc, a)?, computon(&doc, b)?);
    let res = match parallel_compose(ca, cb) {
        Ok(res) => res,
        Err(e @ ParallelError::NotParallelisable(_)) => return Ok(Outcome::rejected([e.to_string()])),
        Err(e) => return Ok(Outcome::rejected([e.to_string()])),
    };
    let outcome = shape(Outcome::ok(), &res.result);
    let mut out = Document::new();
    if provenance {
        let d = &res.diagram;
        let object_name = |i: usize| {
            if i == SUM_OBJECT {
                "sum".to_string()
            } else {
                format!("lambda{i}")
            }
        };
        for i in 0..=16 {
            out.push_computon(&object_name(i), d.lambda(i).clone())?;
        }
        out.push_computon("sum", d.sum.clone())?;
        for j in 1..=26 {
            let (s, t) = d.alpha_endpoints(j);
            out.push_morphism(
                &format!("alpha{j}"),
                &object_name(s),
                &object_name(t),
                d.alpha(j).clone(),
            )?;
        }
    }
    out.push_computon(name, res.result.clone())?;
    emit(outcome, &out, output)
}

fn pushout_cmd(file: &Path, span_name: &str, output: Option<&Path>, name: &str) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let span = doc
        .span(span_name)
        .ok_or_else(|| CliError::Usage(format!("no span named {span_name}")))?;
    let report = is_pushable(span);
    if !report.is_ok() {
        return Ok(Outcome::rejected(report.violations.iter().map(|v| v.to_string())));
    }
    let po = match pushout(span) {
        Ok(po) => po,
        Err(PushoutError::NotAComputon(r)) => {
            return Ok(Outcome::rejected(
                r.violations
                    .iter()
                    .map(|v| format!("glued structure: {}: {v}", v.clause())),
            ))
        }
        Err(e) => return Ok(Outcome::rejected([e.to_string()])),
    };
    let mut outcome = Outcome::ok().field("pushable", true);
    if let Ok(rep) = check_sequential(span) {
        outcome = outcome.field("sequential", rep.mode.to_string());
    }
    let outcome = shape(outcome, &po.result);
    let mut out = Document::new();
    out.push_computon(name, po.result.clone())?;
    emit(outcome, &out, output)
}

fn iso_cmd(file: &Path, a: &str, b: &str) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let (ca, cb) = (computon(&doc, a)?, computon(&doc, b)?);
    match find_isomorphism(ca, cb) {
        None => Ok(Outcome::rejected([format!("not isomorphic: {a} and {b}")])),
        Some(m) => {
            let d = ComputonMorphism::data(&m);
            Ok(Outcome::ok()
                .field("isomorphic", true)
                .field("unit_map", map_pairs(&d.units))
                .field("port_map", map_pairs(&d.ports))
                .field("out_edge_map", map_pairs(&d.out_edges))
                .field("in_edge_map", map_pairs(&d.in_edges)))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    file: &Path,
    name: &str,
    marking: &str,
    policy: PolicyArg,
    seed: u64,
    steps: usize,
    trace_out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    computon(&doc, name)?;
    let (on, m) = doc
        .marking(marking)
        .ok_or_else(|| CliError::Usage(format!("no marking named {marking}")))?;
    if on != name {
        return Err(CliError::Usage(format!("marking {marking} is on {on}, not {name}")));
    }
    let policy = match policy {
        PolicyArg::LeastId => Policy::LeastId,
        PolicyArg::Random => Policy::SeededRandom(seed),
    };
    let trace = run(m, policy, steps);
    let mut outcome = Outcome::ok()
        .field("computon", name)
        .field("marking", marking)
        .field(
            "policy",
            match policy {
                Policy::LeastId => "least-id".to_string(),
                Policy::SeededRandom(s) => format!("random seed {s}"),
            },
        )
        .field("events", trace.events.len())
        .field("termination", trace.termination.to_string())
        .field(
            "final_marking",
            strings(
                trace
                    .final_marking
                    .counts()
                    .iter()
                    .map(|(p, n)| format!("{} = {n}", quote(p))),
            ),
        );
    let text = trace.to_string();
    match trace_out {
        Some(path) => {
            write(path, &text)?;
            outcome = outcome.field("written", path.display().to_string());
        }
        None => outcome = outcome.body("trace", text),
    }
    Ok(outcome)
}

fn export_cmd(
    file: &Path,
    name: &str,
    syntax: SyntaxArg,
    output: Option<&Path>,
    marking: Option<&str>,
) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let c = computon(&doc, name)?;
    let syntax = match syntax {
        SyntaxArg::Petri => Syntax::Petri,
        SyntaxArg::Computon => Syntax::Computon,
    };
    let text = match marking {
        None => export_dot(c, syntax),
        Some(mk) => {
            let (on, m) = doc
                .marking(mk)
                .ok_or_else(|| CliError::Usage(format!("no marking named {mk}")))?;
            if on != name {
                return Err(CliError::Usage(format!("marking {mk} is on {on}, not {name}")));
            }
            export_marked_dot(m, syntax)
        }
    };
    let graph = validate_dot(&text).expect("exported DOT is valid");
    let outcome = Outcome::ok()
        .field("computon", name)
        .field("nodes", graph.nodes().count())
        .field("edges", graph.edges().count());
    match output {
        Some(path) => {
            write(path, &text)?;
            Ok(outcome.field("written", path.display().to_string()))
        }
        None => Ok(outcome.body("dot", text)),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate { file, name } => validate_cmd(file, name.as_deref()),
        Command::Classify { file, name } => classify_cmd(file, name),
        Command::Compose(ComposeCommand::Seq {
            file,
            left,
            right,
            pairs,
            output,
            provenance,
            name,
        }) => seq_cmd(file, left, right, pairs, output.as_deref(), *provenance, name),
        Command::Compose(ComposeCommand::Par {
            file,
            a,
            b,
            output,
            provenance,
            name,
        }) => par_cmd(file, a, b, output.as_deref(), *provenance, name),
        Command::Pushout {
            file,
            span,
            output,
            name,
        } => pushout_cmd(file, span, output.as_deref(), name),
        Command::Iso { file, a, b } => iso_cmd(file, a, b),
        Command::Simulate {
            file,
            name,
            marking,
            policy,
            seed,
            steps,
            trace,
        } => simulate_cmd(file, name, marking, *policy, *seed, *steps, trace.as_deref()),
        Command::Export {
            file,
            name,
            syntax,
            output,
            marking,
        } => export_cmd(file, name, *syntax, output.as_deref(), marking.as_deref()),
    }
}

/// Parses `args`, runs the command and writes its report; returns the exit
/// code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) if e.exit_code() == 1 => {
            let CliError::Parse { path, error } = &e else {
                unreachable!("only invalid documents exit with 1")
            };
            Outcome::rejected(error.diagnostics.iter().map(|d| format!("{}:{d}", path.display())))
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let _ = out.write_all(outcome.render(cli.format).as_bytes());
    outcome.code
}
