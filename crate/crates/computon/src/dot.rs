//! Graphviz output in two notations, and a small reader that checks the
//! output is well-formed DOT.
//!
//! Petri notation draws ports as circles labelled by colour and units as
//! black bars. Computon notation draws control ports as squares and data
//! ports as circles, hollow for e-inports, filled for e-outports and
//! half-filled for ports with both or neither kind of edge; control-flow
//! edges are dashed and data-flow edges solid.

use std::collections::BTreeMap;
use std::fmt::Write;

use computon_core::computon::Direction;
use computon_core::semantics::MarkedComputon;
use computon_core::{Computon, Id};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Syntax {
    Petri,
    Computon,
}

fn q(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn port_node(p: &str) -> String {
    q(&format!("port:{p}"))
}

fn unit_node(u: &str) -> String {
    q(&format!("unit:{u}"))
}

pub fn export_dot(c: &Computon, syntax: Syntax) -> String {
    render(c, &BTreeMap::new(), syntax, "computon")
}

pub fn export_marked_dot(m: &MarkedComputon, syntax: Syntax) -> String {
    render(m.computon(), &m.counts(), syntax, "marked")
}

fn render(c: &Computon, tokens: &BTreeMap<Id, usize>, syntax: Syntax, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", q(name));
    out.push_str("  rankdir=LR;\n");
    for (p, colour) in c.ports() {
        let dir = c.port_class(p).expect("port exists").direction;
        let mut label = match syntax {
            Syntax::Petri => colour.0.to_string(),
            Syntax::Computon if colour.is_control() => String::new(),
            Syntax::Computon => colour.0.to_string(),
        };
        if let Some(n) = tokens.get(p) {
            if !label.is_empty() {
                label.push('\n');
            }
            label.push_str(&format!("●{n}"));
        }
        let attrs = match syntax {
            Syntax::Petri => format!("shape=circle, label={}, tooltip={}", q(&label), q(p)),
            Syntax::Computon => {
                let (shape, style) = if colour.is_control() {
                    ("square", "striped")
                } else {
                    ("circle", "wedged")
                };
                let fill = match dir {
                    Direction::Inport => "style=solid, fillcolor=white".to_string(),
                    Direction::Outport => "style=filled, fillcolor=black, fontcolor=white".to_string(),
                    Direction::InOutport | Direction::Internal => {
                        format!("style={style}, fillcolor={}", q("black;0.5:white"))
                    }
                };
                format!("shape={shape}, {fill}, label={}, tooltip={}", q(&label), q(p))
            }
        };
        let _ = writeln!(out, "  {} [{attrs}];", port_node(p));
    }
    for u in c.units() {
        let attrs = match syntax {
            Syntax::Petri => "shape=box, style=filled, fillcolor=black, label=\"\", width=0.1, height=0.6".to_string(),
            Syntax::Computon => format!("shape=box, label={}", q(u)),
        };
        let _ = writeln!(out, "  {} [{attrs}];", unit_node(u));
    }
    let style = |p: &str| match syntax {
        Syntax::Petri => "solid",
        Syntax::Computon if c.ports()[p].is_control() => "dashed",
        Syntax::Computon => "solid",
    };
    for (f, e) in c.in_edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [style={}, tooltip={}];",
            port_node(&e.port),
            unit_node(&e.unit),
            style(&e.port),
            q(f)
        );
    }
    for (id, e) in c.out_edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [style={}, tooltip={}];",
            unit_node(&e.unit),
            port_node(&e.port),
            style(&e.port),
            q(id)
        );
    }
    out.push_str("}\n");
    out
}

/// A node or edge statement read back from DOT text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Node {
        id: String,
        attrs: BTreeMap<String, String>,
    },
    Edge {
        from: String,
        to: String,
        attrs: BTreeMap<String, String>,
    },
    Attr {
        key: String,
        value: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotGraph {
    pub name: String,
    pub statements: Vec<Statement>,
}

impl DotGraph {
    pub fn nodes(&self) -> impl Iterator<Item = (&String, &BTreeMap<String, String>)> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Node { id, attrs } => Some((id, attrs)),
            _ => None,
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = (&String, &String, &BTreeMap<String, String>)> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Edge { from, to, attrs } => Some((from, to, attrs)),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid DOT at byte {offset}: {message}")]
pub struct DotError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum DotTok {
    Id(String),
    Sym(&'static str),
}

fn dot_tokens(text: &str) -> Result<Vec<(usize, DotTok)>, DotError> {
    let err = |offset, message: &str| DotError {
        offset,
        message: message.into(),
    };
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '{' | '}' | '[' | ']' | ';' | ',' | '=' => {
                it.next();
                out.push((
                    i,
                    DotTok::Sym(match c {
                        '{' => "{",
                        '}' => "}",
                        '[' => "[",
                        ']' => "]",
                        ';' => ";",
                        ',' => ",",
                        _ => "=",
                    }),
                ));
            }
            '-' => {
                it.next();
                match it.next() {
                    Some((_, '>')) => out.push((i, DotTok::Sym("->"))),
                    Some((_, c)) if c.is_ascii_digit() || c == '.' => {
                        let mut s = format!("-{c}");
                        while let Some(&(_, c)) = it.peek() {
                            if !(c.is_ascii_digit() || c == '.') {
                                break;
                            }
                            s.push(c);
                            it.next();
                        }
                        out.push((i, DotTok::Id(s)));
                    }
                    _ => return Err(err(i, "expected `->`")),
                }
            }
            '"' => {
                it.next();
                let mut s = String::new();
                loop {
                    match it.next() {
                        Some((_, '"')) => break,
                        Some((_, '\\')) => match it.next() {
                            Some((_, '"')) => s.push('"'),
                            Some((_, '\\')) => s.push('\\'),
                            Some((_, 'n')) => s.push('\n'),
                            Some((_, c)) => {
                                s.push('\\');
                                s.push(c);
                            }
                            None => return Err(err(i, "unterminated string")),
                        },
                        Some((_, c)) => s.push(c),
                        None => return Err(err(i, "unterminated string")),
                    }
                }
                out.push((i, DotTok::Id(s)));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if !(c.is_alphanumeric() || c == '_' || c == '.') {
                        break;
                    }
                    s.push(c);
                    it.next();
                }
                out.push((i, DotTok::Id(s)));
            }
            _ => return Err(err(i, &format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

/// Reads the subset of DOT that [`export_dot`] writes: one `digraph` with
/// node, edge and `key=value` statements, every statement ending in `;`.
pub fn validate_dot(text: &str) -> Result<DotGraph, DotError> {
    let toks = dot_tokens(text)?;
    let mut i = 0;
    let end = text.len();
    let err = |toks: &[(usize, DotTok)], i: usize, message: &str| DotError {
        offset: toks.get(i).map_or(end, |t| t.0),
        message: message.into(),
    };
    let id = |toks: &[(usize, DotTok)], i: &mut usize| -> Result<String, DotError> {
        match toks.get(*i) {
            Some((_, DotTok::Id(s))) => {
                *i += 1;
                Ok(s.clone())
            }
            _ => Err(err(toks, *i, "expected an identifier")),
        }
    };
    let sym = |toks: &[(usize, DotTok)], i: &mut usize, s: &str| -> Result<(), DotError> {
        match toks.get(*i) {
            Some((_, DotTok::Sym(t))) if *t == s => {
                *i += 1;
                Ok(())
            }
            _ => Err(err(toks, *i, &format!("expected `{s}`"))),
        }
    };
    let is_sym =
        |toks: &[(usize, DotTok)], i: usize, s: &str| matches!(toks.get(i), Some((_, DotTok::Sym(t))) if *t == s);

    if id(&toks, &mut i)? != "digraph" {
        return Err(err(&toks, 0, "expected `digraph`"));
    }
    let name = id(&toks, &mut i)?;
    sym(&toks, &mut i, "{")?;
    let mut statements = Vec::new();
    while !is_sym(&toks, i, "}") {
        let first = id(&toks, &mut i)?;
        if is_sym(&toks, i, "=") {
            i += 1;
            let value = id(&toks, &mut i)?;
            statements.push(Statement::Attr { key: first, value });
        } else {
            let to = if is_sym(&toks, i, "->") {
                i += 1;
                Some(id(&toks, &mut i)?)
            } else {
                None
            };
            let mut attrs = BTreeMap::new();
            if is_sym(&toks, i, "[") {
                i += 1;
                while !is_sym(&toks, i, "]") {
                    let k = id(&toks, &mut i)?;
                    sym(&toks, &mut i, "=")?;
                    let v = id(&toks, &mut i)?;
                    if attrs.insert(k, v).is_some() {
                        return Err(err(&toks, i, "repeated attribute"));
                    }
                    if is_sym(&toks, i, ",") {
                        i += 1;
                    } else if !is_sym(&toks, i, "]") {
                        return Err(err(&toks, i, "expected `,` or `]`"));
                    }
                }
                i += 1;
            }
            statements.push(match to {
                Some(to) => Statement::Edge { from: first, to, attrs },
                None => Statement::Node { id: first, attrs },
            });
        }
        sym(&toks, &mut i, ";")?;
    }
    i += 1;
    if i != toks.len() {
        return Err(err(&toks, i, "text after the closing brace"));
    }
    let graph = DotGraph { name, statements };
    let declared: std::collections::BTreeSet<&String> = graph.nodes().map(|(id, _)| id).collect();
    for (from, to, _) in graph.edges() {
        for end in [from, to] {
            if !declared.contains(end) {
                return Err(DotError {
                    offset: 0,
                    message: format!("edge endpoint {end} is not declared"),
                });
            }
        }
    }
    Ok(graph)
}
