//! The `.cmp` description language.
//!
//! A document is a sequence of blocks, each naming a computon, a morphism
//! between earlier computons, a span of earlier morphisms, or a marking of
//! an earlier computon:
//!
//! ```text
//! computon Glue {
//!   colours: 0;
//!   ports: p1:0, p2:0;
//!   units: u1;
//!   edges: p1 -> u1, u1 -> p2;
//! }
//! marking Start on Glue { p1 = 1; }
//! ```
//!
//! Edge direction follows from its endpoints: `port -> unit` is an input
//! edge, `unit -> port` an output edge. Unnamed edges are called `e1, e2, …`
//! (outputs) and `f1, f2, …` (inputs) in declaration order. Names made of
//! letters, digits, `_`, `.` and `'` may be written bare; anything else is
//! double-quoted. `#` starts a comment.

mod lexer;
mod parser;
mod serialize;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use computon_core::compose::Span;
use computon_core::semantics::MarkedComputon;
use computon_core::{Computon, ComputonMorphism, Id};

pub use lexer::Pos;
pub use parser::{
    parse, parse_syntax, Ast, Block, ComputonBlock, EdgeDecl, MarkingBlock, MorphismBlock, Name, SpanBlock,
};
pub use serialize::{quote, serialize_computon, serialize_marking, serialize_morphism, serialize_span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// The text does not follow the grammar.
    Syntax,
    /// A name is undeclared, declared twice, or refers to the wrong kind
    /// of block.
    Reference,
    /// The block is well formed but describes an invalid value.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    fn new(kind: DiagnosticKind, pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }

    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        Self::new(DiagnosticKind::Syntax, pos, message)
    }

    pub(crate) fn reference(pos: Pos, message: impl Into<String>) -> Self {
        Self::new(DiagnosticKind::Reference, pos, message)
    }

    pub(crate) fn invalid(pos: Pos, message: impl Into<String>) -> Self {
        Self::new(DiagnosticKind::Invalid, pos, message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl ParseError {
    /// Whether every problem is an invalid value rather than bad syntax or
    /// a bad reference.
    pub fn only_invalid(&self) -> bool {
        self.diagnostics.iter().all(|d| d.kind == DiagnosticKind::Invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Computon(Arc<Computon>),
    Morphism {
        source: String,
        target: String,
        value: ComputonMorphism,
    },
    Span {
        apex: String,
        left: String,
        right: String,
        value: Span,
    },
    Marking {
        on: String,
        counts: BTreeMap<Id, usize>,
        value: MarkedComputon,
    },
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Computon(_) => "computon",
            Item::Morphism { .. } => "morphism",
            Item::Span { .. } => "span",
            Item::Marking { .. } => "marking",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Declaration {
    pub name: String,
    pub pos: Pos,
    pub item: Item,
}

/// Declarations compare by name and value; positions are ignored.
impl PartialEq for Declaration {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.item == other.item
    }
}

impl Eq for Declaration {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    decls: Vec<Declaration>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("`{0}` is already declared")]
    Duplicate(String),
    #[error("no computon named `{0}`")]
    UnknownComputon(String),
    #[error("no morphism named `{0}`")]
    UnknownMorphism(String),
    #[error("`{name}` does not match the {role} it is declared with")]
    Mismatch { name: String, role: &'static str },
    #[error("computon `{computon}` has no port `{port}`")]
    UnknownPort { computon: String, port: String },
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declarations(&self) -> &[Declaration] {
        &self.decls
    }

    pub fn get(&self, name: &str) -> Option<&Declaration> {
        self.decls.iter().find(|d| d.name == name)
    }

    pub fn computon(&self, name: &str) -> Option<&Arc<Computon>> {
        match self.get(name).map(|d| &d.item) {
            Some(Item::Computon(c)) => Some(c),
            _ => None,
        }
    }

    pub fn morphism(&self, name: &str) -> Option<&ComputonMorphism> {
        match self.get(name).map(|d| &d.item) {
            Some(Item::Morphism { value, .. }) => Some(value),
            _ => None,
        }
    }

    pub fn span(&self, name: &str) -> Option<&Span> {
        match self.get(name).map(|d| &d.item) {
            Some(Item::Span { value, .. }) => Some(value),
            _ => None,
        }
    }

    /// The marking and the name of the computon it marks.
    pub fn marking(&self, name: &str) -> Option<(&str, &MarkedComputon)> {
        match self.get(name).map(|d| &d.item) {
            Some(Item::Marking { on, value, .. }) => Some((on, value)),
            _ => None,
        }
    }

    fn push(&mut self, name: &str, item: Item) -> Result<(), DocumentError> {
        if self.get(name).is_some() {
            return Err(DocumentError::Duplicate(name.into()));
        }
        self.decls.push(Declaration {
            name: name.into(),
            pos: Pos::default(),
            item,
        });
        Ok(())
    }

    pub fn push_computon(&mut self, name: &str, c: Arc<Computon>) -> Result<(), DocumentError> {
        self.push(name, Item::Computon(c))
    }

    /// Adds `m`, whose source and target must already be declared under
    /// `source` and `target`.
    pub fn push_morphism(
        &mut self,
        name: &str,
        source: &str,
        target: &str,
        m: ComputonMorphism,
    ) -> Result<(), DocumentError> {
        for (n, c, role) in [(source, m.source(), "source"), (target, m.target(), "target")] {
            let declared = self
                .computon(n)
                .ok_or_else(|| DocumentError::UnknownComputon(n.into()))?;
            if declared != c {
                return Err(DocumentError::Mismatch { name: n.into(), role });
            }
        }
        self.push(
            name,
            Item::Morphism {
                source: source.into(),
                target: target.into(),
                value: m,
            },
        )
    }

    pub fn push_span(&mut self, name: &str, apex: &str, left: &str, right: &str) -> Result<(), DocumentError> {
        let apex_c = self
            .computon(apex)
            .ok_or_else(|| DocumentError::UnknownComputon(apex.into()))?
            .clone();
        let l = self
            .morphism(left)
            .ok_or_else(|| DocumentError::UnknownMorphism(left.into()))?
            .clone();
        let r = self
            .morphism(right)
            .ok_or_else(|| DocumentError::UnknownMorphism(right.into()))?
            .clone();
        if l.source() != &apex_c || r.source() != &apex_c {
            return Err(DocumentError::Mismatch {
                name: apex.into(),
                role: "apex",
            });
        }
        let value = Span::new(l, r).expect("both legs leave the declared apex");
        self.push(
            name,
            Item::Span {
                apex: apex.into(),
                left: left.into(),
                right: right.into(),
                value,
            },
        )
    }

    /// Adds a marking of `on`; ports with a zero count are dropped.
    pub fn push_marking(&mut self, name: &str, on: &str, mut counts: BTreeMap<Id, usize>) -> Result<(), DocumentError> {
        counts.retain(|_, n| *n > 0);
        let c = self
            .computon(on)
            .ok_or_else(|| DocumentError::UnknownComputon(on.into()))?;
        let list: Vec<(Id, usize)> = counts.iter().map(|(p, n)| (p.clone(), *n)).collect();
        let value = computon_core::semantics::make_marking(c, &list).map_err(|e| DocumentError::UnknownPort {
            computon: on.into(),
            port: e.id,
        })?;
        self.push(
            name,
            Item::Marking {
                on: on.into(),
                counts,
                value,
            },
        )
    }

    /// Canonical text: blocks in declaration order, one blank line apart.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, d) in self.decls.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&match &d.item {
                Item::Computon(c) => serialize_computon(&d.name, c),
                Item::Morphism { source, target, value } => serialize_morphism(&d.name, source, target, value),
                Item::Span { apex, left, right, .. } => serialize_span(&d.name, apex, left, right),
                Item::Marking { on, counts, .. } => serialize_marking(&d.name, on, counts),
            });
        }
        out
    }
}
