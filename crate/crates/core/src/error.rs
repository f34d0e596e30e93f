use alloc::string::{String, ToString};
use core::fmt;

/// The kind of element an identifier names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Unit,
    Port,
    OutEdge,
    InEdge,
    Colour,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::Unit => "unit",
            ElementKind::Port => "port",
            ElementKind::OutEdge => "out-edge",
            ElementKind::InEdge => "in-edge",
            ElementKind::Colour => "colour",
        })
    }
}

/// Input that cannot even be checked against the axioms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MalformedInput {
    #[error("duplicate {kind} identifier `{id}`")]
    DuplicateId { kind: ElementKind, id: String },
    #[error("map references unknown {kind} `{id}`")]
    UnknownElement { kind: ElementKind, id: String },
    #[error("map has no image for {kind} `{id}`")]
    MissingImage { kind: ElementKind, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no {kind} named `{id}`")]
pub struct ElementNotFound {
    pub kind: ElementKind,
    pub id: String,
}

impl ElementNotFound {
    pub fn new(kind: ElementKind, id: &str) -> Self {
        ElementNotFound {
            kind,
            id: id.to_string(),
        }
    }
}
