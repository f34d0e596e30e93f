//! Text documents, DOT export and the command-line front end for
//! `computon-core`.

pub mod cli;
pub mod dot;
pub mod dsl;

pub use dsl::{parse, Document, ParseError};
