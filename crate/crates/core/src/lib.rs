//! Computons: units of computation that keep control flow and data flow
//! on separate, coloured ports.
//!
//! The crate is `no_std` and needs only `alloc`. It covers the structure
//! itself and its validation ([`computon`]), structure-preserving maps
//! ([`morphism`], [`iso`]), pushouts and the sequential and parallel
//! composition operators ([`compose`]), primitive constructors
//! ([`classify`]) and the token game ([`semantics`]).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classify;
pub mod compose;
pub mod computon;
pub mod error;
pub mod fixtures;
#[cfg(feature = "gen")]
pub mod gen;
pub mod iso;
pub mod morphism;
pub mod report;
pub mod semantics;

pub use classify::{classify, is_primitive, ComputonClass, ConstructError};
pub use computon::{Colour, Computon, ComputonError, Id, Interface, PortClass, RawComputon, Violation};
pub use error::{ElementKind, ElementNotFound, MalformedInput};
pub use morphism::{compose_morphisms, find_isomorphism, ComputonMorphism, MorphismData, MorphismError};
pub use report::Report;
