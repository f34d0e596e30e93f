//! Named computon classes and their canonical constructors.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::computon::{Colour, Computon, ComputonError, Id, RawComputon};

/// The most specific named class a computon belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComputonClass {
    Trivial,
    Unit,
    Fork,
    Join,
    Functional,
    Glue,
    PrimitiveOther,
    CompositeOrOther,
}

impl ComputonClass {
    pub fn tag(self) -> &'static str {
        match self {
            ComputonClass::Trivial => "trivial",
            ComputonClass::Unit => "unit",
            ComputonClass::Fork => "primitive-fork",
            ComputonClass::Join => "primitive-join",
            ComputonClass::Functional => "primitive-functional",
            ComputonClass::Glue => "primitive-glue",
            ComputonClass::PrimitiveOther => "primitive-other",
            ComputonClass::CompositeOrOther => "composite-or-other",
        }
    }

    pub fn is_primitive(self) -> bool {
        matches!(
            self,
            ComputonClass::Fork
                | ComputonClass::Join
                | ComputonClass::Functional
                | ComputonClass::Glue
                | ComputonClass::PrimitiveOther
        )
    }
}

impl fmt::Display for ComputonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One unit, both edge families non-empty, and every port is either
/// consumed or produced but never both nor neither.
pub fn is_primitive(c: &Computon) -> bool {
    if c.units().len() != 1 || c.out_edges().is_empty() || c.in_edges().is_empty() {
        return false;
    }
    let consumed: BTreeSet<&Id> = c.in_edges().values().map(|f| &f.port).collect();
    let produced: BTreeSet<&Id> = c.out_edges().values().map(|e| &e.port).collect();
    let sym_diff: BTreeSet<&Id> = consumed.symmetric_difference(&produced).copied().collect();
    c.ports().keys().eq(sym_diff)
}

pub fn classify(c: &Computon) -> ComputonClass {
    if c.is_trivial() {
        return if c.ports().len() == 1 && c.colours().len() == 1 {
            ComputonClass::Unit
        } else {
            ComputonClass::Trivial
        };
    }
    if !is_primitive(c) {
        return ComputonClass::CompositeOrOther;
    }
    let (n_out, n_in, n_colours) = (c.out_edges().len(), c.in_edges().len(), c.colours().len());
    if n_out == 2 && n_in == 1 && n_colours == 1 {
        return ComputonClass::Fork;
    }
    if n_out == 1 && n_in == 2 && n_colours == 1 {
        return ComputonClass::Join;
    }
    let count_control = |ports: BTreeSet<Id>| {
        ports
            .iter()
            .filter(|p| c.colour_of(p).is_some_and(Colour::is_control))
            .count()
    };
    if count_control(c.inports()) == 1 && count_control(c.outports()) == 1 {
        if n_out == 1 && n_in == 1 {
            ComputonClass::Glue
        } else {
            ComputonClass::Functional
        }
    } else {
        ComputonClass::PrimitiveOther
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("invalid colour {0}: data colours must be greater than zero")]
    InvalidColour(Colour),
    #[error(transparent)]
    Computon(#[from] ComputonError),
}

fn port_id(i: usize) -> Id {
    format!("p{i}")
}

/// A computon with one port and no units (Λ).
pub fn make_unit() -> Computon {
    make_trivial(&[Colour::CONTROL]).expect("unit computon is valid")
}

/// A computon with no units and one e-inoutport per listed colour, named
/// `p1, p2, …` in list order.
pub fn make_trivial(colours: &[Colour]) -> Result<Computon, ConstructError> {
    let mut raw = RawComputon::new();
    for (i, c) in colours.iter().enumerate() {
        raw.ports.push((port_id(i + 1), *c));
    }
    Ok(Computon::new(raw.with_port_colours())?)
}

/// One unit `u1` consuming the ports of `ins` and producing the ports of
/// `outs`; ports are numbered inputs first.
fn single_unit(ins: &[Colour], outs: &[Colour]) -> Result<Computon, ComputonError> {
    let mut raw = RawComputon::new().unit("u1");
    let mut n = 0;
    for (i, c) in ins.iter().enumerate() {
        n += 1;
        raw.ports.push((port_id(n), *c));
        raw = raw.in_edge(format!("f{}", i + 1), port_id(n), "u1");
    }
    for (i, c) in outs.iter().enumerate() {
        n += 1;
        raw.ports.push((port_id(n), *c));
        raw = raw.out_edge(format!("e{}", i + 1), "u1", port_id(n));
    }
    Computon::new(raw.with_port_colours())
}

/// `p1 -> u1 -> {p2, p3}`.
pub fn make_fork() -> Computon {
    single_unit(&[Colour::CONTROL], &[Colour::CONTROL; 2]).expect("fork is valid")
}

/// `{p1, p2} -> u1 -> p3`.
pub fn make_join() -> Computon {
    single_unit(&[Colour::CONTROL; 2], &[Colour::CONTROL]).expect("join is valid")
}

/// `p1 -> u1 -> p2`.
pub fn make_glue() -> Computon {
    single_unit(&[Colour::CONTROL], &[Colour::CONTROL]).expect("glue is valid")
}

/// A functional computon: an ec-inport `p1`, then one ed-inport per entry of
/// `in_colours`, then an ec-outport, then one ed-outport per entry of
/// `out_colours`.
pub fn make_functional(in_colours: &[Colour], out_colours: &[Colour]) -> Result<Computon, ConstructError> {
    if let Some(c) = in_colours.iter().chain(out_colours).find(|c| c.is_control()) {
        return Err(ConstructError::InvalidColour(*c));
    }
    let ins: Vec<Colour> = core::iter::once(Colour::CONTROL)
        .chain(in_colours.iter().copied())
        .collect();
    let outs: Vec<Colour> = core::iter::once(Colour::CONTROL)
        .chain(out_colours.iter().copied())
        .collect();
    Ok(single_unit(&ins, &outs)?)
}
