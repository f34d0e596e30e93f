//! The computon data model: finite sets of computation units and coloured
//! ports joined by two edge families, plus structural validation.
//!
//! A [`Computon`] is always valid. Unchecked data lives in [`RawComputon`]
//! and goes through [`validate_computon`] or [`Computon::new`].

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{ElementKind, ElementNotFound, MalformedInput};
use crate::report::Report;

/// Opaque element identifier, unique per element kind within one computon.
pub type Id = String;

/// A port colour. Zero is reserved for control; anything else is a data type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Colour(pub u32);

impl Colour {
    pub const CONTROL: Colour = Colour(0);

    pub fn is_control(self) -> bool {
        self.0 == 0
    }

    pub fn is_data(self) -> bool {
        self.0 > 0
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An edge from a unit to a port (an element of E, carrying σ and t).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutEdge {
    pub unit: Id,
    pub port: Id,
}

/// An edge from a port to a unit (an element of F, carrying s and τ).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InEdge {
    pub port: Id,
    pub unit: Id,
}

/// Unvalidated computon data.
///
/// Lists may contain duplicates and edges may reference missing endpoints;
/// [`validate_computon`] sorts out which of those are malformed input and
/// which are violations of the computon axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawComputon {
    pub units: Vec<Id>,
    pub ports: Vec<(Id, Colour)>,
    pub out_edges: Vec<(Id, OutEdge)>,
    pub in_edges: Vec<(Id, InEdge)>,
    pub colours: Vec<Colour>,
}

impl RawComputon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(mut self, id: impl Into<Id>) -> Self {
        self.units.push(id.into());
        self
    }

    pub fn port(mut self, id: impl Into<Id>, colour: u32) -> Self {
        self.ports.push((id.into(), Colour(colour)));
        self
    }

    /// Adds an edge `unit -> port`.
    pub fn out_edge(mut self, id: impl Into<Id>, unit: impl Into<Id>, port: impl Into<Id>) -> Self {
        self.out_edges.push((
            id.into(),
            OutEdge {
                unit: unit.into(),
                port: port.into(),
            },
        ));
        self
    }

    /// Adds an edge `port -> unit`.
    pub fn in_edge(mut self, id: impl Into<Id>, port: impl Into<Id>, unit: impl Into<Id>) -> Self {
        self.in_edges.push((
            id.into(),
            InEdge {
                port: port.into(),
                unit: unit.into(),
            },
        ));
        self
    }

    pub fn colour(mut self, colour: u32) -> Self {
        self.colours.push(Colour(colour));
        self
    }

    /// Declares every colour used by a port, in first-use order.
    pub fn with_port_colours(mut self) -> Self {
        for (_, c) in &self.ports {
            if !self.colours.contains(c) {
                self.colours.push(*c);
            }
        }
        self
    }
}

/// A failed clause of the computon axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoPorts,
    NoColours,
    ColourUnused(Colour),
    UndeclaredColour { port: Id, colour: Colour },
    OutEdgeUnknownUnit { edge: Id, unit: Id },
    OutEdgeUnknownPort { edge: Id, port: Id },
    InEdgeUnknownPort { edge: Id, port: Id },
    InEdgeUnknownUnit { edge: Id, unit: Id },
    SigmaNotSurjective { unit: Id },
    TauNotSurjective { unit: Id },
    NoEcInport,
    NoEcOutport,
}

impl Violation {
    /// Short name of the failed clause.
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::NoPorts => "P empty",
            Violation::NoColours => "Σ empty",
            Violation::ColourUnused(_) => "c not surjective",
            Violation::UndeclaredColour { .. } => "c not total",
            Violation::OutEdgeUnknownUnit { .. } => "σ not total",
            Violation::OutEdgeUnknownPort { .. } => "t not total",
            Violation::InEdgeUnknownPort { .. } => "s not total",
            Violation::InEdgeUnknownUnit { .. } => "τ not total",
            Violation::SigmaNotSurjective { .. } => "σ not surjective",
            Violation::TauNotSurjective { .. } => "τ not surjective",
            Violation::NoEcInport => "no ec-inport",
            Violation::NoEcOutport => "no ec-outport",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clause = self.clause();
        match self {
            Violation::NoPorts | Violation::NoColours => f.write_str(clause),
            Violation::NoEcInport => write!(f, "{clause}: no colour-0 port lacks a producer"),
            Violation::NoEcOutport => write!(f, "{clause}: no colour-0 port lacks a consumer"),
            Violation::ColourUnused(c) => write!(f, "{clause}: colour {c} is assigned to no port"),
            Violation::UndeclaredColour { port, colour } => {
                write!(f, "{clause}: port {port} has undeclared colour {colour}")
            }
            Violation::OutEdgeUnknownUnit { edge, unit } => {
                write!(f, "{clause}: edge {edge} leaves unknown unit {unit}")
            }
            Violation::OutEdgeUnknownPort { edge, port } => {
                write!(f, "{clause}: edge {edge} enters unknown port {port}")
            }
            Violation::InEdgeUnknownPort { edge, port } => {
                write!(f, "{clause}: edge {edge} leaves unknown port {port}")
            }
            Violation::InEdgeUnknownUnit { edge, unit } => {
                write!(f, "{clause}: edge {edge} enters unknown unit {unit}")
            }
            Violation::SigmaNotSurjective { unit } => {
                write!(f, "{clause}: unit {unit} has no outgoing edge")
            }
            Violation::TauNotSurjective { unit } => {
                write!(f, "{clause}: unit {unit} has no incoming edge")
            }
        }
    }
}

fn check_unique<'a, I>(kind: ElementKind, ids: I) -> Result<(), MalformedInput>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(MalformedInput::DuplicateId {
                kind,
                id: id.to_string(),
            });
        }
    }
    Ok(())
}

/// Checks every computon axiom on `candidate`.
///
/// Duplicate identifiers are malformed input and reported as an error; every
/// other problem is collected into the returned report.
pub fn validate_computon(candidate: &RawComputon) -> Result<Report<Violation>, MalformedInput> {
    check_unique(ElementKind::Unit, candidate.units.iter().map(String::as_str))?;
    check_unique(ElementKind::Port, candidate.ports.iter().map(|(p, _)| p.as_str()))?;
    check_unique(
        ElementKind::OutEdge,
        candidate.out_edges.iter().map(|(e, _)| e.as_str()),
    )?;
    check_unique(ElementKind::InEdge, candidate.in_edges.iter().map(|(f, _)| f.as_str()))?;
    let mut colours = BTreeSet::new();
    for c in &candidate.colours {
        if !colours.insert(*c) {
            return Err(MalformedInput::DuplicateId {
                kind: ElementKind::Colour,
                id: c.to_string(),
            });
        }
    }

    let mut violations = Vec::new();
    if candidate.ports.is_empty() {
        violations.push(Violation::NoPorts);
    }
    if colours.is_empty() {
        violations.push(Violation::NoColours);
    }

    let units: BTreeSet<&str> = candidate.units.iter().map(String::as_str).collect();
    let ports: BTreeMap<&str, Colour> = candidate.ports.iter().map(|(p, c)| (p.as_str(), *c)).collect();

    for (p, c) in &candidate.ports {
        if !colours.contains(c) {
            violations.push(Violation::UndeclaredColour {
                port: p.clone(),
                colour: *c,
            });
        }
    }
    for c in &colours {
        if !ports.values().any(|pc| pc == c) {
            violations.push(Violation::ColourUnused(*c));
        }
    }

    let mut has_out: BTreeSet<&str> = BTreeSet::new();
    let mut has_in: BTreeSet<&str> = BTreeSet::new();
    let mut produced: BTreeSet<&str> = BTreeSet::new();
    let mut consumed: BTreeSet<&str> = BTreeSet::new();
    for (e, edge) in &candidate.out_edges {
        if !units.contains(edge.unit.as_str()) {
            violations.push(Violation::OutEdgeUnknownUnit {
                edge: e.clone(),
                unit: edge.unit.clone(),
            });
        }
        if !ports.contains_key(edge.port.as_str()) {
            violations.push(Violation::OutEdgeUnknownPort {
                edge: e.clone(),
                port: edge.port.clone(),
            });
        }
        has_out.insert(edge.unit.as_str());
        produced.insert(edge.port.as_str());
    }
    for (f, edge) in &candidate.in_edges {
        if !ports.contains_key(edge.port.as_str()) {
            violations.push(Violation::InEdgeUnknownPort {
                edge: f.clone(),
                port: edge.port.clone(),
            });
        }
        if !units.contains(edge.unit.as_str()) {
            violations.push(Violation::InEdgeUnknownUnit {
                edge: f.clone(),
                unit: edge.unit.clone(),
            });
        }
        has_in.insert(edge.unit.as_str());
        consumed.insert(edge.port.as_str());
    }
    for u in &units {
        if !has_out.contains(u) {
            violations.push(Violation::SigmaNotSurjective { unit: u.to_string() });
        }
        if !has_in.contains(u) {
            violations.push(Violation::TauNotSurjective { unit: u.to_string() });
        }
    }

    let mut control = ports.iter().filter(|(_, c)| c.is_control()).map(|(p, _)| *p);
    if !control.clone().any(|p| !produced.contains(p)) {
        violations.push(Violation::NoEcInport);
    }
    if !control.any(|p| !consumed.contains(p)) {
        violations.push(Violation::NoEcOutport);
    }

    Ok(Report { violations })
}

/// Why a [`RawComputon`] could not become a [`Computon`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComputonError {
    #[error(transparent)]
    Malformed(#[from] MalformedInput),
    #[error("invalid computon: {0}")]
    Invalid(Report<Violation>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Incidence {
    // port -> units with an out-edge into it (•p)
    producers: BTreeMap<Id, BTreeSet<Id>>,
    // port -> units with an in-edge from it (p•)
    consumers: BTreeMap<Id, BTreeSet<Id>>,
    // unit -> ports with an in-edge into it (•u)
    inputs: BTreeMap<Id, BTreeSet<Id>>,
    // unit -> ports with an out-edge from it (u•)
    outputs: BTreeMap<Id, BTreeSet<Id>>,
}

/// A valid computon.
///
/// Structural equality compares every component set and structure map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Computon {
    units: BTreeSet<Id>,
    ports: BTreeMap<Id, Colour>,
    out_edges: BTreeMap<Id, OutEdge>,
    in_edges: BTreeMap<Id, InEdge>,
    colours: BTreeSet<Colour>,
    incidence: Incidence,
}

impl Computon {
    pub fn new(raw: RawComputon) -> Result<Self, ComputonError> {
        let report = validate_computon(&raw)?;
        if !report.is_ok() {
            return Err(ComputonError::Invalid(report));
        }
        let mut incidence = Incidence::default();
        for (p, _) in &raw.ports {
            incidence.producers.insert(p.clone(), BTreeSet::new());
            incidence.consumers.insert(p.clone(), BTreeSet::new());
        }
        for u in &raw.units {
            incidence.inputs.insert(u.clone(), BTreeSet::new());
            incidence.outputs.insert(u.clone(), BTreeSet::new());
        }
        for (_, e) in &raw.out_edges {
            incidence.producers.get_mut(&e.port).unwrap().insert(e.unit.clone());
            incidence.outputs.get_mut(&e.unit).unwrap().insert(e.port.clone());
        }
        for (_, f) in &raw.in_edges {
            incidence.consumers.get_mut(&f.port).unwrap().insert(f.unit.clone());
            incidence.inputs.get_mut(&f.unit).unwrap().insert(f.port.clone());
        }
        Ok(Computon {
            units: raw.units.into_iter().collect(),
            ports: raw.ports.into_iter().collect(),
            out_edges: raw.out_edges.into_iter().collect(),
            in_edges: raw.in_edges.into_iter().collect(),
            colours: raw.colours.into_iter().collect(),
            incidence,
        })
    }

    /// The computon's data with every list sorted by identifier.
    pub fn to_raw(&self) -> RawComputon {
        RawComputon {
            units: self.units.iter().cloned().collect(),
            ports: self.ports.iter().map(|(p, c)| (p.clone(), *c)).collect(),
            out_edges: self.out_edges.iter().map(|(e, x)| (e.clone(), x.clone())).collect(),
            in_edges: self.in_edges.iter().map(|(f, x)| (f.clone(), x.clone())).collect(),
            colours: self.colours.iter().copied().collect(),
        }
    }

    pub fn units(&self) -> &BTreeSet<Id> {
        &self.units
    }

    pub fn ports(&self) -> &BTreeMap<Id, Colour> {
        &self.ports
    }

    pub fn out_edges(&self) -> &BTreeMap<Id, OutEdge> {
        &self.out_edges
    }

    pub fn in_edges(&self) -> &BTreeMap<Id, InEdge> {
        &self.in_edges
    }

    pub fn colours(&self) -> &BTreeSet<Colour> {
        &self.colours
    }

    pub fn has_unit(&self, u: &str) -> bool {
        self.units.contains(u)
    }

    pub fn has_port(&self, p: &str) -> bool {
        self.ports.contains_key(p)
    }

    pub fn colour_of(&self, p: &str) -> Option<Colour> {
        self.ports.get(p).copied()
    }

    pub fn is_trivial(&self) -> bool {
        self.units.is_empty()
    }

    fn port_entry<'a>(
        &'a self,
        map: &'a BTreeMap<Id, BTreeSet<Id>>,
        p: &str,
    ) -> Result<&'a BTreeSet<Id>, ElementNotFound> {
        map.get(p).ok_or_else(|| ElementNotFound::new(ElementKind::Port, p))
    }

    fn unit_entry<'a>(
        &'a self,
        map: &'a BTreeMap<Id, BTreeSet<Id>>,
        u: &str,
    ) -> Result<&'a BTreeSet<Id>, ElementNotFound> {
        map.get(u).ok_or_else(|| ElementNotFound::new(ElementKind::Unit, u))
    }

    /// `•u`: ports with an edge into unit `u`.
    pub fn unit_pre_set(&self, u: &str) -> Result<&BTreeSet<Id>, ElementNotFound> {
        self.unit_entry(&self.incidence.inputs, u)
    }

    /// `u•`: ports with an edge out of unit `u`.
    pub fn unit_post_set(&self, u: &str) -> Result<&BTreeSet<Id>, ElementNotFound> {
        self.unit_entry(&self.incidence.outputs, u)
    }

    /// `•p`: units with an edge into port `p`.
    pub fn port_pre_set(&self, p: &str) -> Result<&BTreeSet<Id>, ElementNotFound> {
        self.port_entry(&self.incidence.producers, p)
    }

    /// `p•`: units with an edge out of port `p`.
    pub fn port_post_set(&self, p: &str) -> Result<&BTreeSet<Id>, ElementNotFound> {
        self.port_entry(&self.incidence.consumers, p)
    }

    /// Ports with no producer (P⁺).
    pub fn inports(&self) -> BTreeSet<Id> {
        self.incidence
            .producers
            .iter()
            .filter(|(_, us)| us.is_empty())
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Ports with no consumer (P⁻).
    pub fn outports(&self) -> BTreeSet<Id> {
        self.incidence
            .consumers
            .iter()
            .filter(|(_, us)| us.is_empty())
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn is_inport(&self, p: &str) -> bool {
        self.incidence.producers.get(p).is_some_and(BTreeSet::is_empty)
    }

    pub fn is_outport(&self, p: &str) -> bool {
        self.incidence.consumers.get(p).is_some_and(BTreeSet::is_empty)
    }

    /// Ports with both a producer and a consumer.
    pub fn iports(&self) -> BTreeSet<Id> {
        self.ports
            .keys()
            .filter(|p| !self.is_inport(p) && !self.is_outport(p))
            .cloned()
            .collect()
    }

    pub fn port_class(&self, p: &str) -> Result<PortClass, ElementNotFound> {
        let colour = self
            .colour_of(p)
            .ok_or_else(|| ElementNotFound::new(ElementKind::Port, p))?;
        let direction = match (self.is_inport(p), self.is_outport(p)) {
            (true, true) => Direction::InOutport,
            (true, false) => Direction::Inport,
            (false, true) => Direction::Outport,
            (false, false) => Direction::Internal,
        };
        let kind = if colour.is_control() {
            PortKind::Control
        } else {
            PortKind::Data
        };
        Ok(PortClass { direction, kind })
    }

    /// The external interface (P⁺, P⁻) with a class for every port.
    pub fn interface(&self) -> Interface {
        let classes = self
            .ports
            .keys()
            .map(|p| (p.clone(), self.port_class(p).expect("own port")))
            .collect();
        Interface {
            inports: self.inports(),
            outports: self.outports(),
            classes,
        }
    }

    /// Ports reachable from `p` along paths that traverse at least one unit.
    fn reachable_from(&self, p: &str) -> BTreeSet<Id> {
        let mut seen_units: BTreeSet<&str> = BTreeSet::new();
        let mut reached: BTreeSet<Id> = BTreeSet::new();
        let mut queue: VecDeque<&str> = VecDeque::new();
        queue.push_back(p);
        while let Some(port) = queue.pop_front() {
            for u in &self.incidence.consumers[port] {
                if !seen_units.insert(u.as_str()) {
                    continue;
                }
                for q in &self.incidence.outputs[u] {
                    if reached.insert(q.clone()) {
                        queue.push_back(q.as_str());
                    }
                }
            }
        }
        reached
    }

    /// Whether information flows from port `p` to port `q` (`p →* q`).
    ///
    /// Paths must traverse at least one unit, except that `p = q` counts as
    /// flowing when `reflexive` is set.
    pub fn flows_to(&self, p: &str, q: &str, reflexive: bool) -> Result<bool, ElementNotFound> {
        if !self.has_port(p) {
            return Err(ElementNotFound::new(ElementKind::Port, p));
        }
        if !self.has_port(q) {
            return Err(ElementNotFound::new(ElementKind::Port, q));
        }
        if reflexive && p == q {
            return Ok(true);
        }
        Ok(self.reachable_from(p).contains(q))
    }

    /// Every e-inport reaches every e-outport through at least one unit.
    pub fn is_connected(&self) -> bool {
        let outports = self.outports();
        self.inports()
            .iter()
            .all(|p| outports.is_subset(&self.reachable_from(p)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Inport,
    Outport,
    InOutport,
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortKind {
    Control,
    Data,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortClass {
    pub direction: Direction,
    pub kind: PortKind,
}

impl fmt::Display for PortClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            PortKind::Control => 'c',
            PortKind::Data => 'd',
        };
        match self.direction {
            Direction::Inport => write!(f, "e{k}-inport"),
            Direction::Outport => write!(f, "e{k}-outport"),
            Direction::InOutport => write!(f, "e{k}-inoutport"),
            Direction::Internal => write!(f, "i{k}-port"),
        }
    }
}

/// The external interface of a computon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interface {
    pub inports: BTreeSet<Id>,
    pub outports: BTreeSet<Id>,
    pub classes: BTreeMap<Id, PortClass>,
}

impl Interface {
    fn filter(&self, set: &BTreeSet<Id>, kind: PortKind) -> BTreeSet<Id> {
        set.iter().filter(|p| self.classes[*p].kind == kind).cloned().collect()
    }

    /// Q⁺
    pub fn control_inports(&self) -> BTreeSet<Id> {
        self.filter(&self.inports, PortKind::Control)
    }

    /// Q⁻
    pub fn control_outports(&self) -> BTreeSet<Id> {
        self.filter(&self.outports, PortKind::Control)
    }

    /// D⁺
    pub fn data_inports(&self) -> BTreeSet<Id> {
        self.filter(&self.inports, PortKind::Data)
    }

    /// D⁻
    pub fn data_outports(&self) -> BTreeSet<Id> {
        self.filter(&self.outports, PortKind::Data)
    }

    pub fn iports(&self) -> BTreeSet<Id> {
        self.classes
            .iter()
            .filter(|(_, c)| c.direction == Direction::Internal)
            .map(|(p, _)| p.clone())
            .collect()
    }
}
