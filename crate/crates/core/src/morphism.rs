//! Computon morphisms: componentwise injections that commute with every
//! structure map and only grow a computon at its external ports.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::computon::{Colour, Computon, Id};
use crate::error::{ElementKind, MalformedInput};
use crate::report::Report;

pub use crate::iso::find_isomorphism;

/// Unchecked morphism data. The colour component is not stored: it is
/// always the inclusion of the source colours into the target colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismData {
    pub source: Arc<Computon>,
    pub target: Arc<Computon>,
    pub units: BTreeMap<Id, Id>,
    pub ports: BTreeMap<Id, Id>,
    pub out_edges: BTreeMap<Id, Id>,
    pub in_edges: BTreeMap<Id, Id>,
}

impl MorphismData {
    /// Empty maps between `source` and `target`.
    pub fn between(source: Arc<Computon>, target: Arc<Computon>) -> Self {
        MorphismData {
            source,
            target,
            units: BTreeMap::new(),
            ports: BTreeMap::new(),
            out_edges: BTreeMap::new(),
            in_edges: BTreeMap::new(),
        }
    }

    fn pre_set_gain(&self, p: &str) -> bool {
        let image = &self.ports[p];
        let mapped: BTreeSet<&Id> = self
            .source
            .port_pre_set(p)
            .unwrap()
            .iter()
            .map(|u| &self.units[u])
            .collect();
        self.target
            .port_pre_set(image)
            .unwrap()
            .iter()
            .any(|u| !mapped.contains(u))
    }

    fn post_set_gain(&self, p: &str) -> bool {
        let image = &self.ports[p];
        let mapped: BTreeSet<&Id> = self
            .source
            .port_post_set(p)
            .unwrap()
            .iter()
            .map(|u| &self.units[u])
            .collect();
        self.target
            .port_post_set(image)
            .unwrap()
            .iter()
            .any(|u| !mapped.contains(u))
    }

    /// Source ports whose image has a producer not coming from the source.
    pub fn i_vector(&self) -> BTreeSet<Id> {
        self.source
            .ports()
            .keys()
            .filter(|p| self.pre_set_gain(p))
            .cloned()
            .collect()
    }

    /// Source ports whose image has a consumer not coming from the source.
    pub fn o_vector(&self) -> BTreeSet<Id> {
        self.source
            .ports()
            .keys()
            .filter(|p| self.post_set_gain(p))
            .cloned()
            .collect()
    }
}

/// A failed morphism condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    NotInjective {
        kind: ElementKind,
        first: Id,
        second: Id,
        image: Id,
    },
    ColourNotIncluded(Colour),
    ColourSquare {
        port: Id,
    },
    SigmaSquare {
        edge: Id,
    },
    TSquare {
        edge: Id,
    },
    TauSquare {
        edge: Id,
    },
    SSquare {
        edge: Id,
    },
    Boundary {
        port: Id,
    },
}

impl MorphismViolation {
    pub fn clause(&self) -> &'static str {
        match self {
            MorphismViolation::NotInjective { .. } => "injectivity",
            MorphismViolation::ColourNotIncluded(_) => "colour inclusion",
            MorphismViolation::ColourSquare { .. } => "colour square",
            MorphismViolation::SigmaSquare { .. } => "σ square",
            MorphismViolation::TSquare { .. } => "t square",
            MorphismViolation::TauSquare { .. } => "τ square",
            MorphismViolation::SSquare { .. } => "s square",
            MorphismViolation::Boundary { .. } => "boundary condition",
        }
    }
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clause = self.clause();
        match self {
            MorphismViolation::NotInjective {
                kind,
                first,
                second,
                image,
            } => write!(f, "{clause}: {kind}s {first} and {second} both map to {image}"),
            MorphismViolation::ColourNotIncluded(c) => {
                write!(f, "{clause}: colour {c} missing from the target")
            }
            MorphismViolation::ColourSquare { port } => {
                write!(f, "{clause}: port {port} changes colour")
            }
            MorphismViolation::SigmaSquare { edge }
            | MorphismViolation::TSquare { edge }
            | MorphismViolation::TauSquare { edge }
            | MorphismViolation::SSquare { edge } => {
                write!(f, "{clause}: edge {edge} does not commute")
            }
            MorphismViolation::Boundary { port } => {
                write!(f, "{clause}: internal port {port} gains new neighbours")
            }
        }
    }
}

fn check_component<'a>(
    kind: ElementKind,
    map: &BTreeMap<Id, Id>,
    domain: impl Iterator<Item = &'a Id> + Clone,
    codomain: impl Fn(&str) -> bool,
) -> Result<(), MalformedInput> {
    for x in domain.clone() {
        if !map.contains_key(x) {
            return Err(MalformedInput::MissingImage { kind, id: x.clone() });
        }
    }
    let domain: BTreeSet<&Id> = domain.collect();
    for (x, y) in map {
        if !domain.contains(x) {
            return Err(MalformedInput::UnknownElement { kind, id: x.clone() });
        }
        if !codomain(y) {
            return Err(MalformedInput::UnknownElement { kind, id: y.clone() });
        }
    }
    Ok(())
}

fn injectivity(kind: ElementKind, map: &BTreeMap<Id, Id>, out: &mut Vec<MorphismViolation>) {
    let mut seen: BTreeMap<&Id, &Id> = BTreeMap::new();
    for (x, y) in map {
        if let Some(first) = seen.insert(y, x) {
            out.push(MorphismViolation::NotInjective {
                kind,
                first: first.clone(),
                second: x.clone(),
                image: y.clone(),
            });
        }
    }
}

/// Checks every morphism condition on `candidate`.
///
/// Maps that are not total on their domain, or that mention elements of
/// neither computon, are malformed input.
pub fn validate_morphism(candidate: &MorphismData) -> Result<Report<MorphismViolation>, MalformedInput> {
    let (src, tgt) = (&*candidate.source, &*candidate.target);
    check_component(ElementKind::Unit, &candidate.units, src.units().iter(), |u| {
        tgt.has_unit(u)
    })?;
    check_component(ElementKind::Port, &candidate.ports, src.ports().keys(), |p| {
        tgt.has_port(p)
    })?;
    check_component(
        ElementKind::OutEdge,
        &candidate.out_edges,
        src.out_edges().keys(),
        |e| tgt.out_edges().contains_key(e),
    )?;
    check_component(ElementKind::InEdge, &candidate.in_edges, src.in_edges().keys(), |f| {
        tgt.in_edges().contains_key(f)
    })?;

    let mut v = Vec::new();
    injectivity(ElementKind::Unit, &candidate.units, &mut v);
    injectivity(ElementKind::Port, &candidate.ports, &mut v);
    injectivity(ElementKind::OutEdge, &candidate.out_edges, &mut v);
    injectivity(ElementKind::InEdge, &candidate.in_edges, &mut v);

    for c in src.colours().difference(tgt.colours()) {
        v.push(MorphismViolation::ColourNotIncluded(*c));
    }
    for (p, colour) in src.ports() {
        if tgt.colour_of(&candidate.ports[p]) != Some(*colour) {
            v.push(MorphismViolation::ColourSquare { port: p.clone() });
        }
    }
    for (e, edge) in src.out_edges() {
        let image = &tgt.out_edges()[&candidate.out_edges[e]];
        if image.unit != candidate.units[&edge.unit] {
            v.push(MorphismViolation::SigmaSquare { edge: e.clone() });
        }
        if image.port != candidate.ports[&edge.port] {
            v.push(MorphismViolation::TSquare { edge: e.clone() });
        }
    }
    for (f, edge) in src.in_edges() {
        let image = &tgt.in_edges()[&candidate.in_edges[f]];
        if image.unit != candidate.units[&edge.unit] {
            v.push(MorphismViolation::TauSquare { edge: f.clone() });
        }
        if image.port != candidate.ports[&edge.port] {
            v.push(MorphismViolation::SSquare { edge: f.clone() });
        }
    }

    // The gain sets are only meaningful once the squares commute.
    if v.is_empty() {
        let grown: BTreeSet<Id> = candidate.i_vector().into_iter().chain(candidate.o_vector()).collect();
        for p in grown {
            if !src.is_inport(&p) && !src.is_outport(&p) {
                v.push(MorphismViolation::Boundary { port: p });
            }
        }
    }
    Ok(Report { violations: v })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error(transparent)]
    Malformed(#[from] MalformedInput),
    #[error("invalid morphism: {0}")]
    Invalid(Report<MorphismViolation>),
    #[error("cannot compose: the target of the first morphism is not the source of the second")]
    CompositionMismatch,
}

/// A validated computon morphism.
///
/// Equality is componentwise map equality over identical source and target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputonMorphism {
    data: MorphismData,
}

impl ComputonMorphism {
    pub fn new(data: MorphismData) -> Result<Self, MorphismError> {
        let report = validate_morphism(&data)?;
        if report.is_ok() {
            Ok(ComputonMorphism { data })
        } else {
            Err(MorphismError::Invalid(report))
        }
    }

    pub fn identity(c: Arc<Computon>) -> Self {
        let id_map = |ids: &mut dyn Iterator<Item = &Id>| ids.map(|x| (x.clone(), x.clone())).collect();
        ComputonMorphism {
            data: MorphismData {
                units: id_map(&mut c.units().iter()),
                ports: id_map(&mut c.ports().keys()),
                out_edges: id_map(&mut c.out_edges().keys()),
                in_edges: id_map(&mut c.in_edges().keys()),
                source: c.clone(),
                target: c,
            },
        }
    }

    pub fn data(&self) -> &MorphismData {
        &self.data
    }

    pub fn into_data(self) -> MorphismData {
        self.data
    }

    pub fn source(&self) -> &Arc<Computon> {
        &self.data.source
    }

    pub fn target(&self) -> &Arc<Computon> {
        &self.data.target
    }

    pub fn unit(&self, u: &str) -> &Id {
        &self.data.units[u]
    }

    pub fn port(&self, p: &str) -> &Id {
        &self.data.ports[p]
    }

    pub fn out_edge(&self, e: &str) -> &Id {
        &self.data.out_edges[e]
    }

    pub fn in_edge(&self, f: &str) -> &Id {
        &self.data.in_edges[f]
    }

    pub fn i_vector(&self) -> BTreeSet<Id> {
        self.data.i_vector()
    }

    pub fn o_vector(&self) -> BTreeSet<Id> {
        self.data.o_vector()
    }

    /// Image of a set of source ports.
    pub fn image_ports<'a>(&self, ports: impl IntoIterator<Item = &'a Id>) -> BTreeSet<Id> {
        ports.into_iter().map(|p| self.data.ports[p].clone()).collect()
    }

    /// Source ports landing in `ports`.
    pub fn preimage_ports(&self, ports: &BTreeSet<Id>) -> BTreeSet<Id> {
        self.data
            .ports
            .iter()
            .filter(|(_, q)| ports.contains(*q))
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Whether every component is a bijection.
    pub fn is_isomorphism(&self) -> bool {
        let (s, t) = (self.source(), self.target());
        s.units().len() == t.units().len()
            && s.ports().len() == t.ports().len()
            && s.out_edges().len() == t.out_edges().len()
            && s.in_edges().len() == t.in_edges().len()
            && s.colours() == t.colours()
    }
}

fn compose_map(g: &BTreeMap<Id, Id>, f: &BTreeMap<Id, Id>) -> BTreeMap<Id, Id> {
    f.iter().map(|(x, y)| (x.clone(), g[y].clone())).collect()
}

/// `g ∘ f`, componentwise. Requires `f.target` to equal `g.source`.
pub fn compose_morphisms(g: &ComputonMorphism, f: &ComputonMorphism) -> Result<ComputonMorphism, MorphismError> {
    if f.target() != g.source() {
        return Err(MorphismError::CompositionMismatch);
    }
    ComputonMorphism::new(MorphismData {
        source: f.source().clone(),
        target: g.target().clone(),
        units: compose_map(&g.data.units, &f.data.units),
        ports: compose_map(&g.data.ports, &f.data.ports),
        out_edges: compose_map(&g.data.out_edges, &f.data.out_edges),
        in_edges: compose_map(&g.data.in_edges, &f.data.in_edges),
    })
}

/// Composes a chain of morphisms listed from first applied to last.
pub fn compose_chain(chain: &[&ComputonMorphism]) -> Result<ComputonMorphism, MorphismError> {
    let (first, rest) = chain.split_first().expect("non-empty chain");
    rest.iter()
        .try_fold((*first).clone(), |acc, next| compose_morphisms(next, &acc))
}

/// Renders the four maps as `kind x => y` lines.
pub fn describe_maps(m: &ComputonMorphism) -> Vec<String> {
    let mut lines = Vec::new();
    for (kind, map) in [
        ("unit", &m.data.units),
        ("port", &m.data.ports),
        ("out-edge", &m.data.out_edges),
        ("in-edge", &m.data.in_edges),
    ] {
        for (x, y) in map {
            lines.push(alloc::format!("{kind} {x} => {y}"));
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::make_unit;
    use crate::computon::RawComputon;
    use crate::fixtures;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<Id, Id> {
        pairs.iter().map(|(a, b)| (Id::from(*a), Id::from(*b))).collect()
    }

    #[test]
    fn apex_leg_into_lambda1_is_valid() {
        let (alpha1, _) = fixtures::example_legs();
        assert_eq!(alpha1.i_vector(), ["a", "b"].map(Id::from).into());
        assert!(alpha1.o_vector().is_empty());
    }

    #[test]
    fn recolouring_breaks_the_colour_square() {
        let apex = Arc::new(fixtures::apex0());
        let l1 = Arc::new(fixtures::lambda1());
        let mut data = MorphismData::between(apex, l1);
        data.ports = map(&[("a", "q1"), ("b", "o2")]);
        let report = validate_morphism(&data).unwrap();
        let clauses: Vec<_> = report.violations.iter().map(MorphismViolation::clause).collect();
        assert_eq!(clauses, ["colour square"]);
    }

    fn chain(n: usize) -> Computon {
        // a0 -> x1 -> a1 -> x2 -> ... -> a{n}
        let mut raw = RawComputon::new();
        for i in 0..=n {
            raw = raw.port(alloc::format!("a{i}"), 0);
        }
        for i in 1..=n {
            raw = raw
                .unit(alloc::format!("x{i}"))
                .in_edge(
                    alloc::format!("f{i}"),
                    alloc::format!("a{}", i - 1),
                    alloc::format!("x{i}"),
                )
                .out_edge(alloc::format!("e{i}"), alloc::format!("x{i}"), alloc::format!("a{i}"));
        }
        Computon::new(raw.colour(0)).unwrap()
    }

    #[test]
    fn internal_port_gaining_a_producer_breaks_the_boundary() {
        // a 2-unit chain a0 -> x1 -> a1 -> x2 -> a2, plus an extra producer of a1
        let two = Arc::new(chain(2));
        let raw = chain(2)
            .to_raw()
            .unit("y")
            .port("b", 0)
            .in_edge("g1", "b", "y")
            .out_edge("g2", "y", "a1");
        let bigger = Arc::new(Computon::new(raw).unwrap());
        let id = ComputonMorphism::identity(two.clone());
        let mut data = id.into_data();
        data.target = bigger;
        let report = validate_morphism(&data).unwrap();
        assert_eq!(report.violations, [MorphismViolation::Boundary { port: "a1".into() }]);

        // gaining a producer on an e-inport is fine
        let raw = chain(2)
            .to_raw()
            .unit("y")
            .port("b", 0)
            .in_edge("g1", "b", "y")
            .out_edge("g2", "y", "a0");
        let ok_target = Arc::new(Computon::new(raw).unwrap());
        let mut data = ComputonMorphism::identity(two).into_data();
        data.target = ok_target;
        assert!(validate_morphism(&data).unwrap().is_ok());
    }

    #[test]
    fn malformed_maps() {
        let unit = Arc::new(make_unit());
        let data = MorphismData::between(unit.clone(), unit.clone());
        assert_eq!(
            validate_morphism(&data),
            Err(MalformedInput::MissingImage {
                kind: ElementKind::Port,
                id: "p1".into()
            })
        );
        let mut data = MorphismData::between(unit.clone(), unit);
        data.ports = map(&[("p1", "zz")]);
        assert!(matches!(
            validate_morphism(&data),
            Err(MalformedInput::UnknownElement { .. })
        ));
    }

    #[test]
    fn non_injective_port_map() {
        let src = Arc::new(Computon::new(RawComputon::new().port("a", 0).port("b", 0).colour(0)).unwrap());
        let tgt = Arc::new(make_unit());
        let mut data = MorphismData::between(src, tgt);
        data.ports = map(&[("a", "p1"), ("b", "p1")]);
        let report = validate_morphism(&data).unwrap();
        assert_eq!(report.violations[0].clause(), "injectivity");
    }

    #[test]
    fn identity_laws() {
        let (alpha1, _) = fixtures::example_legs();
        let id_src = ComputonMorphism::identity(alpha1.source().clone());
        let id_tgt = ComputonMorphism::identity(alpha1.target().clone());
        assert_eq!(compose_morphisms(&id_tgt, &alpha1).unwrap(), alpha1);
        assert_eq!(compose_morphisms(&alpha1, &id_src).unwrap(), alpha1);
        assert!(id_tgt.i_vector().is_empty());
        assert!(id_tgt.o_vector().is_empty());
        assert!(ComputonMorphism::new(ComputonMorphism::identity(Arc::new(make_unit())).into_data()).is_ok());
    }

    #[test]
    fn composition_mismatch() {
        let (alpha1, alpha2) = fixtures::example_legs();
        assert_eq!(
            compose_morphisms(&alpha1, &alpha2),
            Err(MorphismError::CompositionMismatch)
        );
    }

    #[test]
    fn unit_through_apex_into_lambda1() {
        // Λ -> APEX0 (onto the control port) -> LAMBDA1
        let (alpha1, _) = fixtures::example_legs();
        let mut data = MorphismData::between(Arc::new(make_unit()), alpha1.source().clone());
        data.ports = map(&[("p1", "a")]);
        let alpha0 = ComputonMorphism::new(data).unwrap();
        let composite = compose_morphisms(&alpha1, &alpha0).unwrap();
        assert_eq!(composite.port("p1"), "q1");
        assert_eq!(composite.i_vector(), ["p1".into()].into());
    }

    #[test]
    fn chain_embeddings_compose_to_the_direct_embedding() {
        // A = 1-unit chain, B = 2-unit chain, C = 3-unit chain, all along the prefix
        let a = Arc::new(chain(1));
        let b = Arc::new(chain(2));
        let c = Arc::new(chain(3));
        let prefix = |src: &Arc<Computon>, tgt: &Arc<Computon>| {
            let mut d = ComputonMorphism::identity(src.clone()).into_data();
            d.target = tgt.clone();
            ComputonMorphism::new(d).unwrap()
        };
        let ab = prefix(&a, &b);
        let bc = prefix(&b, &c);
        let ac = prefix(&a, &c);
        assert_eq!(compose_morphisms(&bc, &ab).unwrap(), ac);
        assert_eq!(compose_chain(&[&ab, &bc]).unwrap(), ac);
    }
}
