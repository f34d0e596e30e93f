//! Spans, pushouts, coproducts and the universal-property check.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::computon::{Computon, ComputonError, Id, InEdge, OutEdge, RawComputon, Violation};
use crate::morphism::{compose_morphisms, validate_morphism, ComputonMorphism, MorphismData, MorphismError};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn prefix(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// An element of one of the two glued computons.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Origin {
    pub side: Side,
    pub id: Id,
}

/// For each element of a glued computon, the elements it came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub units: BTreeMap<Id, Vec<Origin>>,
    pub ports: BTreeMap<Id, Vec<Origin>>,
    pub out_edges: BTreeMap<Id, Vec<Origin>>,
    pub in_edges: BTreeMap<Id, Vec<Origin>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpanError {
    #[error("invalid span: the legs have different sources")]
    ApexMismatch,
    #[error("invalid span: {side} leg: {source}")]
    InvalidLeg { side: Side, source: MorphismError },
}

/// Two morphisms out of a shared apex: `L ← apex → R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    left: ComputonMorphism,
    right: ComputonMorphism,
}

impl Span {
    pub fn new(left: ComputonMorphism, right: ComputonMorphism) -> Result<Self, SpanError> {
        if left.source() != right.source() {
            return Err(SpanError::ApexMismatch);
        }
        Ok(Span { left, right })
    }

    /// Validates both legs before forming the span.
    pub fn from_data(left: MorphismData, right: MorphismData) -> Result<Self, SpanError> {
        let left = ComputonMorphism::new(left).map_err(|source| SpanError::InvalidLeg {
            side: Side::Left,
            source,
        })?;
        let right = ComputonMorphism::new(right).map_err(|source| SpanError::InvalidLeg {
            side: Side::Right,
            source,
        })?;
        Span::new(left, right)
    }

    pub fn apex(&self) -> &Arc<Computon> {
        self.left.source()
    }

    pub fn left(&self) -> &ComputonMorphism {
        &self.left
    }

    pub fn right(&self) -> &ComputonMorphism {
        &self.right
    }

    pub fn left_operand(&self) -> &Arc<Computon> {
        self.left.target()
    }

    pub fn right_operand(&self) -> &Arc<Computon> {
        self.right.target()
    }

    pub fn leg(&self, side: Side) -> &ComputonMorphism {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

/// An apex port that grows on one side but lands on an internal port of
/// the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushableViolation {
    /// The operand whose boundary is crossed.
    pub side: Side,
    pub apex_port: Id,
    pub image: Id,
}

impl PushableViolation {
    pub fn clause(&self) -> &'static str {
        match self.side {
            Side::Left => "left boundary",
            Side::Right => "right boundary",
        }
    }
}

impl fmt::Display for PushableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let other = match self.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        write!(
            f,
            "{}: apex port {} gains neighbours in the {} operand but maps to i-port {} of the {} operand",
            self.clause(),
            self.apex_port,
            other,
            self.image,
            self.side
        )
    }
}

/// Checks that ports growing through one leg stay external on the other side.
pub fn is_pushable(span: &Span) -> Report<PushableViolation> {
    let mut violations = Vec::new();
    for side in [Side::Left, Side::Right] {
        let (here, there) = match side {
            Side::Left => (&span.left, &span.right),
            Side::Right => (&span.right, &span.left),
        };
        let operand = here.target();
        let grown: BTreeSet<Id> = there.i_vector().into_iter().chain(there.o_vector()).collect();
        for a in grown {
            let image = here.port(&a);
            if !operand.is_inport(image) && !operand.is_outport(image) {
                violations.push(PushableViolation {
                    side,
                    apex_port: a,
                    image: image.clone(),
                });
            }
        }
    }
    Report { violations }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PushoutError {
    #[error("pushout undefined: span is not pushable: {0}")]
    NotPushable(Report<PushableViolation>),
    #[error("pushout undefined: the glued structure is not a computon: {0}")]
    NotAComputon(Report<Violation>),
    #[error("pushout undefined: {side} injection is not a morphism: {source}")]
    InjectionInvalid { side: Side, source: MorphismError },
}

/// A pushout object with its two injections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutResult {
    pub result: Arc<Computon>,
    pub left_inj: ComputonMorphism,
    pub right_inj: ComputonMorphism,
    pub provenance: Provenance,
}

impl PushoutResult {
    pub fn inj(&self, side: Side) -> &ComputonMorphism {
        match side {
            Side::Left => &self.left_inj,
            Side::Right => &self.right_inj,
        }
    }
}

struct Quotient {
    origins: BTreeMap<Id, Vec<Origin>>,
    left: BTreeMap<Id, Id>,
    right: BTreeMap<Id, Id>,
}

fn fresh(used: &mut BTreeSet<Id>, mut name: String) -> Id {
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    name
}

/// Disjoint union of `left` and `right` with `glued` pairs identified.
/// `glued` must be injective in both directions.
fn quotient<'a>(
    left: impl Iterator<Item = &'a Id>,
    right: impl Iterator<Item = &'a Id>,
    glued: &BTreeMap<&'a Id, &'a Id>,
) -> Quotient {
    let mut q = Quotient {
        origins: BTreeMap::new(),
        left: BTreeMap::new(),
        right: BTreeMap::new(),
    };
    let mut used = BTreeSet::new();
    for l in left {
        let origin_l = Origin {
            side: Side::Left,
            id: l.clone(),
        };
        let name = match glued.get(l) {
            Some(r) => {
                let name = fresh(&mut used, format!("L.{l}=R.{r}"));
                q.right.insert((*r).clone(), name.clone());
                let origin_r = Origin {
                    side: Side::Right,
                    id: (*r).clone(),
                };
                q.origins.insert(name.clone(), vec![origin_l, origin_r]);
                name
            }
            None => {
                let name = fresh(&mut used, format!("L.{l}"));
                q.origins.insert(name.clone(), vec![origin_l]);
                name
            }
        };
        q.left.insert(l.clone(), name);
    }
    for r in right {
        if q.right.contains_key(r) {
            continue;
        }
        let name = fresh(&mut used, format!("R.{r}"));
        q.origins.insert(
            name.clone(),
            vec![Origin {
                side: Side::Right,
                id: r.clone(),
            }],
        );
        q.right.insert(r.clone(), name);
    }
    q
}

fn glued_pairs<'a>(l: &'a BTreeMap<Id, Id>, r: &'a BTreeMap<Id, Id>) -> BTreeMap<&'a Id, &'a Id> {
    l.iter().map(|(x, lx)| (lx, &r[x])).collect()
}

/// The componentwise gluing of `l` and `r` along the given apex images,
/// plus the two injection maps and provenance. No validation happens here.
struct Glued {
    raw: RawComputon,
    units: Quotient,
    ports: Quotient,
    out_edges: Quotient,
    in_edges: Quotient,
}

fn glue_components(l: &Computon, r: &Computon, left: Option<&MorphismData>, right: Option<&MorphismData>) -> Glued {
    let empty = BTreeMap::new();
    let pairs = |f: fn(&MorphismData) -> &BTreeMap<Id, Id>| match (left, right) {
        (Some(a), Some(b)) => glued_pairs(f(a), f(b)),
        _ => empty.iter().map(|(x, y): (&Id, &Id)| (x, y)).collect(),
    };
    let units = quotient(l.units().iter(), r.units().iter(), &pairs(|m| &m.units));
    let ports = quotient(l.ports().keys(), r.ports().keys(), &pairs(|m| &m.ports));
    let out_edges = quotient(l.out_edges().keys(), r.out_edges().keys(), &pairs(|m| &m.out_edges));
    let in_edges = quotient(l.in_edges().keys(), r.in_edges().keys(), &pairs(|m| &m.in_edges));

    let pick = |q: &Quotient, name: &Id| -> (Side, Id) {
        let o = &q.origins[name][0];
        (o.side, o.id.clone())
    };
    let side_of = |s: Side| match s {
        Side::Left => l,
        Side::Right => r,
    };
    let map_of = |q: &'_ Quotient, s: Side| -> BTreeMap<Id, Id> {
        match s {
            Side::Left => q.left.clone(),
            Side::Right => q.right.clone(),
        }
    };
    let unit_maps = [map_of(&units, Side::Left), map_of(&units, Side::Right)];
    let port_maps = [map_of(&ports, Side::Left), map_of(&ports, Side::Right)];
    let idx = |s: Side| if s == Side::Left { 0 } else { 1 };

    let mut raw = RawComputon::new();
    raw.units = units.origins.keys().cloned().collect();
    for name in ports.origins.keys() {
        let (s, p) = pick(&ports, name);
        raw.ports.push((name.clone(), side_of(s).ports()[&p]));
    }
    for name in out_edges.origins.keys() {
        let (s, e) = pick(&out_edges, name);
        let edge = &side_of(s).out_edges()[&e];
        raw.out_edges.push((
            name.clone(),
            OutEdge {
                unit: unit_maps[idx(s)][&edge.unit].clone(),
                port: port_maps[idx(s)][&edge.port].clone(),
            },
        ));
    }
    for name in in_edges.origins.keys() {
        let (s, f) = pick(&in_edges, name);
        let edge = &side_of(s).in_edges()[&f];
        raw.in_edges.push((
            name.clone(),
            InEdge {
                port: port_maps[idx(s)][&edge.port].clone(),
                unit: unit_maps[idx(s)][&edge.unit].clone(),
            },
        ));
    }
    raw.colours = l.colours().union(r.colours()).copied().collect();
    Glued {
        raw,
        units,
        ports,
        out_edges,
        in_edges,
    }
}

fn finish(glued: Glued, l: &Arc<Computon>, r: &Arc<Computon>) -> Result<PushoutResult, PushoutError> {
    let result = Arc::new(Computon::new(glued.raw).map_err(|e| match e {
        ComputonError::Invalid(report) => PushoutError::NotAComputon(report),
        ComputonError::Malformed(m) => unreachable!("quotient names are unique: {m}"),
    })?);
    let inj = |side: Side, src: &Arc<Computon>| {
        let pick = |q: &Quotient| match side {
            Side::Left => q.left.clone(),
            Side::Right => q.right.clone(),
        };
        ComputonMorphism::new(MorphismData {
            source: src.clone(),
            target: result.clone(),
            units: pick(&glued.units),
            ports: pick(&glued.ports),
            out_edges: pick(&glued.out_edges),
            in_edges: pick(&glued.in_edges),
        })
        .map_err(|source| PushoutError::InjectionInvalid { side, source })
    };
    let left_inj = inj(Side::Left, l)?;
    let right_inj = inj(Side::Right, r)?;
    Ok(PushoutResult {
        left_inj,
        right_inj,
        provenance: Provenance {
            units: glued.units.origins,
            ports: glued.ports.origins,
            out_edges: glued.out_edges.origins,
            in_edges: glued.in_edges.origins,
        },
        result,
    })
}

/// Glues the two operands of `span` along its apex.
///
/// Merged elements are named `L.x=R.y`; the rest keep `L.x` or `R.y`.
pub fn pushout(span: &Span) -> Result<PushoutResult, PushoutError> {
    let report = is_pushable(span);
    if !report.is_ok() {
        return Err(PushoutError::NotPushable(report));
    }
    set_pushout(span)
}

/// The componentwise quotient of the span, accepted only if it is a
/// computon and both injections are morphisms. Does not consult
/// [`is_pushable`].
pub fn set_pushout(span: &Span) -> Result<PushoutResult, PushoutError> {
    let (l, r) = (span.left_operand(), span.right_operand());
    let glued = glue_components(l, r, Some(span.left.data()), Some(span.right.data()));
    finish(glued, l, r)
}

/// A disjoint union with its two injections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coproduct {
    pub result: Arc<Computon>,
    pub inj_left: ComputonMorphism,
    pub inj_right: ComputonMorphism,
}

/// `a + b`: elements are prefixed `L.` and `R.`; colours are merged.
pub fn coproduct(a: &Arc<Computon>, b: &Arc<Computon>) -> Coproduct {
    let glued = glue_components(a, b, None, None);
    let po = finish(glued, a, b).expect("a disjoint union of computons is a computon");
    Coproduct {
        result: po.result,
        inj_left: po.left_inj,
        inj_right: po.right_inj,
    }
}

/// The morphism `a + b → X` induced by `f: a → X` and `g: b → X`.
pub fn copair(co: &Coproduct, f: &ComputonMorphism, g: &ComputonMorphism) -> Result<ComputonMorphism, MorphismError> {
    if f.source() != co.inj_left.source() || g.source() != co.inj_right.source() || f.target() != g.target() {
        return Err(MorphismError::CompositionMismatch);
    }
    let mut data = MorphismData::between(co.result.clone(), f.target().clone());
    for (inj, m) in [(&co.inj_left, f), (&co.inj_right, g)] {
        let (i, d) = (inj.data(), m.data());
        data.units
            .extend(i.units.iter().map(|(x, y)| (y.clone(), d.units[x].clone())));
        data.ports
            .extend(i.ports.iter().map(|(x, y)| (y.clone(), d.ports[x].clone())));
        data.out_edges
            .extend(i.out_edges.iter().map(|(x, y)| (y.clone(), d.out_edges[x].clone())));
        data.in_edges
            .extend(i.in_edges.iter().map(|(x, y)| (y.clone(), d.in_edges[x].clone())));
    }
    ComputonMorphism::new(data)
}

/// A computon receiving both operands of a span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocone {
    pub left: ComputonMorphism,
    pub right: ComputonMorphism,
}

impl Cocone {
    pub fn target(&self) -> &Arc<Computon> {
        self.left.target()
    }

    /// Whether both legs agree on the apex of `span`.
    pub fn commutes_with(&self, span: &Span) -> bool {
        self.left.target() == self.right.target()
            && matches!(
                (compose_morphisms(&self.left, span.left()), compose_morphisms(&self.right, span.right())),
                (Ok(a), Ok(b)) if a == b
            )
    }
}

/// The most ports either operand may have in [`verify_universal_property`].
pub const MEDIATOR_SEARCH_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("mediator search is limited to {limit} ports per operand, got {ports}")]
pub struct CapacityError {
    pub ports: usize,
    pub limit: usize,
}

// Allowed images of each pushout element under a mediator: the values the
// two cocone legs force on it, or every target element when none is forced.
fn forced_images(
    elements: impl Iterator<Item = Id>,
    injections: [&BTreeMap<Id, Id>; 2],
    legs: [&BTreeMap<Id, Id>; 2],
    all: &[Id],
) -> Vec<(Id, Vec<Id>)> {
    let mut forced: BTreeMap<Id, BTreeSet<Id>> = elements.map(|z| (z, BTreeSet::new())).collect();
    for (inj, leg) in injections.iter().zip(legs) {
        for (x, z) in inj.iter() {
            forced.get_mut(z).unwrap().insert(leg[x].clone());
        }
    }
    forced
        .into_iter()
        .map(|(z, imgs)| {
            let imgs = if imgs.is_empty() {
                all.to_vec()
            } else {
                imgs.into_iter().collect()
            };
            (z, imgs)
        })
        .collect()
}

/// Whether exactly one morphism `po.result → cocone.target()` makes both
/// triangles commute.
///
/// The search enumerates every componentwise assignment compatible with the
/// cocone legs and keeps those that validate as morphisms.
pub fn verify_universal_property(span: &Span, po: &PushoutResult, cocone: &Cocone) -> Result<bool, CapacityError> {
    for operand in [span.left_operand(), span.right_operand()] {
        if operand.ports().len() > MEDIATOR_SEARCH_LIMIT {
            return Err(CapacityError {
                ports: operand.ports().len(),
                limit: MEDIATOR_SEARCH_LIMIT,
            });
        }
    }
    if po.left_inj.source() != span.left_operand()
        || po.right_inj.source() != span.right_operand()
        || cocone.left.source() != span.left_operand()
        || cocone.right.source() != span.right_operand()
        || !cocone.commutes_with(span)
    {
        return Ok(false);
    }

    let (src, tgt) = (&po.result, cocone.target());
    let (il, ir) = (po.left_inj.data(), po.right_inj.data());
    let (cl, cr) = (cocone.left.data(), cocone.right.data());
    let all = |it: &mut dyn Iterator<Item = &Id>| it.cloned().collect::<Vec<_>>();
    let choices: [Vec<(Id, Vec<Id>)>; 4] = [
        forced_images(
            src.units().iter().cloned(),
            [&il.units, &ir.units],
            [&cl.units, &cr.units],
            &all(&mut tgt.units().iter()),
        ),
        forced_images(
            src.ports().keys().cloned(),
            [&il.ports, &ir.ports],
            [&cl.ports, &cr.ports],
            &all(&mut tgt.ports().keys()),
        ),
        forced_images(
            src.out_edges().keys().cloned(),
            [&il.out_edges, &ir.out_edges],
            [&cl.out_edges, &cr.out_edges],
            &all(&mut tgt.out_edges().keys()),
        ),
        forced_images(
            src.in_edges().keys().cloned(),
            [&il.in_edges, &ir.in_edges],
            [&cl.in_edges, &cr.in_edges],
            &all(&mut tgt.in_edges().keys()),
        ),
    ];
    let slots: Vec<(usize, &Id, &Vec<Id>)> = choices
        .iter()
        .enumerate()
        .flat_map(|(k, c)| c.iter().map(move |(z, imgs)| (k, z, imgs)))
        .collect();
    if slots.iter().any(|(_, _, imgs)| imgs.is_empty()) {
        return Ok(false);
    }

    let mut index = vec![0usize; slots.len()];
    let mut mediators = 0;
    loop {
        let mut data = MorphismData::between(src.clone(), tgt.clone());
        for ((k, z, imgs), &i) in slots.iter().zip(&index) {
            let map = match k {
                0 => &mut data.units,
                1 => &mut data.ports,
                2 => &mut data.out_edges,
                _ => &mut data.in_edges,
            };
            map.insert((*z).clone(), imgs[i].clone());
        }
        if validate_morphism(&data).is_ok_and(|r| r.is_ok()) {
            mediators += 1;
            if mediators > 1 {
                return Ok(false);
            }
        }
        // advance the odometer
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return Ok(mediators == 1);
            }
            index[pos] += 1;
            if index[pos] < slots[pos].2.len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{make_fork, make_glue, make_join, make_unit};
    use crate::fixtures;
    use crate::morphism::find_isomorphism;

    fn leg(src: &Arc<Computon>, tgt: &Arc<Computon>, ports: &[(&str, &str)]) -> ComputonMorphism {
        let mut d = MorphismData::between(src.clone(), tgt.clone());
        d.ports = ports.iter().map(|(a, b)| (Id::from(*a), Id::from(*b))).collect();
        ComputonMorphism::new(d).unwrap()
    }

    fn glue_glue_span() -> Span {
        let unit = Arc::new(make_unit());
        let g = Arc::new(make_glue());
        Span::new(leg(&unit, &g, &[("p1", "p2")]), leg(&unit, &g, &[("p1", "p1")])).unwrap()
    }

    #[test]
    fn example_span_is_pushable() {
        let (a1, a2) = fixtures::example_legs();
        let span = Span::new(a1, a2).unwrap();
        assert!(is_pushable(&span).is_ok());
        let po = pushout(&span).unwrap();
        assert_eq!(po.result.units().len(), 2);
        assert!(po.result.has_port("L.q1=R.r0"));
        assert!(po.result.has_port("L.o1=R.j1"));
        assert!(po.result.has_port("R.w1"));
        assert_eq!(po.provenance.ports["L.o1=R.j1"].len(), 2);
    }

    #[test]
    fn unit_apex_into_two_glues_is_a_chain() {
        let po = pushout(&glue_glue_span()).unwrap();
        let c = &po.result;
        assert_eq!(c.units().len(), 2);
        assert_eq!(c.ports().len(), 3);
        assert!(c.is_connected());
        assert_eq!(c.iports(), ["L.p2=R.p1".into()].into());
        assert_eq!(
            compose_morphisms(&po.left_inj, glue_glue_span().left()).unwrap(),
            compose_morphisms(&po.right_inj, glue_glue_span().right()).unwrap()
        );
    }

    #[test]
    fn identity_legs_collapse_onto_the_right_operand() {
        // apex = L = GLUE, mapped identically into L and isomorphically into
        // a renamed copy R
        let l = Arc::new(make_glue());
        let r = Arc::new(renamed_glue());
        let into_r = find_isomorphism(&l, &r).unwrap();
        let span = Span::new(ComputonMorphism::identity(l), into_r).unwrap();
        let po = pushout(&span).unwrap();
        assert!(find_isomorphism(&po.result, &r).is_some());
    }

    fn renamed_glue() -> Computon {
        Computon::new(
            crate::computon::RawComputon::new()
                .unit("v")
                .port("x", 0)
                .port("y", 0)
                .in_edge("g1", "x", "v")
                .out_edge("g2", "v", "y")
                .colour(0),
        )
        .unwrap()
    }

    fn chain2() -> Arc<Computon> {
        // a -> x -> m -> y -> b
        Arc::new(
            Computon::new(
                crate::computon::RawComputon::new()
                    .unit("x")
                    .unit("y")
                    .port("a", 0)
                    .port("m", 0)
                    .port("b", 0)
                    .in_edge("f1", "a", "x")
                    .out_edge("e1", "x", "m")
                    .in_edge("f2", "m", "y")
                    .out_edge("e2", "y", "b")
                    .colour(0),
            )
            .unwrap(),
        )
    }

    #[test]
    fn gluing_two_middles_is_not_pushable() {
        // the apex port lands on the internal port m of both chains, so each
        // side adds producers and consumers the other side cannot absorb
        let unit = Arc::new(make_unit());
        let c = chain2();
        let span = Span::new(leg(&unit, &c, &[("p1", "m")]), leg(&unit, &c, &[("p1", "m")])).unwrap();
        let report = is_pushable(&span);
        let clauses: Vec<_> = report.violations.iter().map(PushableViolation::clause).collect();
        assert_eq!(clauses, ["left boundary", "right boundary"]);
        assert!(matches!(pushout(&span), Err(PushoutError::NotPushable(_))));
        assert!(matches!(set_pushout(&span), Err(PushoutError::InjectionInvalid { .. })));
    }

    #[test]
    fn gluing_an_i_port_to_a_fresh_port_is_fine() {
        // the right side adds nothing new to m, so the left boundary is safe
        let unit = Arc::new(make_unit());
        let c = chain2();
        let span = Span::new(leg(&unit, &c, &[("p1", "m")]), leg(&unit, &unit, &[("p1", "p1")])).unwrap();
        assert!(is_pushable(&span).is_ok());
        let po = pushout(&span).unwrap();
        assert!(find_isomorphism(&po.result, &c).is_some());
    }

    #[test]
    fn feedback_gluing_leaves_no_control_eport() {
        // q0 -> u -> q1 and r0 -> v -> r1 glued into a cycle: pushable, but
        // the quotient has no ec-inport or ec-outport left
        let apex = Arc::new(make_trivial_two_control());
        let g = Arc::new(make_glue());
        let span = Span::new(
            leg(&apex, &g, &[("p1", "p2"), ("p2", "p1")]),
            leg(&apex, &g, &[("p1", "p1"), ("p2", "p2")]),
        )
        .unwrap();
        assert!(is_pushable(&span).is_ok());
        match pushout(&span) {
            Err(PushoutError::NotAComputon(report)) => {
                let clauses: Vec<_> = report.violations.iter().map(Violation::clause).collect();
                assert_eq!(clauses, ["no ec-inport", "no ec-outport"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn make_trivial_two_control() -> Computon {
        crate::classify::make_trivial(&[crate::computon::Colour(0); 2]).unwrap()
    }

    #[test]
    fn coproduct_of_fork_and_join() {
        let co = coproduct(&Arc::new(make_fork()), &Arc::new(make_join()));
        assert_eq!(co.result.units().len(), 2);
        assert_eq!(co.result.ports().len(), 6);
        assert_eq!(co.result.colours().len(), 1);
        assert!(co.inj_left.i_vector().is_empty() && co.inj_left.o_vector().is_empty());
        assert!(co.inj_right.i_vector().is_empty() && co.inj_right.o_vector().is_empty());
        let i = co.result.interface();
        assert_eq!(i.inports.len(), 3);
        assert_eq!(i.outports.len(), 3);
    }

    #[test]
    fn coproduct_of_units_is_trivial() {
        let u = Arc::new(make_unit());
        let co = coproduct(&u, &u);
        assert!(co.result.is_trivial());
        assert_eq!(co.result.ports().len(), 2);
    }

    #[test]
    fn copair_recovers_the_legs() {
        let u = Arc::new(make_unit());
        let g = Arc::new(make_glue());
        let co = coproduct(&u, &u);
        let f = leg(&u, &g, &[("p1", "p1")]);
        let h = leg(&u, &g, &[("p1", "p2")]);
        let m = copair(&co, &f, &h).unwrap();
        assert_eq!(compose_morphisms(&m, &co.inj_left).unwrap(), f);
        assert_eq!(compose_morphisms(&m, &co.inj_right).unwrap(), h);
        // both summands onto the same port is not injective
        assert!(copair(&co, &f, &f).is_err());
    }

    #[test]
    fn universal_property_against_itself() {
        let span = glue_glue_span();
        let po = pushout(&span).unwrap();
        let cocone = Cocone {
            left: po.left_inj.clone(),
            right: po.right_inj.clone(),
        };
        assert_eq!(verify_universal_property(&span, &po, &cocone), Ok(true));
    }

    #[test]
    fn universal_property_with_an_extra_port() {
        let span = glue_glue_span();
        let po = pushout(&span).unwrap();
        let bigger = Arc::new(Computon::new(po.result.to_raw().port("extra", 0)).unwrap());
        let widen = |m: &ComputonMorphism| {
            let mut d = m.data().clone();
            d.target = bigger.clone();
            ComputonMorphism::new(d).unwrap()
        };
        let cocone = Cocone {
            left: widen(&po.left_inj),
            right: widen(&po.right_inj),
        };
        assert_eq!(verify_universal_property(&span, &po, &cocone), Ok(true));
    }

    #[test]
    fn universal_property_fails_without_the_merge() {
        // the coproduct of the two glues receives both but does not merge
        // the apex port, so it is not a cocone over the span
        let span = glue_glue_span();
        let po = pushout(&span).unwrap();
        let g = Arc::new(make_glue());
        let co = coproduct(&g, &g);
        let cocone = Cocone {
            left: co.inj_left.clone(),
            right: co.inj_right.clone(),
        };
        assert!(!cocone.commutes_with(&span));
        assert_eq!(verify_universal_property(&span, &po, &cocone), Ok(false));
    }

    #[test]
    fn universal_property_is_capped() {
        let big = (0..11).fold(crate::computon::RawComputon::new(), |r, i| r.port(format!("p{i}"), 0));
        let big = Arc::new(Computon::new(big.colour(0)).unwrap());
        let u = Arc::new(make_unit());
        let span = Span::new(leg(&u, &big, &[("p1", "p0")]), leg(&u, &u, &[("p1", "p1")])).unwrap();
        let po = pushout(&span).unwrap();
        let cocone = Cocone {
            left: po.left_inj.clone(),
            right: po.right_inj.clone(),
        };
        assert_eq!(
            verify_universal_property(&span, &po, &cocone),
            Err(CapacityError { ports: 11, limit: 10 })
        );
    }

    #[test]
    fn mismatched_apex_is_rejected() {
        let u = Arc::new(make_unit());
        let g = Arc::new(make_glue());
        let t = Arc::new(make_trivial_two_control());
        assert_eq!(
            Span::new(leg(&u, &g, &[("p1", "p1")]), leg(&t, &g, &[("p1", "p1"), ("p2", "p2")])),
            Err(SpanError::ApexMismatch)
        );
    }
}
