//! Seeded generators of valid computons, morphisms, spans and cocones for
//! property tests and acceptance runs.
//!
//! Every generator takes an `Rng` and retries internally when a random
//! draw happens to be invalid, so callers always get a validated value.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::classify::{make_fork, make_functional, make_glue, make_join};
use crate::compose::{Cocone, PushoutResult, Span};
use crate::computon::{Colour, Computon, Id, RawComputon};
use crate::morphism::{compose_morphisms, ComputonMorphism, MorphismData};

/// Size bounds for generated computons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub max_ports: usize,
    pub max_units: usize,
    /// Data colours are drawn from `1..=max_colour`.
    pub max_colour: u32,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_ports: 8,
            max_units: 3,
            max_colour: 3,
        }
    }
}

struct Builder {
    raw: RawComputon,
    ports: usize,
    out_edges: usize,
    in_edges: usize,
}

impl Builder {
    fn new() -> Self {
        Builder {
            raw: RawComputon::new(),
            ports: 0,
            out_edges: 0,
            in_edges: 0,
        }
    }

    fn port(&mut self, colour: Colour) -> Id {
        let id = format!("p{}", self.ports);
        self.ports += 1;
        self.raw.ports.push((id.clone(), colour));
        id
    }

    fn produce(&mut self, unit: &Id, port: &Id) {
        self.out_edges += 1;
        self.raw = core::mem::take(&mut self.raw).out_edge(format!("e{}", self.out_edges), unit, port);
    }

    fn consume(&mut self, port: &Id, unit: &Id) {
        self.in_edges += 1;
        self.raw = core::mem::take(&mut self.raw).in_edge(format!("f{}", self.in_edges), port, unit);
    }

    fn finish(self) -> Computon {
        Computon::new(self.raw.with_port_colours()).expect("generator builds valid computons")
    }
}

fn random_colour<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Colour {
    if shape.max_colour == 0 || rng.gen_bool(0.4) {
        Colour::CONTROL
    } else {
        Colour(rng.gen_range(1..=shape.max_colour))
    }
}

/// A connected computon whose extra e-inports carry exactly `inports`
/// colours when given.
///
/// Units `u1..uk` sit on a control spine `c0 → u1 → c1 → … → uk → ck`. Extra
/// e-inports feed any unit, extra e-outports leave units at or after the
/// last unit fed from outside, and internal ports link arbitrary units, so
/// every e-inport reaches every e-outport.
fn spine<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, inports: Option<&[Colour]>) -> Computon {
    let k = rng.gen_range(1..=shape.max_units.clamp(1, shape.max_ports.saturating_sub(1).max(1)));
    let mut b = Builder::new();
    let units: Vec<Id> = (1..=k).map(|i| format!("u{i}")).collect();
    for u in &units {
        b.raw.units.push(u.clone());
    }
    let first = b.port(Colour::CONTROL);
    b.consume(&first, &units[0]);
    for (i, u) in units.iter().enumerate() {
        let next = b.port(Colour::CONTROL);
        b.produce(u, &next);
        if i + 1 < k {
            b.consume(&next, &units[i + 1]);
        }
    }

    let budget = shape.max_ports.saturating_sub(k + 1);
    let mut latest_fed = 0;
    let extra_in: Vec<Colour> = match inports {
        Some(cs) => {
            // the spine's own c0 takes one control colour
            let mut cs = cs.to_vec();
            if let Some(i) = cs.iter().position(|c| c.is_control()) {
                cs.remove(i);
            }
            cs
        }
        None => (0..rng.gen_range(0..=budget / 2))
            .map(|_| random_colour(rng, shape))
            .collect(),
    };
    for c in extra_in {
        let p = b.port(c);
        let i = rng.gen_range(0..k);
        latest_fed = latest_fed.max(i);
        b.consume(&p, &units[i]);
    }
    let remaining = shape.max_ports.saturating_sub(b.ports);
    for _ in 0..rng.gen_range(0..=remaining) {
        let c = random_colour(rng, shape);
        let p = b.port(c);
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(latest_fed..k);
            b.produce(&units[i], &p);
        } else {
            let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
            b.produce(&units[i], &p);
            b.consume(&p, &units[j]);
        }
    }
    // an occasional parallel edge
    if rng.gen_bool(0.15) {
        let (_, e) = b.raw.in_edges[rng.gen_range(0..b.raw.in_edges.len())].clone();
        b.consume(&e.port, &e.unit);
    }
    b.finish()
}

/// A random connected computon within `shape`.
pub fn connected_computon<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Computon {
    spine(rng, shape, None)
}

/// A random connected computon whose e-inports have exactly the colours
/// in `inports`, which must include control.
pub fn connected_with_inports<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, inports: &[Colour]) -> Computon {
    assert!(inports.iter().any(|c| c.is_control()), "a computon needs an ec-inport");
    spine(rng, shape, Some(inports))
}

/// Renames every element by prefixing `prefix`.
pub fn renamed(c: &Computon, prefix: &str) -> Computon {
    let raw = c.to_raw();
    let r = |id: &Id| format!("{prefix}{id}");
    let renamed = RawComputon {
        units: raw.units.iter().map(r).collect(),
        ports: raw.ports.iter().map(|(p, c)| (r(p), *c)).collect(),
        out_edges: raw
            .out_edges
            .iter()
            .map(|(e, oe)| {
                let mut oe = oe.clone();
                oe.unit = r(&oe.unit);
                oe.port = r(&oe.port);
                (r(e), oe)
            })
            .collect(),
        in_edges: raw
            .in_edges
            .iter()
            .map(|(f, ie)| {
                let mut ie = ie.clone();
                ie.unit = r(&ie.unit);
                ie.port = r(&ie.port);
                (r(f), ie)
            })
            .collect(),
        colours: raw.colours,
    };
    Computon::new(renamed).expect("renaming preserves validity")
}

fn disjoint_union(a: &Computon, b: &Computon) -> Computon {
    let (mut x, y) = (a.to_raw(), b.to_raw());
    x.units.extend(y.units);
    x.ports.extend(y.ports);
    x.out_edges.extend(y.out_edges);
    x.in_edges.extend(y.in_edges);
    for c in y.colours {
        if !x.colours.contains(&c) {
            x.colours.push(c);
        }
    }
    Computon::new(x).expect("disjoint union of computons is a computon")
}

/// A random valid computon: connected, or a connected one beside a second
/// component and some edge-free ports.
pub fn valid_computon<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Computon {
    let spare = shape.max_ports.saturating_sub(2);
    match rng.gen_range(0..4) {
        0 if spare >= 2 => {
            let side = rng.gen_range(2..=spare.min(4));
            let base = connected_computon(
                rng,
                &Shape {
                    max_ports: shape.max_ports - side,
                    ..*shape
                },
            );
            let other = renamed(
                &connected_computon(
                    rng,
                    &Shape {
                        max_ports: side,
                        ..*shape
                    },
                ),
                "b",
            );
            disjoint_union(&base, &other)
        }
        1 if spare >= 1 => {
            let extra = rng.gen_range(1..=spare.min(2));
            let mut raw = connected_computon(
                rng,
                &Shape {
                    max_ports: shape.max_ports - extra,
                    ..*shape
                },
            )
            .to_raw();
            for i in 0..extra {
                raw.ports.push((format!("z{i}"), random_colour(rng, shape)));
            }
            Computon::new(raw.with_port_colours()).expect("edge-free ports keep validity")
        }
        _ => connected_computon(rng, shape),
    }
}

/// A random primitive computon: a fork, join, glue or functional computon.
pub fn primitive_computon<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Computon {
    match rng.gen_range(0..4) {
        0 => make_fork(),
        1 => make_join(),
        2 => make_glue(),
        _ => {
            let max = shape.max_colour.max(1);
            let mut data = || -> Vec<Colour> {
                (0..rng.gen_range(0..=3))
                    .map(|_| Colour(1 + (rng.next_u32() % max)))
                    .collect()
            };
            let (ins, outs) = (data(), data());
            make_functional(&ins, &outs).expect("data colours are positive")
        }
    }
}

/// A sub-computon of `target` included into it: a random set of units
/// with every edge and port they touch, plus some unattached ports.
/// Returns `None` if no draw within a few attempts yields a valid
/// morphism.
pub fn embedding<R: Rng + ?Sized>(rng: &mut R, target: &Arc<Computon>) -> Option<ComputonMorphism> {
    let units: Vec<&Id> = target.units().iter().collect();
    let ports: Vec<&Id> = target.ports().keys().collect();
    for _ in 0..16 {
        let chosen: BTreeSet<&Id> = units.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        let mut keep_ports: BTreeSet<&Id> = BTreeSet::new();
        let mut raw = RawComputon::new();
        let (mut um, mut pm, mut em, mut fm) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
        let s = |id: &Id| format!("s{id}");
        for u in &chosen {
            raw.units.push(s(u));
            um.insert(s(u), (*u).clone());
        }
        for (e, oe) in target.out_edges() {
            if chosen.contains(&oe.unit) {
                keep_ports.insert(&oe.port);
                raw = raw.out_edge(s(e), s(&oe.unit), s(&oe.port));
                em.insert(s(e), e.clone());
            }
        }
        for (f, ie) in target.in_edges() {
            if chosen.contains(&ie.unit) {
                keep_ports.insert(&ie.port);
                raw = raw.in_edge(s(f), s(&ie.port), s(&ie.unit));
                fm.insert(s(f), f.clone());
            }
        }
        for p in &ports {
            if rng.gen_bool(0.2) {
                keep_ports.insert(p);
            }
        }
        for p in keep_ports {
            raw.ports.push((s(p), target.ports()[p]));
            pm.insert(s(p), p.clone());
        }
        let Ok(source) = Computon::new(raw.with_port_colours()) else {
            continue;
        };
        let mut d = MorphismData::between(Arc::new(source), target.clone());
        (d.units, d.ports, d.out_edges, d.in_edges) = (um, pm, em, fm);
        if let Ok(m) = ComputonMorphism::new(d) {
            return Some(m);
        }
    }
    None
}

/// `source` grown at its boundary: some e-inports gain a producing unit fed
/// by a fresh control port, some e-outports gain a consuming unit, and an
/// unattached port may be added. The morphism is the inclusion.
pub fn extension<R: Rng + ?Sized>(rng: &mut R, source: &Arc<Computon>) -> ComputonMorphism {
    let t = |id: &Id| format!("t{id}");
    let mut raw = renamed(source, "t").to_raw();
    let ins = source.inports();
    let outs = source.outports();
    let mut touched = BTreeSet::new();
    let mut n = 0;
    for p in &ins {
        if rng.gen_bool(0.3) {
            n += 1;
            let (u, q) = (format!("xu{n}"), format!("xp{n}"));
            raw = raw
                .unit(&u)
                .port(&q, 0)
                .in_edge(format!("xf{n}"), &q, &u)
                .out_edge(format!("xe{n}"), &u, t(p));
            touched.insert(p.clone());
        }
    }
    for p in &outs {
        if !touched.contains(p) && rng.gen_bool(0.3) {
            n += 1;
            let (u, q) = (format!("xu{n}"), format!("xp{n}"));
            raw = raw
                .unit(&u)
                .port(&q, 0)
                .in_edge(format!("xf{n}"), t(p), &u)
                .out_edge(format!("xe{n}"), &u, &q);
        }
    }
    if rng.gen_bool(0.3) {
        raw = raw.port("xz", 0);
    }
    if !raw.colours.contains(&Colour::CONTROL) {
        raw = raw.colour(0);
    }
    let target = Arc::new(Computon::new(raw).expect("boundary growth keeps validity"));
    let mut d = MorphismData::between(source.clone(), target);
    d.units = source.units().iter().map(|x| (x.clone(), t(x))).collect();
    d.ports = source.ports().keys().map(|x| (x.clone(), t(x))).collect();
    d.out_edges = source.out_edges().keys().map(|x| (x.clone(), t(x))).collect();
    d.in_edges = source.in_edges().keys().map(|x| (x.clone(), t(x))).collect();
    ComputonMorphism::new(d).expect("inclusion into a boundary growth is a morphism")
}

/// A random valid morphism: an embedding into, or an extension of, a
/// random valid computon.
pub fn morphism<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> ComputonMorphism {
    loop {
        let c = Arc::new(valid_computon(rng, shape));
        if rng.gen_bool(0.5) {
            if let Some(m) = embedding(rng, &c) {
                return m;
            }
        } else {
            return extension(rng, &c);
        }
    }
}

/// Trivial apex with `k` ports glued into same-coloured ports of `l` and
/// `r`. When `boundary_only` holds, images are restricted to e-ports, which
/// always gives a pushable span.
fn trivial_apex_span<R: Rng + ?Sized>(
    rng: &mut R,
    l: &Arc<Computon>,
    r: &Arc<Computon>,
    boundary_only: bool,
) -> Option<Span> {
    let candidates = |c: &Computon| -> BTreeMap<Colour, Vec<Id>> {
        let (ins, outs) = (c.inports(), c.outports());
        let mut by_colour: BTreeMap<Colour, Vec<Id>> = BTreeMap::new();
        for (p, col) in c.ports() {
            if !boundary_only || ins.contains(p) || outs.contains(p) {
                by_colour.entry(*col).or_default().push(p.clone());
            }
        }
        by_colour
    };
    let (mut lc, mut rc) = (candidates(l), candidates(r));
    for v in lc.values_mut().chain(rc.values_mut()) {
        v.shuffle(rng);
    }
    let mut pairs: Vec<(Colour, Id, Id)> = Vec::new();
    for (col, lv) in &lc {
        if let Some(rv) = rc.get(col) {
            for (a, b) in lv.iter().zip(rv) {
                pairs.push((*col, a.clone(), b.clone()));
            }
        }
    }
    pairs.shuffle(rng);
    let control = pairs.iter().position(|(c, _, _)| c.is_control())?;
    pairs.swap(0, control);
    pairs.truncate(rng.gen_range(1..=pairs.len().min(3)));

    let mut raw = RawComputon::new();
    for (i, (c, _, _)) in pairs.iter().enumerate() {
        raw = raw.port(format!("a{i}"), c.0);
    }
    let apex = Arc::new(Computon::new(raw.with_port_colours()).ok()?);
    let mut dl = MorphismData::between(apex.clone(), l.clone());
    let mut dr = MorphismData::between(apex, r.clone());
    for (i, (_, a, b)) in pairs.iter().enumerate() {
        dl.ports.insert(format!("a{i}"), a.clone());
        dr.ports.insert(format!("a{i}"), b.clone());
    }
    Span::from_data(dl, dr).ok()
}

/// Which construction produced a span from [`span`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanKind {
    /// Trivial apex into e-ports only; pushable by construction.
    Boundary,
    /// Trivial apex into ports of any kind, including i-ports.
    Anywhere,
    /// Two independent boundary growths of one computon.
    Extensions,
    /// A sub-computon embedded on one side and grown on the other.
    EmbedAndExtend,
}

/// A random span of the given kind, retrying until one can be built.
pub fn span_of_kind<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, kind: SpanKind) -> Span {
    loop {
        let span = match kind {
            SpanKind::Boundary | SpanKind::Anywhere => {
                let l = Arc::new(valid_computon(rng, shape));
                let r = Arc::new(valid_computon(rng, shape));
                trivial_apex_span(rng, &l, &r, kind == SpanKind::Boundary)
            }
            SpanKind::Extensions => {
                let apex = Arc::new(valid_computon(rng, &Shape { max_ports: 5, ..*shape }));
                Span::new(extension(rng, &apex), extension(rng, &apex)).ok()
            }
            SpanKind::EmbedAndExtend => {
                let host = Arc::new(valid_computon(rng, shape));
                embedding(rng, &host).and_then(|e| {
                    let x = extension(rng, e.source());
                    Span::new(e, x).ok()
                })
            }
        };
        if let Some(span) = span {
            return span;
        }
    }
}

/// A random span, pushable or not, over one of the [`SpanKind`]
/// constructions chosen uniformly.
pub fn span<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> (SpanKind, Span) {
    let kind = [
        SpanKind::Boundary,
        SpanKind::Anywhere,
        SpanKind::Extensions,
        SpanKind::EmbedAndExtend,
    ][rng.gen_range(0..4)];
    (kind, span_of_kind(rng, shape, kind))
}

/// A commuting cocone over the span that `po` was built from: the pushout
/// injections followed by a random boundary growth of the pushout.
pub fn cocone<R: Rng + ?Sized>(rng: &mut R, po: &PushoutResult) -> Cocone {
    let grow = extension(rng, &po.result);
    Cocone {
        left: compose_morphisms(&grow, &po.left_inj).expect("pushout injections end at the pushout"),
        right: compose_morphisms(&grow, &po.right_inj).expect("pushout injections end at the pushout"),
    }
}

/// Two connected computons whose e-outports and e-inports match colour for
/// colour, with the pairing that fuses all of them.
pub fn totally_sequentiable<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> (Computon, Computon, Vec<(Id, Id)>) {
    let l = connected_computon(rng, shape);
    let outs: Vec<(Id, Colour)> = l
        .outports()
        .into_iter()
        .map(|p| {
            let c = l.ports()[&p];
            (p, c)
        })
        .collect();
    let colours: Vec<Colour> = outs.iter().map(|(_, c)| *c).collect();
    let r = connected_with_inports(
        rng,
        &Shape {
            max_ports: shape.max_ports + colours.len(),
            ..*shape
        },
        &colours,
    );
    let mut r_ins: BTreeMap<Colour, Vec<Id>> = BTreeMap::new();
    for p in r.inports() {
        r_ins.entry(r.ports()[&p]).or_default().push(p);
    }
    for v in r_ins.values_mut() {
        v.shuffle(rng);
    }
    let pairing = outs
        .into_iter()
        .map(|(p, c)| {
            (
                p,
                r_ins.get_mut(&c).and_then(Vec::pop).expect("colours match one to one"),
            )
        })
        .collect();
    (l, r, pairing)
}
