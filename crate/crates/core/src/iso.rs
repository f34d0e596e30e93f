//! Isomorphism search between computons.
//!
//! Units are assigned by backtracking, candidates ordered by identifier.
//! After each assignment the multiset of port profiles restricted to the
//! assigned units must agree on both sides. Once every unit is placed, ports
//! with equal profiles are interchangeable and edges with equal endpoints
//! are too, so both are paired off in identifier order.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::computon::{Colour, Computon, Id};
use crate::morphism::{ComputonMorphism, MorphismData};

// port -> (unit -> number of edges) for producers and consumers
struct Adjacency<'a> {
    producers: BTreeMap<&'a Id, BTreeMap<&'a Id, usize>>,
    consumers: BTreeMap<&'a Id, BTreeMap<&'a Id, usize>>,
}

impl<'a> Adjacency<'a> {
    fn of(c: &'a Computon) -> Self {
        let mut producers: BTreeMap<&Id, BTreeMap<&Id, usize>> =
            c.ports().keys().map(|p| (p, BTreeMap::new())).collect();
        let mut consumers = producers.clone();
        for e in c.out_edges().values() {
            *producers.get_mut(&e.port).unwrap().entry(&e.unit).or_default() += 1;
        }
        for f in c.in_edges().values() {
            *consumers.get_mut(&f.port).unwrap().entry(&f.unit).or_default() += 1;
        }
        Adjacency { producers, consumers }
    }
}

// (in-edge colours, out-edge colours), each sorted
type UnitSignature = (Vec<Colour>, Vec<Colour>);

fn unit_signatures(c: &Computon) -> BTreeMap<&Id, UnitSignature> {
    let mut sigs: BTreeMap<&Id, UnitSignature> = c.units().iter().map(|u| (u, Default::default())).collect();
    for f in c.in_edges().values() {
        sigs.get_mut(&f.unit).unwrap().0.push(c.ports()[&f.port]);
    }
    for e in c.out_edges().values() {
        sigs.get_mut(&e.unit).unwrap().1.push(c.ports()[&e.port]);
    }
    for sig in sigs.values_mut() {
        sig.0.sort();
        sig.1.sort();
    }
    sigs
}

// A port seen through a partial unit assignment: its colour plus its edge
// counts to assigned units, named on the target side.
type Profile<'a> = (Colour, Vec<(&'a Id, usize)>, Vec<(&'a Id, usize)>);
type Profiled<'a> = Vec<(Profile<'a>, &'a Id)>;

struct Search<'a> {
    a: &'a Computon,
    b: &'a Computon,
    adj_a: Adjacency<'a>,
    adj_b: Adjacency<'a>,
    order: Vec<&'a Id>,
    candidates: BTreeMap<&'a Id, Vec<&'a Id>>,
}

impl<'a> Search<'a> {
    fn profile_a(&self, p: &'a Id, assign: &BTreeMap<&'a Id, &'a Id>) -> Profile<'a> {
        let view = |m: &BTreeMap<&'a Id, usize>| {
            let mut v: Vec<(&'a Id, usize)> = m
                .iter()
                .filter_map(|(u, n)| assign.get(u).map(|img| (*img, *n)))
                .collect();
            v.sort();
            v
        };
        (
            self.a.ports()[p],
            view(&self.adj_a.producers[p]),
            view(&self.adj_a.consumers[p]),
        )
    }

    fn profile_b(&self, p: &'a Id, image: &BTreeMap<&'a Id, ()>) -> Profile<'a> {
        let view = |m: &BTreeMap<&'a Id, usize>| {
            m.iter()
                .filter(|(u, _)| image.contains_key(*u))
                .map(|(u, n)| (*u, *n))
                .collect::<Vec<_>>()
        };
        (
            self.b.ports()[p],
            view(&self.adj_b.producers[p]),
            view(&self.adj_b.consumers[p]),
        )
    }

    fn profiles(&self, assign: &BTreeMap<&'a Id, &'a Id>) -> (Profiled<'a>, Profiled<'a>) {
        let image: BTreeMap<&'a Id, ()> = assign.values().map(|u| (*u, ())).collect();
        let mut pa: Vec<_> = self.a.ports().keys().map(|p| (self.profile_a(p, assign), p)).collect();
        let mut pb: Vec<_> = self.b.ports().keys().map(|p| (self.profile_b(p, &image), p)).collect();
        pa.sort();
        pb.sort();
        (pa, pb)
    }

    fn consistent(&self, assign: &BTreeMap<&'a Id, &'a Id>) -> bool {
        let (pa, pb) = self.profiles(assign);
        pa.iter().map(|(prof, _)| prof).eq(pb.iter().map(|(prof, _)| prof))
    }

    fn extend(&self, assign: &mut BTreeMap<&'a Id, &'a Id>, used: &mut BTreeMap<&'a Id, ()>) -> bool {
        let Some(u) = self.order.get(assign.len()).copied() else {
            return true;
        };
        for v in &self.candidates[u] {
            if used.contains_key(v) {
                continue;
            }
            assign.insert(u, v);
            used.insert(v, ());
            if self.consistent(assign) && self.extend(assign, used) {
                return true;
            }
            assign.remove(u);
            used.remove(v);
        }
        false
    }
}

/// Finds an isomorphism `a → b`, or `None` when the computons differ in shape.
///
/// The result is deterministic for given inputs.
pub fn find_isomorphism(a: &Computon, b: &Computon) -> Option<ComputonMorphism> {
    if a.units().len() != b.units().len()
        || a.ports().len() != b.ports().len()
        || a.out_edges().len() != b.out_edges().len()
        || a.in_edges().len() != b.in_edges().len()
        || a.colours() != b.colours()
    {
        return None;
    }
    let sig_a = unit_signatures(a);
    let sig_b = unit_signatures(b);
    let candidates: BTreeMap<&Id, Vec<&Id>> = sig_a
        .iter()
        .map(|(u, s)| (*u, sig_b.iter().filter(|(_, t)| *t == s).map(|(v, _)| *v).collect()))
        .collect();
    // Most constrained units first.
    let mut order: Vec<&Id> = a.units().iter().collect();
    order.sort_by_key(|u| candidates[u].len());

    let search = Search {
        a,
        b,
        adj_a: Adjacency::of(a),
        adj_b: Adjacency::of(b),
        order,
        candidates,
    };
    let mut assign = BTreeMap::new();
    if !search.consistent(&assign) || !search.extend(&mut assign, &mut BTreeMap::new()) {
        return None;
    }

    let (pa, pb) = search.profiles(&assign);
    let ports: BTreeMap<Id, Id> = pa
        .iter()
        .zip(&pb)
        .map(|((_, p), (_, q))| ((*p).clone(), (*q).clone()))
        .collect();
    let units: BTreeMap<Id, Id> = assign.iter().map(|(u, v)| ((*u).clone(), (*v).clone())).collect();

    fn pair_edges<K: Ord>(
        src: impl Iterator<Item = (K, Id)>,
        tgt: impl Iterator<Item = (K, Id)>,
    ) -> Option<BTreeMap<Id, Id>> {
        let mut buckets: BTreeMap<K, (Vec<Id>, Vec<Id>)> = BTreeMap::new();
        for (k, e) in src {
            buckets.entry(k).or_default().0.push(e);
        }
        for (k, e) in tgt {
            buckets.entry(k).or_default().1.push(e);
        }
        let mut out = BTreeMap::new();
        for (xs, ys) in buckets.into_values() {
            if xs.len() != ys.len() {
                return None;
            }
            out.extend(xs.into_iter().zip(ys));
        }
        Some(out)
    }

    let out_edges = pair_edges(
        a.out_edges()
            .iter()
            .map(|(e, x)| ((units[&x.unit].clone(), ports[&x.port].clone()), e.clone())),
        b.out_edges()
            .iter()
            .map(|(e, x)| ((x.unit.clone(), x.port.clone()), e.clone())),
    )?;
    let in_edges = pair_edges(
        a.in_edges()
            .iter()
            .map(|(f, x)| ((ports[&x.port].clone(), units[&x.unit].clone()), f.clone())),
        b.in_edges()
            .iter()
            .map(|(f, x)| ((x.port.clone(), x.unit.clone()), f.clone())),
    )?;

    let data = MorphismData {
        source: Arc::new(a.clone()),
        target: Arc::new(b.clone()),
        units,
        ports,
        out_edges,
        in_edges,
    };
    ComputonMorphism::new(data).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{make_fork, make_functional, make_glue, make_join, make_unit};
    use crate::computon::RawComputon;
    use crate::fixtures;

    #[test]
    fn forks_are_isomorphic() {
        let iso = find_isomorphism(&make_fork(), &make_fork()).unwrap();
        assert!(iso.is_isomorphism());
    }

    #[test]
    fn fork_and_join_are_not() {
        assert!(find_isomorphism(&make_fork(), &make_join()).is_none());
        assert!(find_isomorphism(&make_glue(), &make_unit()).is_none());
    }

    #[test]
    fn renamed_lambda1_is_found() {
        let l1 = fixtures::lambda1();
        let f = make_functional(&[Colour(1), Colour(2)], &[Colour(3), Colour(4)]).unwrap();
        let iso = find_isomorphism(&l1, &f).unwrap();
        assert_eq!(iso.unit("u"), "u1");
        assert_eq!(iso.port("q0"), "p1");
        assert_eq!(iso.port("o2"), "p6");
    }

    #[test]
    fn wiring_matters_not_just_degrees() {
        // x -> u -> y -> v -> z versus two units sharing their input.
        let chain = RawComputon::new()
            .unit("u")
            .unit("v")
            .port("x", 0)
            .port("y", 0)
            .port("z", 0)
            .port("w", 0)
            .in_edge("f1", "x", "u")
            .out_edge("e1", "u", "y")
            .in_edge("f2", "y", "v")
            .out_edge("e2", "v", "z")
            .in_edge("f3", "w", "v")
            .out_edge("e3", "u", "w")
            .colour(0);
        let shared = RawComputon::new()
            .unit("u")
            .unit("v")
            .port("x", 0)
            .port("y", 0)
            .port("z", 0)
            .port("w", 0)
            .in_edge("f1", "x", "u")
            .out_edge("e1", "u", "y")
            .in_edge("f2", "x", "v")
            .out_edge("e2", "v", "z")
            .in_edge("f3", "w", "v")
            .out_edge("e3", "u", "w")
            .colour(0);
        let a = Computon::new(chain).unwrap();
        let b = Computon::new(shared).unwrap();
        assert!(find_isomorphism(&a, &b).is_none());
        assert!(find_isomorphism(&a, &a).is_some());
    }

    #[test]
    fn parallel_edges_are_counted() {
        let single = make_glue();
        let doubled = Computon::new(make_glue().to_raw().in_edge("f2", "p1", "u1")).unwrap();
        assert!(find_isomorphism(&single, &doubled).is_none());
        assert!(find_isomorphism(&doubled, &doubled).is_some());
    }
}
