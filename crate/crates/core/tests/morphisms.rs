mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::{brute_isomorphic, rng, seeds};
use computon_core::gen::{self, Shape};
use computon_core::morphism::{compose_chain, validate_morphism};
use computon_core::{compose_morphisms, find_isomorphism, Computon, ComputonMorphism, Id, RawComputon};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Renames every element to a shuffled fresh name, so identifier order
/// carries no information about structure.
fn scrambled(c: &Computon, rng: &mut ChaCha8Rng) -> Computon {
    let raw = c.to_raw();
    let mut names: Vec<usize> = (0..raw.units.len() + raw.ports.len()).collect();
    names.shuffle(rng);
    let mut fresh = names.into_iter().map(|k| format!("n{k}"));
    let units: std::collections::BTreeMap<Id, Id> =
        raw.units.iter().map(|u| (u.clone(), fresh.next().unwrap())).collect();
    let ports: std::collections::BTreeMap<Id, Id> = raw
        .ports
        .iter()
        .map(|(p, _)| (p.clone(), fresh.next().unwrap()))
        .collect();
    let mut out = RawComputon::new();
    out.colours = raw.colours.clone();
    for u in &raw.units {
        out = out.unit(&units[u]);
    }
    for (p, col) in &raw.ports {
        out = out.port(&ports[p], col.0);
    }
    for (i, (_, e)) in raw.out_edges.iter().enumerate() {
        out = out.out_edge(format!("x{i}"), &units[&e.unit], &ports[&e.port]);
    }
    for (i, (_, f)) in raw.in_edges.iter().enumerate() {
        out = out.in_edge(format!("y{i}"), &ports[&f.port], &units[&f.unit]);
    }
    Computon::new(out).unwrap()
}

/// Moves one in-edge to another port of the same colour when that keeps
/// the result a computon.
fn rewired(c: &Computon, rng: &mut ChaCha8Rng) -> Option<Computon> {
    let mut raw = c.to_raw();
    let i = rng.gen_range(0..raw.in_edges.len());
    let colour = c.ports()[&raw.in_edges[i].1.port];
    let same: Vec<&Id> = c
        .ports()
        .iter()
        .filter(|(_, col)| **col == colour)
        .map(|(p, _)| p)
        .collect();
    raw.in_edges[i].1.port = (*same.choose(rng)?).clone();
    Computon::new(raw).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn inports_and_outports_reflect_backwards(seed in seeds()) {
        let m = gen::morphism(&mut rng(seed), &Shape::default());
        let (src, tgt) = (m.source(), m.target());
        let back_in = m.preimage_ports(&tgt.inports());
        let back_out = m.preimage_ports(&tgt.outports());
        prop_assert!(back_in.is_subset(&src.inports()));
        prop_assert!(back_out.is_subset(&src.outports()));
        if src.inports().is_disjoint(&m.i_vector()) {
            prop_assert_eq!(&back_in, &src.inports());
        }
        if src.outports().is_disjoint(&m.o_vector()) {
            prop_assert_eq!(&back_out, &src.outports());
        }
        if src.is_connected() {
            let grown: BTreeSet<Id> = src
                .inports()
                .intersection(&m.i_vector())
                .chain(src.outports().intersection(&m.o_vector()))
                .cloned()
                .collect();
            prop_assert!(grown.is_subset(&m.preimage_ports(&tgt.iports())));
        }
    }

    #[test]
    fn identities_and_associativity(seed in seeds()) {
        let mut r = rng(seed);
        let f = gen::morphism(&mut r, &Shape::default());
        let g = gen::extension(&mut r, f.target());
        let h = gen::extension(&mut r, g.target());
        let id_src = ComputonMorphism::identity(f.source().clone());
        let id_tgt = ComputonMorphism::identity(f.target().clone());
        prop_assert_eq!(&compose_morphisms(&f, &id_src).unwrap(), &f);
        prop_assert_eq!(&compose_morphisms(&id_tgt, &f).unwrap(), &f);
        let left = compose_morphisms(&h, &compose_morphisms(&g, &f).unwrap()).unwrap();
        let right = compose_morphisms(&compose_morphisms(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&compose_chain(&[&f, &g, &h]).unwrap(), &left);
        prop_assert!(validate_morphism(left.data()).unwrap().is_ok());
    }

    #[test]
    fn every_valid_morphism_is_injective(seed in seeds()) {
        let m = gen::morphism(&mut rng(seed), &Shape::default());
        let d = m.data();
        for map in [&d.units, &d.ports, &d.out_edges, &d.in_edges] {
            let images: BTreeSet<&Id> = map.values().collect();
            prop_assert_eq!(images.len(), map.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn scrambled_names_are_isomorphic(seed in seeds()) {
        let mut r = rng(seed);
        let c = Arc::new(gen::valid_computon(&mut r, &Shape::default()));
        let s = Arc::new(scrambled(&c, &mut r));
        let iso = find_isomorphism(&c, &s);
        prop_assert!(iso.is_some());
        let iso = iso.unwrap();
        prop_assert!(iso.is_isomorphism());
        prop_assert!(validate_morphism(iso.data()).unwrap().is_ok());
    }

    #[test]
    fn isomorphism_search_agrees_with_brute_force(seed in seeds()) {
        let mut r = rng(seed);
        let shape = Shape { max_ports: 6, ..Shape::default() };
        let c = Arc::new(gen::valid_computon(&mut r, &shape));
        prop_assume!(c.ports().len() <= 7);
        if let Some(w) = rewired(&c, &mut r) {
            let w = Arc::new(scrambled(&w, &mut r));
            prop_assert_eq!(find_isomorphism(&c, &w).is_some(), brute_isomorphic(&c, &w));
        }
    }
}
