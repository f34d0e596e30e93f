//! Independent oracles shared by the property suites.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use computon_core::{Colour, Computon, Id};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

/// Port-to-port reachability through at least one unit, by Warshall's
/// algorithm on a boolean adjacency matrix.
pub fn closure(c: &Computon) -> (Vec<Id>, Vec<Vec<bool>>) {
    let ports: Vec<Id> = c.ports().keys().cloned().collect();
    let idx: BTreeMap<&Id, usize> = ports.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = ports.len();
    let mut m = vec![vec![false; n]; n];
    for f in c.in_edges().values() {
        for e in c.out_edges().values() {
            if e.unit == f.unit {
                m[idx[&f.port]][idx[&e.port]] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                let row = m[k].clone();
                for (to, reach) in m[i].iter_mut().zip(row) {
                    *to |= reach;
                }
            }
        }
    }
    (ports, m)
}

/// Every port without producers reaches every port without consumers.
pub fn connected_by_closure(c: &Computon) -> bool {
    let (ports, m) = closure(c);
    let produced: BTreeSet<&Id> = c.out_edges().values().map(|e| &e.port).collect();
    let consumed: BTreeSet<&Id> = c.in_edges().values().map(|f| &f.port).collect();
    (0..ports.len()).filter(|&i| !produced.contains(&ports[i])).all(|i| {
        (0..ports.len())
            .filter(|&j| !consumed.contains(&ports[j]))
            .all(|j| m[i][j])
    })
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

type EdgeCounts = BTreeMap<(Id, Id), usize>;

fn edge_counts(c: &Computon, u: &BTreeMap<Id, Id>, p: &BTreeMap<Id, Id>) -> (EdgeCounts, EdgeCounts) {
    let mut outs = BTreeMap::new();
    for e in c.out_edges().values() {
        *outs.entry((u[&e.unit].clone(), p[&e.port].clone())).or_insert(0) += 1;
    }
    let mut ins = BTreeMap::new();
    for f in c.in_edges().values() {
        *ins.entry((p[&f.port].clone(), u[&f.unit].clone())).or_insert(0) += 1;
    }
    (outs, ins)
}

/// Isomorphism by trying every colour-preserving bijection of units and
/// ports and comparing edge multiplicities.
pub fn brute_isomorphic(a: &Computon, b: &Computon) -> bool {
    if a.units().len() != b.units().len()
        || a.ports().len() != b.ports().len()
        || a.out_edges().len() != b.out_edges().len()
        || a.in_edges().len() != b.in_edges().len()
        || a.colours() != b.colours()
    {
        return false;
    }
    let by_colour = |c: &Computon| {
        let mut m: BTreeMap<Colour, Vec<Id>> = BTreeMap::new();
        for (p, col) in c.ports() {
            m.entry(*col).or_default().push(p.clone());
        }
        m
    };
    let (pa, pb) = (by_colour(a), by_colour(b));
    if pa.keys().ne(pb.keys()) || pa.values().zip(pb.values()).any(|(x, y)| x.len() != y.len()) {
        return false;
    }
    let target = edge_counts(
        b,
        &b.units().iter().map(|u| (u.clone(), u.clone())).collect(),
        &b.ports().keys().map(|p| (p.clone(), p.clone())).collect(),
    );
    let ua: Vec<Id> = a.units().iter().cloned().collect();
    let ub: Vec<Id> = b.units().iter().cloned().collect();
    // every combination of per-colour port permutations
    let mut port_maps: Vec<BTreeMap<Id, Id>> = vec![BTreeMap::new()];
    for (col, xs) in &pa {
        let mut next = Vec::new();
        for perm in permutations(&pb[col]) {
            for m in &port_maps {
                let mut m = m.clone();
                m.extend(xs.iter().cloned().zip(perm.iter().cloned()));
                next.push(m);
            }
        }
        port_maps = next;
    }
    for up in permutations(&ub) {
        let um: BTreeMap<Id, Id> = ua.iter().cloned().zip(up).collect();
        for pm in &port_maps {
            if edge_counts(a, &um, pm) == target {
                return true;
            }
        }
    }
    false
}
