//! Reference computons used across the test suites and examples.
//!
//! `lambda1` and `lambda2` are the two functional operands of the running
//! example; `apex0` glues the control output of the first to the control
//! input of the second, and the colour-3 data output to the colour-3 input.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::compose::{
    parallel_compose, sequential_compose, ParallelError, ParallelResult, SequentialError, SequentialResult,
};
use crate::computon::{Computon, Id, RawComputon};
use crate::morphism::{ComputonMorphism, MorphismData};

/// One unit `u`; e-inports `q0:0, i1:1, i2:2`; e-outports `q1:0, o1:3, o2:4`.
pub fn lambda1() -> Computon {
    let raw = RawComputon::new()
        .unit("u")
        .port("q0", 0)
        .port("i1", 1)
        .port("i2", 2)
        .port("q1", 0)
        .port("o1", 3)
        .port("o2", 4)
        .in_edge("f1", "q0", "u")
        .in_edge("f2", "i1", "u")
        .in_edge("f3", "i2", "u")
        .out_edge("e1", "u", "q1")
        .out_edge("e2", "u", "o1")
        .out_edge("e3", "u", "o2")
        .with_port_colours();
    Computon::new(raw).expect("lambda1 is valid")
}

/// One unit `v`; e-inports `r0:0, j1:3, j2:4`; e-outports `r1:0, w1:5`.
pub fn lambda2() -> Computon {
    let raw = RawComputon::new()
        .unit("v")
        .port("r0", 0)
        .port("j1", 3)
        .port("j2", 4)
        .port("r1", 0)
        .port("w1", 5)
        .in_edge("f1", "r0", "v")
        .in_edge("f2", "j1", "v")
        .in_edge("f3", "j2", "v")
        .out_edge("e1", "v", "r1")
        .out_edge("e2", "v", "w1")
        .with_port_colours();
    Computon::new(raw).expect("lambda2 is valid")
}

/// Trivial computon with ports `a:0` and `b:3`.
pub fn apex0() -> Computon {
    Computon::new(RawComputon::new().port("a", 0).port("b", 3).with_port_colours()).expect("apex0 is valid")
}

fn port_leg(src: &Arc<Computon>, tgt: Computon, pairs: &[(&str, &str)]) -> ComputonMorphism {
    let mut d = MorphismData::between(src.clone(), Arc::new(tgt));
    d.ports = pairs.iter().map(|(a, b)| (Id::from(*a), Id::from(*b))).collect();
    ComputonMorphism::new(d).expect("fixture leg is valid")
}

/// `a ↦ q1, b ↦ o1` into `lambda1` and `a ↦ r0, b ↦ j1` into `lambda2`.
pub fn example_legs() -> (ComputonMorphism, ComputonMorphism) {
    let apex = Arc::new(apex0());
    (
        port_leg(&apex, lambda1(), &[("a", "q1"), ("b", "o1")]),
        port_leg(&apex, lambda2(), &[("a", "r0"), ("b", "j1")]),
    )
}

/// The fused pairs of the running sequential example.
pub fn example_pairing() -> Vec<(Id, Id)> {
    [("q1", "r0"), ("o1", "j1")]
        .iter()
        .map(|(a, b)| (Id::from(*a), Id::from(*b)))
        .collect()
}

/// `lambda1 ▷ lambda2` fusing `q1=r0` and `o1=j1`.
pub fn example_sequential() -> Result<SequentialResult, SequentialError> {
    sequential_compose(&Arc::new(lambda1()), &Arc::new(lambda2()), Some(&example_pairing()))
}

/// `lambda1 | lambda2`.
pub fn example_parallel() -> Result<ParallelResult, ParallelError> {
    parallel_compose(&Arc::new(lambda1()), &Arc::new(lambda2()))
}
