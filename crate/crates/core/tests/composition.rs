mod common;

use std::sync::Arc;

use common::{rng, seeds};
use computon_core::compose::{
    check_sequential, is_pushable, parallel_compose, pushout, sequential_compose, set_pushout,
    verify_universal_property, Cocone, Mode, PushoutError, PushoutResult, Span, MEDIATOR_SEARCH_LIMIT,
};
use computon_core::gen::{self, Shape, SpanKind};
use computon_core::morphism::validate_morphism;
use computon_core::{compose_morphisms, find_isomorphism, Computon, ComputonMorphism, Violation};
use proptest::prelude::*;

fn square_commutes(span: &Span, po: &PushoutResult) -> bool {
    compose_morphisms(&po.left_inj, span.left()).unwrap() == compose_morphisms(&po.right_inj, span.right()).unwrap()
}

// Some e-inport reaches some e-outport: what the connectivity arguments
// for composites establish.
fn some_flow(c: &Computon) -> bool {
    let outs = c.outports();
    c.inports()
        .iter()
        .any(|p| outs.iter().any(|q| c.flows_to(p, q, false).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pushouts_exist_only_for_pushable_spans(seed in seeds()) {
        let (_, span) = gen::span(&mut rng(seed), &Shape::default());
        let pushable = is_pushable(&span).is_ok();
        match set_pushout(&span) {
            Ok(po) => {
                prop_assert!(pushable);
                prop_assert!(square_commutes(&span, &po));
                prop_assert!(validate_morphism(po.left_inj.data()).unwrap().is_ok());
                prop_assert!(validate_morphism(po.right_inj.data()).unwrap().is_ok());
                prop_assert_eq!(pushout(&span).unwrap(), po);
            }
            // a pushable gluing can still close every control e-port into a
            // cycle; nothing else keeps a pushable quotient from being a computon
            Err(PushoutError::NotAComputon(report)) => {
                if pushable {
                    prop_assert!(report
                        .violations
                        .iter()
                        .all(|v| matches!(v, Violation::NoEcInport | Violation::NoEcOutport)));
                }
            }
            Err(PushoutError::InjectionInvalid { .. }) => prop_assert!(!pushable),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
        if !pushable {
            prop_assert!(matches!(pushout(&span), Err(PushoutError::NotPushable(_))));
        }
    }

    #[test]
    fn boundary_gluings_always_push_out(seed in seeds()) {
        let span = gen::span_of_kind(&mut rng(seed), &Shape::default(), SpanKind::Boundary);
        prop_assert!(is_pushable(&span).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pushouts_are_universal(seed in seeds()) {
        let mut r = rng(seed);
        let (_, span) = gen::span(&mut r, &Shape::default());
        let small = [span.left_operand(), span.right_operand()]
            .iter()
            .all(|c| c.ports().len() <= MEDIATOR_SEARCH_LIMIT);
        if let (true, Ok(po)) = (small, pushout(&span)) {
            let own = Cocone { left: po.left_inj.clone(), right: po.right_inj.clone() };
            prop_assert_eq!(verify_universal_property(&span, &po, &own), Ok(true));
            for _ in 0..3 {
                let cocone = gen::cocone(&mut r, &po);
                prop_assert_eq!(verify_universal_property(&span, &po, &cocone), Ok(true));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn connected_pairs_always_sequence(seed in seeds()) {
        let mut r = rng(seed);
        let l = Arc::new(gen::connected_computon(&mut r, &Shape::default()));
        let rr = Arc::new(gen::connected_computon(&mut r, &Shape::default()));
        let seq = sequential_compose(&l, &rr, None).unwrap();
        prop_assert_eq!(seq.report.fused_ports.len(), 1);
        prop_assert!(check_sequential(&seq.span).is_ok());
        prop_assert!(is_pushable(&seq.span).is_ok());
        prop_assert!(some_flow(&seq.pushout.result));
    }

    #[test]
    fn total_sequencing_keeps_the_outer_interface(seed in seeds()) {
        let (l, r, pairing) = gen::totally_sequentiable(&mut rng(seed), &Shape::default());
        let (l, r) = (Arc::new(l), Arc::new(r));
        let seq = sequential_compose(&l, &r, Some(&pairing)).unwrap();
        prop_assert_eq!(seq.report.mode, Mode::Total);
        let c = &seq.pushout.result;
        prop_assert_eq!(seq.pushout.left_inj.image_ports(&l.inports()), c.inports());
        prop_assert_eq!(seq.pushout.right_inj.image_ports(&r.outports()), c.outports());
        // the single control pair still works whenever everything can be fused
        prop_assert_eq!(sequential_compose(&l, &r, None).unwrap().report.fused_ports.len(), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn connected_pairs_always_run_in_parallel(seed in seeds()) {
        let mut r = rng(seed);
        let a = Arc::new(gen::connected_computon(&mut r, &Shape::default()));
        let b = Arc::new(gen::connected_computon(&mut r, &Shape::default()));
        let ab = parallel_compose(&a, &b).unwrap();
        let report = ab.diagram.check_commutativity();
        prop_assert!(report.is_ok(), "{}", report);
        let ba = parallel_compose(&b, &a).unwrap();
        prop_assert!(find_isomorphism(&ab.result, &ba.result).is_some());
        let c = &ab.result;
        prop_assert_eq!(c.units().len(), a.units().len() + b.units().len() + 2);
        prop_assert_eq!(c.interface().control_inports().len(), a.interface().control_inports().len() + b.interface().control_inports().len() - 1);
        prop_assert!(some_flow(c));
        let _: &ComputonMorphism = ab.diagram.alpha(26);
    }
}
