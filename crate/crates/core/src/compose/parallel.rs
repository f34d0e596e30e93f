//! Parallel composition `a | b`: a fork splits control into both operands
//! and a join collects it again, assembled from four sequential pushouts,
//! two merging pushouts, a coproduct and a final pushout.
//!
//! Objects are numbered `λ0..λ16` and morphisms `α1..α26`:
//!
//! ```text
//! λ5  = a ▷ join    over λ0 (α2: λ0→a, α1: λ0→join),   α6: a→λ5,     α5: join→λ5
//! λ6  = fork ▷ a    over λ1 (α4: λ1→fork, α3: λ1→a),   α8: fork→λ6,  α7: a→λ6
//! λ13 = fork ▷ b    over λ8 (α11, α12),                α15: fork→λ13, α16: b→λ13
//! λ14 = b ▷ join    over λ9 (α13, α14),                α17: b→λ14,   α18: join→λ14
//! λ7  = λ6 +_a λ5,                                     α10: λ6→λ7,   α9: λ5→λ7
//! λ15 = λ13 +_b λ14,                                   α19: λ13→λ15, α20: λ14→λ15
//! join + fork with injections α21, α22
//! α23 = [α9∘α5, α10∘α8∘φ],  α24 = [α20∘α18∘ψ, α19∘α15]
//! λ16 = λ7 +_(join+fork) λ15,                          α25: λ7→λ16,  α26: λ15→λ16
//! ```
//!
//! `φ: λ10 → λ4` and `ψ: λ2 → λ12` are the isomorphisms between the two
//! forks and the two joins. The operand `a` takes the fork's first
//! ec-outport and the join's first ec-inport.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::pushout::{copair, coproduct, pushout, Side, Span};
use super::sequential::{check_sequential, least_control_inport, least_control_outport, sequential_compose};
use crate::classify::{classify, make_fork, make_join, make_unit, ComputonClass};
use crate::computon::{validate_computon, Computon, Id};
use crate::morphism::{compose_chain, find_isomorphism, validate_morphism, ComputonMorphism};
use crate::report::Report;

/// Fork ec-outport handed to the first operand; the second gets `p3`.
const FORK_OUT_A: &str = "p2";
const FORK_OUT_B: &str = "p3";
/// Join ec-inport fed by the first operand; the second feeds `p2`.
const JOIN_IN_A: &str = "p1";
const JOIN_IN_B: &str = "p2";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParallelError {
    #[error("not parallelisable: {0} operand not connected")]
    NotParallelisable(Side),
    #[error("parallel construction failed at {stage}: {reason}")]
    Construction { stage: &'static str, reason: String },
}

fn stage<E: ToString>(stage: &'static str) -> impl FnOnce(E) -> ParallelError {
    move |e| ParallelError::Construction {
        stage,
        reason: e.to_string(),
    }
}

/// Every intermediate object and morphism of a parallel composition.
/// Source and target of each `αj`, as object indices; index 17 is the sum
/// `λ2 + λ10`.
const ALPHA_ENDPOINTS: [(usize, usize); 26] = [
    (0, 2),
    (0, 3),
    (1, 3),
    (1, 4),
    (2, 5),
    (3, 5),
    (3, 6),
    (4, 6),
    (5, 7),
    (6, 7),
    (8, 10),
    (8, 11),
    (9, 11),
    (9, 12),
    (10, 13),
    (11, 13),
    (11, 14),
    (12, 14),
    (13, 15),
    (14, 15),
    (2, 17),
    (10, 17),
    (17, 7),
    (17, 15),
    (7, 16),
    (15, 16),
];

/// Index of the sum `λ2 + λ10` in [`ParallelDiagram::object`].
pub const SUM_OBJECT: usize = 17;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelDiagram {
    objects: Vec<Arc<Computon>>,
    morphisms: Vec<ComputonMorphism>,
    /// `λ2 + λ10`
    pub sum: Arc<Computon>,
    /// `φ: λ10 → λ4`
    pub fork_iso: ComputonMorphism,
    /// `ψ: λ2 → λ12`
    pub join_iso: ComputonMorphism,
}

impl ParallelDiagram {
    /// `λi` for `i` in `0..=16`.
    pub fn lambda(&self, i: usize) -> &Arc<Computon> {
        &self.objects[i]
    }

    /// `αj` for `j` in `1..=26`.
    pub fn alpha(&self, j: usize) -> &ComputonMorphism {
        &self.morphisms[j - 1]
    }

    /// `λi` for `i` in `0..=16`, or the sum for [`SUM_OBJECT`].
    pub fn object(&self, i: usize) -> &Arc<Computon> {
        if i == SUM_OBJECT {
            &self.sum
        } else {
            &self.objects[i]
        }
    }

    /// Object indices of the source and target of `αj`.
    pub fn alpha_endpoints(&self, j: usize) -> (usize, usize) {
        ALPHA_ENDPOINTS[j - 1]
    }

    pub fn objects(&self) -> &[Arc<Computon>] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[ComputonMorphism] {
        &self.morphisms
    }

    /// Re-checks every object, morphism, square and side condition of the
    /// diagram.
    pub fn check_commutativity(&self) -> Report<DiagramViolation> {
        let mut v = Vec::new();
        let mut fail = |check: String, detail: String| v.push(DiagramViolation { check, detail });

        for (i, obj) in self.objects.iter().chain(core::iter::once(&self.sum)).enumerate() {
            let report = validate_computon(&obj.to_raw());
            if !report.as_ref().is_ok_and(Report::is_ok) {
                fail(format!("object λ{i} is a computon"), format!("{report:?}"));
            }
        }
        for (j, m) in self.morphisms.iter().enumerate() {
            let report = validate_morphism(m.data());
            if !report.as_ref().is_ok_and(Report::is_ok) {
                fail(format!("α{} is a morphism", j + 1), format!("{report:?}"));
            }
            let (src, tgt) = ALPHA_ENDPOINTS[j];
            if **m.source() != **self.object(src) || **m.target() != **self.object(tgt) {
                fail(
                    format!("α{} endpoints", j + 1),
                    format!("expected object {src} to object {tgt}"),
                );
            }
        }

        // Each equation lists two chains of morphism indices, first applied
        // first. Index 0 is φ and index 100 is ψ.
        let pick = |k: usize| match k {
            0 => &self.fork_iso,
            100 => &self.join_iso,
            j => self.alpha(j),
        };
        let chain = |ks: &[usize]| {
            let ms: Vec<&ComputonMorphism> = ks.iter().map(|k| pick(*k)).collect();
            compose_chain(&ms)
        };
        let equations: [(&str, &[usize], &[usize]); 19] = [
            ("square λ0→λ5", &[2, 6], &[1, 5]),
            ("square λ1→λ6", &[4, 8], &[3, 7]),
            ("square λ8→λ13", &[11, 15], &[12, 16]),
            ("square λ9→λ14", &[13, 17], &[14, 18]),
            ("square λ3→λ7", &[7, 10], &[6, 9]),
            ("square λ11→λ15", &[16, 19], &[17, 20]),
            ("square λ2+λ10→λ16", &[23, 25], &[24, 26]),
            ("triangle α23∘α21", &[21, 23], &[5, 9]),
            ("triangle α23∘α22", &[22, 23], &[0, 8, 10]),
            ("triangle α24∘α21", &[21, 24], &[100, 18, 20]),
            ("triangle α24∘α22", &[22, 24], &[15, 19]),
            ("λ4 ≅ λ10 into λ16", &[0, 8, 10, 25], &[15, 19, 26]),
            ("λ2 ≅ λ12 into λ16", &[5, 9, 25], &[100, 18, 20, 26]),
            ("λ3 into λ16", &[6, 9, 25], &[7, 10, 25]),
            ("λ11 into λ16", &[16, 19, 26], &[17, 20, 26]),
            ("λ0 into λ16", &[1, 21, 23, 25], &[1, 21, 24, 26]),
            ("λ8 into λ16", &[11, 22, 23, 25], &[11, 22, 24, 26]),
            ("λ1 into λ16", &[4, 8, 10, 25], &[3, 7, 10, 25]),
            ("λ9 into λ16", &[13, 17, 20, 26], &[14, 18, 20, 26]),
        ];
        for (name, lhs, rhs) in equations {
            match (chain(lhs), chain(rhs)) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(_), Ok(_)) => fail(String::from(name), String::from("paths differ")),
                (l, r) => fail(String::from(name), format!("{:?} / {:?}", l.err(), r.err())),
            }
        }

        let unit = make_unit();
        for i in [0, 1, 8, 9] {
            if find_isomorphism(self.lambda(i), &unit).is_none() {
                fail(String::from("condition 1"), format!("λ{i} is not a unit computon"));
            }
        }
        for i in [3, 11] {
            if !self.lambda(i).is_connected() {
                fail(String::from("condition 2"), format!("λ{i} is not connected"));
            }
        }
        for i in [4, 10] {
            if classify(self.lambda(i)) != ComputonClass::Fork {
                fail(String::from("condition 3"), format!("λ{i} is not a fork"));
            }
        }
        for i in [2, 12] {
            if classify(self.lambda(i)) != ComputonClass::Join {
                fail(String::from("condition 4"), format!("λ{i} is not a join"));
            }
        }
        for (cond, l, r) in [(5, 2, 1), (6, 4, 3), (7, 11, 12), (8, 13, 14)] {
            match Span::new(self.alpha(l).clone(), self.alpha(r).clone()) {
                Ok(span) => {
                    if let Err(rej) = check_sequential(&span) {
                        fail(format!("condition {cond}"), rej.to_string());
                    }
                }
                Err(e) => fail(format!("condition {cond}"), e.to_string()),
            }
        }
        let (a23, a24) = (self.alpha(23), self.alpha(24));
        let shared: BTreeSet<Id> = a23.o_vector().intersection(&a24.o_vector()).cloned().collect();
        if !shared.is_empty() {
            fail(String::from("condition 9"), format!("o-vectors share {shared:?}"));
        }
        let shared: BTreeSet<Id> = a23.i_vector().intersection(&a24.i_vector()).cloned().collect();
        if !shared.is_empty() {
            fail(String::from("condition 10"), format!("i-vectors share {shared:?}"));
        }
        Report { violations: v }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramViolation {
    pub check: String,
    pub detail: String,
}

impl fmt::Display for DiagramViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelResult {
    pub result: Arc<Computon>,
    pub diagram: ParallelDiagram,
}

/// `a | b`.
pub fn parallel_compose(a: &Arc<Computon>, b: &Arc<Computon>) -> Result<ParallelResult, ParallelError> {
    for (side, operand) in [(Side::Left, a), (Side::Right, b)] {
        if !operand.is_connected() {
            return Err(ParallelError::NotParallelisable(side));
        }
    }
    let fork = Arc::new(make_fork());
    let join = Arc::new(make_join());
    let (join2, fork4, fork10, join12) = (join.clone(), fork.clone(), fork.clone(), join.clone());

    let pair = |x: &str, y: &str| [(Id::from(x), Id::from(y))];
    let least_out = |c: &Computon| least_control_outport(c).expect("connected computons have control e-ports");
    let least_in = |c: &Computon| least_control_inport(c).expect("connected computons have control e-ports");

    let s5 = sequential_compose(a, &join2, Some(&pair(&least_out(a), JOIN_IN_A))).map_err(stage("λ5"))?;
    let s6 = sequential_compose(&fork4, a, Some(&pair(FORK_OUT_A, &least_in(a)))).map_err(stage("λ6"))?;
    let s13 = sequential_compose(&fork10, b, Some(&pair(FORK_OUT_B, &least_in(b)))).map_err(stage("λ13"))?;
    let s14 = sequential_compose(b, &join12, Some(&pair(&least_out(b), JOIN_IN_B))).map_err(stage("λ14"))?;

    let (a2, a1) = (s5.span.left().clone(), s5.span.right().clone());
    let (a6, a5) = (s5.pushout.left_inj.clone(), s5.pushout.right_inj.clone());
    let (a4, a3) = (s6.span.left().clone(), s6.span.right().clone());
    let (a8, a7) = (s6.pushout.left_inj.clone(), s6.pushout.right_inj.clone());
    let (a11, a12) = (s13.span.left().clone(), s13.span.right().clone());
    let (a15, a16) = (s13.pushout.left_inj.clone(), s13.pushout.right_inj.clone());
    let (a13, a14) = (s14.span.left().clone(), s14.span.right().clone());
    let (a17, a18) = (s14.pushout.left_inj.clone(), s14.pushout.right_inj.clone());

    let m7 = pushout(&Span::new(a7.clone(), a6.clone()).map_err(stage("λ7"))?).map_err(stage("λ7"))?;
    let (a10, a9) = (m7.left_inj.clone(), m7.right_inj.clone());
    let m15 = pushout(&Span::new(a16.clone(), a17.clone()).map_err(stage("λ15"))?).map_err(stage("λ15"))?;
    let (a19, a20) = (m15.left_inj.clone(), m15.right_inj.clone());

    let co = coproduct(&join2, &fork10);
    let (a21, a22) = (co.inj_left.clone(), co.inj_right.clone());
    let phi = find_isomorphism(&fork10, &fork4).ok_or_else(|| stage("φ")("forks are not isomorphic"))?;
    let psi = find_isomorphism(&join2, &join12).ok_or_else(|| stage("ψ")("joins are not isomorphic"))?;

    let join_into_7 = compose_chain(&[&a5, &a9]).map_err(stage("α23"))?;
    let fork_into_7 = compose_chain(&[&phi, &a8, &a10]).map_err(stage("α23"))?;
    let a23 = copair(&co, &join_into_7, &fork_into_7).map_err(stage("α23"))?;
    let join_into_15 = compose_chain(&[&psi, &a18, &a20]).map_err(stage("α24"))?;
    let fork_into_15 = compose_chain(&[&a15, &a19]).map_err(stage("α24"))?;
    let a24 = copair(&co, &join_into_15, &fork_into_15).map_err(stage("α24"))?;

    let m16 = pushout(&Span::new(a23.clone(), a24.clone()).map_err(stage("λ16"))?).map_err(stage("λ16"))?;
    let (a25, a26) = (m16.left_inj.clone(), m16.right_inj.clone());

    let objects = alloc::vec![
        a1.source().clone(),
        a3.source().clone(),
        join2,
        a.clone(),
        fork4,
        s5.pushout.result.clone(),
        s6.pushout.result.clone(),
        m7.result.clone(),
        a11.source().clone(),
        a13.source().clone(),
        fork10,
        b.clone(),
        join12,
        s13.pushout.result.clone(),
        s14.pushout.result.clone(),
        m15.result.clone(),
        m16.result.clone(),
    ];
    let morphisms = alloc::vec![
        a1, a2, a3, a4, a5, a6, a7, a8, a9, a10, a11, a12, a13, a14, a15, a16, a17, a18, a19, a20, a21, a22, a23, a24,
        a25, a26,
    ];
    Ok(ParallelResult {
        result: m16.result,
        diagram: ParallelDiagram {
            objects,
            morphisms,
            sum: co.result,
            fork_iso: phi,
            join_iso: psi,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::make_glue;
    use crate::compose::port_colour_profile;
    use crate::computon::Colour;
    use crate::fixtures;

    fn cs(v: &[u32]) -> Vec<Colour> {
        v.iter().map(|&c| Colour(c)).collect()
    }

    #[test]
    fn lambda1_beside_lambda2() {
        let par = fixtures::example_parallel().unwrap();
        let c = &par.result;
        assert_eq!(c.units().len(), 4);
        let [ins, outs, inner] = port_colour_profile(c);
        assert_eq!(ins, cs(&[0, 1, 2, 3, 4]));
        assert_eq!(outs, cs(&[0, 3, 4, 5]));
        assert_eq!(inner, cs(&[0, 0, 0, 0]));
        assert_eq!(classify(par.diagram.lambda(4)), ComputonClass::Fork);
        assert_eq!(par.diagram.objects().len(), 17);
        assert_eq!(par.diagram.morphisms().len(), 26);
    }

    #[test]
    fn diagram_commutes() {
        let par = fixtures::example_parallel().unwrap();
        let report = par.diagram.check_commutativity();
        assert!(report.is_ok(), "{report}");
    }

    #[test]
    fn glue_beside_glue() {
        let g = Arc::new(make_glue());
        let par = parallel_compose(&g, &g).unwrap();
        let c = &par.result;
        assert_eq!(c.units().len(), 4);
        assert_eq!(c.inports().len(), 1);
        assert_eq!(c.outports().len(), 1);
        assert!(c.is_connected());
        assert!(par.diagram.check_commutativity().is_ok());
    }

    #[test]
    fn operand_order_does_not_matter_up_to_isomorphism() {
        let (l1, l2) = (Arc::new(fixtures::lambda1()), Arc::new(fixtures::lambda2()));
        let ab = parallel_compose(&l1, &l2).unwrap().result;
        let ba = parallel_compose(&l2, &l1).unwrap().result;
        assert_ne!(ab, ba);
        assert!(find_isomorphism(&ab, &ba).is_some());
    }

    #[test]
    fn disconnected_operand_is_refused() {
        let (unit, g) = (Arc::new(make_unit()), Arc::new(make_glue()));
        assert_eq!(
            parallel_compose(&unit, &g).unwrap_err(),
            ParallelError::NotParallelisable(Side::Left)
        );
        assert_eq!(
            parallel_compose(&g, &unit).unwrap_err(),
            ParallelError::NotParallelisable(Side::Right)
        );
    }
}
