//! Sequential composition: a pushout over a trivial apex that fuses
//! e-outports of the left operand with e-inports of the right operand.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::pushout::{pushout, PushoutError, PushoutResult, Side, Span};
use crate::classify::make_trivial;
use crate::computon::{Colour, Computon, Id};
use crate::error::{ElementKind, ElementNotFound};
use crate::morphism::{ComputonMorphism, MorphismData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Every e-outport of the left and every e-inport of the right is fused.
    Total,
    Partial,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Total => "total",
            Mode::Partial => "partial",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencingReport {
    pub mode: Mode,
    /// `(left e-outport, right e-inport)` pairs, in apex port order.
    pub fused_ports: Vec<(Id, Id)>,
}

/// One of the four conditions a sequencing span must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SequentialCondition {
    /// (i) the apex is trivial and every apex port is fused.
    TrivialApex,
    /// (ii) both operands are connected.
    ConnectedOperands,
    /// (iii) ports consumed on the right land on left e-outports.
    LeftOutports,
    /// (iv) ports produced on the left land on right e-inports.
    RightInports,
}

impl SequentialCondition {
    pub fn label(self) -> &'static str {
        match self {
            SequentialCondition::TrivialApex => "(i)",
            SequentialCondition::ConnectedOperands => "(ii)",
            SequentialCondition::LeftOutports => "(iii)",
            SequentialCondition::RightInports => "(iv)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedCondition {
    pub condition: SequentialCondition,
    pub detail: String,
}

impl fmt::Display for FailedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} failed: {}", self.condition.label(), self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialRejection {
    pub failed: Vec<FailedCondition>,
}

impl fmt::Display for SequentialRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.failed.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn join(ids: &BTreeSet<Id>) -> String {
    ids.iter().cloned().collect::<Vec<_>>().join(", ")
}

/// Decides whether `span` builds a sequential computon, and in which mode.
pub fn check_sequential(span: &Span) -> Result<SequencingReport, SequentialRejection> {
    let (a1, a2) = (span.left(), span.right());
    let (apex, l, r) = (span.apex(), span.left_operand(), span.right_operand());
    let i1 = a1.i_vector();
    let o2 = a2.o_vector();
    let mut failed = Vec::new();

    if !apex.is_trivial() {
        failed.push(FailedCondition {
            condition: SequentialCondition::TrivialApex,
            detail: format!("apex has {} unit(s)", apex.units().len()),
        });
    } else {
        let fused: BTreeSet<Id> = i1.intersection(&o2).cloned().collect();
        let inert: BTreeSet<Id> = apex.ports().keys().filter(|p| !fused.contains(*p)).cloned().collect();
        if !inert.is_empty() {
            failed.push(FailedCondition {
                condition: SequentialCondition::TrivialApex,
                detail: format!(
                    "apex ports {{{}}} are not produced on the left and consumed on the right",
                    join(&inert)
                ),
            });
        }
    }
    for (side, operand) in [(Side::Left, l), (Side::Right, r)] {
        if !operand.is_connected() {
            failed.push(FailedCondition {
                condition: SequentialCondition::ConnectedOperands,
                detail: format!("{side} operand is not connected"),
            });
        }
    }
    let left_image = a1.image_ports(&o2);
    let stray: BTreeSet<Id> = left_image.iter().filter(|p| !l.is_outport(p)).cloned().collect();
    if !stray.is_empty() {
        failed.push(FailedCondition {
            condition: SequentialCondition::LeftOutports,
            detail: format!("left ports {{{}}} are not e-outports", join(&stray)),
        });
    }
    let right_image = a2.image_ports(&i1);
    let stray: BTreeSet<Id> = right_image.iter().filter(|p| !r.is_inport(p)).cloned().collect();
    if !stray.is_empty() {
        failed.push(FailedCondition {
            condition: SequentialCondition::RightInports,
            detail: format!("right ports {{{}}} are not e-inports", join(&stray)),
        });
    }
    if !failed.is_empty() {
        return Err(SequentialRejection { failed });
    }

    let mode = if left_image == l.outports() && right_image == r.inports() {
        Mode::Total
    } else {
        Mode::Partial
    };
    let fused_ports = apex
        .ports()
        .keys()
        .map(|p| (a1.port(p).clone(), a2.port(p).clone()))
        .collect();
    Ok(SequencingReport { mode, fused_ports })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequentialError {
    #[error("not sequentiable: {0} operand not connected")]
    NotSequentiable(Side),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error(transparent)]
    ElementNotFound(#[from] ElementNotFound),
    #[error("rejected: {0}")]
    Rejected(SequentialRejection),
    #[error(transparent)]
    Pushout(#[from] PushoutError),
}

/// The composite together with the span that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialResult {
    pub span: Span,
    pub pushout: PushoutResult,
    pub report: SequencingReport,
}

/// The least control e-outport of `l` paired with the least control
/// e-inport of `r`.
pub fn default_pairing(l: &Computon, r: &Computon) -> Option<(Id, Id)> {
    Some((least_control_outport(l)?, least_control_inport(r)?))
}

pub fn least_control_outport(c: &Computon) -> Option<Id> {
    c.outports().into_iter().find(|p| c.ports()[p].is_control())
}

pub fn least_control_inport(c: &Computon) -> Option<Id> {
    c.inports().into_iter().find(|p| c.ports()[p].is_control())
}

/// Builds the trivial apex and both legs for `pairing`.
pub fn sequencing_span(l: &Arc<Computon>, r: &Arc<Computon>, pairing: &[(Id, Id)]) -> Result<Span, SequentialError> {
    let mut seen_l = BTreeSet::new();
    let mut seen_r = BTreeSet::new();
    let mut colours = Vec::new();
    for (p, q) in pairing {
        let cp = l
            .colour_of(p)
            .ok_or_else(|| ElementNotFound::new(ElementKind::Port, p))?;
        let cq = r
            .colour_of(q)
            .ok_or_else(|| ElementNotFound::new(ElementKind::Port, q))?;
        if cp != cq {
            return Err(SequentialError::InvalidPairing(format!(
                "{p} has colour {cp} but {q} has colour {cq}"
            )));
        }
        if !seen_l.insert(p) {
            return Err(SequentialError::InvalidPairing(format!(
                "left port {p} is paired twice"
            )));
        }
        if !seen_r.insert(q) {
            return Err(SequentialError::InvalidPairing(format!(
                "right port {q} is paired twice"
            )));
        }
        colours.push(cp);
    }
    let apex = match make_trivial(&colours) {
        Ok(apex) => Arc::new(apex),
        Err(_) => {
            // no control pair: the apex itself is not a computon
            return Err(SequentialError::Rejected(SequentialRejection {
                failed: alloc::vec![FailedCondition {
                    condition: SequentialCondition::TrivialApex,
                    detail: String::from("the pairing fuses no control ports, so the apex is not a computon"),
                }],
            }));
        }
    };
    let leg = |target: &Arc<Computon>, pick: fn(&(Id, Id)) -> &Id| {
        let mut d = MorphismData::between(apex.clone(), target.clone());
        d.ports = pairing
            .iter()
            .enumerate()
            .map(|(i, pair)| (format!("p{}", i + 1), pick(pair).clone()))
            .collect();
        ComputonMorphism::new(d).expect("legs out of a trivial apex are morphisms")
    };
    Ok(Span::new(leg(l, |(p, _)| p), leg(r, |(_, q)| q)).expect("legs share the apex"))
}

/// `l ▷ r` along `pairing`, or along [`default_pairing`] when absent.
pub fn sequential_compose(
    l: &Arc<Computon>,
    r: &Arc<Computon>,
    pairing: Option<&[(Id, Id)]>,
) -> Result<SequentialResult, SequentialError> {
    for (side, operand) in [(Side::Left, l), (Side::Right, r)] {
        if !operand.is_connected() {
            return Err(SequentialError::NotSequentiable(side));
        }
    }
    let default;
    let pairing = match pairing {
        Some(p) => p,
        None => {
            default = [default_pairing(l, r).expect("connected computons have control e-ports")];
            &default[..]
        }
    };
    let span = sequencing_span(l, r, pairing)?;
    let report = check_sequential(&span).map_err(SequentialError::Rejected)?;
    let pushout = pushout(&span)?;
    Ok(SequentialResult { span, pushout, report })
}

/// Colours of the e-inports, e-outports and i-ports of `c`, as sorted lists
/// with repetition.
pub fn port_colour_profile(c: &Computon) -> [Vec<Colour>; 3] {
    let colours = |ps: BTreeSet<Id>| {
        let mut v: Vec<Colour> = ps.iter().map(|p| c.ports()[p]).collect();
        v.sort();
        v
    };
    [colours(c.inports()), colours(c.outports()), colours(c.iports())]
}
