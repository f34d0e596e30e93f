//! Pushouts, coproducts, and the sequential and parallel composition
//! operators built from them.

mod parallel;
mod pushout;
mod sequential;

pub use parallel::{parallel_compose, DiagramViolation, ParallelDiagram, ParallelError, ParallelResult, SUM_OBJECT};
pub use pushout::{
    copair, coproduct, is_pushable, pushout, set_pushout, verify_universal_property, CapacityError, Cocone, Coproduct,
    Origin, Provenance, PushableViolation, PushoutError, PushoutResult, Side, Span, SpanError, MEDIATOR_SEARCH_LIMIT,
};
pub use sequential::{
    check_sequential, default_pairing, least_control_inport, least_control_outport, port_colour_profile,
    sequencing_span, sequential_compose, FailedCondition, Mode, SequencingReport, SequentialCondition, SequentialError,
    SequentialRejection, SequentialResult,
};
