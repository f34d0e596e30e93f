//! The token game: markings, enabledness, firing and traces.
//!
//! Firing uses set semantics on pre- and post-sets: a unit consumes one
//! token from each distinct input port and produces one on each distinct
//! output port, however many parallel edges connect them. Each port is a
//! FIFO queue, so the oldest token is consumed first.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::computon::{Colour, Computon, Id};
use crate::error::{ElementKind, ElementNotFound};

/// Steps allowed by [`run`] when the caller has no opinion.
pub const DEFAULT_STEP_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub id: Id,
    pub colour: Colour,
    pub location: Id,
}

impl Token {
    pub fn is_control(&self) -> bool {
        self.colour.is_control()
    }
}

/// A computon with tokens queued on its ports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedComputon {
    computon: Arc<Computon>,
    queues: BTreeMap<Id, VecDeque<Token>>,
    step: usize,
}

impl MarkedComputon {
    /// No tokens anywhere.
    pub fn empty(computon: Arc<Computon>) -> Self {
        let queues = computon.ports().keys().map(|p| (p.clone(), VecDeque::new())).collect();
        MarkedComputon {
            computon,
            queues,
            step: 0,
        }
    }

    pub fn computon(&self) -> &Arc<Computon> {
        &self.computon
    }

    /// Number of firings that led to this marking.
    pub fn step(&self) -> usize {
        self.step
    }

    /// Tokens on `port`, oldest first.
    pub fn tokens_at(&self, port: &str) -> Result<&VecDeque<Token>, ElementNotFound> {
        self.queues
            .get(port)
            .ok_or_else(|| ElementNotFound::new(ElementKind::Port, port))
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.queues.values().flatten()
    }

    pub fn token_count(&self) -> usize {
        self.queues.values().map(VecDeque::len).sum()
    }

    /// Token count per port, omitting empty ports.
    pub fn counts(&self) -> BTreeMap<Id, usize> {
        self.queues
            .iter()
            .filter(|(_, q)| !q.is_empty())
            .map(|(p, q)| (p.clone(), q.len()))
            .collect()
    }

    /// Whether every token sits on a port of its own colour.
    pub fn colours_agree(&self) -> bool {
        self.queues.iter().all(|(p, q)| {
            let c = self.computon.ports()[p];
            q.iter().all(|t| t.colour == c && &t.location == p)
        })
    }

    fn push(&mut self, port: &Id, id: Id) {
        let colour = self.computon.ports()[port];
        self.queues.get_mut(port).unwrap().push_back(Token {
            id,
            colour,
            location: port.clone(),
        });
    }
}

/// Places `count` fresh tokens on each listed port. Tokens are named
/// `m<k>.<port>` with `k` counting from 1 per port.
pub fn make_marking(c: &Arc<Computon>, assignment: &[(Id, usize)]) -> Result<MarkedComputon, ElementNotFound> {
    let mut m = MarkedComputon::empty(c.clone());
    for (port, count) in assignment {
        if !c.has_port(port) {
            return Err(ElementNotFound::new(ElementKind::Port, port));
        }
        for _ in 0..*count {
            let k = m.queues[port].len() + 1;
            m.push(port, format!("m{k}.{port}"));
        }
    }
    Ok(m)
}

/// Units whose every input port holds a token.
pub fn enabled_transitions(m: &MarkedComputon) -> BTreeSet<Id> {
    m.computon
        .units()
        .iter()
        .filter(|u| {
            m.computon
                .unit_pre_set(u)
                .unwrap()
                .iter()
                .all(|p| !m.queues[p].is_empty())
        })
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiringEvent {
    pub step: usize,
    pub unit: Id,
    pub consumed: BTreeMap<Id, Id>,
    pub produced: BTreeMap<Id, Id>,
}

fn write_map(f: &mut fmt::Formatter<'_>, name: &str, map: &BTreeMap<Id, Id>) -> fmt::Result {
    write!(f, "{name}{{")?;
    for (i, (p, t)) in map.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}:{t}")?;
    }
    f.write_str("}")
}

impl fmt::Display for FiringEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ", self.step, self.unit)?;
        write_map(f, "consumed", &self.consumed)?;
        f.write_str(" ")?;
        write_map(f, "produced", &self.produced)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiringError {
    #[error(transparent)]
    UnknownUnit(#[from] ElementNotFound),
    #[error("unit {0} is not enabled")]
    NotEnabled(Id),
    #[error("replay diverged at step {step}: expected {expected}, got {actual}")]
    ReplayMismatch {
        step: usize,
        expected: String,
        actual: String,
    },
}

/// Fires `u`: the oldest token leaves each input port and a fresh token
/// `t<step>.<port>` arrives on each output port.
pub fn fire(m: &MarkedComputon, u: &str) -> Result<(MarkedComputon, FiringEvent), FiringError> {
    let pre = m.computon.unit_pre_set(u)?;
    let post = m.computon.unit_post_set(u)?;
    if pre.iter().any(|p| m.queues[p].is_empty()) {
        return Err(FiringError::NotEnabled(u.into()));
    }
    let mut next = m.clone();
    next.step += 1;
    let mut consumed = BTreeMap::new();
    for p in pre {
        let t = next.queues.get_mut(p).unwrap().pop_front().unwrap();
        consumed.insert(p.clone(), t.id);
    }
    let mut produced = BTreeMap::new();
    for p in post {
        let id = format!("t{}.{}", next.step, p);
        next.push(p, id.clone());
        produced.insert(p.clone(), id);
    }
    let event = FiringEvent {
        step: next.step,
        unit: u.into(),
        consumed,
        produced,
    };
    Ok((next, event))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Always the enabled unit with the smallest identifier.
    LeastId,
    /// Uniformly among enabled units, from a seeded ChaCha8 stream.
    SeededRandom(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Quiescent,
    StepLimit,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Quiescent => "quiescent",
            Termination::StepLimit => "step-limit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: MarkedComputon,
    pub events: Vec<FiringEvent>,
    pub final_marking: MarkedComputon,
    pub termination: Termination,
}

impl Trace {
    /// Re-fires every event from the initial marking and returns the
    /// resulting marking, failing if any event comes out differently.
    pub fn replay(&self) -> Result<MarkedComputon, FiringError> {
        let mut m = self.initial.clone();
        for e in &self.events {
            let (next, actual) = fire(&m, &e.unit)?;
            if &actual != e {
                return Err(FiringError::ReplayMismatch {
                    step: e.step,
                    expected: format!("{e}"),
                    actual: format!("{actual}"),
                });
            }
            m = next;
        }
        Ok(m)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Plays the token game until no unit is enabled or `step_limit` firings
/// have happened.
pub fn run(m: &MarkedComputon, policy: Policy, step_limit: usize) -> Trace {
    let mut rng = match policy {
        Policy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Policy::LeastId => None,
    };
    let mut current = m.clone();
    let mut events = Vec::new();
    let termination = loop {
        let enabled: Vec<Id> = enabled_transitions(&current).into_iter().collect();
        if enabled.is_empty() {
            break Termination::Quiescent;
        }
        if events.len() >= step_limit {
            break Termination::StepLimit;
        }
        let pick = match rng.as_mut() {
            Some(rng) => &enabled[rng.gen_range(0..enabled.len())],
            None => &enabled[0],
        };
        let (next, event) = fire(&current, pick).expect("enabled unit fires");
        events.push(event);
        current = next;
    };
    Trace {
        initial: m.clone(),
        events,
        final_marking: current,
        termination,
    }
}
