//! Semantic core: labelled transition systems, step relations and the graph
//! algorithms shared by every checker.
//!
//! Everything here is a pure function over immutable inputs.

pub mod graph;
pub mod lts;
pub mod relation;

use std::collections::BTreeSet;

use thiserror::Error;

pub use graph::{reachable, Path, ShortestPaths};
pub use lts::{EventSig, Label, Lts, LtsParts, StateId, Transition};
pub use relation::{Step, StepKind, StepRelation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("invalid state id {0}")]
    InvalidState(usize),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("step relations are over different state tables")]
    MismatchedTables,
    #[error("an LTS needs at least one initial state")]
    EmptyInits,
    #[error("{0}")]
    Invalid(String),
}

/// Labels of the outgoing transitions of `s`. An event's computed
/// precondition holds at `s` iff one of its labels is returned.
pub fn enabled_set(lts: &Lts, s: StateId) -> Result<BTreeSet<Label>, KernelError> {
    lts.check_state(s)?;
    Ok(lts.outgoing(s).iter().map(|t| t.label.clone()).collect())
}

pub fn is_deadlocked(lts: &Lts, s: StateId) -> bool {
    lts.outgoing(s).is_empty()
}

pub fn compose(r1: &StepRelation, r2: &StepRelation) -> Result<StepRelation, KernelError> {
    r1.compose(r2)
}

/// Identity on every state, without observation.
pub fn skip_relation(lts: &Lts) -> StepRelation {
    let entries = lts.state_ids().map(|s| Step { from: s, obs: Vec::new(), to: s }).collect();
    StepRelation::from_entries(lts, StepKind::Skip, entries)
}

/// The transitions of one event, each observing its label.
pub fn operation_relation(lts: &Lts, event: &str) -> Result<StepRelation, KernelError> {
    if lts.event(event).is_none() {
        return Err(KernelError::UnknownEvent(event.to_string()));
    }
    let entries = lts
        .transitions()
        .iter()
        .filter(|t| t.label.event == event)
        .map(|t| Step { from: t.from, obs: vec![t.label.clone()], to: t.to })
        .collect();
    Ok(StepRelation::from_entries(lts, StepKind::Operation, entries))
}

fn check_events(lts: &Lts, events: &BTreeSet<String>) -> Result<(), KernelError> {
    match events.iter().find(|e| lts.event(e).is_none()) {
        Some(e) => Err(KernelError::UnknownEvent(e.clone())),
        None => Ok(()),
    }
}

/// Reflexive-transitive closure of the union of the named events, with
/// observations erased.
pub fn internal_closure(lts: &Lts, events: &BTreeSet<String>) -> Result<StepRelation, KernelError> {
    check_events(lts, events)?;
    if events.is_empty() {
        return Ok(skip_relation(lts));
    }
    let entries = lts
        .transitions()
        .iter()
        .filter(|t| events.contains(&t.label.event))
        .map(|t| Step { from: t.from, obs: Vec::new(), to: t.to })
        .collect();
    Ok(StepRelation::from_entries(lts, StepKind::Composite, entries).closure())
}

/// Reachable states from which an infinite path using only `events` exists,
/// i.e. those that reach a cycle of the restricted graph.
pub fn divergent_states(lts: &Lts, events: &BTreeSet<String>) -> Result<BTreeSet<StateId>, KernelError> {
    check_events(lts, events)?;
    if events.is_empty() {
        return Ok(BTreeSet::new());
    }
    let succ = graph::restricted_successors(lts, events);
    let cyclic = graph::cyclic_states(&succ);
    let can_diverge = graph::backward_closure(&succ, &cyclic);
    Ok(reachable(lts).into_iter().filter(|s| can_diverge[s.0]).collect())
}
