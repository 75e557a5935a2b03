use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::kernel::{Label, Lts, Path, ShortestPaths, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// What a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Violation {
    Initialization,
    Consistency,
    Enabledness,
    RestrictedConsistency,
    SkipRefinement,
    RelativeDeadlock,
    TraceInclusion,
    DivergencePreservation,
    Divergence,
    Variant,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::Initialization => "initialization",
            Violation::Consistency => "consistency",
            Violation::Enabledness => "enabledness",
            Violation::RestrictedConsistency => "restricted-consistency",
            Violation::SkipRefinement => "skip-refinement",
            Violation::RelativeDeadlock => "relative-deadlock",
            Violation::TraceInclusion => "trace-inclusion",
            Violation::DivergencePreservation => "divergence-preservation",
            Violation::Divergence => "divergence",
            Violation::Variant => "variant",
        })
    }
}

/// A counterexample. `concrete_state` is where the violation is observed;
/// `trace` leads there from a concrete initial state when it is reachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub violation: Violation,
    pub operation: Option<String>,
    pub abstract_state: Option<StateId>,
    pub concrete_state: StateId,
    pub label: Option<Label>,
    pub target: Option<StateId>,
    pub trace: Option<Path>,
    pub detail: String,
}

impl Witness {
    pub fn new(violation: Violation, concrete_state: StateId) -> Self {
        Witness {
            violation,
            operation: None,
            abstract_state: None,
            concrete_state,
            label: None,
            target: None,
            trace: None,
            detail: String::new(),
        }
    }

    pub fn op(mut self, op: impl Into<String>) -> Self {
        self.operation = Some(op.into());
        self
    }

    pub fn at(mut self, a: StateId) -> Self {
        self.abstract_state = Some(a);
        self
    }

    pub fn label(mut self, l: Label) -> Self {
        self.label = Some(l);
        self
    }

    pub fn target(mut self, t: StateId) -> Self {
        self.target = Some(t);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    /// Human-readable summary, resolving state ids against the machines.
    pub fn describe(&self, a: Option<&Lts>, c: &Lts) -> String {
        let mut out = format!("{} violated", self.violation);
        if let Some(op) = &self.operation {
            out += &format!(" by {op}");
        }
        out += &format!("\n  concrete state {} [{}]", self.concrete_state, c.show_state(self.concrete_state));
        if let (Some(s), Some(a)) = (self.abstract_state, a) {
            out += &format!("\n  abstract state {s} [{}]", a.show_state(s));
        }
        if let Some(l) = &self.label {
            out += &format!("\n  label {l}");
        }
        if let Some(t) = self.target {
            out += &format!("\n  target {t} [{}]", c.show_state(t));
        }
        if !self.detail.is_empty() {
            out += &format!("\n  {}", self.detail);
        }
        if let Some(p) = &self.trace {
            out += &format!("\n  trace from {} [{}]", p.init, c.show_state(p.init));
            for (l, s) in &p.steps {
                out += &format!("\n    {l} -> {s} [{}]", c.show_state(*s));
            }
        }
        out
    }
}

/// Counts describing the inputs and the work done.
pub type Diagnostics = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub diagnostics: Diagnostics,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn pass(diagnostics: Diagnostics) -> Self {
        Verdict { status: Status::Pass, witness: None, diagnostics, warnings: Vec::new() }
    }

    pub fn fail(witness: Witness, diagnostics: Diagnostics) -> Self {
        Verdict { status: Status::Fail, witness: Some(witness), diagnostics, warnings: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }
}

type Key = (usize, StateId, Option<StateId>, Violation, Option<String>, Option<Label>, Option<StateId>);

fn key(w: &Witness, paths: &ShortestPaths) -> Key {
    (
        paths.depth(w.concrete_state).unwrap_or(usize::MAX),
        w.concrete_state,
        w.abstract_state,
        w.violation,
        w.operation.clone(),
        w.label.clone(),
        w.target,
    )
}

/// Picks the minimal witness: shallowest concrete state first, then state
/// ids, violation kind, operation, label and target. Attaches its trace.
pub(crate) fn minimal(witnesses: Vec<Witness>, paths: &ShortestPaths) -> Option<Witness> {
    let mut best = witnesses.into_iter().min_by_key(|w| key(w, paths))?;
    best.trace = paths.path_to(best.concrete_state);
    Some(best)
}

/// Runs `check` on every item in parallel and keeps the minimal witness.
pub(crate) fn first_violation<T, F>(items: &[T], paths: &ShortestPaths, check: F) -> Option<Witness>
where
    T: Sync,
    F: Fn(&T) -> Vec<Witness> + Sync,
{
    let found: Vec<Witness> = items
        .par_iter()
        .filter_map(|item| check(item).into_iter().min_by_key(|w| key(w, paths)))
        .collect();
    minimal(found, paths)
}
