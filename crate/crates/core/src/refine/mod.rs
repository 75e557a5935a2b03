//! Refinement checkers: downward simulation, trace refinement, Event-B
//! simple refinement, weak and action refinement, divergence and variants.
//!
//! Every checker takes grounded machines and returns a [`Verdict`]; failing
//! verdicts carry the minimal [`Witness`] under a fixed ordering, so results
//! do not depend on thread scheduling.

mod action;
mod chain;
mod common;
mod divergence;
mod eventb;
pub mod mapping;
mod retrieve;
mod simulation;
mod trace;
mod verdict;
mod weak;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernel::KernelError;
use crate::speclang::{EvalError, ParseError, TypeError};

pub use action::check_action_refinement;
pub use chain::{check_nontransitivity_witness, ChainReport};
pub use divergence::{check_divergence, VariantSpec};
pub use eventb::{check_eventb, EventBOptions};
pub use mapping::{
    relabel, ActionEntry, ActionMapping, AlphabetMapping, ExtensionPolicy, Image, MappingFile, ResolvedMapping,
    Target,
};
pub use retrieve::RetrieveRelation;
pub use simulation::{check_downward_simulation, check_operation_pair, greatest_simulation};
pub use trace::check_trace_refinement;
pub use verdict::{Diagnostics, Status, Verdict, Violation, Witness};
pub use weak::{check_weak_refinement, WeakOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefineError {
    #[error("unknown {side} event `{name}`")]
    UnknownEvent { side: &'static str, name: String },
    #[error("concrete event `{concrete}` and abstract event `{abstract_event}` have incompatible signatures")]
    SignatureMismatch { concrete: String, abstract_event: String },
    #[error("concrete event `{0}` has no abstract counterpart (extension policy is reject)")]
    Unmapped(String),
    #[error("internal event `{0}` cannot appear in the mapping")]
    InternalInMapping(String),
    #[error("new event `{0}` also appears in the mapping")]
    NewInMapping(String),
    #[error("abstract event `{0}` has no action mapping entry")]
    MissingAction(String),
    #[error("action mapping for `{event}`: {message}")]
    Action { event: String, message: String },
    #[error("mapping line {line}: {message}")]
    MappingSyntax { line: usize, message: String },
    #[error("retrieve relation: {0}")]
    RetrieveSyntax(ParseError),
    #[error("retrieve relation: {0}")]
    RetrieveType(TypeError),
    #[error("retrieve relation: {0}")]
    RetrieveEval(EvalError),
    #[error("identity retrieve relation needs identical state variables")]
    IdentityShape,
    #[error("variant: {0}")]
    Variant(String),
    #[error("variant is negative ({value}) at reachable state {state}")]
    VariantNegative { state: String, value: i64 },
    #[error("condition set: {0}")]
    Conditions(String),
    #[error("greatest simulation needs consistency or enabledness; restricted consistency alone is not a refinement relation")]
    RestrictedOnly,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The three refinement properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// (1) every concrete step is matched by an abstract one.
    Consistency,
    /// (2) abstract enabled implies concrete enabled.
    Enabledness,
    /// (3) consistency restricted to abstractly enabled steps.
    RestrictedConsistency,
}

impl Condition {
    pub fn number(self) -> u8 {
        match self {
            Condition::Consistency => 1,
            Condition::Enabledness => 2,
            Condition::RestrictedConsistency => 3,
        }
    }
}

/// Nonempty subset of the refinement properties.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionSet(BTreeSet<Condition>);

pub const RESTRICTED_ONLY_WARNING: &str = "condition set {3} alone is not transitive: \
     restricted consistency without enabledness is nonsensical as a refinement relation; \
     single-step results do not compose";

impl ConditionSet {
    pub fn new(conds: impl IntoIterator<Item = Condition>) -> Result<Self, RefineError> {
        let set: BTreeSet<Condition> = conds.into_iter().collect();
        if set.is_empty() {
            return Err(RefineError::Conditions("empty condition set".into()));
        }
        Ok(ConditionSet(set))
    }

    pub fn consistency() -> Self {
        ConditionSet([Condition::Consistency].into())
    }

    /// Enabledness and restricted consistency: Z applicability and correctness.
    pub fn z() -> Self {
        ConditionSet([Condition::Enabledness, Condition::RestrictedConsistency].into())
    }

    pub fn has(&self, c: Condition) -> bool {
        self.0.contains(&c)
    }

    pub fn iter(&self) -> impl Iterator<Item = Condition> + '_ {
        self.0.iter().copied()
    }

    pub fn is_restricted_only(&self) -> bool {
        self.0.len() == 1 && self.has(Condition::RestrictedConsistency)
    }

    pub(crate) fn warnings(&self) -> Vec<String> {
        if self.is_restricted_only() {
            vec![RESTRICTED_ONLY_WARNING.to_string()]
        } else {
            Vec::new()
        }
    }
}

impl FromStr for ConditionSet {
    type Err = RefineError;

    /// `"2,3"` style lists.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let conds = s
            .split(',')
            .map(|p| match p.trim() {
                "1" => Ok(Condition::Consistency),
                "2" => Ok(Condition::Enabledness),
                "3" => Ok(Condition::RestrictedConsistency),
                other => Err(RefineError::Conditions(format!("unknown condition `{other}` (use 1, 2, 3)"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        ConditionSet::new(conds)
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.number().to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_sets_parse_and_print() {
        let c: ConditionSet = "3, 2".parse().unwrap();
        assert_eq!(c.to_string(), "2,3");
        assert_eq!(c, ConditionSet::z());
        assert!("".parse::<ConditionSet>().is_err());
        assert!("4".parse::<ConditionSet>().is_err());
        assert!("3".parse::<ConditionSet>().unwrap().is_restricted_only());
    }
}
