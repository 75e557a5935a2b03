//! The JSON report. Field names are a compatibility contract: `version`,
//! `inputs`, `status`, `witness`, `diagnostics`, `warnings`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::kernel::{Lts, StateId};
use crate::refine::{Verdict, Witness};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub command: String,
    /// The `check` arguments, enough to rerun the check.
    pub args: Vec<String>,
    pub relation: String,
    #[serde(rename = "abstract")]
    pub abstract_file: Option<String>,
    pub concrete: String,
    pub conditions: Option<String>,
    pub retrieve: Option<String>,
    pub mapping: Option<String>,
    pub constants: BTreeMap<String, i64>,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRef {
    pub id: usize,
    pub state: String,
}

impl StateRef {
    fn new(lts: &Lts, s: StateId) -> Self {
        StateRef { id: s.0, state: lts.show_state(s) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    #[serde(rename = "abstract")]
    pub abstract_state: Option<StateRef>,
    pub concrete: StateRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub label: String,
    pub to: StateRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub init: StateRef,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub condition: String,
    pub operation: Option<String>,
    pub pair: Pair,
    pub label: Option<String>,
    pub target: Option<StateRef>,
    pub trace: Option<TraceJson>,
    pub detail: String,
}

impl WitnessJson {
    pub fn new(w: &Witness, a: Option<&Lts>, c: &Lts) -> Self {
        WitnessJson {
            condition: w.violation.to_string(),
            operation: w.operation.clone(),
            pair: Pair {
                abstract_state: w.abstract_state.zip(a).map(|(s, a)| StateRef::new(a, s)),
                concrete: StateRef::new(c, w.concrete_state),
            },
            label: w.label.as_ref().map(|l| l.to_string()),
            target: w.target.map(|t| StateRef::new(c, t)),
            trace: w.trace.as_ref().map(|p| TraceJson {
                init: StateRef::new(c, p.init),
                steps: p.steps.iter().map(|(l, s)| Step { label: l.to_string(), to: StateRef::new(c, *s) }).collect(),
            }),
            detail: w.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub inputs: Inputs,
    pub status: String,
    pub witness: Option<WitnessJson>,
    pub diagnostics: BTreeMap<String, u64>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(inputs: Inputs, v: &Verdict, a: Option<&Lts>, c: &Lts) -> Self {
        Report {
            version: VERSION.to_string(),
            inputs,
            status: v.status.to_string(),
            witness: v.witness.as_ref().map(|w| WitnessJson::new(w, a, c)),
            diagnostics: v.diagnostics.iter().map(|(k, n)| (k.clone(), *n as u64)).collect(),
            warnings: v.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
