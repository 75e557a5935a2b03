use std::collections::BTreeSet;

use super::verdict::Diagnostics;
use super::RetrieveRelation;
use crate::kernel::{Lts, StateId};
use crate::speclang::{Env, Value};

/// Constants and variables of `s` as an evaluation environment.
pub(crate) fn state_env(lts: &Lts, s: StateId) -> Env {
    let mut env = Env::new();
    for (k, v) in lts.consts() {
        env.bind(k.clone(), Value::Int(*v));
    }
    for ((name, _), v) in lts.vars().iter().zip(lts.valuation(s)) {
        env.bind(name.clone(), v.clone());
    }
    env
}

/// Per state, the (event, inputs) pairs whose precondition holds.
pub(crate) fn enabled_inputs(lts: &Lts) -> Vec<BTreeSet<(String, Vec<Value>)>> {
    lts.state_ids()
        .map(|s| lts.outgoing(s).iter().map(|t| (t.label.event.clone(), t.label.inputs.clone())).collect())
        .collect()
}

pub(crate) fn is_enabled(pre: &[BTreeSet<(String, Vec<Value>)>], s: StateId, event: &str, inputs: &[Value]) -> bool {
    pre[s.0].contains(&(event.to_string(), inputs.to_vec()))
}

pub(crate) fn machine_diagnostics(prefix: &str, lts: &Lts, d: &mut Diagnostics) {
    d.insert(format!("{prefix}.states"), lts.num_states());
    d.insert(format!("{prefix}.transitions"), lts.transitions().len());
    d.insert(format!("{prefix}.initial"), lts.inits().len());
    for (event, n) in lts.pruned() {
        d.insert(format!("{prefix}.pruned.{event}"), *n);
    }
}

pub(crate) fn pair_diagnostics(a: &Lts, c: &Lts, r: &RetrieveRelation) -> Diagnostics {
    let mut d = Diagnostics::new();
    machine_diagnostics("abstract", a, &mut d);
    machine_diagnostics("concrete", c, &mut d);
    d.insert("retrieve.pairs".into(), r.len());
    d
}

/// Initialization: every concrete initial state is linked to an abstract one.
pub(crate) fn init_witnesses(a: &Lts, c: &Lts, r: &RetrieveRelation) -> Vec<super::Witness> {
    c.inits()
        .iter()
        .filter(|ci| !r.abstract_of(**ci).iter().any(|ai| a.inits().contains(ai)))
        .map(|ci| super::Witness::new(super::Violation::Initialization, *ci).detail("no linked abstract initial state"))
        .collect()
}
