//! Grounding: enumerate every valuation within bounds and every transition
//! allowed by guards and updates.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::{EventDecl, Update};
use super::error::{EvalError, GroundError};
use super::eval::{eval, Env};
use super::typecheck::{resolve_domain, TypedMachine};
use super::value::{Domain, Value};
use crate::kernel::{EventSig, Label, Lts, LtsParts, StateId, Transition};

/// Constant overrides and the overflow policy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bounds {
    pub constants: BTreeMap<String, i64>,
    /// Reject, rather than prune, transitions leaving the bounded carrier.
    pub strict: bool,
}

impl Bounds {
    /// The usual `V,N` pair: maximum element value and maximum collection size.
    pub fn vn(max_value: i64, max_size: i64) -> Self {
        let constants = [("V".to_string(), max_value), ("N".to_string(), max_size)].into();
        Bounds { constants, strict: false }
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.constants.insert(name.to_string(), value);
        self
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }
}

const MAX_TUPLES: usize = 1 << 20;

fn product(domains: &[Domain]) -> Option<Vec<Vec<Value>>> {
    let mut out: Vec<Vec<Value>> = vec![Vec::new()];
    for d in domains {
        let vals = d.values();
        if out.len().saturating_mul(vals.len()) > MAX_TUPLES {
            return None;
        }
        out = out
            .iter()
            .flat_map(|prefix| {
                vals.iter().map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    Some(out)
}

fn resolve(d: &super::ast::DomainExpr, consts: &BTreeMap<String, i64>) -> Domain {
    // typecheck guarantees every bound resolves
    resolve_domain(d, consts).expect("domain bounds resolved by typecheck")
}

struct EventCtx<'a> {
    decl: &'a EventDecl,
    inputs: Vec<Vec<Value>>,
    outputs: Vec<Vec<Value>>,
    binders: Vec<Vec<Value>>,
}

pub fn ground(m: &TypedMachine, bounds: &Bounds) -> Result<Lts, GroundError> {
    let ast = &m.ast;
    let consts = m.constants(&bounds.constants);
    let var_domains: Vec<Domain> = ast.vars.iter().map(|v| resolve(&v.domain, &consts)).collect();
    let mut states = product(&var_domains).ok_or_else(|| GroundError::TooLarge(ast.name.clone()))?;
    states.sort();

    let mut base = Env::new();
    for (k, v) in &consts {
        base.bind(k.clone(), Value::Int(*v));
    }
    let state_env = |vals: &[Value]| {
        let mut env = base.clone();
        for (decl, v) in ast.vars.iter().zip(vals) {
            env.bind(decl.name.clone(), v.clone());
        }
        env
    };
    let show = |vals: &[Value]| {
        ast.vars
            .iter()
            .zip(vals)
            .map(|(d, v)| format!("{}={v}", d.name))
            .collect::<Vec<_>>()
            .join(", ")
    };

    let mut inits = BTreeSet::new();
    for (i, vals) in states.iter().enumerate() {
        let ok = eval(&ast.init, &state_env(vals))
            .and_then(|v| v.as_bool().ok_or(EvalError::IllTyped("init")))
            .map_err(|source| GroundError::InitEval { state: show(vals), source })?;
        if ok {
            inits.insert(StateId(i));
        }
    }
    if inits.is_empty() {
        return Err(GroundError::EmptyInit);
    }

    let index: std::collections::HashMap<&[Value], usize> =
        states.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();

    let mut alphabet = Vec::new();
    let mut events = Vec::new();
    for ev in &ast.events {
        let inputs: Vec<(String, Domain)> =
            ev.inputs.iter().map(|p| (p.name.clone(), resolve(&p.domain, &consts))).collect();
        let outputs: Vec<(String, Domain)> =
            ev.outputs.iter().map(|p| (p.name.clone(), resolve(&p.domain, &consts))).collect();
        let too_large = || GroundError::TooLarge(ev.name.clone());
        let in_tuples = product(&inputs.iter().map(|(_, d)| d.clone()).collect::<Vec<_>>()).ok_or_else(too_large)?;
        let out_tuples = product(&outputs.iter().map(|(_, d)| d.clone()).collect::<Vec<_>>()).ok_or_else(too_large)?;
        let binders = match &ev.update {
            Update::Any { binders, .. } => {
                product(&binders.iter().map(|b| resolve(&b.domain, &consts)).collect::<Vec<_>>()).ok_or_else(too_large)?
            }
            Update::Assign(_) => vec![Vec::new()],
        };
        alphabet.push(EventSig { name: ev.name.clone(), inputs, outputs, class: ev.class });
        events.push(EventCtx { decl: ev, inputs: in_tuples, outputs: out_tuples, binders });
    }

    let mut transitions = BTreeSet::new();
    let mut pruned: BTreeMap<String, BTreeSet<(usize, Label, Vec<Value>)>> = BTreeMap::new();

    for (si, vals) in states.iter().enumerate() {
        let senv = state_env(vals);
        for ec in &events {
            let ev = ec.decl;
            let wrap = |source: EvalError| GroundError::Eval { event: ev.name.clone(), state: show(vals), source };
            for ins in &ec.inputs {
                for outs in &ec.outputs {
                    let mut env = senv.clone();
                    for (p, v) in ev.inputs.iter().zip(ins) {
                        env.bind(p.name.clone(), v.clone());
                    }
                    for (p, v) in ev.outputs.iter().zip(outs) {
                        env.bind(p.name.clone(), v.clone());
                    }
                    let enabled = eval(&ev.guard, &env)
                        .and_then(|v| v.as_bool().ok_or(EvalError::IllTyped("guard")))
                        .map_err(wrap)?;
                    if !enabled {
                        continue;
                    }
                    let label = Label::new(ev.name.clone(), ins.clone(), outs.clone());
                    for binding in &ec.binders {
                        let mut uenv = env.clone();
                        if let Update::Any { binders, .. } = &ev.update {
                            for (b, v) in binders.iter().zip(binding) {
                                uenv.bind(b.name.clone(), v.clone());
                            }
                        }
                        let holds = |env: &Env, cond| {
                            eval(cond, env)
                                .and_then(|v| v.as_bool().ok_or(EvalError::IllTyped("where")))
                                .map_err(wrap)
                        };
                        // a where-clause without primed names filters bindings
                        // before the assignments, so it can protect them
                        let pre_filter = match &ev.update {
                            Update::Any { condition, .. } if !condition.mentions_primed() => Some(condition),
                            _ => None,
                        };
                        if let Some(cond) = pre_filter {
                            if !holds(&uenv, cond)? {
                                continue;
                            }
                        }
                        let mut after = vals.clone();
                        for a in ev.update.assigns() {
                            let v = eval(&a.value, &uenv).map_err(wrap)?;
                            let pos = ast.vars.iter().position(|d| d.name == a.target).expect("typechecked target");
                            after[pos] = v;
                        }
                        if let (Update::Any { condition, .. }, None) = (&ev.update, pre_filter) {
                            for (d, v) in ast.vars.iter().zip(&after) {
                                uenv.bind_primed(d.name.clone(), v.clone());
                            }
                            if !holds(&uenv, condition)? {
                                continue;
                            }
                        }
                        match index.get(after.as_slice()) {
                            Some(&ti) => {
                                transitions.insert(Transition { from: StateId(si), label: label.clone(), to: StateId(ti) });
                            }
                            None => {
                                if bounds.strict {
                                    let (var, value) = ast
                                        .vars
                                        .iter()
                                        .zip(&after)
                                        .zip(&var_domains)
                                        .find(|((_, v), d)| !d.contains(v))
                                        .map(|((d, v), _)| (d.name.clone(), v.to_string()))
                                        .unwrap_or_default();
                                    return Err(GroundError::BoundOverflow {
                                        event: ev.name.clone(),
                                        state: show(vals),
                                        var,
                                        value,
                                    });
                                }
                                pruned.entry(ev.name.clone()).or_default().insert((si, label.clone(), after));
                            }
                        }
                    }
                }
            }
        }
    }

    Lts::new(LtsParts {
        name: ast.name.clone(),
        vars: ast.vars.iter().map(|v| v.name.clone()).zip(m.var_types.iter().cloned()).collect(),
        consts,
        states,
        inits,
        transitions: transitions.into_iter().collect(),
        alphabet,
        pruned: pruned.into_iter().map(|(k, v)| (k, v.len())).collect(),
    })
    .map_err(|e| GroundError::Kernel(e.to_string()))
}
