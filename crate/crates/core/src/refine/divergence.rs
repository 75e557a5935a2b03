use std::collections::{BTreeSet, VecDeque};

use super::common::{machine_diagnostics, state_env};
use super::verdict::minimal;
use super::{Diagnostics, RefineError, Verdict, Violation, Witness};
use crate::kernel::{divergent_states, graph, reachable, Label, Lts, ShortestPaths, StateId};
use crate::speclang::typecheck::{check_expr, Scope};
use crate::speclang::{eval, parse_expr, Expr, Ty};

/// A natural-number expression over the concrete variables, expected to
/// decrease strictly on every step of the covered events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantSpec {
    pub text: String,
    pub expr: Expr,
}

impl VariantSpec {
    /// Parses and typechecks `text` against the variables of `lts`.
    pub fn parse(text: &str, lts: &Lts) -> Result<Self, RefineError> {
        let expr = parse_expr(text).map_err(|e| RefineError::Variant(e.to_string()))?;
        let mut scope = Scope::new();
        for k in lts.consts().keys() {
            scope = scope.with_const(k);
        }
        for (n, t) in lts.vars() {
            scope = scope.with_var(n, t.clone());
        }
        check_expr(&expr, &scope, &Ty::Int, "variant").map_err(|e| RefineError::Variant(e.to_string()))?;
        Ok(VariantSpec { text: text.trim().to_string(), expr })
    }

    fn value(&self, lts: &Lts, s: StateId) -> Result<i64, RefineError> {
        let v = eval(&self.expr, &state_env(lts, s)).map_err(|e| RefineError::Variant(format!("at {}: {e}", lts.show_state(s))))?;
        let n = v.as_int().ok_or_else(|| RefineError::Variant(format!("non-integer value {v}")))?;
        if n < 0 {
            return Err(RefineError::VariantNegative { state: lts.show_state(s), value: n });
        }
        Ok(n)
    }
}

/// A cycle through `start` using only `events`, as labelled steps.
fn cycle_through(lts: &Lts, events: &BTreeSet<String>, start: StateId) -> Vec<(Label, StateId)> {
    let mut parent: Vec<Option<(StateId, Label)>> = vec![None; lts.num_states()];
    let mut queue = VecDeque::new();
    for t in lts.outgoing(start).iter().filter(|t| events.contains(&t.label.event)) {
        if t.to == start {
            return vec![(t.label.clone(), start)];
        }
        if parent[t.to.0].is_none() {
            parent[t.to.0] = Some((start, t.label.clone()));
            queue.push_back(t.to);
        }
    }
    while let Some(s) = queue.pop_front() {
        for t in lts.outgoing(s).iter().filter(|t| events.contains(&t.label.event)) {
            if t.to == start {
                let mut steps = vec![(t.label.clone(), start)];
                let mut cur = s;
                while cur != start {
                    let (p, l) = parent[cur.0].clone().expect("bfs parent");
                    steps.push((l, cur));
                    cur = p;
                }
                steps.reverse();
                return steps;
            }
            if parent[t.to.0].is_none() && t.to != start {
                parent[t.to.0] = Some((s, t.label.clone()));
                queue.push_back(t.to);
            }
        }
    }
    Vec::new()
}

/// Passes iff no reachable state admits an infinite run of `events`. With a
/// variant, also requires it to be nonnegative on reachable states and to
/// decrease strictly across every reachable step of `events`.
pub fn check_divergence(c: &Lts, events: &BTreeSet<String>, variant: Option<&VariantSpec>) -> Result<Verdict, RefineError> {
    let divergent = divergent_states(c, events)?;
    let paths = ShortestPaths::new(c);
    let mut diag = Diagnostics::new();
    machine_diagnostics("concrete", c, &mut diag);
    diag.insert("divergent.states".into(), divergent.len());

    if let Some(v) = variant {
        let live = reachable(c);
        let mut values = vec![0i64; c.num_states()];
        for &s in &live {
            values[s.0] = v.value(c, s)?;
        }
        let mut bad = Vec::new();
        for &s in &live {
            for t in c.outgoing(s).iter().filter(|t| events.contains(&t.label.event)) {
                if values[t.to.0] >= values[s.0] {
                    bad.push(
                        Witness::new(Violation::Variant, s)
                            .op(&t.label.event)
                            .label(t.label.clone())
                            .target(t.to)
                            .detail(format!("variant `{}` goes from {} to {}", v.text, values[s.0], values[t.to.0])),
                    );
                }
            }
        }
        diag.insert("variant.max".into(), live.iter().map(|s| values[s.0]).max().unwrap_or(0) as usize);
        if let Some(w) = minimal(bad, &paths) {
            return Ok(Verdict::fail(w, diag));
        }
        if !divergent.is_empty() {
            return Err(RefineError::Inconsistent("variant decreases but a divergent state exists".into()));
        }
        return Ok(Verdict::pass(diag));
    }

    if divergent.is_empty() {
        return Ok(Verdict::pass(diag));
    }
    let succ = graph::restricted_successors(c, events);
    let on_cycle = graph::cyclic_states(&succ);
    let candidates = divergent
        .iter()
        .filter(|s| on_cycle[s.0])
        .map(|&s| {
            let cycle = cycle_through(c, events, s);
            let shown: Vec<String> = cycle.iter().map(|(l, _)| l.to_string()).collect();
            let (l, to) = cycle[0].clone();
            Witness::new(Violation::Divergence, s)
                .op(&l.event)
                .label(l)
                .target(to)
                .detail(format!("cycle: {}", shown.join(", ")))
        })
        .collect();
    let w = minimal(candidates, &paths).ok_or_else(|| RefineError::Inconsistent("divergent set without a reachable cycle".into()))?;
    Ok(Verdict::fail(w, diag))
}
