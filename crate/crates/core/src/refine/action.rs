use std::collections::{BTreeMap, BTreeSet};

use super::common::{enabled_inputs, init_witnesses, is_enabled, pair_diagnostics};
use super::verdict::{first_violation, minimal};
use super::{ActionMapping, Condition, ConditionSet, RefineError, RetrieveRelation, Verdict, Violation, Witness};
use crate::kernel::{compose, operation_relation, Label, Lts, ShortestPaths, StateId, StepRelation};
use crate::speclang::EventClass;

/// 1-to-n action refinement: each abstract event is matched by complete
/// runs of its concrete sequence, with no link required at intermediate
/// states. Concrete events outside every sequence must refine skip.
pub fn check_action_refinement(
    a: &Lts,
    c: &Lts,
    r: &RetrieveRelation,
    am: &ActionMapping,
    conds: &ConditionSet,
) -> Result<Verdict, RefineError> {
    let actions = am.resolve(a, c)?;
    let mut runs: BTreeMap<String, StepRelation> = BTreeMap::new();
    let mut covered = BTreeSet::new();
    for (ae, act) in &actions {
        let mut rel = operation_relation(c, &act.sequence[0])?;
        for ce in &act.sequence[1..] {
            rel = compose(&rel, &operation_relation(c, ce)?)?;
        }
        covered.extend(act.sequence.iter().cloned());
        runs.insert(ae.clone(), rel);
    }
    let uncovered: Vec<String> = c.alphabet().keys().filter(|e| !covered.contains(*e)).cloned().collect();
    let observe = |ae: &str, obs: &[Label]| {
        let act = &actions[ae];
        Label::new(
            ae,
            act.inputs_at.map(|p| obs[p].inputs.clone()).unwrap_or_default(),
            act.outputs_at.map(|p| obs[p].outputs.clone()).unwrap_or_default(),
        )
    };
    let pre_a = enabled_inputs(a);
    let paths = ShortestPaths::new(c);
    let mut diag = pair_diagnostics(a, c, r);
    diag.insert("pairs.checked".into(), r.len());
    for (ae, rel) in &runs {
        diag.insert(format!("runs.{ae}"), rel.len());
    }

    let kind = |enabled: bool| {
        if conds.has(Condition::Consistency) {
            Some(Violation::Consistency)
        } else if conds.has(Condition::RestrictedConsistency) && enabled {
            Some(Violation::RestrictedConsistency)
        } else {
            None
        }
    };

    let pairs: Vec<(StateId, StateId)> = r.pairs().iter().copied().collect();
    let found = first_violation(&pairs, &paths, |&(ai, ci)| {
        let mut out = Vec::new();
        for (ae, rel) in &runs {
            let seq = &actions[ae].sequence;
            for run in rel.from(ci) {
                let al = observe(ae, &run.obs);
                let Some(k) = kind(is_enabled(&pre_a, ai, ae, &al.inputs)) else { continue };
                if !a.outgoing(ai).iter().any(|u| u.label == al && r.contains(u.to, run.to)) {
                    let via: Vec<String> = run.obs.iter().map(|l| l.to_string()).collect();
                    out.push(
                        Witness::new(k, ci)
                            .at(ai)
                            .op(seq.join(";"))
                            .label(al.clone())
                            .target(run.to)
                            .detail(format!("run <{}> has no abstract {al} step to a linked state", via.join(", "))),
                    );
                }
            }
        }
        for t in c.outgoing(ci).iter().filter(|t| uncovered.contains(&t.label.event)) {
            let Some(k) = kind(true) else { continue };
            if !r.contains(ai, t.to) {
                out.push(
                    Witness::new(k, ci)
                        .at(ai)
                        .op(&t.label.event)
                        .label(t.label.clone())
                        .target(t.to)
                        .detail("stuttering step leaves the retrieve relation"),
                );
            }
        }
        if conds.has(Condition::Enabledness) {
            let mut seen = BTreeSet::new();
            for u in a.outgoing(ai) {
                let ae = &u.label.event;
                if a.class_of(ae) == Some(EventClass::Internal) || !seen.insert((ae, &u.label.inputs)) {
                    continue;
                }
                let executable = runs[ae].from(ci).any(|run| observe(ae, &run.obs).inputs == u.label.inputs);
                if !executable {
                    out.push(
                        Witness::new(Violation::Enabledness, ci)
                            .at(ai)
                            .op(ae)
                            .label(u.label.clone())
                            .detail(format!("enabled abstractly but <{}> cannot run to completion", actions[ae].sequence.join(", "))),
                    );
                }
            }
            for ce in &uncovered {
                if c.class_of(ce) != Some(EventClass::Internal) && !c.outgoing(ci).iter().any(|t| &t.label.event == ce) {
                    out.push(
                        Witness::new(Violation::Enabledness, ci)
                            .at(ai)
                            .op(ce)
                            .detail("refines skip, which is enabled everywhere, but is disabled here"),
                    );
                }
            }
        }
        out
    });
    let mut all: Vec<Witness> = found.into_iter().collect();
    all.extend(init_witnesses(a, c, r));
    let warnings = conds.warnings();
    Ok(match minimal(all, &paths) {
        Some(w) => Verdict::fail(w, diag),
        None => Verdict::pass(diag),
    }
    .with_warnings(warnings))
}
