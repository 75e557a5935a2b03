use std::collections::{BTreeMap, BTreeSet};

use super::common::{init_witnesses, pair_diagnostics};
use super::mapping::Image;
use super::verdict::{first_violation, minimal};
use super::{AlphabetMapping, Condition, ConditionSet, RefineError, RetrieveRelation, Verdict, Violation, Witness};
use crate::kernel::{compose, divergent_states, internal_closure, operation_relation, Lts, ShortestPaths, StateId, StepRelation};
use crate::speclang::EventClass;

#[derive(Debug, Clone, Copy, Default)]
pub struct WeakOptions {
    /// Linked concrete states may diverge only where the abstract state does.
    pub preserve_divergence: bool,
}

struct Side {
    /// `Int ; Op` per external event.
    pre: BTreeMap<String, StepRelation>,
    /// `Int ; Op ; Int` per external event.
    full: BTreeMap<String, StepRelation>,
    closure: StepRelation,
    internals: BTreeSet<String>,
}

fn side(lts: &Lts) -> Result<Side, RefineError> {
    let internals = lts.events_of_class(EventClass::Internal);
    let closure = internal_closure(lts, &internals)?;
    let mut pre = BTreeMap::new();
    let mut full = BTreeMap::new();
    for name in lts.alphabet().keys().filter(|n| !internals.contains(*n)) {
        let p = compose(&closure, &operation_relation(lts, name)?)?;
        full.insert(name.clone(), compose(&p, &closure)?);
        pre.insert(name.clone(), p);
    }
    Ok(Side { pre, full, closure, internals })
}

/// Weak refinement: external operations padded with the reflexive-transitive
/// closure of the internal events on both sides, checked per linked pair.
/// Enabledness compares `IntA ; AOp` with `IntC ; COp`.
pub fn check_weak_refinement(
    a: &Lts,
    c: &Lts,
    r: &RetrieveRelation,
    m: &AlphabetMapping,
    conds: &ConditionSet,
    opts: WeakOptions,
) -> Result<Verdict, RefineError> {
    let resolved = m.resolve(a, c)?;
    let sa = side(a)?;
    let sc = side(c)?;
    let (div_a, div_c) = if opts.preserve_divergence {
        (divergent_states(a, &sa.internals)?, divergent_states(c, &sc.internals)?)
    } else {
        (BTreeSet::new(), BTreeSet::new())
    };
    let paths = ShortestPaths::new(c);
    let mut diag = pair_diagnostics(a, c, r);
    diag.insert("pairs.checked".into(), r.len());
    diag.insert("closure.abstract".into(), sa.closure.len());
    diag.insert("closure.concrete".into(), sc.closure.len());

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
        for (ce, rel) in &sc.full {
            for step in rel.from(ci) {
                let l = &step.obs[0];
                let w = Witness::new(Violation::Consistency, ci).at(ai).op(ce).label(l.clone()).target(step.to);
                match resolved.image(ce) {
                    Image::Event(ae) => {
                        let enabled = sa.pre[ae].from(ai).any(|s| s.obs[0].inputs == l.inputs);
                        let Some(k) = kind(enabled) else { continue };
                        let al = l.renamed(ae);
                        if !sa.full[ae].from(ai).any(|s| s.obs[0] == al && r.contains(s.to, step.to)) {
                            out.push(Witness { violation: k, ..w }.detail(format!("no abstract {al} step, padded by internal steps, to a linked state")));
                        }
                    }
                    Image::Skip | Image::Internal => {
                        let Some(k) = kind(true) else { continue };
                        if !sa.closure.from(ai).any(|s| r.contains(s.to, step.to)) {
                            out.push(Witness { violation: k, ..w }.detail("stuttering step leaves the retrieve relation"));
                        }
                    }
                }
            }
        }
        if conds.has(Condition::Enabledness) {
            for (ae, rel) in &sa.pre {
                let mut seen = BTreeSet::new();
                for s in rel.from(ai) {
                    let u = &s.obs[0];
                    if !seen.insert(&u.inputs) {
                        continue;
                    }
                    let matched = resolved
                        .preimage(ae)
                        .iter()
                        .any(|ce| sc.pre.get(*ce).is_some_and(|p| p.from(ci).any(|t| t.obs[0].inputs == u.inputs)));
                    if !matched {
                        out.push(
                            Witness::new(Violation::Enabledness, ci)
                                .at(ai)
                                .op(ae)
                                .label(u.clone())
                                .detail("enabled abstractly but not concretely"),
                        );
                    }
                }
            }
            for (ce, img) in resolved.images() {
                if *img == Image::Skip && sc.pre.get(ce).is_some_and(|p| p.from(ci).next().is_none()) {
                    out.push(
                        Witness::new(Violation::Enabledness, ci)
                            .at(ai)
                            .op(ce)
                            .detail("refines skip, which is enabled everywhere, but is disabled here"),
                    );
                }
            }
        }
        if div_c.contains(&ci) && !div_a.contains(&ai) {
            out.push(
                Witness::new(Violation::DivergencePreservation, ci)
                    .at(ai)
                    .detail("concrete state can diverge on internal events, the linked abstract state cannot"),
            );
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
