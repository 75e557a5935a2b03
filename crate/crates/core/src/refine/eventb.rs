use std::collections::BTreeSet;

use super::common::{init_witnesses, pair_diagnostics};
use super::mapping::Image;
use super::verdict::{first_violation, minimal};
use super::{check_divergence, AlphabetMapping, RefineError, RetrieveRelation, Verdict, VariantSpec, Violation, Witness};
use crate::kernel::{is_deadlocked, Lts, ShortestPaths, StateId};
use crate::speclang::EventClass;

#[derive(Debug, Clone, Default)]
pub struct EventBOptions {
    /// The concrete machine deadlocks no more often than the abstract one.
    pub relative_deadlock: bool,
    /// Checked over the new events after the refinement conditions.
    pub variant: Option<VariantSpec>,
}

/// Event-B simple refinement: old events are consistent through `r`, new
/// events refine skip, and optionally relative deadlock freedom and a
/// variant for the new events. Events classified `new` in the concrete
/// machine count as new alongside `new_events`.
pub fn check_eventb(
    a: &Lts,
    c: &Lts,
    r: &RetrieveRelation,
    m: &AlphabetMapping,
    new_events: &BTreeSet<String>,
    opts: &EventBOptions,
) -> Result<Verdict, RefineError> {
    let mut c = c.clone();
    for e in new_events {
        if m.entries().contains_key(e) {
            return Err(RefineError::NewInMapping(e.clone()));
        }
        c = c.with_class(e, EventClass::New).map_err(|_| RefineError::UnknownEvent { side: "concrete", name: e.clone() })?;
    }
    let c = &c;
    let resolved = m.resolve(a, c)?;
    let paths = ShortestPaths::new(c);
    let mut diag = pair_diagnostics(a, c, r);
    diag.insert("pairs.checked".into(), r.len());

    let pairs: Vec<(StateId, StateId)> = r.pairs().iter().copied().collect();
    let found = first_violation(&pairs, &paths, |&(ai, ci)| {
        let mut out = Vec::new();
        for t in c.outgoing(ci) {
            let w = Witness::new(Violation::Consistency, ci).at(ai).op(&t.label.event).label(t.label.clone()).target(t.to);
            match resolved.image(&t.label.event) {
                Image::Event(ae) => {
                    let al = t.label.renamed(ae);
                    if !a.outgoing(ai).iter().any(|u| u.label == al && r.contains(u.to, t.to)) {
                        out.push(w.detail(format!("no abstract {al} step to a linked state")));
                    }
                }
                Image::Skip | Image::Internal => {
                    if !r.contains(ai, t.to) {
                        out.push(Witness { violation: Violation::SkipRefinement, ..w }.detail("new event changes the abstract state"));
                    }
                }
            }
        }
        if opts.relative_deadlock && is_deadlocked(c, ci) && !is_deadlocked(a, ai) {
            out.push(
                Witness::new(Violation::RelativeDeadlock, ci)
                    .at(ai)
                    .detail("concrete state is deadlocked but the linked abstract state is not"),
            );
        }
        out
    });
    let mut all: Vec<Witness> = found.into_iter().collect();
    all.extend(init_witnesses(a, c, r));
    if let Some(w) = minimal(all, &paths) {
        return Ok(Verdict::fail(w, diag));
    }
    if let Some(v) = &opts.variant {
        let mut verdict = check_divergence(c, &c.events_of_class(EventClass::New), Some(v))?;
        verdict.diagnostics.extend(diag);
        return Ok(verdict);
    }
    Ok(Verdict::pass(diag))
}
