use std::collections::BTreeSet;

use super::common::{enabled_inputs, init_witnesses, is_enabled, pair_diagnostics};
use super::mapping::{Image, ResolvedMapping};
use super::verdict::{first_violation, minimal};
use super::{AlphabetMapping, Condition, ConditionSet, RefineError, RetrieveRelation, Verdict, Violation, Witness};
use crate::kernel::{Lts, ShortestPaths, StateId};
use crate::speclang::{EventClass, Value};

/// Per-pair downward simulation conditions.
pub(crate) struct PairCheck<'a> {
    pub a: &'a Lts,
    pub c: &'a Lts,
    pub m: &'a ResolvedMapping,
    pub conds: &'a ConditionSet,
    pre_a: Vec<BTreeSet<(String, Vec<Value>)>>,
    /// Restrict to one concrete operation (single-operation checks).
    only: Option<String>,
}

impl<'a> PairCheck<'a> {
    pub fn new(a: &'a Lts, c: &'a Lts, m: &'a ResolvedMapping, conds: &'a ConditionSet) -> Self {
        PairCheck { a, c, m, conds, pre_a: enabled_inputs(a), only: None }
    }

    fn consistency_kind(&self, abstractly_enabled: bool) -> Option<Violation> {
        if self.conds.has(Condition::Consistency) {
            Some(Violation::Consistency)
        } else if self.conds.has(Condition::RestrictedConsistency) && abstractly_enabled {
            Some(Violation::RestrictedConsistency)
        } else {
            None
        }
    }

    pub fn violations(&self, ai: StateId, ci: StateId, linked: &dyn Fn(StateId, StateId) -> bool) -> Vec<Witness> {
        let (a, c) = (self.a, self.c);
        let mut out = Vec::new();
        let in_scope = |e: &str| self.only.as_deref().is_none_or(|o| o == e);
        for t in c.outgoing(ci).iter().filter(|t| in_scope(&t.label.event)) {
            let w = || Witness::new(Violation::Consistency, ci).at(ai).op(&t.label.event).label(t.label.clone()).target(t.to);
            match self.m.image(&t.label.event) {
                Image::Event(ae) => {
                    let enabled = is_enabled(&self.pre_a, ai, ae, &t.label.inputs);
                    let Some(kind) = self.consistency_kind(enabled) else { continue };
                    let al = t.label.renamed(ae);
                    if !a.outgoing(ai).iter().any(|u| u.label == al && linked(u.to, t.to)) {
                        out.push(Witness { violation: kind, ..w() }.detail(format!("no abstract {al} step to a linked state")));
                    }
                }
                Image::Skip | Image::Internal => {
                    let Some(kind) = self.consistency_kind(true) else { continue };
                    if !linked(ai, t.to) {
                        out.push(Witness { violation: kind, ..w() }.detail("stuttering step leaves the retrieve relation"));
                    }
                }
            }
        }
        if self.conds.has(Condition::Enabledness) {
            let mut seen = BTreeSet::new();
            for u in a.outgoing(ai) {
                let ae = &u.label.event;
                if a.class_of(ae) == Some(EventClass::Internal) || !seen.insert((ae, &u.label.inputs)) {
                    continue;
                }
                let mut pre = self.m.preimage(ae);
                pre.retain(|ce| in_scope(ce));
                if self.only.is_some() && pre.is_empty() {
                    continue;
                }
                let matched = c
                    .outgoing(ci)
                    .iter()
                    .any(|t| pre.contains(&t.label.event.as_str()) && t.label.inputs == u.label.inputs);
                if !matched {
                    out.push(
                        Witness::new(Violation::Enabledness, ci)
                            .at(ai)
                            .op(ae)
                            .label(u.label.clone())
                            .detail("enabled abstractly but not concretely"),
                    );
                }
            }
            for (ce, img) in self.m.images() {
                if *img == Image::Skip && in_scope(ce) && !c.outgoing(ci).iter().any(|t| &t.label.event == ce) {
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
    }
}

/// Downward simulation: for every linked pair, the chosen conditions, plus
/// initialization.
pub fn check_downward_simulation(
    a: &Lts,
    c: &Lts,
    r: &RetrieveRelation,
    conds: &ConditionSet,
    m: &AlphabetMapping,
) -> Result<Verdict, RefineError> {
    let resolved = m.resolve(a, c)?;
    let check = PairCheck::new(a, c, &resolved, conds);
    Ok(run(&check, r, true))
}

fn run(check: &PairCheck<'_>, r: &RetrieveRelation, with_init: bool) -> Verdict {
    let (a, c) = (check.a, check.c);
    let paths = ShortestPaths::new(c);
    let mut diag = pair_diagnostics(a, c, r);
    diag.insert("pairs.checked".into(), r.len());
    let pairs: Vec<(StateId, StateId)> = r.pairs().iter().copied().collect();
    let linked = |x: StateId, y: StateId| r.contains(x, y);
    let mut found: Vec<Witness> = first_violation(&pairs, &paths, |&(ai, ci)| check.violations(ai, ci, &linked))
        .into_iter()
        .collect();
    if with_init {
        found.extend(init_witnesses(a, c, r));
    }
    let warnings = check.conds.warnings();
    match minimal(found, &paths) {
        Some(w) => Verdict::fail(w, diag),
        None => Verdict::pass(diag),
    }
    .with_warnings(warnings)
}

/// One concrete operation against one abstract operation (`None` for
/// skip), over every linked pair. No initialization condition.
pub fn check_operation_pair(
    a: &Lts,
    c: &Lts,
    r: &RetrieveRelation,
    abstract_op: Option<&str>,
    concrete_op: &str,
    conds: &ConditionSet,
) -> Result<Verdict, RefineError> {
    let csig = c.event(concrete_op).ok_or_else(|| RefineError::UnknownEvent { side: "concrete", name: concrete_op.into() })?;
    let mut m = AlphabetMapping::identity().tolerate();
    for (name, sig) in c.alphabet() {
        if sig.class != EventClass::Internal || name == concrete_op {
            m = m.skip(name);
        }
    }
    if let Some(ae) = abstract_op {
        let asig = a.event(ae).ok_or_else(|| RefineError::UnknownEvent { side: "abstract", name: ae.into() })?;
        if !csig.compatible_with(asig) {
            return Err(RefineError::SignatureMismatch { concrete: concrete_op.into(), abstract_event: ae.into() });
        }
        m = m.map(concrete_op, ae);
    }
    let c = &c.with_class(concrete_op, EventClass::External)?;
    let resolved = m.resolve(a, c)?;
    let mut check = PairCheck::new(a, c, &resolved, conds);
    check.only = Some(concrete_op.to_string());
    Ok(run(&check, r, false))
}

/// Greatest relation satisfying the per-pair conditions, if it links every
/// concrete initial state to an abstract one.
pub fn greatest_simulation(
    a: &Lts,
    c: &Lts,
    m: &AlphabetMapping,
    conds: &ConditionSet,
) -> Result<Option<RetrieveRelation>, RefineError> {
    if conds.is_restricted_only() {
        return Err(RefineError::RestrictedOnly);
    }
    let resolved = m.resolve(a, c)?;
    let check = PairCheck::new(a, c, &resolved, conds);
    let nc = c.num_states();
    let mut live = vec![true; a.num_states() * nc];
    loop {
        let snapshot = live.clone();
        let linked = |x: StateId, y: StateId| snapshot[x.0 * nc + y.0];
        let mut changed = false;
        for ai in a.state_ids() {
            for ci in c.state_ids() {
                if live[ai.0 * nc + ci.0] && !check.violations(ai, ci, &linked).is_empty() {
                    live[ai.0 * nc + ci.0] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let pairs = a
        .state_ids()
        .flat_map(|ai| c.state_ids().map(move |ci| (ai, ci)))
        .filter(|(ai, ci)| live[ai.0 * nc + ci.0]);
    let r = RetrieveRelation::from_pairs(a, c, pairs, "synthesized")?;
    Ok(init_witnesses(a, c, &r).is_empty().then_some(r))
}
