use std::collections::BTreeSet;

use refinery::corpus::{
    abstract_queue, concrete_queue, machine, mutant_queue, nontransitivity_chain, sortout_queue, walker_pair, Mutant,
    QueueVariant, QUEUE_LINK,
};
use refinery::kernel::{divergent_states, Lts};
use refinery::refine::{
    check_action_refinement, check_divergence, check_downward_simulation, check_eventb, check_nontransitivity_witness,
    check_operation_pair, check_trace_refinement, check_weak_refinement, greatest_simulation, relabel, ActionEntry,
    ActionMapping, AlphabetMapping, ConditionSet, EventBOptions, RefineError, ResolvedMapping, RetrieveRelation,
    VariantSpec, Verdict, Violation, WeakOptions,
};
use refinery::speclang::{load, Bounds, EventClass};

fn lts(src: &str) -> Lts {
    load(src, &Bounds::default()).unwrap()
}

fn aq() -> Lts {
    lts(&abstract_queue(2, 3))
}

fn cq(v: QueueVariant) -> Lts {
    lts(&concrete_queue(2, 3, v))
}

fn link(a: &Lts, c: &Lts) -> RetrieveRelation {
    RetrieveRelation::from_predicate(a, c, QUEUE_LINK).unwrap()
}

fn conds(s: &str) -> ConditionSet {
    s.parse().unwrap()
}

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn internal(c: &Lts, e: &str) -> Lts {
    c.with_class(e, EventClass::Internal).unwrap()
}

fn assert_replays(v: &Verdict, c: &Lts) {
    let w = v.witness.as_ref().expect("failing verdict has a witness");
    let p = w.trace.as_ref().expect("witness state is reachable");
    assert!(p.replays_in(c));
    assert_eq!(p.last(), w.concrete_state);
}

#[test]
fn sortout_is_equivalent_to_the_abstract_queue() {
    let (a, so) = (aq(), lts(&sortout_queue(2, 3)));
    let id = AlphabetMapping::identity();
    assert!(check_downward_simulation(&a, &so, &link(&a, &so), &ConditionSet::z(), &id).unwrap().passed());
    assert!(check_downward_simulation(&so, &a, &link(&so, &a), &ConditionSet::z(), &id).unwrap().passed());
}

#[test]
fn sort_as_skip_depends_on_enabledness() {
    let a = aq();
    let plain = cq(QueueVariant::Plain);
    for op in ["sort", "cycle"] {
        for cs in ["1", "2,3"] {
            let v = check_operation_pair(&a, &plain, &link(&a, &plain), None, op, &conds(cs)).unwrap();
            assert!(v.passed(), "{op} under {cs}");
        }
    }
    let guarded = cq(QueueVariant::GuardedSort);
    let r = link(&a, &guarded);
    assert!(check_operation_pair(&a, &guarded, &r, None, "sort", &conds("1")).unwrap().passed());
    assert!(check_operation_pair(&a, &guarded, &r, None, "sort", &conds("3")).unwrap().passed());
    for cs in ["2", "1,2", "2,3", "1,2,3"] {
        let v = check_operation_pair(&a, &guarded, &r, None, "sort", &conds(cs)).unwrap();
        let w = v.witness.as_ref().unwrap();
        assert_eq!(w.violation, Violation::Enabledness);
        let s = &guarded.valuation(w.concrete_state)[0];
        assert!(s.elements().unwrap().windows(2).all(|p| p[0] <= p[1]), "witness state {s} is sorted");
        assert_replays(&v, &guarded);
    }
}

#[test]
fn trace_refinement_examples() {
    let id = AlphabetMapping::identity();
    for entry in refinery::corpus::machines(2, 3) {
        let m = lts(&entry.source);
        assert!(check_trace_refinement(&m, &m, &id).unwrap().passed(), "{}", entry.name);
    }
    let a = aq();
    assert!(check_trace_refinement(&a, &cq(QueueVariant::Plain), &id).unwrap().passed());
    let bad = lts(&mutant_queue(2, 3, Mutant::UnsortedOut));
    let v = check_trace_refinement(&a, &bad, &id).unwrap();
    assert_eq!(v.witness.as_ref().unwrap().violation, Violation::TraceInclusion);
    assert_eq!(v.diagnostics["witness.observations"], 3);
    assert_replays(&v, &bad);
    assert_eq!(v.witness.as_ref().unwrap().label.as_ref().unwrap().event, "out");
    let labels: Vec<String> = v.witness.unwrap().trace.unwrap().steps.iter().map(|(l, _)| l.to_string()).collect();
    let visible: Vec<&String> = labels.iter().filter(|l| !l.starts_with("sort") && !l.starts_with("cycle")).collect();
    assert_eq!(visible.len(), 2);
    assert!(visible.iter().all(|l| l.starts_with("in.")));
}

#[test]
fn eventb_examples() {
    let a = aq();
    let id = AlphabetMapping::identity();
    let dl = EventBOptions { relative_deadlock: true, variant: None };
    let plain = cq(QueueVariant::Plain);
    assert!(check_eventb(&a, &plain, &link(&a, &plain), &id, &set(&["sort", "cycle"]), &dl).unwrap().passed());

    let drop = lts(&mutant_queue(2, 3, Mutant::DroppingCycle));
    let v = check_eventb(&a, &drop, &link(&a, &drop), &id, &BTreeSet::new(), &EventBOptions::default()).unwrap();
    assert_eq!(v.witness.as_ref().unwrap().violation, Violation::SkipRefinement);
    assert_replays(&v, &drop);

    let nosort = lts(&mutant_queue(2, 3, Mutant::NoSort));
    let v = check_eventb(&a, &nosort, &link(&a, &nosort), &id, &BTreeSet::new(), &dl).unwrap();
    let w = v.witness.as_ref().unwrap();
    assert_eq!(w.violation, Violation::RelativeDeadlock);
    assert!(nosort.outgoing(w.concrete_state).is_empty());
    assert_eq!(nosort.valuation(w.concrete_state)[0].elements().unwrap().len(), 3);
    assert_replays(&v, &nosort);

    let mapped = AlphabetMapping::identity().skip("sort");
    assert_eq!(
        check_eventb(&a, &plain, &link(&a, &plain), &mapped, &set(&["sort"]), &dl).unwrap_err(),
        RefineError::NewInMapping("sort".into())
    );
}

#[test]
fn eventb_variant_covers_every_new_event() {
    let a = aq();
    let c = cq(QueueVariant::CycleCounter(2));
    let opts = EventBOptions { relative_deadlock: false, variant: Some(VariantSpec::parse("cnt", &c).unwrap()) };
    let v = check_eventb(&a, &c, &link(&a, &c), &AlphabetMapping::identity(), &BTreeSet::new(), &opts).unwrap();
    let w = v.witness.unwrap();
    assert_eq!(w.violation, Violation::Variant);
    assert_eq!(w.operation.as_deref(), Some("sort"));
}

#[test]
fn weak_refinement_examples() {
    let a = aq();
    let id = AlphabetMapping::identity();
    let guarded = internal(&cq(QueueVariant::GuardedSort), "sort");
    let r = link(&a, &guarded);
    assert!(check_weak_refinement(&a, &guarded, &r, &id, &ConditionSet::z(), WeakOptions::default()).unwrap().passed());
    let keep = WeakOptions { preserve_divergence: true };
    assert!(check_weak_refinement(&a, &guarded, &r, &id, &ConditionSet::z(), keep).unwrap().passed());

    let plain = internal(&cq(QueueVariant::Plain), "sort");
    let v = check_weak_refinement(&a, &plain, &link(&a, &plain), &id, &ConditionSet::z(), keep).unwrap();
    assert_eq!(v.witness.as_ref().unwrap().violation, Violation::DivergencePreservation);
    assert_replays(&v, &plain);

    let mapped = AlphabetMapping::identity().skip("sort");
    assert!(check_weak_refinement(&a, &plain, &link(&a, &plain), &mapped, &ConditionSet::z(), keep).is_err());
}

#[test]
fn action_refinement_examples() {
    let a = aq();
    let am = ActionMapping::new().with("out", ActionEntry::new(&["sort", "out"]));
    let plain = cq(QueueVariant::Plain);
    assert!(check_action_refinement(&a, &plain, &link(&a, &plain), &am, &ConditionSet::z()).unwrap().passed());

    let guarded = cq(QueueVariant::GuardedSort);
    let v = check_action_refinement(&a, &guarded, &link(&a, &guarded), &am, &conds("2")).unwrap();
    let w = v.witness.as_ref().unwrap();
    assert_eq!(w.violation, Violation::Enabledness);
    let s = &guarded.valuation(w.concrete_state)[0];
    assert!(!s.elements().unwrap().is_empty());
    assert!(s.elements().unwrap().windows(2).all(|p| p[0] <= p[1]));
    assert_replays(&v, &guarded);

    let mut bad = ActionEntry::new(&["sort", "out"]);
    bad.outputs_at = Some(5);
    let am = ActionMapping::new().with("out", bad);
    assert!(check_action_refinement(&a, &plain, &link(&a, &plain), &am, &ConditionSet::z()).is_err());
}

#[test]
fn divergence_examples() {
    let plain = cq(QueueVariant::Plain);
    for e in ["sort", "cycle"] {
        let v = check_divergence(&plain, &set(&[e]), None).unwrap();
        assert_eq!(v.witness.as_ref().unwrap().violation, Violation::Divergence);
        assert_replays(&v, &plain);
    }
    let cases = [
        (QueueVariant::GuardedSort, "sort", "if sorted(s) then 0 else 1"),
        (QueueVariant::SortOnceFlag, "sort", "if f then 1 else 0"),
        (QueueVariant::CycleCounter(2), "cycle", "cnt"),
    ];
    for (variant, e, text) in cases {
        let c = cq(variant);
        assert_eq!(variant.variant(), Some((e, text)));
        let spec = VariantSpec::parse(text, &c).unwrap();
        assert!(check_divergence(&c, &set(&[e]), Some(&spec)).unwrap().passed(), "{}", variant.name());
        assert!(divergent_states(&c, &set(&[e])).unwrap().is_empty());
    }
    let c = cq(QueueVariant::CycleCounter(2));
    let v = check_divergence(&c, &set(&["cycle"]), Some(&VariantSpec::parse("#s", &c).unwrap())).unwrap();
    assert_eq!(v.witness.unwrap().violation, Violation::Variant);
    assert!(matches!(
        check_divergence(&c, &set(&["cycle"]), Some(&VariantSpec::parse("cnt - 1", &c).unwrap())),
        Err(RefineError::VariantNegative { .. })
    ));
    assert!(VariantSpec::parse("sorted(s)", &c).is_err());
}

#[test]
fn greatest_simulation_examples() {
    let a = aq();
    let one = ConditionSet::consistency();
    let id = AlphabetMapping::identity();
    let g = greatest_simulation(&a, &a, &id, &one).unwrap().unwrap();
    let ident = RetrieveRelation::identity(&a, &a).unwrap();
    assert!(ident.pairs().is_subset(g.pairs()));

    let plain = cq(QueueVariant::Plain);
    let skip = AlphabetMapping::identity().skip("sort").skip("cycle");
    let g = greatest_simulation(&a, &plain, &skip, &one).unwrap().unwrap();
    assert!(link(&a, &plain).pairs().is_subset(g.pairs()));

    let bad = lts(&mutant_queue(2, 3, Mutant::UnsortedOut));
    assert!(greatest_simulation(&a, &bad, &id, &one).unwrap().is_none());
    assert_eq!(greatest_simulation(&a, &a, &id, &conds("3")).unwrap_err(), RefineError::RestrictedOnly);
}

#[test]
fn relabelling() {
    let plain = cq(QueueVariant::Plain);
    let same = relabel(&plain, &ResolvedMapping::identity(&plain)).unwrap();
    assert_eq!(same.transitions(), plain.transitions());
    assert_eq!(same.alphabet(), plain.alphabet());

    let (w, g) = walker_pair(3);
    let (w, g) = (lts(&w), lts(&g));
    let split = AlphabetMapping::identity().map("moveNorth", "move").map("moveEast", "move");
    let moved = relabel(&g, &split.resolve(&w, &g).unwrap()).unwrap();
    assert_eq!(moved.alphabet().keys().collect::<Vec<_>>(), ["move"]);
    assert_eq!(moved.transitions().len(), g.transitions().len());

    let extra = lts(&concrete_queue(2, 3, QueueVariant::Plain).replace("event sort new", "event sort"));
    let a = aq();
    let base = AlphabetMapping::identity().skip("cycle");
    assert_eq!(base.resolve(&a, &extra).unwrap_err(), RefineError::Unmapped("sort".into()));
    let r = relabel(&extra, &base.tolerate().resolve(&a, &extra).unwrap()).unwrap();
    assert_eq!(r.class_of("skip"), Some(EventClass::Internal));
    assert!(r.event("sort").is_none());
}

#[test]
fn chains() {
    let [m1, m2, m3] = nontransitivity_chain().map(|s| lts(&s));
    let r = |x: &Lts, y: &Lts| RetrieveRelation::identity(x, y).unwrap();
    let report = check_nontransitivity_witness(&m1, &m2, &m3, &r(&m1, &m2), &r(&m2, &m3), None, &conds("3")).unwrap();
    assert!(report.demonstrates_nontransitivity());
    assert!(report.first.warnings.iter().any(|w| w.contains("not transitive")));
    assert_eq!(report.composed.witness.as_ref().unwrap().violation, Violation::RestrictedConsistency);

    for cs in ["1", "1,2", "2,3"] {
        let report =
            check_nontransitivity_witness(&m1, &m2, &m3, &r(&m1, &m2), &r(&m2, &m3), None, &conds(cs)).unwrap();
        assert!(!report.demonstrates_nontransitivity(), "{cs}");
    }
    let q = aq();
    let report = check_nontransitivity_witness(&q, &q, &q, &r(&q, &q), &r(&q, &q), None, &conds("1,2,3")).unwrap();
    assert!(report.first.passed() && report.second.passed() && report.composed.passed());
}

#[test]
fn consistency_chains_compose() {
    let a = aq();
    let so = lts(&sortout_queue(2, 3));
    let plain = cq(QueueVariant::Plain);
    let one = ConditionSet::consistency();
    let id = AlphabetMapping::identity();
    let r12 = link(&a, &so);
    let r23 = RetrieveRelation::identity(&so, &plain).unwrap();
    let report = check_nontransitivity_witness(&a, &so, &plain, &r12, &r23, None, &one).unwrap();
    assert!(report.first.passed());
    if report.second.passed() {
        assert!(report.composed.passed());
    }
    assert!(check_downward_simulation(&a, &plain, &report.r13, &one, &id).unwrap().passed());
}

#[test]
fn verdicts_do_not_depend_on_thread_count() {
    let a = aq();
    let plain = cq(QueueVariant::Plain);
    let skip = AlphabetMapping::identity().skip("sort").skip("cycle");
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| check_downward_simulation(&a, &plain, &link(&a, &plain), &ConditionSet::z(), &skip).unwrap())
    };
    let one = run(1);
    assert!(!one.passed());
    for t in [2, 4, 8] {
        assert_eq!(run(t), one);
    }
}

#[test]
fn corpus_lookup() {
    assert!(machine("aqueue").is_some());
    assert!(machine("nope").is_none());
}
