use std::collections::BTreeSet;

use proptest::prelude::*;

use refinery::corpus::oracle_counterexample;
use refinery::kernel::{divergent_states, EventSig, Label, Lts, LtsParts, StateId, Transition};
use refinery::refine::{
    check_action_refinement, check_divergence, check_downward_simulation, check_trace_refinement,
    check_weak_refinement, greatest_simulation, relabel, ActionEntry, ActionMapping, AlphabetMapping, ConditionSet,
    ResolvedMapping, RetrieveRelation, VariantSpec, Verdict, WeakOptions,
};
use refinery::speclang::{Domain, EventClass, Ty, Value};

/// Events of the random machines: two plain ones, one with an output.
const EVENTS: [&str; 3] = ["a", "b", "o"];

#[derive(Debug, Clone)]
struct Shape {
    n: usize,
    inits: Vec<usize>,
    edges: Vec<(usize, usize, usize, i64)>,
}

fn shape(max_states: usize) -> impl Strategy<Value = Shape> {
    (1..=max_states).prop_flat_map(|n| {
        (
            proptest::collection::btree_set(0..n, 1..=n.min(2)),
            proptest::collection::vec((0..n, 0..EVENTS.len(), 0..n, 0..2i64), 0..=3 * n),
        )
            .prop_map(move |(inits, edges)| Shape { n, inits: inits.into_iter().collect(), edges })
    })
}

fn build(s: &Shape, internal: &[&str]) -> Lts {
    let sig = |name: &str| EventSig {
        name: name.into(),
        inputs: vec![],
        outputs: if name == "o" { vec![("y".into(), Domain::Int { lo: 0, hi: 1 })] } else { vec![] },
        class: if internal.contains(&name) { EventClass::Internal } else { EventClass::External },
    };
    let label = |e: usize, y: i64| {
        if EVENTS[e] == "o" {
            Label::new("o", vec![], vec![Value::Int(y)])
        } else {
            Label::plain(EVENTS[e])
        }
    };
    Lts::new(LtsParts {
        name: "R".into(),
        vars: vec![("x".into(), Ty::Int)],
        states: (0..s.n as i64).map(|i| vec![Value::Int(i)]).collect(),
        inits: s.inits.iter().map(|i| StateId(*i)).collect(),
        transitions: s
            .edges
            .iter()
            .map(|&(f, e, t, y)| Transition { from: StateId(f), label: label(e, y), to: StateId(t) })
            .collect(),
        alphabet: EVENTS.iter().map(|e| sig(e)).collect(),
        ..LtsParts::default()
    })
    .unwrap()
}

fn relation(a: &Lts, c: &Lts, bits: &[bool]) -> RetrieveRelation {
    let na = a.num_states();
    let pairs = c
        .state_ids()
        .flat_map(|ci| a.state_ids().map(move |ai| (ai, ci)))
        .filter(|(ai, ci)| bits[(ci.0 * na + ai.0) % bits.len()]);
    RetrieveRelation::from_pairs(a, c, pairs, "random").unwrap()
}

fn assert_replays(v: &Verdict, c: &Lts) {
    if let Some(w) = &v.witness {
        if let Some(p) = &w.trace {
            assert!(p.replays_in(c));
            assert_eq!(p.last(), w.concrete_state);
        }
    }
}

fn all_conditions() -> impl Strategy<Value = ConditionSet> {
    prop_oneof![Just("1"), Just("1,2"), Just("2,3"), Just("1,2,3"), Just("1,3")].prop_map(|s| s.parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn trace_checker_matches_the_oracle(sa in shape(4), sc in shape(4)) {
        let (a, c) = (build(&sa, &[]), build(&sc, &[]));
        let v = check_trace_refinement(&a, &c, &AlphabetMapping::identity()).unwrap();
        let id = (ResolvedMapping::identity(&a), ResolvedMapping::identity(&c));
        assert_replays(&v, &c);
        match v.diagnostics.get("witness.observations") {
            Some(&n) if !v.passed() => {
                let cex = oracle_counterexample(&a, &id.0, &c, &id.1, n).expect("oracle finds the witness");
                prop_assert_eq!(cex.len(), n);
                prop_assert!(oracle_counterexample(&a, &id.0, &c, &id.1, n - 1).is_none());
            }
            _ => {
                prop_assert!(v.passed());
                prop_assert!(oracle_counterexample(&a, &id.0, &c, &id.1, 6).is_none());
            }
        }
    }

    #[test]
    fn trace_checker_erases_internal_steps(sa in shape(3), sc in shape(4)) {
        let (a, c) = (build(&sa, &["b"]), build(&sc, &["b"]));
        let v = check_trace_refinement(&a, &c, &AlphabetMapping::identity()).unwrap();
        let (am, cm) = (ResolvedMapping::identity(&a), ResolvedMapping::identity(&c));
        let cex = oracle_counterexample(&a, &am, &c, &cm, 6);
        prop_assert_eq!(v.passed(), cex.is_none());
    }

    #[test]
    fn consistent_simulation_implies_trace_inclusion(sa in shape(4), sc in shape(4), bits in proptest::collection::vec(any::<bool>(), 16)) {
        let (a, c) = (build(&sa, &[]), build(&sc, &[]));
        let id = AlphabetMapping::identity();
        let traces = check_trace_refinement(&a, &c, &id).unwrap().passed();
        let r = relation(&a, &c, &bits);
        let sim = check_downward_simulation(&a, &c, &r, &ConditionSet::consistency(), &id).unwrap();
        assert_replays(&sim, &c);
        if sim.passed() {
            prop_assert!(traces);
        }
        if let Some(g) = greatest_simulation(&a, &c, &id, &ConditionSet::consistency()).unwrap() {
            prop_assert!(check_downward_simulation(&a, &c, &g, &ConditionSet::consistency(), &id).unwrap().passed());
            prop_assert!(traces);
        }
    }

    #[test]
    fn greatest_simulation_contains_every_passing_relation(sa in shape(3), sc in shape(3), bits in proptest::collection::vec(any::<bool>(), 9), conds in all_conditions()) {
        let (a, c) = (build(&sa, &[]), build(&sc, &[]));
        let id = AlphabetMapping::identity();
        let r = relation(&a, &c, &bits);
        if check_downward_simulation(&a, &c, &r, &conds, &id).unwrap().passed() {
            let g = greatest_simulation(&a, &c, &id, &conds).unwrap().expect("a simulation exists");
            prop_assert!(r.pairs().is_subset(g.pairs()));
        }
    }

    #[test]
    fn weak_without_internal_events_is_simulation(sa in shape(4), sc in shape(4), bits in proptest::collection::vec(any::<bool>(), 16), conds in all_conditions()) {
        let (a, c) = (build(&sa, &[]), build(&sc, &[]));
        let id = AlphabetMapping::identity();
        let r = relation(&a, &c, &bits);
        let sim = check_downward_simulation(&a, &c, &r, &conds, &id).unwrap();
        let weak = check_weak_refinement(&a, &c, &r, &id, &conds, WeakOptions::default()).unwrap();
        assert_replays(&weak, &c);
        prop_assert_eq!(sim.passed(), weak.passed());
    }

    #[test]
    fn unit_actions_are_simulation(sa in shape(4), sc in shape(4), bits in proptest::collection::vec(any::<bool>(), 16), conds in all_conditions()) {
        let (a, c) = (build(&sa, &[]), build(&sc, &[]));
        let r = relation(&a, &c, &bits);
        let am = EVENTS.iter().fold(ActionMapping::new(), |m, e| m.with(e, ActionEntry::new(&[*e])));
        let induced = am.induced_alphabet(&a, &c).unwrap().unwrap();
        let sim = check_downward_simulation(&a, &c, &r, &conds, &induced).unwrap();
        let action = check_action_refinement(&a, &c, &r, &am, &conds).unwrap();
        assert_replays(&action, &c);
        prop_assert_eq!(sim.passed(), action.passed());
    }

    #[test]
    fn identity_relabel_only_hides_internal_events(sc in shape(5)) {
        let plain = build(&sc, &[]);
        let again = relabel(&plain, &ResolvedMapping::identity(&plain)).unwrap();
        prop_assert_eq!(again.transitions(), plain.transitions());
        prop_assert_eq!(again.inits(), plain.inits());

        let c = build(&sc, &["a"]);
        let hidden = relabel(&c, &ResolvedMapping::identity(&c)).unwrap();
        let mut expected: Vec<Transition> = c
            .transitions()
            .iter()
            .map(|t| if t.label.event == "a" { Transition { label: Label::plain("skip"), ..t.clone() } } else { t.clone() })
            .collect();
        expected.sort();
        expected.dedup();
        prop_assert_eq!(hidden.transitions(), &expected[..]);
    }

    #[test]
    fn divergence_and_variants_are_sound(sc in shape(5), offset in 0i64..3) {
        let c = build(&sc, &[]);
        let events: BTreeSet<String> = ["a".to_string()].into();
        let divergent = divergent_states(&c, &events).unwrap();
        let plain = check_divergence(&c, &events, None).unwrap();
        assert_replays(&plain, &c);
        prop_assert_eq!(plain.passed(), divergent.is_empty());

        for text in [format!("x + {offset}"), format!("{} - x", sc.n as i64 - 1 + offset)] {
            let variant = VariantSpec::parse(&text, &c).unwrap();
            let v = check_divergence(&c, &events, Some(&variant)).unwrap();
            assert_replays(&v, &c);
            if v.passed() {
                prop_assert!(divergent.is_empty());
            }
        }
    }
}
