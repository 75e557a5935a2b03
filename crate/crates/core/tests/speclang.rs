use refinery::corpus::{abstract_queue, concrete_queue, machines, QueueVariant};
use refinery::kernel::Lts;
use refinery::speclang::{
    compile, eval, ground, list_event_signatures, load, parse, Bounds, Env, EventClass, GroundError, SpecError, Value,
};

#[test]
fn queue_sources_parse() {
    let a = parse(&abstract_queue(2, 3)).unwrap();
    assert_eq!(a.vars.len(), 1);
    assert_eq!(a.events.iter().map(|e| e.name.as_str()).collect::<Vec<_>>(), ["in", "out"]);
    let c = parse(&concrete_queue(2, 3, QueueVariant::Plain)).unwrap();
    assert_eq!(c.vars.len(), 1);
    assert_eq!(c.events.iter().map(|e| e.name.as_str()).collect::<Vec<_>>(), ["in", "out", "sort", "cycle"]);
    let e = parse("").unwrap_err();
    assert_eq!((e.line, e.col), (1, 1));
}

#[test]
fn printed_machines_reparse_identically() {
    for entry in machines(2, 3) {
        let ast = parse(&entry.source).unwrap();
        let again = parse(&ast.to_string()).unwrap();
        assert_eq!(ast, again, "{}", entry.name);
    }
}

#[test]
fn every_corpus_machine_compiles_at_its_bounds() {
    for entry in machines(2, 3) {
        load(&entry.source, &Bounds::vn(entry.v, entry.n)).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
    }
}

#[test]
fn signatures() {
    let a = compile(&abstract_queue(2, 3)).unwrap();
    let rows: Vec<String> = list_event_signatures(&a).iter().map(|s| s.to_string()).collect();
    assert_eq!(rows, ["(in, x?:int 0..V, -, external)", "(out, -, x!:int 0..V, external)"]);

    let empty = compile("machine Still\nvar d : bool\ninit d\n").unwrap();
    assert!(list_event_signatures(&empty).is_empty());

    let src = concrete_queue(2, 3, QueueVariant::Plain).replace("event sort new", "event sort internal");
    let sigs = list_event_signatures(&compile(&src).unwrap());
    assert_eq!(sigs.iter().find(|s| s.name == "sort").unwrap().class, EventClass::Internal);
}

#[test]
fn grounding_counts() {
    let a = load(&abstract_queue(2, 3), &Bounds::default()).unwrap();
    assert_eq!((a.num_states(), a.inits().len()), (20, 1));
    assert_eq!(a.show_state(*a.inits().first().unwrap()), "b={||}");
    let c = load(&concrete_queue(2, 3, QueueVariant::Plain), &Bounds::default()).unwrap();
    assert_eq!((c.num_states(), c.inits().len()), (40, 1));
    assert_eq!(c.show_state(*c.inits().first().unwrap()), "s=[]");
    let small = load(&abstract_queue(0, 1), &Bounds::default()).unwrap();
    let states: Vec<String> = small.state_ids().map(|s| small.show_state(s)).collect();
    assert_eq!(states, ["b={||}", "b={|0|}"]);
}

const UNGUARDED: &str = "machine Bag\nconst N = 1\nvar b : bag int 0..0 max N\ninit b = {||}\n\n\
                         event in (x? : int 0..0)\n  when true\n  then b := b \\/ {|x|}\n";

#[test]
fn overflow_is_pruned_or_rejected() {
    let lts = load(UNGUARDED, &Bounds::default()).unwrap();
    assert_eq!(lts.num_states(), 2);
    assert_eq!(lts.pruned().get("in"), Some(&1));
    assert_eq!(lts.transitions().len(), 1);
    match load(UNGUARDED, &Bounds::default().strict(true)) {
        Err(SpecError::Ground(GroundError::BoundOverflow { event, .. })) => assert_eq!(event, "in"),
        other => panic!("expected overflow, got {other:?}"),
    }
    let guarded = load(&abstract_queue(0, 1), &Bounds::default().strict(true)).unwrap();
    assert!(guarded.pruned().is_empty());
}

#[test]
fn empty_init_is_an_error() {
    let err = load("machine E\nvar d : int 0..1\ninit d = 2\n", &Bounds::default()).unwrap_err();
    assert_eq!(err, SpecError::Ground(GroundError::EmptyInit));
    assert!(err.to_string().contains("empty init set"));
}

#[test]
fn grounding_is_deterministic() {
    let src = concrete_queue(2, 3, QueueVariant::CycleCounter(2));
    let x = load(&src, &Bounds::default()).unwrap();
    let y = load(&src, &Bounds::default()).unwrap();
    assert_eq!(x.transitions(), y.transitions());
    assert_eq!(x.inits(), y.inits());
    assert!(x.state_ids().all(|s| x.valuation(s) == y.valuation(s)));
}

fn transition_env(lts: &Lts, t: &refinery::kernel::Transition, names: (&[String], &[String])) -> Env {
    let mut env = Env::new();
    for (k, v) in lts.consts() {
        env.bind(k.clone(), Value::Int(*v));
    }
    for ((n, _), v) in lts.vars().iter().zip(lts.valuation(t.from)) {
        env.bind(n.clone(), v.clone());
    }
    for (n, v) in names.0.iter().zip(&t.label.inputs).chain(names.1.iter().zip(&t.label.outputs)) {
        env.bind(n.clone(), v.clone());
    }
    env
}

#[test]
fn grounded_transitions_satisfy_their_guards() {
    for entry in machines(2, 3) {
        let typed = compile(&entry.source).unwrap();
        let lts = ground(&typed, &Bounds::default()).unwrap();
        for t in lts.transitions() {
            let decl = typed.ast.events.iter().find(|e| e.name == t.label.event).unwrap();
            let ins: Vec<String> = decl.inputs.iter().map(|p| p.name.clone()).collect();
            let outs: Vec<String> = decl.outputs.iter().map(|p| p.name.clone()).collect();
            let env = transition_env(&lts, t, (&ins, &outs));
            assert_eq!(eval(&decl.guard, &env), Ok(Value::Bool(true)), "{} {}", entry.name, t.label);
        }
    }
}

#[test]
fn abstract_out_emits_the_minimum() {
    let a = load(&abstract_queue(2, 3), &Bounds::default()).unwrap();
    for s in a.state_ids() {
        let items = a.valuation(s)[0].elements().unwrap().to_vec();
        let outs: Vec<&Value> =
            a.outgoing(s).iter().filter(|t| t.label.event == "out").map(|t| &t.label.outputs[0]).collect();
        if items.is_empty() {
            assert!(outs.is_empty());
        } else {
            let min = items.iter().min().unwrap();
            assert!(!outs.is_empty());
            assert!(outs.iter().all(|v| *v == min));
        }
    }
}
