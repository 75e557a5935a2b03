use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use refinery::cli::run;
use refinery::corpus::{
    abstract_queue, concrete_queue, machine, nontransitivity_chain, oracle_counterexample, pairs, parse_manifest,
    sortout_queue, CorpusPair, Link, QueueVariant, QUEUE_LINK,
};
use refinery::kernel::Lts;
use refinery::refine::{
    check_action_refinement, check_divergence, check_downward_simulation, check_nontransitivity_witness,
    check_operation_pair, check_trace_refinement, check_weak_refinement, greatest_simulation, ActionEntry,
    ActionMapping, ConditionSet, ResolvedMapping, RetrieveRelation, VariantSpec, Verdict, Violation, WeakOptions,
};
use refinery::speclang::{load, Bounds, EventClass};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lts(src: &str) -> Lts {
    load(src, &Bounds::default()).expect("corpus machine loads")
}

fn named(name: &str) -> Lts {
    lts(&machine(name).expect("corpus machine exists").source)
}

fn queue(v: QueueVariant) -> Lts {
    lts(&concrete_queue(2, 3, v))
}

fn link(a: &Lts, c: &Lts) -> RetrieveRelation {
    RetrieveRelation::from_predicate(a, c, QUEUE_LINK).unwrap()
}

fn conds(s: &str) -> ConditionSet {
    s.parse().unwrap()
}

fn as_internal(c: &Lts, e: &str) -> Lts {
    c.with_class(e, EventClass::Internal).unwrap()
}

fn replays(v: &Verdict, c: &Lts) -> bool {
    v.witness.as_ref().and_then(|w| w.trace.as_ref().map(|p| p.replays_in(c) && p.last() == w.concrete_state)) == Some(true)
}

fn is_sorted(c: &Lts, v: &Verdict) -> bool {
    let w = v.witness.as_ref().unwrap();
    c.valuation(w.concrete_state)[0].elements().unwrap().windows(2).all(|p| p[0] <= p[1])
}

fn violation(v: &Verdict) -> Option<Violation> {
    v.witness.as_ref().map(|w| w.violation)
}

fn ac1() -> Outcome {
    let (a, so) = (lts(&abstract_queue(2, 3)), lts(&sortout_queue(2, 3)));
    let id = Default::default();
    let down = check_downward_simulation(&a, &so, &link(&a, &so), &ConditionSet::z(), &id).unwrap();
    let up = check_downward_simulation(&so, &a, &link(&so, &a), &ConditionSet::z(), &id).unwrap();
    ensure(down.passed(), || "SortOut does not refine AQueue".into())?;
    ensure(up.passed(), || "AQueue does not refine SortOut".into())?;
    Ok("pass/pass under {2,3}".into())
}

fn ac2() -> Outcome {
    let a = lts(&abstract_queue(2, 3));
    let plain = queue(QueueVariant::Plain);
    let r = link(&a, &plain);
    for op in ["sort", "cycle"] {
        for cs in ["1", "2,3"] {
            let v = check_operation_pair(&a, &plain, &r, None, op, &conds(cs)).unwrap();
            ensure(v.passed(), || format!("unguarded {op} fails as skip under {{{cs}}}"))?;
        }
    }
    let guarded = queue(QueueVariant::GuardedSort);
    let r = link(&a, &guarded);
    for cs in ["1", "3"] {
        let v = check_operation_pair(&a, &guarded, &r, None, "sort", &conds(cs)).unwrap();
        ensure(v.passed(), || format!("guarded sort fails under {{{cs}}}"))?;
    }
    let mut at = String::new();
    for cs in ["2", "1,2", "2,3", "1,2,3"] {
        let v = check_operation_pair(&a, &guarded, &r, None, "sort", &conds(cs)).unwrap();
        ensure(violation(&v) == Some(Violation::Enabledness), || format!("guarded sort under {{{cs}}}: {:?}", violation(&v)))?;
        ensure(replays(&v, &guarded), || format!("witness under {{{cs}}} does not replay"))?;
        ensure(is_sorted(&guarded, &v), || format!("witness under {{{cs}}} is not at a sorted state"))?;
        at = guarded.show_state(v.witness.unwrap().concrete_state);
    }
    Ok(format!("sort/cycle skip under {{1}} and {{2,3}}; guarded sort fails (2) at {at}"))
}

fn ac3() -> Outcome {
    let plain = queue(QueueVariant::Plain);
    for e in ["sort", "cycle"] {
        let v = check_divergence(&plain, &[e.to_string()].into(), None).unwrap();
        ensure(violation(&v) == Some(Violation::Divergence), || format!("plain {e} is not divergent"))?;
        ensure(replays(&v, &plain), || format!("plain {e} witness does not replay"))?;
    }
    for variant in [QueueVariant::GuardedSort, QueueVariant::SortOnceFlag, QueueVariant::CycleCounter(2)] {
        let c = queue(variant);
        let (e, text) = variant.variant().unwrap();
        let events: BTreeSet<String> = [e.to_string()].into();
        ensure(check_divergence(&c, &events, None).unwrap().passed(), || format!("{} diverges on {e}", variant.name()))?;
        let spec = VariantSpec::parse(text, &c).map_err(|x| x.to_string())?;
        let v = check_divergence(&c, &events, Some(&spec)).map_err(|x| x.to_string())?;
        ensure(v.passed(), || format!("variant `{text}` does not decrease on {} {e}", variant.name()))?;
    }
    Ok("plain sort and cycle diverge; three variants verified".into())
}

fn ac4() -> Outcome {
    let a = lts(&abstract_queue(2, 3));
    let id = Default::default();
    let guarded = as_internal(&queue(QueueVariant::GuardedSort), "sort");
    let keep = WeakOptions { preserve_divergence: true };
    let r = link(&a, &guarded);
    for opts in [WeakOptions::default(), keep] {
        let v = check_weak_refinement(&a, &guarded, &r, &id, &ConditionSet::z(), opts).unwrap();
        ensure(v.passed(), || format!("guarded internal sort fails: {:?}", violation(&v)))?;
    }
    let plain = as_internal(&queue(QueueVariant::Plain), "sort");
    let v = check_weak_refinement(&a, &plain, &link(&a, &plain), &id, &ConditionSet::z(), keep).unwrap();
    ensure(violation(&v) == Some(Violation::DivergencePreservation), || format!("unguarded internal sort: {:?}", violation(&v)))?;
    ensure(replays(&v, &plain), || "divergence witness does not replay".into())?;
    Ok("guarded internal sort passes; unguarded fails divergence preservation".into())
}

fn ac5() -> Outcome {
    let a = lts(&abstract_queue(2, 3));
    let am = ActionMapping::new().with("out", ActionEntry::new(&["sort", "out"]));
    let plain = queue(QueueVariant::Plain);
    let v = check_action_refinement(&a, &plain, &link(&a, &plain), &am, &ConditionSet::z()).unwrap();
    ensure(v.passed(), || format!("unguarded sort;out fails: {:?}", violation(&v)))?;
    let guarded = queue(QueueVariant::GuardedSort);
    let v = check_action_refinement(&a, &guarded, &link(&a, &guarded), &am, &conds("2")).unwrap();
    ensure(violation(&v) == Some(Violation::Enabledness), || format!("guarded sort;out: {:?}", violation(&v)))?;
    ensure(replays(&v, &guarded), || "witness does not replay".into())?;
    ensure(is_sorted(&guarded, &v), || "witness is not at a sorted state".into())?;
    Ok(format!("unguarded passes; guarded fails (2) at {}", guarded.show_state(v.witness.unwrap().concrete_state)))
}

fn ac6() -> Outcome {
    let [m1, m2, m3] = nontransitivity_chain().map(|s| lts(&s));
    let r = |x: &Lts, y: &Lts| RetrieveRelation::identity(x, y).unwrap();
    let report = check_nontransitivity_witness(&m1, &m2, &m3, &r(&m1, &m2), &r(&m2, &m3), None, &conds("3")).unwrap();
    ensure(report.first.passed() && report.second.passed(), || "a single step fails under {3}".into())?;
    ensure(!report.composed.passed(), || "the composed step passes under {3}".into())?;
    Ok(format!("steps pass, composition fails {}", violation(&report.composed).unwrap()))
}

struct Loaded {
    pair: CorpusPair,
    a: Lts,
    c: Lts,
    r: RetrieveRelation,
}

fn corpus_pairs() -> Vec<Loaded> {
    pairs()
        .into_iter()
        .map(|pair| {
            let (a, c) = (named(pair.abstract_name), named(pair.concrete_name));
            let r = match pair.link {
                Link::Identity => RetrieveRelation::identity(&a, &c).unwrap(),
                Link::Predicate(p) => RetrieveRelation::from_predicate(&a, &c, p).unwrap(),
            };
            Loaded { pair, a, c, r }
        })
        .collect()
}

const DEPTH: usize = 6;

fn ac7() -> Outcome {
    let all = corpus_pairs();
    let mut failing = 0;
    for l in &all {
        let v = check_trace_refinement(&l.a, &l.c, &l.pair.mapping).unwrap();
        let cm = l.pair.mapping.resolve(&l.a, &l.c).unwrap();
        let cex = oracle_counterexample(&l.a, &ResolvedMapping::identity(&l.a), &l.c, &cm, DEPTH).map(|t| t.len());
        let observed = (!v.passed()).then(|| v.diagnostics["witness.observations"]);
        let within = observed.filter(|n| *n <= DEPTH);
        ensure(within == cex, || format!("{}: checker {observed:?}, oracle {cex:?}", l.pair.name))?;
        failing += usize::from(cex.is_some());
    }
    Ok(format!("{} pairs, {failing} with counterexamples, 0 disagreements", all.len()))
}

fn ac8() -> Outcome {
    let all = corpus_pairs();
    let mut sims = 0;
    for l in &all {
        let traces = check_trace_refinement(&l.a, &l.c, &l.pair.mapping).unwrap().passed();
        for cs in ["1", "1,2", "1,3", "1,2,3"] {
            let v = check_downward_simulation(&l.a, &l.c, &l.r, &conds(cs), &l.pair.mapping).unwrap();
            if v.passed() {
                sims += 1;
                ensure(traces, || format!("{}: simulation under {{{cs}}} passes, traces fail", l.pair.name))?;
            }
        }
        if greatest_simulation(&l.a, &l.c, &l.pair.mapping, &ConditionSet::consistency()).unwrap().is_some() {
            sims += 1;
            ensure(traces, || format!("{}: a consistent simulation exists, traces fail", l.pair.name))?;
        }
    }
    Ok(format!("{sims} passing simulations over {} pairs, 0 violations", all.len()))
}

fn ac9() -> Outcome {
    let all = corpus_pairs();
    let mut compared = 0;
    for l in &all {
        let visible = |m: &Lts| {
            m.events_of_class(EventClass::Internal).iter().fold(m.clone(), |m, e| m.with_class(e, EventClass::New).unwrap())
        };
        let (a, c) = (visible(&l.a), visible(&l.c));
        let resolved = l.pair.mapping.resolve(&a, &c).unwrap();
        let mut am = ActionMapping::new();
        for ae in a.alphabet().keys() {
            if let Some(ce) = resolved.preimage(ae).first() {
                am = am.with(ae, ActionEntry::new(&[*ce]));
            }
        }
        let Ok(Some(induced)) = am.induced_alphabet(&a, &c) else { continue };
        for cs in ["1", "1,2", "2,3", "1,2,3"] {
            let cs = conds(cs);
            let sim = check_downward_simulation(&a, &c, &l.r, &cs, &l.pair.mapping).unwrap();
            let weak = check_weak_refinement(&a, &c, &l.r, &l.pair.mapping, &cs, WeakOptions::default()).unwrap();
            ensure(sim.passed() == weak.passed(), || format!("{}: weak {} vs sim {}", l.pair.name, weak.status, sim.status))?;
            let sim = check_downward_simulation(&a, &c, &l.r, &cs, &induced).unwrap();
            let action = check_action_refinement(&a, &c, &l.r, &am, &cs).unwrap();
            ensure(sim.passed() == action.passed(), || {
                format!("{}: action {} vs sim {}", l.pair.name, action.status, sim.status)
            })?;
            compared += 2;
        }
    }
    Ok(format!("{compared} verdict comparisons, all identical"))
}

fn report(args: &[String]) -> (i32, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut out, &mut err);
    (code, out)
}

fn ac10() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let text = std::fs::read_to_string(dir.join("manifest.txt")).map_err(|e| e.to_string())?;
    let entries = parse_manifest(&text).map_err(|e| e.to_string())?;
    for e in &entries {
        let mut args = e.check_args(&dir);
        args.extend(["--format".into(), "json".into()]);
        let first = report(&args);
        ensure(first.0 != 2, || format!("{}: {}", e.name, String::from_utf8_lossy(&first.1)))?;
        for _ in 0..2 {
            ensure(report(&args) == first, || format!("{}: reports differ between runs", e.name))?;
        }
    }
    Ok(format!("{} reports, each byte-identical over 3 runs", entries.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("SortOut equivalence", ac1),
        ("perspicuity", ac2),
        ("divergence", ac3),
        ("weak refinement", ac4),
        ("action refinement", ac5),
        ("non-transitivity", ac6),
        ("oracle equivalence", ac7),
        ("soundness chain", ac8),
        ("degeneracy equivalences", ac9),
        ("determinism", ac10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("[PASS] AC{} {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] AC{} {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
