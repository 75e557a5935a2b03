//! Event-B simple refinement of the queue: new events refine skip, old
//! events stay consistent, and the concrete machine may not deadlock more
//! often than the abstract one.

use std::collections::BTreeSet;
use std::error::Error;

use refinery::corpus::{abstract_queue, concrete_queue, mutant_queue, Mutant, QueueVariant, QUEUE_LINK};
use refinery::refine::{check_eventb, AlphabetMapping, EventBOptions, RetrieveRelation, VariantSpec};
use refinery::speclang::{load, Bounds};

fn main() -> Result<(), Box<dyn Error>> {
    let a = load(&abstract_queue(2, 3), &Bounds::default())?;
    let id = AlphabetMapping::identity();
    let cases = [
        ("plain", concrete_queue(2, 3, QueueVariant::Plain)),
        ("dropping cycle", mutant_queue(2, 3, Mutant::DroppingCycle)),
        ("no sort", mutant_queue(2, 3, Mutant::NoSort)),
    ];
    for (name, src) in cases {
        let c = load(&src, &Bounds::default())?;
        let r = RetrieveRelation::from_predicate(&a, &c, QUEUE_LINK)?;
        let opts = EventBOptions { relative_deadlock: true, variant: None };
        let v = check_eventb(&a, &c, &r, &id, &BTreeSet::new(), &opts)?;
        println!("{name}: {}", v.status);
        if let Some(w) = &v.witness {
            println!("  {}", w.describe(Some(&a), &c).replace('\n', "\n  "));
        }
    }

    let c = load(&concrete_queue(2, 3, QueueVariant::CycleCounter(2)), &Bounds::default())?;
    let r = RetrieveRelation::from_predicate(&a, &c, QUEUE_LINK)?;
    let opts = EventBOptions { relative_deadlock: false, variant: Some(VariantSpec::parse("cnt", &c)?) };
    let v = check_eventb(&a, &c, &r, &id, &BTreeSet::new(), &opts)?;
    let op = v.witness.as_ref().and_then(|w| w.operation.clone()).unwrap_or_default();
    println!("cycle counter with variant cnt over every new event: {} {op}", v.status);
    Ok(())
}
