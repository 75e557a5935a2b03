//! Weak refinement with sort as an internal event: external operations are
//! padded with the closure of internal steps, and divergence can be required
//! to match the abstract machine.

use std::error::Error;

use refinery::corpus::{abstract_queue, concrete_queue, QueueVariant, QUEUE_LINK};
use refinery::refine::{check_weak_refinement, AlphabetMapping, ConditionSet, RetrieveRelation, WeakOptions};
use refinery::speclang::{load, Bounds, EventClass};

fn main() -> Result<(), Box<dyn Error>> {
    let a = load(&abstract_queue(2, 3), &Bounds::default())?;
    for variant in [QueueVariant::GuardedSort, QueueVariant::Plain] {
        let c = load(&concrete_queue(2, 3, variant), &Bounds::default())?.with_class("sort", EventClass::Internal)?;
        let r = RetrieveRelation::from_predicate(&a, &c, QUEUE_LINK)?;
        for preserve in [false, true] {
            let opts = WeakOptions { preserve_divergence: preserve };
            let v = check_weak_refinement(&a, &c, &r, &AlphabetMapping::identity(), &ConditionSet::z(), opts)?;
            print!("{} internal sort, preserve divergence {preserve}: {}", variant.name(), v.status);
            match &v.witness {
                Some(w) => println!(" ({} at {})", w.violation, c.show_state(w.concrete_state)),
                None => println!(),
            }
        }
    }
    Ok(())
}
