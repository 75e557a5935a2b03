//! Action refinement: abstract out matched by the concrete sequence
//! sort then out, with no link required in between.

use std::error::Error;

use refinery::corpus::{abstract_queue, concrete_queue, QueueVariant, QUEUE_LINK};
use refinery::refine::{check_action_refinement, ActionEntry, ActionMapping, RetrieveRelation};
use refinery::speclang::{load, Bounds};

fn main() -> Result<(), Box<dyn Error>> {
    let a = load(&abstract_queue(2, 3), &Bounds::default())?;
    let am = ActionMapping::new().with("out", ActionEntry::new(&["sort", "out"]));
    for variant in [QueueVariant::Plain, QueueVariant::GuardedSort] {
        let c = load(&concrete_queue(2, 3, variant), &Bounds::default())?;
        let r = RetrieveRelation::from_predicate(&a, &c, QUEUE_LINK)?;
        for conds in ["2,3", "2"] {
            let v = check_action_refinement(&a, &c, &r, &am, &conds.parse()?)?;
            println!("{} under {{{conds}}}: {}", variant.name(), v.status);
            if let Some(w) = &v.witness {
                println!("  {}", w.describe(Some(&a), &c).replace('\n', "\n  "));
            }
        }
    }
    Ok(())
}
