//! Downward simulation on the queue: SortOut against the abstract queue in
//! both directions, sort and cycle as refinements of skip, and the greatest
//! simulation synthesized without a user relation.

use std::error::Error;

use refinery::corpus::{abstract_queue, concrete_queue, sortout_queue, QueueVariant, QUEUE_LINK};
use refinery::kernel::Lts;
use refinery::refine::{
    check_downward_simulation, check_operation_pair, greatest_simulation, AlphabetMapping, ConditionSet,
    RetrieveRelation,
};
use refinery::speclang::{load, Bounds};

fn lts(src: &str) -> Result<Lts, Box<dyn Error>> {
    Ok(load(src, &Bounds::default())?)
}

fn main() -> Result<(), Box<dyn Error>> {
    let a = lts(&abstract_queue(2, 3))?;
    let so = lts(&sortout_queue(2, 3))?;
    let id = AlphabetMapping::identity();
    let z = ConditionSet::z();

    let down = check_downward_simulation(&a, &so, &RetrieveRelation::from_predicate(&a, &so, QUEUE_LINK)?, &z, &id)?;
    let up = check_downward_simulation(&so, &a, &RetrieveRelation::from_predicate(&so, &a, QUEUE_LINK)?, &z, &id)?;
    println!("SortOut refines AQueue: {}; AQueue refines SortOut: {}", down.status, up.status);

    for variant in [QueueVariant::Plain, QueueVariant::GuardedSort] {
        let c = lts(&concrete_queue(2, 3, variant))?;
        let r = RetrieveRelation::from_predicate(&a, &c, QUEUE_LINK)?;
        for conds in ["1", "3", "2,3"] {
            let v = check_operation_pair(&a, &c, &r, None, "sort", &conds.parse()?)?;
            print!("{} sort as skip under {{{conds}}}: {}", variant.name(), v.status);
            match &v.witness {
                Some(w) => println!(" at {}", c.show_state(w.concrete_state)),
                None => println!(),
            }
        }
    }

    let plain = lts(&concrete_queue(2, 3, QueueVariant::Plain))?;
    let skip = AlphabetMapping::identity().skip("sort").skip("cycle");
    match greatest_simulation(&a, &plain, &skip, &ConditionSet::consistency())? {
        Some(g) => println!("greatest consistent simulation: {} pairs", g.len()),
        None => println!("no consistent simulation"),
    }
    Ok(())
}
