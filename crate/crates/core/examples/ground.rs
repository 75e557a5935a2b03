//! Parses the abstract and concrete queues, lists their event signatures and
//! grounds them at a chosen bound.
//!
//! cargo run --example ground -- 2 3

use std::error::Error;

use refinery::corpus::{abstract_queue, concrete_queue, QueueVariant};
use refinery::kernel::reachable;
use refinery::speclang::{compile, ground, list_event_signatures, Bounds};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<i64>());
    let v = args.next().transpose()?.unwrap_or(2);
    let n = args.next().transpose()?.unwrap_or(3);

    for src in [abstract_queue(v, n), concrete_queue(v, n, QueueVariant::Plain)] {
        let typed = compile(&src)?;
        let lts = ground(&typed, &Bounds::default())?;
        println!("{}: {} states, {} reachable, {} transitions", lts.name(), lts.num_states(), reachable(&lts).len(), lts.transitions().len());
        for sig in list_event_signatures(&typed) {
            println!("  {sig}");
        }
        let init = *lts.inits().first().unwrap();
        for t in lts.outgoing(init) {
            println!("  {} --{}--> {}", lts.show_state(init), t.label, lts.show_state(t.to));
        }
    }
    Ok(())
}
