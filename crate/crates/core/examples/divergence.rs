//! Divergence of the perspicuous operations, and variants that rule it out
//! in the guarded, flagged and counted queues.

use std::error::Error;

use refinery::corpus::{concrete_queue, QueueVariant};
use refinery::kernel::divergent_states;
use refinery::refine::{check_divergence, VariantSpec};
use refinery::speclang::{load, Bounds};

fn main() -> Result<(), Box<dyn Error>> {
    let plain = load(&concrete_queue(2, 3, QueueVariant::Plain), &Bounds::default())?;
    for e in ["sort", "cycle"] {
        let events = [e.to_string()].into();
        let v = check_divergence(&plain, &events, None)?;
        println!("plain {e}: {} ({} divergent states)", v.status, divergent_states(&plain, &events)?.len());
    }
    for variant in [QueueVariant::GuardedSort, QueueVariant::SortOnceFlag, QueueVariant::CycleCounter(2)] {
        let c = load(&concrete_queue(2, 3, variant), &Bounds::default())?;
        let (e, text) = variant.variant().expect("variant exists");
        let v = check_divergence(&c, &[e.to_string()].into(), Some(&VariantSpec::parse(text, &c)?))?;
        println!("{} {e} with variant `{text}`: {}", variant.name(), v.status);
    }
    Ok(())
}
