//! Trace refinement by subset construction, cross-checked against brute
//! force enumeration, on a correct and a mutated concrete queue.

use std::error::Error;

use refinery::corpus::{abstract_queue, concrete_queue, mutant_queue, oracle_counterexample, Mutant, QueueVariant};
use refinery::refine::{check_trace_refinement, AlphabetMapping, ResolvedMapping};
use refinery::speclang::{load, Bounds};

fn main() -> Result<(), Box<dyn Error>> {
    let a = load(&abstract_queue(2, 3), &Bounds::default())?;
    let concretes = [
        ("plain", concrete_queue(2, 3, QueueVariant::Plain)),
        ("unsorted out", mutant_queue(2, 3, Mutant::UnsortedOut)),
    ];
    for (name, src) in concretes {
        let c = load(&src, &Bounds::default())?;
        let m = AlphabetMapping::identity();
        let v = check_trace_refinement(&a, &c, &m)?;
        println!("{name}: {}", v.status);
        if let Some(w) = &v.witness {
            println!("  {}", w.describe(None, &c).replace('\n', "\n  "));
        }
        let cex = oracle_counterexample(&a, &ResolvedMapping::identity(&a), &c, &m.resolve(&a, &c)?, 6);
        match cex {
            Some(t) => println!("  oracle: {}", t.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")),
            None => println!("  oracle: no counterexample up to depth 6"),
        }
    }
    Ok(())
}
