//! Restricted consistency alone is not transitive: each step of the chain
//! passes under {3} while the composed refinement fails.

use std::error::Error;

use refinery::corpus::nontransitivity_chain;
use refinery::refine::{check_nontransitivity_witness, RetrieveRelation};
use refinery::speclang::{load, Bounds};

fn main() -> Result<(), Box<dyn Error>> {
    let [m1, m2, m3] = nontransitivity_chain();
    let (m1, m2, m3) = (load(&m1, &Bounds::default())?, load(&m2, &Bounds::default())?, load(&m3, &Bounds::default())?);
    let r12 = RetrieveRelation::identity(&m1, &m2)?;
    let r23 = RetrieveRelation::identity(&m2, &m3)?;
    for conds in ["3", "2,3"] {
        let report = check_nontransitivity_witness(&m1, &m2, &m3, &r12, &r23, None, &conds.parse()?)?;
        println!(
            "{{{conds}}}: M1<-M2 {}, M2<-M3 {}, M1<-M3 {}; non-transitive: {}",
            report.first.status,
            report.second.status,
            report.composed.status,
            report.demonstrates_nontransitivity()
        );
        if let Some(w) = &report.composed.witness {
            println!("  {}", w.describe(Some(&m1), &m3).replace('\n', "\n  "));
        }
    }
    Ok(())
}
