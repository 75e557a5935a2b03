use super::{check_downward_simulation, AlphabetMapping, ConditionSet, RefineError, RetrieveRelation, Verdict};
use crate::kernel::Lts;

/// Results of checking M1 ⊑ M2, M2 ⊑ M3 and M1 ⊑ M3.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub first: Verdict,
    pub second: Verdict,
    pub composed: Verdict,
    /// The relation used for the composed step.
    pub r13: RetrieveRelation,
}

impl ChainReport {
    /// Both steps pass while the composed check fails.
    pub fn demonstrates_nontransitivity(&self) -> bool {
        self.first.passed() && self.second.passed() && !self.composed.passed()
    }
}

/// Checks a refinement chain step by step and end to end. Without `r13`
/// the composed step uses `r12 ; r23`.
pub fn check_nontransitivity_witness(
    m1: &Lts,
    m2: &Lts,
    m3: &Lts,
    r12: &RetrieveRelation,
    r23: &RetrieveRelation,
    r13: Option<&RetrieveRelation>,
    conds: &ConditionSet,
) -> Result<ChainReport, RefineError> {
    let id = AlphabetMapping::identity();
    let first = check_downward_simulation(m1, m2, r12, conds, &id)?;
    let second = check_downward_simulation(m2, m3, r23, conds, &id)?;
    let r13 = match r13 {
        Some(r) => r.clone(),
        None => r12.compose(r23, m1, m3)?,
    };
    let composed = check_downward_simulation(m1, m3, &r13, conds, &id)?;
    Ok(ChainReport { first, second, composed, r13 })
}
