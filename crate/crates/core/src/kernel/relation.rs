//! Observation-carrying step relations over one state table.

use std::collections::{BTreeSet, VecDeque};

use super::lts::{Label, Lts, StateId};
use super::KernelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Operation,
    Skip,
    Composite,
}

/// One entry: a step from `from` to `to` observing `obs` (empty for
/// unobservable steps, several labels for composites).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub from: StateId,
    pub obs: Vec<Label>,
    pub to: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRelation {
    table: u64,
    states: usize,
    kind: StepKind,
    entries: BTreeSet<Step>,
}

impl StepRelation {
    pub(crate) fn from_entries(lts: &Lts, kind: StepKind, entries: BTreeSet<Step>) -> Self {
        StepRelation { table: lts.table_key(), states: lts.num_states(), kind, entries }
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    pub fn entries(&self) -> &BTreeSet<Step> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, from: StateId, to: StateId) -> bool {
        self.from(from).any(|s| s.to == to)
    }

    /// Steps leaving `s`, in order.
    pub fn from(&self, s: StateId) -> impl Iterator<Item = &Step> + '_ {
        let lo = Step { from: s, obs: Vec::new(), to: StateId(0) };
        self.entries.range(lo..).take_while(move |st| st.from == s)
    }

    /// The empty relation on the same state table.
    pub fn empty_like(&self) -> Self {
        StepRelation { table: self.table, states: self.states, kind: StepKind::Composite, entries: BTreeSet::new() }
    }

    fn same_table(&self, other: &Self) -> Result<(), KernelError> {
        if self.table == other.table && self.states == other.states {
            Ok(())
        } else {
            Err(KernelError::MismatchedTables)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self, KernelError> {
        self.same_table(other)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(StepRelation { kind: StepKind::Composite, entries, ..*self })
    }

    pub fn erase_observations(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|s| Step { from: s.from, obs: Vec::new(), to: s.to })
            .collect();
        StepRelation { kind: if self.kind == StepKind::Skip { StepKind::Skip } else { StepKind::Composite }, entries, ..*self }
    }

    /// Relational composition `self ; other`; observations concatenate.
    pub fn compose(&self, other: &Self) -> Result<Self, KernelError> {
        self.same_table(other)?;
        if self.kind == StepKind::Skip {
            return Ok(other.clone());
        }
        if other.kind == StepKind::Skip {
            return Ok(self.clone());
        }
        let mut entries = BTreeSet::new();
        for a in &self.entries {
            for b in other.from(a.to) {
                let mut obs = a.obs.clone();
                obs.extend(b.obs.iter().cloned());
                entries.insert(Step { from: a.from, obs, to: b.to });
            }
        }
        Ok(StepRelation { kind: StepKind::Composite, entries, ..*self })
    }

    /// Reflexive-transitive closure with observations erased.
    pub fn closure(&self) -> Self {
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.states];
        for s in &self.entries {
            succ[s.from.0].push(s.to.0);
        }
        let mut entries = BTreeSet::new();
        let mut seen = vec![usize::MAX; self.states];
        for start in 0..self.states {
            let mut queue = VecDeque::from([start]);
            seen[start] = start;
            while let Some(x) = queue.pop_front() {
                entries.insert(Step { from: StateId(start), obs: Vec::new(), to: StateId(x) });
                for &y in &succ[x] {
                    if seen[y] != start {
                        seen[y] = start;
                        queue.push_back(y);
                    }
                }
            }
        }
        StepRelation { kind: StepKind::Composite, entries, ..*self }
    }
}
