use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use super::KernelError;
use crate::speclang::ast::EventClass;
use crate::speclang::typecheck::Ty;
use crate::speclang::value::{Domain, Value};

/// Index into the state table of one LTS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An observation: event name with ground input and output tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub event: String,
    pub inputs: Vec<Value>,
    pub outputs: Vec<Value>,
}

impl Label {
    pub fn new(event: impl Into<String>, inputs: Vec<Value>, outputs: Vec<Value>) -> Self {
        Label { event: event.into(), inputs, outputs }
    }

    pub fn plain(event: impl Into<String>) -> Self {
        Label::new(event, Vec::new(), Vec::new())
    }

    /// Same observation under another event name.
    pub fn renamed(&self, event: &str) -> Label {
        Label { event: event.to_string(), inputs: self.inputs.clone(), outputs: self.outputs.clone() }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.event)?;
        for v in self.inputs.iter().chain(&self.outputs) {
            write!(f, ".{v}")?;
        }
        Ok(())
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSig {
    pub name: String,
    pub inputs: Vec<(String, Domain)>,
    pub outputs: Vec<(String, Domain)>,
    pub class: EventClass,
}

impl EventSig {
    fn accepts(&self, l: &Label) -> bool {
        l.inputs.len() == self.inputs.len()
            && l.outputs.len() == self.outputs.len()
            && l.inputs.iter().zip(&self.inputs).all(|(v, (_, d))| d.contains(v))
            && l.outputs.iter().zip(&self.outputs).all(|(v, (_, d))| d.contains(v))
    }

    /// Same arity and same value types on both tuples.
    pub fn compatible_with(&self, other: &EventSig) -> bool {
        let same = |a: &[(String, Domain)], b: &[(String, Domain)]| {
            a.len() == b.len() && a.iter().zip(b).all(|((_, x), (_, y))| Ty::of_domain(x) == Ty::of_domain(y))
        };
        same(&self.inputs, &other.inputs) && same(&self.outputs, &other.outputs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub label: Label,
    pub to: StateId,
}

/// A finite labelled transition system with a lexicographically ordered
/// state table. Immutable once built.
#[derive(Debug, Clone)]
pub struct Lts {
    name: String,
    vars: Vec<(String, Ty)>,
    consts: BTreeMap<String, i64>,
    states: Vec<Vec<Value>>,
    index: HashMap<Vec<Value>, StateId>,
    inits: BTreeSet<StateId>,
    transitions: Vec<Transition>,
    offsets: Vec<usize>,
    alphabet: BTreeMap<String, EventSig>,
    pruned: BTreeMap<String, usize>,
    table_key: u64,
}

/// Everything needed to assemble an [`Lts`].
#[derive(Debug, Clone, Default)]
pub struct LtsParts {
    pub name: String,
    pub vars: Vec<(String, Ty)>,
    pub consts: BTreeMap<String, i64>,
    pub states: Vec<Vec<Value>>,
    pub inits: BTreeSet<StateId>,
    pub transitions: Vec<Transition>,
    pub alphabet: Vec<EventSig>,
    pub pruned: BTreeMap<String, usize>,
}

impl Lts {
    pub fn new(parts: LtsParts) -> Result<Lts, KernelError> {
        let LtsParts { name, vars, consts, states, inits, mut transitions, alphabet, pruned } = parts;
        if !states.windows(2).all(|w| w[0] < w[1]) {
            return Err(KernelError::Invalid("state table must be strictly increasing".into()));
        }
        if inits.is_empty() {
            return Err(KernelError::EmptyInits);
        }
        let n = states.len();
        if let Some(bad) = inits.iter().find(|s| s.0 >= n) {
            return Err(KernelError::InvalidState(bad.0));
        }
        let alphabet: BTreeMap<String, EventSig> =
            alphabet.into_iter().map(|e| (e.name.clone(), e)).collect();
        for t in &transitions {
            for s in [t.from, t.to] {
                if s.0 >= n {
                    return Err(KernelError::InvalidState(s.0));
                }
            }
            let sig = alphabet
                .get(&t.label.event)
                .ok_or_else(|| KernelError::UnknownEvent(t.label.event.clone()))?;
            if !sig.accepts(&t.label) {
                return Err(KernelError::Invalid(format!("label {} does not match its signature", t.label)));
            }
        }
        transitions.sort();
        transitions.dedup();
        let mut offsets = vec![0usize; n + 1];
        for t in &transitions {
            offsets[t.from.0 + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let index = states.iter().enumerate().map(|(i, v)| (v.clone(), StateId(i))).collect();
        let mut h = DefaultHasher::new();
        vars.hash(&mut h);
        states.hash(&mut h);
        let table_key = h.finish();
        Ok(Lts { name, vars, consts, states, index, inits, transitions, offsets, alphabet, pruned, table_key })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &[(String, Ty)] {
        &self.vars
    }

    pub fn consts(&self) -> &BTreeMap<String, i64> {
        &self.consts
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn valuation(&self, s: StateId) -> &[Value] {
        &self.states[s.0]
    }

    pub fn state_id(&self, valuation: &[Value]) -> Option<StateId> {
        self.index.get(valuation).copied()
    }

    pub fn check_state(&self, s: StateId) -> Result<(), KernelError> {
        if s.0 < self.states.len() {
            Ok(())
        } else {
            Err(KernelError::InvalidState(s.0))
        }
    }

    pub fn inits(&self) -> &BTreeSet<StateId> {
        &self.inits
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Outgoing transitions of `s`, ordered by label then target.
    pub fn outgoing(&self, s: StateId) -> &[Transition] {
        &self.transitions[self.offsets[s.0]..self.offsets[s.0 + 1]]
    }

    pub(crate) fn outgoing_range(&self, s: StateId) -> std::ops::Range<usize> {
        self.offsets[s.0]..self.offsets[s.0 + 1]
    }

    pub fn alphabet(&self) -> &BTreeMap<String, EventSig> {
        &self.alphabet
    }

    pub fn event(&self, name: &str) -> Option<&EventSig> {
        self.alphabet.get(name)
    }

    pub fn class_of(&self, event: &str) -> Option<EventClass> {
        self.alphabet.get(event).map(|e| e.class)
    }

    pub fn events_of_class(&self, class: EventClass) -> BTreeSet<String> {
        self.alphabet.values().filter(|e| e.class == class).map(|e| e.name.clone()).collect()
    }

    /// Transitions pruned during grounding because their after-state left
    /// the bounded carrier, per event.
    pub fn pruned(&self) -> &BTreeMap<String, usize> {
        &self.pruned
    }

    pub(crate) fn table_key(&self) -> u64 {
        self.table_key
    }

    /// A copy with `event` reclassified.
    pub fn with_class(&self, event: &str, class: EventClass) -> Result<Lts, KernelError> {
        let mut out = self.clone();
        out.alphabet
            .get_mut(event)
            .ok_or_else(|| KernelError::UnknownEvent(event.to_string()))?
            .class = class;
        Ok(out)
    }

    /// A copy whose transitions are replaced, keeping states and metadata.
    pub fn with_transitions(
        &self,
        transitions: Vec<Transition>,
        alphabet: Vec<EventSig>,
    ) -> Result<Lts, KernelError> {
        Lts::new(LtsParts {
            name: self.name.clone(),
            vars: self.vars.clone(),
            consts: self.consts.clone(),
            states: self.states.clone(),
            inits: self.inits.clone(),
            transitions,
            alphabet,
            pruned: self.pruned.clone(),
        })
    }

    /// `b={|1, 2|}` style rendering of a state.
    pub fn show_state(&self, s: StateId) -> String {
        self.vars
            .iter()
            .zip(&self.states[s.0])
            .map(|((n, _), v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}
