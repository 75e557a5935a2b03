use std::collections::BTreeSet;

use super::common::state_env;
use super::RefineError;
use crate::kernel::{Lts, StateId};
use crate::speclang::typecheck::{check_expr, Scope};
use crate::speclang::{eval, parse_expr, Ty, Value};

/// Linked (abstract, concrete) state pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetrieveRelation {
    pairs: BTreeSet<(StateId, StateId)>,
    origin: String,
    by_concrete: Vec<Vec<StateId>>,
    abstract_states: usize,
    bits: Vec<bool>,
}

impl RetrieveRelation {
    pub fn from_pairs(
        a: &Lts,
        c: &Lts,
        pairs: impl IntoIterator<Item = (StateId, StateId)>,
        origin: impl Into<String>,
    ) -> Result<Self, RefineError> {
        let pairs: BTreeSet<(StateId, StateId)> = pairs.into_iter().collect();
        let mut by_concrete = vec![Vec::new(); c.num_states()];
        let mut bits = vec![false; a.num_states() * c.num_states()];
        for &(x, y) in &pairs {
            a.check_state(x)?;
            c.check_state(y)?;
            by_concrete[y.0].push(x);
            bits[x.0 * c.num_states() + y.0] = true;
        }
        Ok(RetrieveRelation { pairs, origin: origin.into(), by_concrete, abstract_states: a.num_states(), bits })
    }

    /// Links states with equal valuations; both machines must declare the
    /// same variables.
    pub fn identity(a: &Lts, c: &Lts) -> Result<Self, RefineError> {
        if a.vars() != c.vars() {
            return Err(RefineError::IdentityShape);
        }
        let pairs = c.state_ids().filter_map(|s| a.state_id(c.valuation(s)).map(|t| (t, s)));
        Self::from_pairs(a, c, pairs, "identity")
    }

    /// Pairs satisfying a predicate over both machines' variables. A name
    /// declared by both machines is ambiguous and rejected.
    pub fn from_predicate(a: &Lts, c: &Lts, text: &str) -> Result<Self, RefineError> {
        let expr = parse_expr(text).map_err(RefineError::RetrieveSyntax)?;
        let a_names: BTreeSet<&str> = a.vars().iter().map(|(n, _)| n.as_str()).collect();
        let mut scope = Scope::new();
        for k in a.consts().keys().chain(c.consts().keys()) {
            scope = scope.with_const(k);
        }
        for (n, t) in a.vars() {
            scope = scope.with_var(n, t.clone());
        }
        for (n, t) in c.vars() {
            scope = if a_names.contains(n.as_str()) { scope.with_ambiguous(n) } else { scope.with_var(n, t.clone()) };
        }
        check_expr(&expr, &scope, &Ty::Bool, "retrieve relation").map_err(RefineError::RetrieveType)?;
        let a_envs: Vec<_> = a.state_ids().map(|s| state_env(a, s)).collect();
        let mut pairs = Vec::new();
        for cs in c.state_ids() {
            for (ai, aenv) in a_envs.iter().enumerate() {
                let mut env = aenv.clone();
                for (k, v) in c.consts() {
                    if !a.consts().contains_key(k) {
                        env.bind(k.clone(), Value::Int(*v));
                    }
                }
                for ((n, _), v) in c.vars().iter().zip(c.valuation(cs)) {
                    env.bind(n.clone(), v.clone());
                }
                if eval(&expr, &env).map_err(RefineError::RetrieveEval)? == Value::Bool(true) {
                    pairs.push((StateId(ai), cs));
                }
            }
        }
        Self::from_pairs(a, c, pairs, text.trim())
    }

    pub fn pairs(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn contains(&self, a: StateId, c: StateId) -> bool {
        let n = self.by_concrete.len();
        a.0 < self.abstract_states && c.0 < n && self.bits[a.0 * n + c.0]
    }

    /// Abstract states linked to `c`, ascending.
    pub fn abstract_of(&self, c: StateId) -> &[StateId] {
        self.by_concrete.get(c.0).map_or(&[], |v| v.as_slice())
    }

    /// Relational composition: `self` links A to B, `other` links B to C.
    pub fn compose(&self, other: &RetrieveRelation, a: &Lts, c: &Lts) -> Result<Self, RefineError> {
        let mut pairs = Vec::new();
        for &(x, y) in &self.pairs {
            for &(y2, z) in &other.pairs {
                if y == y2 {
                    pairs.push((x, z));
                }
            }
        }
        Self::from_pairs(a, c, pairs, format!("({}) ; ({})", self.origin, other.origin))
    }
}
