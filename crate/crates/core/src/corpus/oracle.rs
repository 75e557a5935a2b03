//! Brute-force trace enumeration, independent of the trace checker.

use std::collections::{BTreeSet, HashSet};

use crate::kernel::{Label, Lts, StateId};
use crate::refine::ResolvedMapping;

pub type Trace = Vec<Label>;

/// Every observable trace of length at most `depth`, with skip and internal
/// steps erased. Plain depth-first search over (state, trace) pairs.
pub fn trace_oracle(lts: &Lts, m: &ResolvedMapping, depth: usize) -> BTreeSet<Trace> {
    let mut traces = BTreeSet::new();
    let mut seen: HashSet<(StateId, Trace)> = HashSet::new();
    let mut stack: Vec<(StateId, Trace)> = lts.inits().iter().map(|s| (*s, Vec::new())).collect();
    while let Some((s, trace)) = stack.pop() {
        if !seen.insert((s, trace.clone())) {
            continue;
        }
        for t in lts.outgoing(s) {
            match m.apply(&t.label) {
                None => stack.push((t.to, trace.clone())),
                Some(l) if trace.len() < depth => {
                    let mut longer = trace.clone();
                    longer.push(l);
                    stack.push((t.to, longer));
                }
                Some(_) => {}
            }
        }
        traces.insert(trace);
    }
    traces
}

/// A shortest concrete trace (up to `depth`) missing from the abstract
/// trace set, or `None` if inclusion holds to that depth.
pub fn oracle_counterexample(
    a: &Lts,
    am: &ResolvedMapping,
    c: &Lts,
    cm: &ResolvedMapping,
    depth: usize,
) -> Option<Trace> {
    let at = trace_oracle(a, am, depth);
    trace_oracle(c, cm, depth)
        .into_iter()
        .filter(|t| !at.contains(t))
        .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::models::{abstract_queue, concrete_queue, QueueVariant};
    use crate::refine::AlphabetMapping;
    use crate::speclang::{load, Bounds, Value};

    fn show(ts: &BTreeSet<Trace>) -> Vec<String> {
        ts.iter().map(|t| t.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")).collect()
    }

    #[test]
    fn hand_enumerated_queue_traces() {
        let a = load(&abstract_queue(0, 2), &Bounds::default()).unwrap();
        let ts = trace_oracle(&a, &ResolvedMapping::identity(&a), 2);
        assert_eq!(show(&ts), vec!["", "in.0", "in.0 in.0", "in.0 out.0"]);
        assert_eq!(trace_oracle(&a, &ResolvedMapping::identity(&a), 0).len(), 1);

        let c = load(&concrete_queue(0, 2, QueueVariant::Plain), &Bounds::default()).unwrap();
        let cm = AlphabetMapping::identity().resolve(&a, &c).unwrap();
        assert_eq!(trace_oracle(&c, &cm, 2), ts);
    }

    #[test]
    fn depth_zero_is_the_empty_trace() {
        let a = load(&abstract_queue(2, 3), &Bounds::default()).unwrap();
        let ts = trace_oracle(&a, &ResolvedMapping::identity(&a), 0);
        assert_eq!(ts, [Vec::new()].into());
        let one = trace_oracle(&a, &ResolvedMapping::identity(&a), 1);
        assert!(one.contains(&vec![Label::new("in", vec![Value::Int(2)], vec![])]));
    }
}
