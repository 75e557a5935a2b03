use std::collections::{BTreeSet, HashMap, VecDeque};

use super::common::machine_diagnostics;
use super::mapping::ResolvedMapping;
use super::{AlphabetMapping, Diagnostics, RefineError, Verdict, Violation, Witness};
use crate::kernel::{Label, Lts, Path, StateId};

/// Abstract states reachable from `set` by invisible steps.
fn tau_closure(a: &Lts, am: &ResolvedMapping, set: BTreeSet<StateId>) -> Vec<StateId> {
    let mut seen = set.clone();
    let mut stack: Vec<StateId> = set.into_iter().collect();
    while let Some(s) = stack.pop() {
        for t in a.outgoing(s) {
            if am.apply(&t.label).is_none() && seen.insert(t.to) {
                stack.push(t.to);
            }
        }
    }
    seen.into_iter().collect()
}

/// Finite-trace inclusion: every observable trace of the concrete machine,
/// with skip-mapped and internal steps erased, is a trace of the abstract
/// machine. Explores pairs of a concrete state and the set of abstract
/// states reachable on the same observations; invisible concrete steps
/// cost nothing, so the witness has the fewest observations.
pub fn check_trace_refinement(a: &Lts, c: &Lts, m: &AlphabetMapping) -> Result<Verdict, RefineError> {
    let cm = m.resolve(a, c)?;
    let am = ResolvedMapping::identity(a);

    type Node = (StateId, Vec<StateId>);
    let mut ids: HashMap<Node, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    // parent node and the concrete step that reached it
    let mut parent: Vec<Option<(usize, Label)>> = Vec::new();
    let mut dist: Vec<usize> = Vec::new();
    let mut deque = VecDeque::new();

    let start_set = tau_closure(a, &am, a.inits().clone());
    for &ci in c.inits() {
        let node = (ci, start_set.clone());
        if !ids.contains_key(&node) {
            ids.insert(node.clone(), nodes.len());
            deque.push_back(nodes.len());
            nodes.push(node);
            parent.push(None);
            dist.push(0);
        }
    }

    let mut done = vec![false; nodes.len()];
    let mut failure: Option<(usize, Label, StateId)> = None;
    while let Some(id) = deque.pop_front() {
        if done.get(id).copied().unwrap_or(false) {
            continue;
        }
        done.resize(nodes.len().max(id + 1), false);
        done[id] = true;
        let (ci, set) = nodes[id].clone();
        for t in c.outgoing(ci) {
            let (next_set, cost) = match cm.apply(&t.label) {
                None => (set.clone(), 0),
                Some(al) => {
                    let post: BTreeSet<StateId> = set
                        .iter()
                        .flat_map(|s| a.outgoing(*s).iter().filter(|u| u.label == al).map(|u| u.to))
                        .collect();
                    if post.is_empty() {
                        failure = Some((id, t.label.clone(), t.to));
                        break;
                    }
                    (tau_closure(a, &am, post), 1)
                }
            };
            let node = (t.to, next_set);
            let nd = dist[id] + cost;
            match ids.get(&node) {
                Some(&known) if dist[known] <= nd => {}
                Some(&known) => {
                    dist[known] = nd;
                    parent[known] = Some((id, t.label.clone()));
                    if cost == 0 { deque.push_front(known) } else { deque.push_back(known) }
                }
                None => {
                    let fresh = nodes.len();
                    ids.insert(node.clone(), fresh);
                    nodes.push(node);
                    parent.push(Some((id, t.label.clone())));
                    dist.push(nd);
                    if cost == 0 { deque.push_front(fresh) } else { deque.push_back(fresh) }
                }
            }
        }
        if failure.is_some() {
            break;
        }
    }

    let mut diag = Diagnostics::new();
    machine_diagnostics("abstract", a, &mut diag);
    machine_diagnostics("concrete", c, &mut diag);
    diag.insert("product.nodes".into(), nodes.len());
    let Some((id, label, to)) = failure else { return Ok(Verdict::pass(diag)) };

    let mut steps = Vec::new();
    let mut cur = id;
    while let Some((p, l)) = &parent[cur] {
        steps.push((l.clone(), nodes[cur].0));
        cur = *p;
    }
    steps.reverse();
    let path = Path { init: nodes[cur].0, steps };
    let observed: Vec<String> = path
        .steps
        .iter()
        .filter_map(|(l, _)| cm.apply(l))
        .chain(cm.apply(&label))
        .map(|l| l.to_string())
        .collect();
    diag.insert("witness.observations".into(), observed.len());
    let mut w = Witness::new(Violation::TraceInclusion, nodes[id].0)
        .op(&label.event)
        .label(label)
        .target(to)
        .detail(format!("abstract machine cannot produce <{}>", observed.join(", ")));
    w.trace = Some(path);
    Ok(Verdict::fail(w, diag))
}
