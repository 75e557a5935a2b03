//! Graph algorithms over an LTS: reachability, shortest witness paths and
//! strongly connected components.

use std::collections::{BTreeSet, VecDeque};

use super::lts::{Label, Lts, StateId, Transition};

/// States reachable from the initial states.
pub fn reachable(lts: &Lts) -> BTreeSet<StateId> {
    let mut seen = vec![false; lts.num_states()];
    let mut queue: VecDeque<StateId> = lts.inits().iter().copied().collect();
    for s in &queue {
        seen[s.0] = true;
    }
    while let Some(s) = queue.pop_front() {
        for t in lts.outgoing(s) {
            if !seen[t.to.0] {
                seen[t.to.0] = true;
                queue.push_back(t.to);
            }
        }
    }
    seen.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| StateId(i)).collect()
}

/// A path from an initial state: the start state and the steps taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub init: StateId,
    pub steps: Vec<(Label, StateId)>,
}

impl Path {
    pub fn last(&self) -> StateId {
        self.steps.last().map_or(self.init, |(_, s)| *s)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Checks that the path starts at an initial state and every step is a
    /// transition of `lts`.
    pub fn replays_in(&self, lts: &Lts) -> bool {
        if !lts.inits().contains(&self.init) {
            return false;
        }
        let mut cur = self.init;
        for (l, next) in &self.steps {
            if cur.0 >= lts.num_states() || !lts.outgoing(cur).iter().any(|t| &t.label == l && t.to == *next) {
                return false;
            }
            cur = *next;
        }
        true
    }
}

/// Breadth-first tree from the initial states; gives shortest paths.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    depth: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    transitions: Vec<Transition>,
}

impl ShortestPaths {
    pub fn new(lts: &Lts) -> Self {
        let n = lts.num_states();
        let mut depth = vec![None; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut queue = VecDeque::new();
        for &s in lts.inits() {
            depth[s.0] = Some(0);
            queue.push_back(s);
        }
        // parent stores an index into the LTS transition vector
        let all = lts.transitions();
        while let Some(s) = queue.pop_front() {
            let d = depth[s.0].unwrap_or(0);
            for ti in lts.outgoing_range(s) {
                let t = &all[ti];
                if depth[t.to.0].is_none() {
                    depth[t.to.0] = Some(d + 1);
                    parent[t.to.0] = Some(ti);
                    queue.push_back(t.to);
                }
            }
        }
        ShortestPaths { depth, parent, transitions: all.to_vec() }
    }

    pub fn depth(&self, s: StateId) -> Option<usize> {
        self.depth.get(s.0).copied().flatten()
    }

    pub fn path_to(&self, s: StateId) -> Option<Path> {
        self.depth(s)?;
        let mut steps = Vec::new();
        let mut cur = s;
        while let Some(ti) = self.parent[cur.0] {
            let t = &self.transitions[ti];
            steps.push((t.label.clone(), t.to));
            cur = t.from;
        }
        steps.reverse();
        Some(Path { init: cur, steps })
    }
}

/// Tarjan's algorithm, iterative. Components come out in reverse
/// topological order.
pub fn tarjan_scc(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0usize;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Successor lists restricted to transitions whose event is in `events`.
pub(crate) fn restricted_successors(lts: &Lts, events: &BTreeSet<String>) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); lts.num_states()];
    for t in lts.transitions() {
        if events.contains(&t.label.event) {
            succ[t.from.0].push(t.to.0);
        }
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    succ
}

/// States lying on a cycle (including self-loops) of `succ`.
pub(crate) fn cyclic_states(succ: &[Vec<usize>]) -> Vec<bool> {
    let mut on_cycle = vec![false; succ.len()];
    for comp in tarjan_scc(succ) {
        if comp.len() > 1 || succ[comp[0]].contains(&comp[0]) {
            for v in comp {
                on_cycle[v] = true;
            }
        }
    }
    on_cycle
}

/// States that can reach a marked state along `succ`.
pub(crate) fn backward_closure(succ: &[Vec<usize>], marked: &[bool]) -> Vec<bool> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let mut seen = marked.to_vec();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| marked[v]).collect();
    while let Some(w) = queue.pop_front() {
        for &v in &pred[w] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tarjan_finds_components() {
        // 0 -> 1 -> 2 -> 0, 2 -> 3, 3 -> 3, 4 isolated
        let succ = vec![vec![1], vec![2], vec![0, 3], vec![3], vec![]];
        let mut comps = tarjan_scc(&succ);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3], vec![4]]);
        let cyc = cyclic_states(&succ);
        assert_eq!(cyc, vec![true, true, true, true, false]);
    }

    #[test]
    fn backward_closure_reaches_predecessors() {
        let succ = vec![vec![1], vec![2], vec![], vec![0]];
        let marked = vec![false, false, true, false];
        assert_eq!(backward_closure(&succ, &marked), vec![true, true, true, true]);
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let succ: Vec<Vec<usize>> = (0..n).map(|i| if i + 1 < n { vec![i + 1] } else { vec![0] }).collect();
        let comps = tarjan_scc(&succ);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), n);
    }
}
