//! The priority-queue machines, their variants and mutants, the
//! non-transitivity chain, and a brute-force trace oracle.
//!
//! The shipped `corpus/` directory holds the output of [`shipped_files`] at
//! V=2, N=3 together with a manifest of expected verdicts.

pub mod manifest;
pub mod models;
pub mod oracle;

pub use manifest::{parse_manifest, ManifestEntry};
pub use models::{
    abstract_queue, build_queue_models, concrete_queue, mutant_queue, nontransitivity_chain, sortout_queue,
    walker_pair, Mutant, QueueVariant,
};
pub use oracle::{oracle_counterexample, trace_oracle, Trace};

use crate::refine::AlphabetMapping;

pub const DEFAULT_V: i64 = 2;
pub const DEFAULT_N: i64 = 3;
/// Cycle budget of the shipped counter variant.
pub const DEFAULT_K: u32 = 2;

/// A named machine source with its intended bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: String,
    pub v: i64,
    pub n: i64,
}

impl CorpusEntry {
    pub fn file_name(&self) -> String {
        format!("{}.mch", self.name)
    }
}

/// Every machine at the given bounds.
pub fn machines(v: i64, n: i64) -> Vec<CorpusEntry> {
    let [m1, m2, m3] = nontransitivity_chain();
    let (walker, grid) = walker_pair(n);
    let e = |name, source| CorpusEntry { name, source, v, n };
    vec![
        e("aqueue", abstract_queue(v, n)),
        e("cqueue_plain", concrete_queue(v, n, QueueVariant::Plain)),
        e("cqueue_guarded", concrete_queue(v, n, QueueVariant::GuardedSort)),
        e("cqueue_flag", concrete_queue(v, n, QueueVariant::SortOnceFlag)),
        e("cqueue_counter", concrete_queue(v, n, QueueVariant::CycleCounter(DEFAULT_K))),
        e("sortout", sortout_queue(v, n)),
        e("mutant_unsorted_out", mutant_queue(v, n, Mutant::UnsortedOut)),
        e("mutant_dropping_cycle", mutant_queue(v, n, Mutant::DroppingCycle)),
        e("mutant_no_sort", mutant_queue(v, n, Mutant::NoSort)),
        e("chain_m1", m1),
        e("chain_m2", m2),
        e("chain_m3", m3),
        e("walker", walker),
        e("grid_walker", grid),
    ]
}

/// Mapping files shipped next to the machines.
pub fn mapping_files() -> Vec<(&'static str, &'static str)> {
    vec![
        ("sort_skip.map", "-- sort and cycle refine abstract skip\nsort -> skip\ncycle -> skip\n"),
        ("sort_internal.map", "-- sort is invisible to the environment\ninternal: sort\n"),
        ("sort_out.map", "-- abstract out is realised by sort followed by out\nout => sort, out @ outputs:2\n"),
        ("split.map", "-- both directions implement the abstract move\nmoveNorth -> move\nmoveEast -> move\n"),
    ]
}

/// All generated files at the default bounds, as (file name, contents).
pub fn shipped_files() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> =
        machines(DEFAULT_V, DEFAULT_N).into_iter().map(|e| (e.file_name(), e.source)).collect();
    out.extend(mapping_files().into_iter().map(|(n, s)| (n.to_string(), s.to_string())));
    out
}

pub fn machine(name: &str) -> Option<CorpusEntry> {
    machines(DEFAULT_V, DEFAULT_N).into_iter().find(|e| e.name == name)
}

/// How a corpus pair links its machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Link {
    Identity,
    Predicate(&'static str),
}

/// An (abstract, concrete) pair used by the cross-checking suites.
#[derive(Debug, Clone)]
pub struct CorpusPair {
    pub name: String,
    pub abstract_name: &'static str,
    pub concrete_name: &'static str,
    pub mapping: AlphabetMapping,
    pub link: Link,
}

pub const QUEUE_LINK: &str = "b = items(s)";

/// Every pair the verdict matrix runs over.
pub fn pairs() -> Vec<CorpusPair> {
    let p = |a: &'static str, c: &'static str, mapping: AlphabetMapping, link: Link| CorpusPair {
        name: format!("{a}/{c}"),
        abstract_name: a,
        concrete_name: c,
        mapping,
        link,
    };
    let id = AlphabetMapping::identity;
    let q = Link::Predicate(QUEUE_LINK);
    let mut out = vec![
        p("aqueue", "aqueue", id(), Link::Identity),
        p("sortout", "sortout", id(), Link::Identity),
        p("cqueue_plain", "cqueue_plain", id(), Link::Identity),
        p("aqueue", "sortout", id(), q.clone()),
        p("sortout", "aqueue", id(), q.clone()),
    ];
    for c in [
        "cqueue_plain",
        "cqueue_guarded",
        "cqueue_flag",
        "cqueue_counter",
        "mutant_unsorted_out",
        "mutant_dropping_cycle",
        "mutant_no_sort",
    ] {
        out.push(p("aqueue", c, id(), q.clone()));
    }
    out.push(p("chain_m1", "chain_m2", id(), Link::Identity));
    out.push(p("chain_m2", "chain_m3", id(), Link::Identity));
    out.push(p("chain_m1", "chain_m3", id(), Link::Identity));
    out.push(p("walker", "grid_walker", id().map("moveNorth", "move").map("moveEast", "move"), Link::Predicate("p = x + y")));
    out
}
