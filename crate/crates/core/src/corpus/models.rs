//! Source generators for the priority-queue machines and their variants.

use std::fmt::Write;

/// Concrete queue variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueueVariant {
    /// Sort and cycle enabled everywhere.
    Plain,
    /// Sort guarded by `not sorted(s)`.
    GuardedSort,
    /// Sort runs exactly once after each `in` or `cycle`.
    SortOnceFlag,
    /// `in` and `out` allow at most `k` following cycles.
    CycleCounter(u32),
}

impl QueueVariant {
    /// A variant certifying that the fixed event cannot diverge, with the
    /// event it covers.
    pub fn variant(self) -> Option<(&'static str, &'static str)> {
        match self {
            QueueVariant::Plain => None,
            QueueVariant::GuardedSort => Some(("sort", "if sorted(s) then 0 else 1")),
            QueueVariant::SortOnceFlag => Some(("sort", "if f then 1 else 0")),
            QueueVariant::CycleCounter(_) => Some(("cycle", "cnt")),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QueueVariant::Plain => "plain",
            QueueVariant::GuardedSort => "guarded_sort",
            QueueVariant::SortOnceFlag => "sort_once_flag",
            QueueVariant::CycleCounter(_) => "cycle_counter",
        }
    }
}

fn header(out: &mut String, comment: &str, name: &str, v: i64, n: i64) {
    writeln!(out, "-- {comment}").unwrap();
    writeln!(out, "machine {name}").unwrap();
    writeln!(out, "const V = {v}").unwrap();
    writeln!(out, "const N = {n}").unwrap();
}

/// The abstract queue: a bag from which `out` removes the minimum.
pub fn abstract_queue(v: i64, n: i64) -> String {
    let mut s = String::new();
    header(&mut s, "Abstract priority queue: a bag, out yields its minimum.", "AQueue", v, n);
    s += "var b : bag int 0..V max N\n\
          init b = {||}\n\
          \n\
          event in (x? : int 0..V)\n  when #b < N\n  then b := b \\/ {|x|}\n\
          \n\
          event out (x! : int 0..V)\n  when b != {||} and x = min(b)\n  then b := b \\ {|x|}\n";
    s
}

const SEQ: &str = "seq int 0..V max N";

fn sort_update(extra: &str) -> String {
    format!("  then any t : {SEQ} where items(t) = items(s) and sorted(t) then\n    s := t\n{extra}")
}

fn cycle_update(extra: &str) -> String {
    format!(
        "  then any t : {SEQ} where (s = [] and t = []) or (s != [] and t = tail(s) ++ [head(s)]) then\n    s := t\n{extra}"
    )
}

/// The concrete queue in the selected variant. Sort and cycle are declared
/// `new`.
pub fn concrete_queue(v: i64, n: i64, variant: QueueVariant) -> String {
    let mut s = String::new();
    let (comment, name) = match variant {
        QueueVariant::Plain => ("Concrete queue: a sequence, out needs it sorted.", "CQueue"),
        QueueVariant::GuardedSort => ("Concrete queue with sort guarded by not sorted(s).", "CQueueGuarded"),
        QueueVariant::SortOnceFlag => ("Concrete queue where sort runs once after each in or cycle.", "CQueueFlag"),
        QueueVariant::CycleCounter(_) => ("Concrete queue where a counter bounds consecutive cycles.", "CQueueCounter"),
    };
    header(&mut s, comment, name, v, n);
    if let QueueVariant::CycleCounter(k) = variant {
        writeln!(s, "const K = {k}").unwrap();
    }
    writeln!(s, "var s : {SEQ}").unwrap();
    let (reset, init) = match variant {
        QueueVariant::SortOnceFlag => {
            s += "var f : bool\n";
            ("    f := true\n", "init s = [] and f = false\n")
        }
        QueueVariant::CycleCounter(_) => {
            s += "var cnt : int 0..K\n";
            ("    cnt := K\n", "init s = [] and cnt = 0\n")
        }
        _ => ("", "init s = []\n"),
    };
    s += init;
    let out_reset = if matches!(variant, QueueVariant::CycleCounter(_)) { reset } else { "" };
    write!(s, "\nevent in (x? : int 0..V)\n  when #s < N\n  then\n    s := s ++ [x]\n{reset}").unwrap();
    write!(s, "\nevent out (x! : int 0..V)\n  when s != [] and sorted(s) and x = head(s)\n  then\n    s := tail(s)\n{out_reset}").unwrap();
    let (sort_guard, sort_extra) = match variant {
        QueueVariant::GuardedSort => ("not sorted(s)", ""),
        QueueVariant::SortOnceFlag => ("f", "    f := false\n"),
        _ => ("true", ""),
    };
    write!(s, "\nevent sort new ()\n  when {sort_guard}\n{}", sort_update(sort_extra)).unwrap();
    let (cycle_guard, cycle_extra) = match variant {
        QueueVariant::SortOnceFlag => ("true", "    f := true\n"),
        QueueVariant::CycleCounter(_) => ("cnt > 0", "    cnt := cnt - 1\n"),
        _ => ("true", ""),
    };
    write!(s, "\nevent cycle new ()\n  when {cycle_guard}\n{}", cycle_update(cycle_extra)).unwrap();
    s
}

/// Abstract queue and the selected concrete variant.
pub fn build_queue_models(v: i64, n: i64, variant: QueueVariant) -> (String, String) {
    (abstract_queue(v, n), concrete_queue(v, n, variant))
}

/// The concrete queue with sort and out fused into one output operation.
pub fn sortout_queue(v: i64, n: i64) -> String {
    let mut s = String::new();
    header(&mut s, "Concrete queue whose out sorts first: sort composed with out.", "SortOut", v, n);
    write!(
        s,
        "var s : {SEQ}\ninit s = []\n\
         \nevent in (x? : int 0..V)\n  when #s < N\n  then s := s ++ [x]\n\
         \nevent out (x! : int 0..V)\n  when s != []\n  \
         then any t : {SEQ} where items(t) = items(s) and sorted(t) and t != [] and head(t) = x then\n    s := tail(t)\n"
    )
    .unwrap();
    s
}

/// Deliberately broken concrete queues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutant {
    /// `out` emits the head without requiring a sorted sequence.
    UnsortedOut,
    /// `cycle` drops the head instead of rotating it.
    DroppingCycle,
    /// No sort or cycle; `out` still needs a sorted sequence.
    NoSort,
}

pub fn mutant_queue(v: i64, n: i64, mutant: Mutant) -> String {
    let mut s = String::new();
    let (comment, name) = match mutant {
        Mutant::UnsortedOut => ("Mutant: out takes the head of an unsorted sequence.", "UnsortedOut"),
        Mutant::DroppingCycle => ("Mutant: cycle loses the head element.", "DroppingCycle"),
        Mutant::NoSort => ("Mutant: sort and cycle removed, out still needs sorted(s).", "NoSort"),
    };
    header(&mut s, comment, name, v, n);
    write!(s, "var s : {SEQ}\ninit s = []\n\nevent in (x? : int 0..V)\n  when #s < N\n  then s := s ++ [x]\n").unwrap();
    let out_guard = if mutant == Mutant::UnsortedOut { "s != [] and x = head(s)" } else { "s != [] and sorted(s) and x = head(s)" };
    write!(s, "\nevent out (x! : int 0..V)\n  when {out_guard}\n  then s := tail(s)\n").unwrap();
    match mutant {
        Mutant::UnsortedOut => {
            write!(s, "\nevent sort new ()\n  when true\n{}", sort_update("")).unwrap();
            write!(s, "\nevent cycle new ()\n  when true\n{}", cycle_update("")).unwrap();
        }
        Mutant::DroppingCycle => {
            write!(s, "\nevent sort new ()\n  when true\n{}", sort_update("")).unwrap();
            s += "\nevent cycle new ()\n  when s != []\n  then s := tail(s)\n";
        }
        Mutant::NoSort => {}
    }
    s
}

/// Three one-state machines over event `e` with one output: always 0,
/// never, always 1.
pub fn nontransitivity_chain() -> [String; 3] {
    let m = |name: &str, comment: &str, guard: &str| {
        format!("-- {comment}\nmachine {name}\nvar d : int 0..0\ninit d = 0\n\nevent e (y! : int 0..1)\n  when {guard}\n  then d := d\n")
    };
    [
        m("M1", "Chain start: e always enabled, output 0.", "y = 0"),
        m("M2", "Chain middle: e never enabled.", "false"),
        m("M3", "Chain end: e always enabled, output 1.", "y = 1"),
    ]
}

/// A counter moved by one abstract event, and a grid walker whose two moves
/// both implement it.
pub fn walker_pair(n: i64) -> (String, String) {
    let a = format!(
        "-- Abstract walker: progress along one axis.\nmachine Walker\nconst N = {n}\nvar p : int 0..N\ninit p = 0\n\
         \nevent move ()\n  when p < N\n  then p := p + 1\n"
    );
    let c = format!(
        "-- Grid walker: the abstract move split into two directions.\nmachine GridWalker\nconst N = {n}\n\
         var x : int 0..N\nvar y : int 0..N\ninit x = 0 and y = 0\n\
         \nevent moveNorth ()\n  when x + y < N\n  then y := y + 1\n\
         \nevent moveEast ()\n  when x + y < N\n  then x := x + 1\n"
    );
    (a, c)
}
