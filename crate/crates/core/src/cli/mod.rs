//! Command-line front end: `check`, `ground`, `oracle-compare` and `replay`.
//!
//! Exit codes: 0 pass, 1 fail with a counterexample, 2 usage, parse,
//! typecheck or grounding errors. `REFINERY_THREADS` caps the worker pool.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

pub use report::{Inputs, Pair, Report, StateRef, Step, TraceJson, WitnessJson, VERSION};

use crate::corpus::oracle_counterexample;
use crate::kernel::{Lts, StateId};
use crate::refine::{
    check_action_refinement, check_divergence, check_downward_simulation, check_eventb, check_trace_refinement,
    check_weak_refinement, greatest_simulation, AlphabetMapping, ConditionSet, EventBOptions, ExtensionPolicy,
    MappingFile, RefineError, ResolvedMapping, RetrieveRelation, Status, VariantSpec, Verdict, WeakOptions,
};
use crate::speclang::{load, Bounds, EventClass, SpecError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Machine { path: String, source: SpecError },
    #[error("{path}: {source}")]
    Mapping { path: String, source: RefineError },
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error("{path}: malformed report: {source}")]
    Report { path: String, source: serde_json::Error },
}

#[derive(Parser, Debug)]
#[command(name = "refinery", version, about = "Explicit-state refinement checker for guarded-command machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the concrete machine refines the abstract one.
    Check(CheckArgs),
    /// Dump the state table and transitions of one machine.
    Ground(GroundArgs),
    /// Compare the trace checker with brute-force trace enumeration.
    OracleCompare(OracleArgs),
    /// Rerun the check recorded in a JSON report and replay its witness.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    Trace,
    Sim,
    Eventb,
    Weak,
    Action,
    Divergence,
}

impl Relation {
    fn name(self) -> &'static str {
        match self {
            Relation::Trace => "trace",
            Relation::Sim => "sim",
            Relation::Eventb => "eventb",
            Relation::Weak => "weak",
            Relation::Action => "action",
            Relation::Divergence => "divergence",
        }
    }

    fn uses_conditions(self) -> bool {
        matches!(self, Relation::Sim | Relation::Weak | Relation::Action)
    }

    fn uses_retrieve(self) -> bool {
        !matches!(self, Relation::Trace | Relation::Divergence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Extension {
    Reject,
    Tolerate,
}

#[derive(Args, Debug, Clone)]
pub struct BoundsArgs {
    /// Maximum element value and maximum collection size, as `V,N`.
    #[arg(long, value_name = "V,N")]
    bounds: Option<String>,
    /// Override any other constant.
    #[arg(long = "set", value_name = "NAME=INT")]
    set: Vec<String>,
    /// Reject transitions leaving the bounded state space instead of pruning them.
    #[arg(long)]
    strict: bool,
}

impl BoundsArgs {
    fn resolve(&self) -> Result<Bounds, CliError> {
        let mut b = Bounds::default().strict(self.strict);
        if let Some(text) = &self.bounds {
            let parts: Vec<&str> = text.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [v, n] => {
                    let v = v.parse().map_err(|_| usage(format!("--bounds: `{v}` is not an integer")))?;
                    let n = n.parse().map_err(|_| usage(format!("--bounds: `{n}` is not an integer")))?;
                    b = b.with("V", v).with("N", n);
                }
                _ => return Err(usage("--bounds expects `V,N`")),
            }
        }
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| usage(format!("--set expects NAME=INT, got `{s}`")))?;
            let v = v.trim().parse().map_err(|_| usage(format!("--set: `{v}` is not an integer")))?;
            b = b.with(k.trim(), v);
        }
        Ok(b)
    }
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    /// Abstract machine; not needed for divergence.
    #[arg(long = "abstract", value_name = "FILE")]
    abstract_file: Option<PathBuf>,
    /// Concrete machine.
    #[arg(long, value_name = "FILE")]
    concrete: PathBuf,
    #[arg(long, value_enum, default_value_t = Relation::Sim)]
    relation: Relation,
    /// Subset of 1 (consistency), 2 (enabledness), 3 (restricted consistency).
    #[arg(long, value_name = "LIST")]
    conditions: Option<String>,
    /// A predicate over both machines' variables, `identity`, or `auto`.
    #[arg(long, value_name = "EXPR")]
    retrieve: Option<String>,
    /// Alphabet, action and classification file.
    #[arg(long, value_name = "FILE")]
    mapping: Option<PathBuf>,
    /// Concrete events to treat as internal.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    internal: Vec<String>,
    /// Concrete events to treat as new.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    new: Vec<String>,
    /// Events covered by the divergence check.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    events: Vec<String>,
    /// Natural-number expression the new or covered events must decrease.
    #[arg(long, value_name = "EXPR")]
    variant: Option<String>,
    #[command(flatten)]
    bounds: BoundsArgs,
    /// Cross-check a trace verdict against brute-force enumeration to this depth.
    #[arg(long, value_name = "D")]
    depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Fail where the concrete state deadlocks and its linked abstract state does not.
    #[arg(long)]
    relative_deadlock: bool,
    /// Fail where the concrete state diverges and its linked abstract state does not.
    #[arg(long)]
    preserve_divergence: bool,
    /// How concrete events missing from the mapping are handled.
    #[arg(long, value_enum)]
    extension: Option<Extension>,
    /// Record wall time in the diagnostics.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct GroundArgs {
    /// Machine to ground.
    #[arg(long, value_name = "FILE")]
    machine: PathBuf,
    #[command(flatten)]
    bounds: BoundsArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    /// Abstract machine.
    #[arg(long = "abstract", value_name = "FILE")]
    abstract_file: PathBuf,
    /// Concrete machine.
    #[arg(long, value_name = "FILE")]
    concrete: PathBuf,
    /// Alphabet and classification file.
    #[arg(long, value_name = "FILE")]
    mapping: Option<PathBuf>,
    /// Concrete events to treat as internal.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    internal: Vec<String>,
    #[command(flatten)]
    bounds: BoundsArgs,
    /// Longest trace enumerated, counting visible labels only.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    #[arg(value_name = "REPORT")]
    report: PathBuf,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load_machine(path: &Path, bounds: &Bounds) -> Result<Lts, CliError> {
    load(&read(path)?, bounds).map_err(|source| CliError::Machine { path: path.display().to_string(), source })
}

fn load_mapping(path: Option<&Path>) -> Result<MappingFile, CliError> {
    match path {
        None => Ok(MappingFile::default()),
        Some(p) => MappingFile::parse(&read(p)?).map_err(|source| CliError::Mapping { path: p.display().to_string(), source }),
    }
}

fn reclassify(mut c: Lts, events: &BTreeSet<String>, class: EventClass) -> Result<Lts, CliError> {
    for e in events {
        c = c.with_class(e, class).map_err(|_| RefineError::UnknownEvent { side: "concrete", name: e.clone() })?;
    }
    Ok(c)
}

/// A finished `check`: the verdict, the machines it refers to, and the report.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    pub abstract_lts: Option<Lts>,
    pub concrete: Lts,
    pub retrieve: Option<RetrieveRelation>,
    pub report: Report,
}

fn validate(args: &CheckArgs) -> Result<(), CliError> {
    let rel = args.relation;
    if rel != Relation::Divergence && args.abstract_file.is_none() {
        return Err(usage(format!("--relation {} needs --abstract", rel.name())));
    }
    if args.variant.is_some() && args.new.is_empty() && args.internal.is_empty() && args.events.is_empty() {
        return Err(usage("--variant needs the events it covers: give --new, --internal or --events"));
    }
    if args.variant.is_some() && !matches!(rel, Relation::Eventb | Relation::Divergence) {
        return Err(usage("--variant applies to --relation eventb or divergence"));
    }
    if !args.events.is_empty() && rel != Relation::Divergence {
        return Err(usage("--events applies to --relation divergence"));
    }
    if args.relative_deadlock && rel != Relation::Eventb {
        return Err(usage("--relative-deadlock applies to --relation eventb"));
    }
    if args.preserve_divergence && rel != Relation::Weak {
        return Err(usage("--preserve-divergence applies to --relation weak"));
    }
    if args.depth.is_some() && rel != Relation::Trace {
        return Err(usage("--depth applies to --relation trace"));
    }
    if args.conditions.is_some() && !rel.uses_conditions() {
        return Err(usage(format!("--conditions does not apply to --relation {}", rel.name())));
    }
    if args.retrieve.is_some() && !rel.uses_retrieve() {
        return Err(usage(format!("--retrieve does not apply to --relation {}", rel.name())));
    }
    Ok(())
}

fn retrieve_relation(
    text: &str,
    a: &Lts,
    c: &Lts,
    m: &AlphabetMapping,
    conds: &ConditionSet,
) -> Result<RetrieveRelation, CliError> {
    Ok(match text.trim() {
        "identity" => RetrieveRelation::identity(a, c)?,
        "auto" if a.vars() == c.vars() => RetrieveRelation::identity(a, c)?,
        "auto" => match greatest_simulation(a, c, m, conds)? {
            Some(r) => r,
            None => RetrieveRelation::from_pairs(a, c, std::iter::empty(), "synthesized")?,
        },
        expr => RetrieveRelation::from_predicate(a, c, expr)?,
    })
}

/// Runs one `check`. `raw` are the arguments after `check`, kept in the
/// report for replay.
pub fn execute_check(args: &CheckArgs, raw: Vec<String>) -> Result<CheckOutcome, CliError> {
    validate(args)?;
    let started = Instant::now();
    let bounds = args.bounds.resolve()?;
    let rel = args.relation;
    let file = load_mapping(args.mapping.as_deref())?;
    let mut mapping = file.alphabet.clone();
    match args.extension {
        Some(Extension::Tolerate) => mapping.extension = ExtensionPolicy::Tolerate,
        Some(Extension::Reject) => mapping.extension = ExtensionPolicy::Reject,
        None => {}
    }
    let internal: BTreeSet<String> = file.internal.iter().chain(&args.internal).cloned().collect();
    let new: BTreeSet<String> = file.new.iter().chain(&args.new).cloned().collect();
    let conds: ConditionSet = args.conditions.as_deref().unwrap_or("2,3").parse()?;

    let c = load_machine(&args.concrete, &bounds)?;
    let c = reclassify(c, &internal, EventClass::Internal)?;
    let c = reclassify(c, &new, EventClass::New)?;
    let a = match &args.abstract_file {
        Some(p) => Some(load_machine(p, &bounds)?),
        None => None,
    };

    let retrieve_text = args.retrieve.clone().unwrap_or_else(|| "auto".into());
    let mut retrieve = None;
    let verdict = match (rel, &a) {
        (Relation::Divergence, _) => {
            let mut events: BTreeSet<String> = args.events.iter().cloned().collect();
            events.extend(internal.iter().cloned());
            events.extend(new.iter().cloned());
            if events.is_empty() {
                events = c.events_of_class(EventClass::Internal);
                events.extend(c.events_of_class(EventClass::New));
            }
            for e in &events {
                if c.event(e).is_none() {
                    return Err(RefineError::UnknownEvent { side: "concrete", name: e.clone() }.into());
                }
            }
            let variant = args.variant.as_deref().map(|v| VariantSpec::parse(v, &c)).transpose()?;
            check_divergence(&c, &events, variant.as_ref())?
        }
        (Relation::Trace, Some(a)) => {
            let mut v = check_trace_refinement(a, &c, &mapping)?;
            if let Some(depth) = args.depth {
                cross_check_oracle(a, &c, &mapping, depth, &mut v)?;
            }
            v
        }
        (_, Some(a)) => {
            let gfp_conds = if rel == Relation::Eventb || conds.is_restricted_only() {
                ConditionSet::consistency()
            } else {
                conds.clone()
            };
            let r = retrieve_relation(&retrieve_text, a, &c, &mapping, &gfp_conds)?;
            let v = match rel {
                Relation::Sim => check_downward_simulation(a, &c, &r, &conds, &mapping)?,
                Relation::Weak => check_weak_refinement(
                    a,
                    &c,
                    &r,
                    &mapping,
                    &conds,
                    WeakOptions { preserve_divergence: args.preserve_divergence },
                )?,
                Relation::Eventb => {
                    let variant = args.variant.as_deref().map(|v| VariantSpec::parse(v, &c)).transpose()?;
                    let opts = EventBOptions { relative_deadlock: args.relative_deadlock, variant };
                    check_eventb(a, &c, &r, &mapping, &new, &opts)?
                }
                Relation::Action => {
                    if file.actions.entries().is_empty() {
                        return Err(usage("--relation action needs `a => c1, c2` entries in --mapping"));
                    }
                    check_action_refinement(a, &c, &r, &file.actions, &conds)?
                }
                Relation::Trace | Relation::Divergence => unreachable!("handled above"),
            };
            retrieve = Some(r);
            v
        }
        (_, None) => unreachable!("validate requires --abstract"),
    };

    let inputs = Inputs {
        command: "check".into(),
        args: raw,
        relation: rel.name().into(),
        abstract_file: args.abstract_file.as_ref().map(|p| p.display().to_string()),
        concrete: args.concrete.display().to_string(),
        conditions: rel.uses_conditions().then(|| conds.to_string()),
        retrieve: rel.uses_retrieve().then(|| retrieve_text.clone()),
        mapping: args.mapping.as_ref().map(|p| p.display().to_string()),
        constants: bounds.constants.clone(),
        strict: bounds.strict,
    };
    let mut report = Report::new(inputs, &verdict, a.as_ref(), &c);
    if args.timing {
        report.diagnostics.insert("time.wall_ms".into(), started.elapsed().as_millis() as u64);
    }
    Ok(CheckOutcome { verdict, abstract_lts: a, concrete: c, retrieve, report })
}

fn cross_check_oracle(a: &Lts, c: &Lts, m: &AlphabetMapping, depth: usize, v: &mut Verdict) -> Result<(), CliError> {
    let cex = oracle_counterexample(a, &ResolvedMapping::identity(a), c, &m.resolve(a, c)?, depth);
    let observed = v.diagnostics.get("witness.observations").copied();
    let checker_fails_within = !v.passed() && observed.is_some_and(|n| n <= depth);
    if cex.is_some() != checker_fails_within {
        return Err(RefineError::Inconsistent(format!(
            "trace checker and enumeration oracle disagree at depth {depth}"
        ))
        .into());
    }
    v.diagnostics.insert("oracle.depth".into(), depth);
    Ok(())
}

fn render_check(o: &CheckOutcome) -> String {
    let r = &o.report;
    let mut s = String::new();
    let c = &o.concrete;
    match &o.abstract_lts {
        Some(a) => writeln!(s, "check {}: {} refines {}", r.inputs.relation, c.name(), a.name()).unwrap(),
        None => writeln!(s, "check {}: {}", r.inputs.relation, c.name()).unwrap(),
    }
    if let Some(conds) = &r.inputs.conditions {
        writeln!(s, "conditions: {conds}").unwrap();
    }
    if let (Some(text), Some(rr)) = (&r.inputs.retrieve, &o.retrieve) {
        if text.trim() == rr.origin() {
            writeln!(s, "retrieve: {text} ({} pairs)", rr.len()).unwrap();
        } else {
            writeln!(s, "retrieve: {text}, {} ({} pairs)", rr.origin(), rr.len()).unwrap();
        }
    }
    writeln!(s, "status: {}", r.status).unwrap();
    if let Some(w) = &o.verdict.witness {
        writeln!(s, "witness: {}", w.describe(o.abstract_lts.as_ref(), c)).unwrap();
    }
    writeln!(s, "diagnostics:").unwrap();
    for (k, v) in &r.diagnostics {
        writeln!(s, "  {k} = {v}").unwrap();
    }
    for w in &r.warnings {
        writeln!(s, "warning: {w}").unwrap();
    }
    s
}

fn cmd_check(args: &CheckArgs, raw: Vec<String>) -> Result<(i32, String), CliError> {
    let o = execute_check(args, raw)?;
    let text = match args.format {
        Format::Json => o.report.to_json() + "\n",
        Format::Text => render_check(&o),
    };
    Ok((if o.verdict.passed() { 0 } else { 1 }, text))
}

#[derive(Serialize)]
struct GroundState {
    id: usize,
    init: bool,
    state: String,
}

#[derive(Serialize)]
struct GroundTransition {
    from: usize,
    label: String,
    to: usize,
}

#[derive(Serialize)]
struct GroundDump {
    machine: String,
    constants: BTreeMap<String, i64>,
    vars: Vec<(String, String)>,
    states: Vec<GroundState>,
    transitions: Vec<GroundTransition>,
    pruned: BTreeMap<String, usize>,
}

fn cmd_ground(args: &GroundArgs) -> Result<(i32, String), CliError> {
    let lts = load_machine(&args.machine, &args.bounds.resolve()?)?;
    let dump = GroundDump {
        machine: lts.name().to_string(),
        constants: lts.consts().clone(),
        vars: lts.vars().iter().map(|(n, t)| (n.clone(), t.to_string())).collect(),
        states: lts
            .state_ids()
            .map(|s| GroundState { id: s.0, init: lts.inits().contains(&s), state: lts.show_state(s) })
            .collect(),
        transitions: lts
            .transitions()
            .iter()
            .map(|t| GroundTransition { from: t.from.0, label: t.label.to_string(), to: t.to.0 })
            .collect(),
        pruned: lts.pruned().clone(),
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&dump).expect("dump serializes") + "\n",
        Format::Text => {
            let mut s = format!("machine {}\n", dump.machine);
            for (k, v) in &dump.constants {
                writeln!(s, "const {k} = {v}").unwrap();
            }
            for (n, t) in &dump.vars {
                writeln!(s, "var {n} : {t}").unwrap();
            }
            writeln!(s, "states: {}", dump.states.len()).unwrap();
            for st in &dump.states {
                writeln!(s, "  #{}{} {}", st.id, if st.init { " init" } else { "" }, st.state).unwrap();
            }
            writeln!(s, "transitions: {}", dump.transitions.len()).unwrap();
            for t in &dump.transitions {
                writeln!(s, "  #{} --{}--> #{}", t.from, t.label, t.to).unwrap();
            }
            for (e, n) in &dump.pruned {
                writeln!(s, "pruned {e}: {n}").unwrap();
            }
            s
        }
    };
    Ok((0, text))
}

#[derive(Serialize)]
struct OracleReport {
    version: &'static str,
    depth: usize,
    trace_status: Status,
    checker_observations: Option<usize>,
    oracle_counterexample: Option<Vec<String>>,
    agree: bool,
}

fn cmd_oracle(args: &OracleArgs) -> Result<(i32, String), CliError> {
    let bounds = args.bounds.resolve()?;
    let file = load_mapping(args.mapping.as_deref())?;
    let internal: BTreeSet<String> = file.internal.iter().chain(&args.internal).cloned().collect();
    let a = load_machine(&args.abstract_file, &bounds)?;
    let c = reclassify(load_machine(&args.concrete, &bounds)?, &internal, EventClass::Internal)?;
    let c = reclassify(c, &file.new, EventClass::New)?;
    let v = check_trace_refinement(&a, &c, &file.alphabet)?;
    let cex = oracle_counterexample(&a, &ResolvedMapping::identity(&a), &c, &file.alphabet.resolve(&a, &c)?, args.depth);
    let observations = (!v.passed()).then(|| v.diagnostics.get("witness.observations").copied()).flatten();
    let agree = cex.is_some() == observations.is_some_and(|n| n <= args.depth);
    let rep = OracleReport {
        version: VERSION,
        depth: args.depth,
        trace_status: v.status,
        checker_observations: observations,
        oracle_counterexample: cex.map(|t| t.iter().map(|l| l.to_string()).collect()),
        agree,
    };
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&rep).expect("report serializes") + "\n",
        Format::Text => {
            let mut s = format!("trace checker: {}", rep.trace_status);
            if let Some(n) = rep.checker_observations {
                write!(s, " ({n} observations)").unwrap();
            }
            match &rep.oracle_counterexample {
                Some(t) => write!(s, "\noracle counterexample (depth {}): <{}>", rep.depth, t.join(", ")).unwrap(),
                None => write!(s, "\noracle: no counterexample up to depth {}", rep.depth).unwrap(),
            }
            writeln!(s, "\n{}", if rep.agree { "agree" } else { "DISAGREE" }).unwrap();
            s
        }
    };
    Ok((if agree { 0 } else { 1 }, text))
}

/// Checks that a serialized trace is a run of `c` ending at `end`.
pub fn trace_replays(t: &TraceJson, c: &Lts, end: usize) -> Result<(), String> {
    if t.init.id >= c.num_states() || !c.inits().contains(&StateId(t.init.id)) {
        return Err(format!("trace starts at #{}, which is not an initial state", t.init.id));
    }
    let mut cur = StateId(t.init.id);
    for (i, step) in t.steps.iter().enumerate() {
        let found = c.outgoing(cur).iter().any(|tr| tr.label.to_string() == step.label && tr.to.0 == step.to.id);
        if !found {
            return Err(format!("step {} ({} to #{}) is not a transition from {cur}", i + 1, step.label, step.to.id));
        }
        cur = StateId(step.to.id);
    }
    if cur.0 != end {
        return Err(format!("trace ends at {cur}, witness state is #{end}"));
    }
    Ok(())
}

fn cmd_replay(args: &ReplayArgs) -> Result<(i32, String), CliError> {
    let path = args.report.display().to_string();
    let stored: Report =
        serde_json::from_str(&read(&args.report)?).map_err(|source| CliError::Report { path: path.clone(), source })?;
    if stored.inputs.command != "check" {
        return Err(usage(format!("{path}: not a check report")));
    }
    let argv = ["refinery".to_string(), "check".to_string()].into_iter().chain(stored.inputs.args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| usage(format!("{path}: stored arguments: {e}")))?;
    let Command::Check(check) = cli.command else {
        return Err(usage(format!("{path}: not a check report")));
    };
    let fresh = execute_check(&check, stored.inputs.args.clone())?;
    let mut problems = Vec::new();
    if fresh.report.status != stored.status {
        problems.push(format!("status is now {}, report says {}", fresh.report.status, stored.status));
    }
    if fresh.report.witness != stored.witness {
        problems.push("the rerun produces a different witness".to_string());
    }
    if let Some(w) = &stored.witness {
        if let Some(t) = &w.trace {
            if let Err(e) = trace_replays(t, &fresh.concrete, w.pair.concrete.id) {
                problems.push(e);
            }
        }
    }
    let mut s = String::new();
    if problems.is_empty() {
        match &stored.witness {
            Some(w) => writeln!(
                s,
                "replay ok: {} at #{} reproduced{}",
                w.condition,
                w.pair.concrete.id,
                if w.trace.is_some() { ", trace executes" } else { ", state unreachable" }
            )
            .unwrap(),
            None => writeln!(s, "replay ok: {} reproduced", stored.status).unwrap(),
        }
    } else {
        for p in &problems {
            writeln!(s, "replay mismatch: {p}").unwrap();
        }
    }
    Ok((if problems.is_empty() { 0 } else { 1 }, s))
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("REFINERY_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(usage(format!("REFINERY_THREADS must be a positive integer, got `{v}`"))),
        },
    }
}

fn dispatch(cli: Cli, raw: Vec<String>) -> Result<(i32, String), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| usage(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Check(args) => cmd_check(args, raw),
        Command::Ground(args) => cmd_ground(args),
        Command::OracleCompare(args) => cmd_oracle(args),
        Command::Replay(args) => cmd_replay(args),
    })
}

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let raw: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("refinery")).chain(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            write!(sink, "{}", e.render()).ok();
            return code;
        }
    };
    match dispatch(cli, raw) {
        Ok((code, text)) => {
            out.write_all(text.as_bytes()).ok();
            code
        }
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            2
        }
    }
}
