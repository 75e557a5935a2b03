//! Alphabet translation between concrete and abstract events, action
//! mappings, and the plain-text mapping file format:
//!
//! ```text
//! -- comments start with `--` or `#`
//! moveNorth -> move
//! sort -> skip
//! out => sort, out @ outputs:2
//! internal: sort
//! new: cycle
//! extension: tolerate
//! ```

use std::collections::{BTreeMap, BTreeSet};

use super::RefineError;
use crate::kernel::{EventSig, Label, Lts, Transition};
use crate::speclang::{Domain, EventClass};

/// Image of a concrete event in a user-written mapping.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Abstract(String),
    Skip,
}

/// What to do with concrete events that have no abstract counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtensionPolicy {
    #[default]
    Reject,
    Tolerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlphabetMapping {
    entries: BTreeMap<String, Target>,
    pub extension: ExtensionPolicy,
}

/// Resolved image of a concrete event.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Image {
    Event(String),
    /// A visible step refining abstract skip.
    Skip,
    /// An invisible step.
    Internal,
}

/// An alphabet mapping checked against a pair of machines: total on the
/// concrete alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedMapping {
    images: BTreeMap<String, Image>,
}

impl AlphabetMapping {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn map(mut self, concrete: &str, abstract_event: &str) -> Self {
        self.entries.insert(concrete.to_string(), Target::Abstract(abstract_event.to_string()));
        self
    }

    pub fn skip(mut self, concrete: &str) -> Self {
        self.entries.insert(concrete.to_string(), Target::Skip);
        self
    }

    pub fn tolerate(mut self) -> Self {
        self.extension = ExtensionPolicy::Tolerate;
        self
    }

    pub fn entries(&self) -> &BTreeMap<String, Target> {
        &self.entries
    }

    /// Resolution order for each concrete event: internal events are
    /// invisible; explicit entries; the abstract event of the same name;
    /// `new` events refine skip; anything else is an extension event.
    pub fn resolve(&self, a: &Lts, c: &Lts) -> Result<ResolvedMapping, RefineError> {
        for name in self.entries.keys() {
            if c.event(name).is_none() {
                return Err(RefineError::UnknownEvent { side: "concrete", name: name.clone() });
            }
        }
        let mut images = BTreeMap::new();
        for (name, sig) in c.alphabet() {
            let explicit = self.entries.get(name);
            let image = if sig.class == EventClass::Internal {
                if explicit.is_some() {
                    return Err(RefineError::InternalInMapping(name.clone()));
                }
                Image::Internal
            } else if let Some(t) = explicit {
                match t {
                    Target::Skip => Image::Skip,
                    Target::Abstract(ae) => Image::Event(ae.clone()),
                }
            } else if a.event(name).is_some_and(|s| s.class != EventClass::Internal) {
                Image::Event(name.clone())
            } else if sig.class == EventClass::New || self.extension == ExtensionPolicy::Tolerate {
                Image::Skip
            } else {
                return Err(RefineError::Unmapped(name.clone()));
            };
            if let Image::Event(ae) = &image {
                let asig = a
                    .event(ae)
                    .filter(|s| s.class != EventClass::Internal)
                    .ok_or_else(|| RefineError::UnknownEvent { side: "abstract", name: ae.clone() })?;
                if !sig.compatible_with(asig) {
                    return Err(RefineError::SignatureMismatch { concrete: name.clone(), abstract_event: ae.clone() });
                }
            }
            images.insert(name.clone(), image);
        }
        Ok(ResolvedMapping { images })
    }
}

impl ResolvedMapping {
    /// Every event maps to itself, internal events are invisible.
    pub fn identity(lts: &Lts) -> Self {
        let images = lts
            .alphabet()
            .values()
            .map(|s| {
                let img = if s.class == EventClass::Internal { Image::Internal } else { Image::Event(s.name.clone()) };
                (s.name.clone(), img)
            })
            .collect();
        ResolvedMapping { images }
    }

    pub fn image(&self, concrete: &str) -> &Image {
        self.images.get(concrete).unwrap_or(&Image::Internal)
    }

    pub fn images(&self) -> &BTreeMap<String, Image> {
        &self.images
    }

    /// Concrete events mapped to `abstract_event`.
    pub fn preimage(&self, abstract_event: &str) -> Vec<&str> {
        self.images
            .iter()
            .filter(|(_, i)| matches!(i, Image::Event(e) if e == abstract_event))
            .map(|(c, _)| c.as_str())
            .collect()
    }

    /// The abstract form of a concrete label, or `None` for skip and
    /// internal steps.
    pub fn apply(&self, l: &Label) -> Option<Label> {
        match self.image(&l.event) {
            Image::Event(e) => Some(l.renamed(e)),
            _ => None,
        }
    }
}

/// Event name given to stuttering steps by [`relabel`].
pub const SKIP: &str = "skip";

/// Renames transitions through `m`. Skip and internal steps become
/// parameterless `skip` steps classified internal.
pub fn relabel(c: &Lts, m: &ResolvedMapping) -> Result<Lts, RefineError> {
    let mut alphabet: BTreeMap<String, EventSig> = BTreeMap::new();
    for (name, sig) in c.alphabet() {
        let renamed = match m.image(name) {
            Image::Event(e) => EventSig { name: e.clone(), ..sig.clone() },
            Image::Skip | Image::Internal => EventSig {
                name: SKIP.to_string(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                class: EventClass::Internal,
            },
        };
        match alphabet.get_mut(&renamed.name) {
            Some(prev) => {
                if !prev.compatible_with(&renamed) {
                    return Err(RefineError::SignatureMismatch { concrete: name.clone(), abstract_event: renamed.name });
                }
                // merged events keep every value either side can carry
                for (into, from) in [(&mut prev.inputs, &renamed.inputs), (&mut prev.outputs, &renamed.outputs)] {
                    for ((_, d), (_, e)) in into.iter_mut().zip(from) {
                        *d = join(d, e);
                    }
                }
            }
            None => {
                alphabet.insert(renamed.name.clone(), renamed);
            }
        }
    }
    let transitions = c
        .transitions()
        .iter()
        .map(|t| Transition {
            from: t.from,
            label: m.apply(&t.label).unwrap_or_else(|| Label::plain(SKIP)),
            to: t.to,
        })
        .collect();
    Ok(c.with_transitions(transitions, alphabet.into_values().collect())?)
}

/// Smallest domain of the same shape containing both.
fn join(d: &Domain, e: &Domain) -> Domain {
    match (d, e) {
        (Domain::Int { lo, hi }, Domain::Int { lo: l2, hi: h2 }) => Domain::Int { lo: *lo.min(l2), hi: *hi.max(h2) },
        (Domain::Seq { elem, max }, Domain::Seq { elem: e2, max: m2 }) => {
            Domain::Seq { elem: Box::new(join(elem, e2)), max: *max.max(m2) }
        }
        (Domain::Bag { elem, max }, Domain::Bag { elem: e2, max: m2 }) => {
            Domain::Bag { elem: Box::new(join(elem, e2)), max: *max.max(m2) }
        }
        _ => d.clone(),
    }
}

/// One abstract event realised by a fixed sequence of concrete events.
/// Positions are 0-based; `None` selects the default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionEntry {
    pub sequence: Vec<String>,
    pub inputs_at: Option<usize>,
    pub outputs_at: Option<usize>,
}

impl ActionEntry {
    pub fn new<S: AsRef<str>>(sequence: &[S]) -> Self {
        ActionEntry {
            sequence: sequence.iter().map(|s| s.as_ref().to_string()).collect(),
            inputs_at: None,
            outputs_at: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActionMapping {
    entries: BTreeMap<String, ActionEntry>,
}

/// An action entry with observation positions fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ResolvedAction {
    pub sequence: Vec<String>,
    pub inputs_at: Option<usize>,
    pub outputs_at: Option<usize>,
}

impl ActionMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, abstract_event: &str, entry: ActionEntry) -> Self {
        self.entries.insert(abstract_event.to_string(), entry);
        self
    }

    pub fn entries(&self) -> &BTreeMap<String, ActionEntry> {
        &self.entries
    }

    /// The alphabet mapping induced when every entry has length 1;
    /// concrete events outside every entry map to skip.
    pub fn induced_alphabet(&self, a: &Lts, c: &Lts) -> Result<Option<AlphabetMapping>, RefineError> {
        let resolved = self.resolve(a, c)?;
        let mut m = AlphabetMapping::identity();
        let mut covered = BTreeSet::new();
        for (ae, e) in &resolved {
            let [ce] = e.sequence.as_slice() else { return Ok(None) };
            m = m.map(ce, ae);
            covered.insert(ce.clone());
        }
        for name in c.alphabet().keys() {
            if !covered.contains(name) && c.class_of(name) != Some(EventClass::Internal) {
                m = m.skip(name);
            }
        }
        Ok(Some(m))
    }

    /// Fills in length-1 identity entries for abstract events without one,
    /// checks that every name exists and picks observation positions:
    /// inputs at the first position with matching input arity, outputs at
    /// the last position with matching output arity.
    pub(crate) fn resolve(&self, a: &Lts, c: &Lts) -> Result<BTreeMap<String, ResolvedAction>, RefineError> {
        for name in self.entries.keys() {
            if a.event(name).is_none() {
                return Err(RefineError::UnknownEvent { side: "abstract", name: name.clone() });
            }
        }
        let mut out = BTreeMap::new();
        for (ae, asig) in a.alphabet() {
            if asig.class == EventClass::Internal {
                continue;
            }
            let entry = match self.entries.get(ae) {
                Some(e) => e.clone(),
                None if c.event(ae).is_some() => ActionEntry::new(&[ae]),
                None => return Err(RefineError::MissingAction(ae.clone())),
            };
            let err = |message: String| RefineError::Action { event: ae.clone(), message };
            if entry.sequence.is_empty() {
                return Err(err("empty sequence".into()));
            }
            let sigs = entry
                .sequence
                .iter()
                .map(|n| c.event(n).ok_or_else(|| RefineError::UnknownEvent { side: "concrete", name: n.clone() }))
                .collect::<Result<Vec<_>, _>>()?;
            let n = sigs.len();
            let pick = |given: Option<usize>, want: usize, side: &str, field: fn(&EventSig) -> &[(String, Domain)], last: bool| {
                if want == 0 {
                    return Ok(None);
                }
                let pos = match given {
                    Some(p) if p >= n => return Err(err(format!("{side} position {} out of range 1..{n}", p + 1))),
                    Some(p) => p,
                    None => {
                        let fits = |i: &usize| field(sigs[*i]).len() == want;
                        let found = if last { (0..n).rev().find(fits) } else { (0..n).find(fits) };
                        found.ok_or_else(|| err(format!("no concrete position carries the {side}")))?
                    }
                };
                Ok(Some(pos))
            };
            let inputs_at = pick(entry.inputs_at, asig.inputs.len(), "inputs", |s| &s.inputs, false)?;
            let outputs_at = pick(entry.outputs_at, asig.outputs.len(), "outputs", |s| &s.outputs, true)?;
            let probe = |pos: Option<usize>, abs: &[(String, Domain)], inputs: bool| {
                let Some(p) = pos else { return true };
                let conc = if inputs { &sigs[p].inputs } else { &sigs[p].outputs };
                let a_sig = EventSig { name: String::new(), inputs: abs.to_vec(), outputs: Vec::new(), class: EventClass::External };
                let c_sig = EventSig { name: String::new(), inputs: conc.clone(), outputs: Vec::new(), class: EventClass::External };
                a_sig.compatible_with(&c_sig)
            };
            if !probe(inputs_at, &asig.inputs, true) || !probe(outputs_at, &asig.outputs, false) {
                return Err(err("assigned concrete positions have incompatible domains".into()));
            }
            out.insert(ae.clone(), ResolvedAction { sequence: entry.sequence, inputs_at, outputs_at });
        }
        Ok(out)
    }
}

/// Everything a mapping file can declare.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MappingFile {
    pub alphabet: AlphabetMapping,
    pub actions: ActionMapping,
    pub internal: BTreeSet<String>,
    pub new: BTreeSet<String>,
}

fn names(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|n| !n.is_empty()).map(String::from).collect()
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl MappingFile {
    pub fn parse(text: &str) -> Result<Self, RefineError> {
        let mut out = MappingFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: &str| RefineError::MappingSyntax { line, message: message.to_string() };
            let body = raw.split("--").next().unwrap_or("").trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let check = |ns: &[String]| match ns.iter().find(|n| !is_ident(n)) {
                Some(n) => Err(err(&format!("`{n}` is not an event name"))),
                None if ns.is_empty() => Err(err("expected at least one event name")),
                None => Ok(()),
            };
            if let Some((l, r)) = body.split_once("=>") {
                let ae = l.trim();
                check(&[ae.to_string()])?;
                let (seq, opts) = match r.split_once('@') {
                    Some((s, o)) => (s, Some(o)),
                    None => (r, None),
                };
                let seq = names(seq);
                check(&seq)?;
                let mut entry = ActionEntry::new(&seq);
                for opt in opts.map(|o| o.split_whitespace().collect::<Vec<_>>()).unwrap_or_default() {
                    let (k, v) = opt.split_once(':').ok_or_else(|| err("expected `inputs:N` or `outputs:N`"))?;
                    let pos: usize = v.parse().ok().filter(|p| *p >= 1).ok_or_else(|| err("positions are 1-based integers"))?;
                    match k {
                        "inputs" => entry.inputs_at = Some(pos - 1),
                        "outputs" => entry.outputs_at = Some(pos - 1),
                        _ => return Err(err("expected `inputs:N` or `outputs:N`")),
                    }
                }
                out.actions = out.actions.with(ae, entry);
            } else if let Some((l, r)) = body.split_once("->") {
                let (ce, ae) = (l.trim(), r.trim());
                check(&[ce.to_string()])?;
                if ae == "skip" {
                    out.alphabet = out.alphabet.skip(ce);
                } else {
                    check(&[ae.to_string()])?;
                    out.alphabet = out.alphabet.map(ce, ae);
                }
            } else if let Some((k, v)) = body.split_once(':') {
                let vs = names(v);
                match k.trim() {
                    "internal" => {
                        check(&vs)?;
                        out.internal.extend(vs);
                    }
                    "new" => {
                        check(&vs)?;
                        out.new.extend(vs);
                    }
                    "extension" => match v.trim() {
                        "tolerate" => out.alphabet.extension = ExtensionPolicy::Tolerate,
                        "reject" => out.alphabet.extension = ExtensionPolicy::Reject,
                        _ => return Err(err("extension is `tolerate` or `reject`")),
                    },
                    other => return Err(err(&format!("unknown key `{other}`"))),
                }
            } else {
                return Err(err("expected `c -> a`, `a => c1, c2`, or `key: value`"));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_line_form() {
        let f = MappingFile::parse(
            "-- header\n# also a comment\nmoveNorth -> move\nsort -> skip\nout => sort, out @ outputs:2\n\
             internal: sort\nnew: cycle, tick\nextension: tolerate\n",
        )
        .unwrap();
        assert_eq!(f.alphabet.entries()["moveNorth"], Target::Abstract("move".into()));
        assert_eq!(f.alphabet.entries()["sort"], Target::Skip);
        assert_eq!(f.alphabet.extension, ExtensionPolicy::Tolerate);
        let out = &f.actions.entries()["out"];
        assert_eq!(out.sequence, vec!["sort", "out"]);
        assert_eq!(out.outputs_at, Some(1));
        assert_eq!(out.inputs_at, None);
        assert_eq!(f.internal, ["sort".to_string()].into());
        assert_eq!(f.new.len(), 2);
    }

    #[test]
    fn reports_line_numbers() {
        let err = MappingFile::parse("a -> b\nnonsense\n").unwrap_err();
        assert_eq!(err, RefineError::MappingSyntax { line: 2, message: "expected `c -> a`, `a => c1, c2`, or `key: value`".into() });
        assert!(MappingFile::parse("out => sort @ outputs:0").is_err());
        assert!(MappingFile::parse("colour: red").is_err());
    }
}
