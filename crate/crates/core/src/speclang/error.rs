use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("{context}: type mismatch: expected {expected}, found {found}")]
    Mismatch { context: String, expected: String, found: String },
    #[error("{context}: `{name}` has an unbounded domain ({domain})")]
    UnboundedDomain { context: String, name: String, domain: String },
    #[error("{context}: primed variable `{name}'` used outside an update")]
    PrimedOutsideUpdate { context: String, name: String },
    #[error("{context}: unknown name `{name}`")]
    UnknownName { context: String, name: String },
    #[error("{context}: duplicate name `{name}`")]
    Duplicate { context: String, name: String },
    #[error("{context}: `{name}` is reserved")]
    Reserved { context: String, name: String },
    #[error("{context}: variable `{name}` assigned more than once")]
    DoubleAssign { context: String, name: String },
    #[error("{context}: `{name}` is not a state variable")]
    NotAssignable { context: String, name: String },
    #[error("{context}: `{name}` is ambiguous between the abstract and concrete machines")]
    Ambiguous { context: String, name: String },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{op} applied to an empty collection")]
    EmptyCollection { op: &'static str },
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("ill-typed operand for {0}")]
    IllTyped(&'static str),
    #[error("integer overflow")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("empty init set: no valuation satisfies the init predicate")]
    EmptyInit,
    #[error("event `{event}` at state {state}: {source}")]
    Eval { event: String, state: String, source: EvalError },
    #[error("init predicate at state {state}: {source}")]
    InitEval { state: String, source: EvalError },
    #[error("strict mode: event `{event}` leaves the bounded state space from {state} (`{var}` := {value})")]
    BoundOverflow { event: String, state: String, var: String, value: String },
    #[error("domain too large to enumerate in `{0}`")]
    TooLarge(String),
    #[error("malformed grounding result: {0}")]
    Kernel(String),
}

/// Any failure on the way from source text to an LTS.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Ground(#[from] GroundError),
}
