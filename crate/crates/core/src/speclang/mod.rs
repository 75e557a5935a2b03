//! The machine specification language: parsing, static checking,
//! evaluation and grounding to a finite LTS.

pub mod ast;
pub mod error;
pub mod eval;
pub mod ground;
pub mod lexer;
pub mod parser;
pub mod typecheck;
pub mod value;

pub use ast::{EventClass, Expr, MachineAst};
pub use error::{EvalError, GroundError, ParseError, SpecError, TypeError};
pub use eval::{eval, Env};
pub use ground::{ground, Bounds};
pub use parser::{parse, parse_expr};
pub use typecheck::{list_event_signatures, typecheck, EventSignature, Ty, TypedMachine};
pub use value::{Domain, Value};

use crate::kernel::Lts;

/// Parses, typechecks and grounds `src` in one go.
pub fn load(src: &str, bounds: &Bounds) -> Result<Lts, SpecError> {
    let typed = typecheck(&parse(src)?)?;
    Ok(ground(&typed, bounds)?)
}

/// Parses and typechecks `src`.
pub fn compile(src: &str) -> Result<TypedMachine, SpecError> {
    Ok(typecheck(&parse(src)?)?)
}
