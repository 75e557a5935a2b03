//! Syntax tree for `.mch` machine sources, plus a pretty-printer whose
//! output parses back to the same tree.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    Neg,
    Size,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Implies,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    In,
    Concat,
    Union,
    Diff,
    Add,
    Sub,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Implies => "=>",
            BinOp::Or => "or",
            BinOp::And => "and",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::In => "in",
            BinOp::Concat => "++",
            BinOp::Union => "\\/",
            BinOp::Diff => "\\",
            BinOp::Add => "+",
            BinOp::Sub => "-",
        }
    }

    /// Binding strength; higher binds tighter.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Implies => 1,
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Eq
            | BinOp::Ne
            | BinOp::Lt
            | BinOp::Le
            | BinOp::Gt
            | BinOp::Ge
            | BinOp::In => 5,
            BinOp::Concat | BinOp::Union | BinOp::Diff | BinOp::Add | BinOp::Sub => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Sorted,
    Min,
    Items,
    Head,
    Tail,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sorted => "sorted",
            Builtin::Min => "min",
            Builtin::Items => "items",
            Builtin::Head => "head",
            Builtin::Tail => "tail",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Some(match name {
            "sorted" => Builtin::Sorted,
            "min" => Builtin::Min,
            "items" => Builtin::Items,
            "head" => Builtin::Head,
            "tail" => Builtin::Tail,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Bool(bool),
    Int(i64),
    Var(String),
    /// `x'`: the value assigned to `x` by the enclosing update.
    Primed(String),
    SeqLit(Vec<Expr>),
    BagLit(Vec<Expr>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Builtin, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn mentions_primed(&self) -> bool {
        match self {
            Expr::Primed(_) => true,
            Expr::Bool(_) | Expr::Int(_) | Expr::Var(_) => false,
            Expr::SeqLit(es) | Expr::BagLit(es) => es.iter().any(Expr::mentions_primed),
            Expr::Unary(_, e) | Expr::Call(_, e) => e.mentions_primed(),
            Expr::Binary(_, l, r) => l.mentions_primed() || r.mentions_primed(),
            Expr::If(c, a, b) => c.mentions_primed() || a.mentions_primed() || b.mentions_primed(),
        }
    }
}

/// An integer bound in a domain declaration: a literal or a constant name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bound {
    Lit(i64),
    Const(String),
}

/// A domain as written in the source; `None` bounds denote unbounded carriers,
/// which parse but are rejected by the type checker.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DomainExpr {
    Bool,
    Int(Option<(Bound, Bound)>),
    Nat,
    Seq(Box<DomainExpr>, Option<Bound>),
    Bag(Box<DomainExpr>, Option<Bound>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventClass {
    External,
    Internal,
    New,
}

impl fmt::Display for EventClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventClass::External => "external",
            EventClass::Internal => "internal",
            EventClass::New => "new",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstDecl {
    pub name: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub domain: DomainExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
    pub domain: DomainExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assign {
    pub target: String,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Update {
    Assign(Vec<Assign>),
    /// `any t : D where P then x := e`; `P` is evaluated after the
    /// assignments with primed names bound to the assigned values.
    Any {
        binders: Vec<VarDecl>,
        condition: Expr,
        assigns: Vec<Assign>,
    },
}

impl Update {
    pub fn assigns(&self) -> &[Assign] {
        match self {
            Update::Assign(a) => a,
            Update::Any { assigns, .. } => assigns,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventDecl {
    pub name: String,
    pub class: EventClass,
    pub inputs: Vec<Param>,
    pub outputs: Vec<Param>,
    pub guard: Expr,
    pub update: Update,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineAst {
    pub name: String,
    pub consts: Vec<ConstDecl>,
    pub vars: Vec<VarDecl>,
    pub init: Expr,
    pub events: Vec<EventDecl>,
}

// ---------------------------------------------------------------------------
// printing

const PREC_IF: u8 = 0;
const PREC_NOT: u8 = 4;
const PREC_PREFIX: u8 = 7;
const PREC_ATOM: u8 = 8;

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::If(..) => PREC_IF,
        Expr::Binary(op, ..) => op.precedence(),
        Expr::Unary(UnOp::Not, _) => PREC_NOT,
        Expr::Unary(..) => PREC_PREFIX,
        Expr::Int(i) if *i < 0 => PREC_PREFIX,
        _ => PREC_ATOM,
    }
}

fn write_prec(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if expr_prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Bool(b) => write!(f, "{b}"),
            // parenthesised so that `a - (-1)` never lexes as a comment
            Expr::Int(i) if *i < 0 => write!(f, "(-{})", i.unsigned_abs()),
            Expr::Int(i) => write!(f, "{i}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Primed(v) => write!(f, "{v}'"),
            Expr::SeqLit(items) => {
                f.write_str("[")?;
                write_list(f, items)?;
                f.write_str("]")
            }
            Expr::BagLit(items) => {
                f.write_str("{|")?;
                write_list(f, items)?;
                f.write_str("|}")
            }
            Expr::Unary(UnOp::Not, e) => {
                f.write_str("not ")?;
                write_prec(f, e, PREC_NOT)
            }
            Expr::Unary(UnOp::Neg, e) => {
                f.write_str("-")?;
                write_prec(f, e, PREC_ATOM)
            }
            Expr::Unary(UnOp::Size, e) => {
                f.write_str("#")?;
                write_prec(f, e, PREC_ATOM)
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                match op {
                    // right associative
                    BinOp::Implies => {
                        write_prec(f, l, p + 1)?;
                        write!(f, " {} ", op.symbol())?;
                        write_prec(f, r, p)
                    }
                    // non-associative
                    _ if p == 5 => {
                        write_prec(f, l, p + 1)?;
                        write!(f, " {} ", op.symbol())?;
                        write_prec(f, r, p + 1)
                    }
                    _ => {
                        write_prec(f, l, p)?;
                        write!(f, " {} ", op.symbol())?;
                        write_prec(f, r, p + 1)
                    }
                }
            }
            Expr::Call(b, arg) => write!(f, "{}({arg})", b.name()),
            Expr::If(c, t, e) => write!(f, "if {c} then {t} else {e}"),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Lit(i) => write!(f, "{i}"),
            Bound::Const(c) => f.write_str(c),
        }
    }
}

impl fmt::Display for DomainExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainExpr::Bool => f.write_str("bool"),
            DomainExpr::Nat => f.write_str("nat"),
            DomainExpr::Int(None) => f.write_str("int"),
            DomainExpr::Int(Some((lo, hi))) => write!(f, "int {lo}..{hi}"),
            DomainExpr::Seq(d, max) | DomainExpr::Bag(d, max) => {
                let kw = if matches!(self, DomainExpr::Seq(..)) { "seq" } else { "bag" };
                // nested collections are parenthesised to keep `max` unambiguous
                if matches!(**d, DomainExpr::Seq(..) | DomainExpr::Bag(..)) {
                    write!(f, "{kw} ({d})")?;
                } else {
                    write!(f, "{kw} {d}")?;
                }
                if let Some(m) = max {
                    write!(f, " max {m}")?;
                }
                Ok(())
            }
        }
    }
}

fn write_assigns(f: &mut fmt::Formatter<'_>, assigns: &[Assign]) -> fmt::Result {
    for a in assigns {
        write!(f, "\n    {} := {}", a.target, a.value)?;
    }
    Ok(())
}

impl fmt::Display for MachineAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "machine {}", self.name)?;
        for c in &self.consts {
            writeln!(f, "const {} = {}", c.name, c.value)?;
        }
        for v in &self.vars {
            writeln!(f, "var {} : {}", v.name, v.domain)?;
        }
        writeln!(f, "init {}", self.init)?;
        for e in &self.events {
            write!(f, "\nevent {}", e.name)?;
            if e.class != EventClass::External {
                write!(f, " {}", e.class)?;
            }
            f.write_str(" (")?;
            let params = e
                .inputs
                .iter()
                .map(|p| format!("{}? : {}", p.name, p.domain))
                .chain(e.outputs.iter().map(|p| format!("{}! : {}", p.name, p.domain)))
                .collect::<Vec<_>>();
            f.write_str(&params.join(", "))?;
            writeln!(f, ")")?;
            writeln!(f, "  when {}", e.guard)?;
            f.write_str("  then")?;
            match &e.update {
                Update::Assign(assigns) => write_assigns(f, assigns)?,
                Update::Any { binders, condition, assigns } => {
                    let bs = binders
                        .iter()
                        .map(|b| format!("{} : {}", b.name, b.domain))
                        .collect::<Vec<_>>();
                    write!(f, " any {} where {} then", bs.join(", "), condition)?;
                    write_assigns(f, assigns)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
