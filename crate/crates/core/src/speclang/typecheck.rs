//! Static checks: name resolution, typing, finiteness of domains, and the
//! single-assignment rule for updates.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use super::ast::*;
use super::error::TypeError;
use super::parser::RESERVED;
use super::value::Domain;

/// Expression type. `Any` is the element type of an empty literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ty {
    Bool,
    Int,
    Seq(Box<Ty>),
    Bag(Box<Ty>),
    Any,
}

impl Ty {
    fn unify(&self, other: &Ty) -> Option<Ty> {
        match (self, other) {
            (Ty::Any, t) | (t, Ty::Any) => Some(t.clone()),
            (Ty::Bool, Ty::Bool) => Some(Ty::Bool),
            (Ty::Int, Ty::Int) => Some(Ty::Int),
            (Ty::Seq(a), Ty::Seq(b)) => a.unify(b).map(|t| Ty::Seq(Box::new(t))),
            (Ty::Bag(a), Ty::Bag(b)) => a.unify(b).map(|t| Ty::Bag(Box::new(t))),
            _ => None,
        }
    }

    pub fn of_domain(d: &Domain) -> Ty {
        match d {
            Domain::Bool => Ty::Bool,
            Domain::Int { .. } => Ty::Int,
            Domain::Seq { elem, .. } => Ty::Seq(Box::new(Ty::of_domain(elem))),
            Domain::Bag { elem, .. } => Ty::Bag(Box::new(Ty::of_domain(elem))),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Bool => f.write_str("bool"),
            Ty::Int => f.write_str("int"),
            Ty::Seq(t) => write!(f, "seq {t}"),
            Ty::Bag(t) => write!(f, "bag {t}"),
            Ty::Any => f.write_str("_"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NameKind {
    Const,
    Var,
    Param,
    Binder,
    Ambiguous,
}

/// Names visible to an expression, with their types.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    names: HashMap<String, (Ty, NameKind)>,
    primed: HashMap<String, Ty>,
}

impl Scope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_const(mut self, name: &str) -> Self {
        self.names.insert(name.to_string(), (Ty::Int, NameKind::Const));
        self
    }

    pub fn with_var(mut self, name: &str, ty: Ty) -> Self {
        self.names.insert(name.to_string(), (ty, NameKind::Var));
        self
    }

    /// Adds a name that must not be referenced (it exists on both sides of a
    /// linking predicate).
    pub fn with_ambiguous(mut self, name: &str) -> Self {
        self.names.insert(name.to_string(), (Ty::Any, NameKind::Ambiguous));
        self
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains_key(name)
    }
}

/// Infers the type of `e` in `scope` and requires it to unify with `expected`.
pub fn check_expr(e: &Expr, scope: &Scope, expected: &Ty, context: &str) -> Result<Ty, TypeError> {
    let t = type_of(e, scope, context)?;
    t.unify(expected).ok_or_else(|| TypeError::Mismatch {
        context: context.to_string(),
        expected: expected.to_string(),
        found: t.to_string(),
    })
}

fn mismatch(context: &str, expected: &str, found: &Ty) -> TypeError {
    TypeError::Mismatch {
        context: context.to_string(),
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn elem_of_collection<'a>(t: &'a Ty, context: &str, what: &str) -> Result<&'a Ty, TypeError> {
    match t {
        Ty::Seq(e) | Ty::Bag(e) => Ok(e),
        other => Err(mismatch(context, what, other)),
    }
}

fn type_of(e: &Expr, scope: &Scope, ctx: &str) -> Result<Ty, TypeError> {
    let same = |a: &Ty, b: &Ty| {
        a.unify(b).ok_or_else(|| mismatch(ctx, &a.to_string(), b))
    };
    Ok(match e {
        Expr::Bool(_) => Ty::Bool,
        Expr::Int(_) => Ty::Int,
        Expr::Var(n) => match scope.names.get(n) {
            Some((_, NameKind::Ambiguous)) => {
                return Err(TypeError::Ambiguous { context: ctx.into(), name: n.clone() })
            }
            Some((t, _)) => t.clone(),
            None => return Err(TypeError::UnknownName { context: ctx.into(), name: n.clone() }),
        },
        Expr::Primed(n) => match scope.primed.get(n) {
            Some(t) => t.clone(),
            None if matches!(scope.names.get(n), Some((_, NameKind::Var))) => {
                return Err(TypeError::PrimedOutsideUpdate { context: ctx.into(), name: n.clone() })
            }
            None => return Err(TypeError::UnknownName { context: ctx.into(), name: format!("{n}'") }),
        },
        Expr::SeqLit(items) | Expr::BagLit(items) => {
            let mut t = Ty::Any;
            for it in items {
                let it = type_of(it, scope, ctx)?;
                t = same(&t, &it)?;
            }
            if matches!(e, Expr::SeqLit(_)) {
                Ty::Seq(Box::new(t))
            } else {
                Ty::Bag(Box::new(t))
            }
        }
        Expr::Unary(op, a) => {
            let t = type_of(a, scope, ctx)?;
            match op {
                UnOp::Not => {
                    same(&Ty::Bool, &t)?;
                    Ty::Bool
                }
                UnOp::Neg => {
                    same(&Ty::Int, &t)?;
                    Ty::Int
                }
                UnOp::Size => {
                    elem_of_collection(&t, ctx, "seq or bag")?;
                    Ty::Int
                }
            }
        }
        Expr::Binary(op, l, r) => {
            let lt = type_of(l, scope, ctx)?;
            let rt = type_of(r, scope, ctx)?;
            match op {
                BinOp::Implies | BinOp::Or | BinOp::And => {
                    same(&Ty::Bool, &lt)?;
                    same(&Ty::Bool, &rt)?;
                    Ty::Bool
                }
                BinOp::Eq | BinOp::Ne => {
                    same(&lt, &rt)?;
                    Ty::Bool
                }
                BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                    same(&Ty::Int, &lt)?;
                    same(&Ty::Int, &rt)?;
                    Ty::Bool
                }
                BinOp::Add | BinOp::Sub => {
                    same(&Ty::Int, &lt)?;
                    same(&Ty::Int, &rt)?;
                    Ty::Int
                }
                BinOp::In => {
                    let elem = elem_of_collection(&rt, ctx, "seq or bag")?;
                    same(elem, &lt)?;
                    Ty::Bool
                }
                BinOp::Concat => {
                    let t = same(&lt, &rt)?;
                    if !matches!(t, Ty::Seq(_)) {
                        return Err(mismatch(ctx, "seq", &t));
                    }
                    t
                }
                BinOp::Union | BinOp::Diff => {
                    let t = same(&lt, &rt)?;
                    if !matches!(t, Ty::Bag(_)) {
                        return Err(mismatch(ctx, "bag", &t));
                    }
                    t
                }
            }
        }
        Expr::Call(b, a) => {
            let t = type_of(a, scope, ctx)?;
            match b {
                Builtin::Sorted => match &t {
                    Ty::Seq(_) => Ty::Bool,
                    other => return Err(mismatch(&format!("{ctx}: sorted"), "seq", other)),
                },
                Builtin::Min => elem_of_collection(&t, &format!("{ctx}: min"), "bag or seq")?.clone(),
                Builtin::Items => match t {
                    Ty::Seq(e) => Ty::Bag(e),
                    other => return Err(mismatch(&format!("{ctx}: items"), "seq", &other)),
                },
                Builtin::Head => match t {
                    Ty::Seq(e) => *e,
                    other => return Err(mismatch(&format!("{ctx}: head"), "seq", &other)),
                },
                Builtin::Tail => match t {
                    Ty::Seq(e) => Ty::Seq(e),
                    other => return Err(mismatch(&format!("{ctx}: tail"), "seq", &other)),
                },
            }
        }
        Expr::If(c, t, f) => {
            let ct = type_of(c, scope, ctx)?;
            same(&Ty::Bool, &ct)?;
            let tt = type_of(t, scope, ctx)?;
            let ft = type_of(f, scope, ctx)?;
            same(&tt, &ft)?
        }
    })
}

/// A machine that passed all static checks.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedMachine {
    pub ast: MachineAst,
    pub var_types: Vec<Ty>,
}

impl TypedMachine {
    pub fn name(&self) -> &str {
        &self.ast.name
    }

    /// Declared constant values with `overrides` applied to names that exist.
    pub fn constants(&self, overrides: &BTreeMap<String, i64>) -> BTreeMap<String, i64> {
        self.ast
            .consts
            .iter()
            .map(|c| (c.name.clone(), overrides.get(&c.name).copied().unwrap_or(c.value)))
            .collect()
    }

    /// Scope with the machine's constants and state variables.
    pub fn state_scope(&self) -> Scope {
        let mut s = Scope::new();
        for c in &self.ast.consts {
            s = s.with_const(&c.name);
        }
        for (v, t) in self.ast.vars.iter().zip(&self.var_types) {
            s = s.with_var(&v.name, t.clone());
        }
        s
    }
}

/// Resolves a domain against constant values.
pub fn resolve_domain(d: &DomainExpr, consts: &BTreeMap<String, i64>) -> Option<Domain> {
    let bound = |b: &Bound| match b {
        Bound::Lit(i) => Some(*i),
        Bound::Const(c) => consts.get(c).copied(),
    };
    Some(match d {
        DomainExpr::Bool => Domain::Bool,
        DomainExpr::Int(Some((lo, hi))) => Domain::Int { lo: bound(lo)?, hi: bound(hi)? },
        DomainExpr::Seq(e, Some(m)) => Domain::Seq {
            elem: Box::new(resolve_domain(e, consts)?),
            max: usize::try_from(bound(m)?).ok()?,
        },
        DomainExpr::Bag(e, Some(m)) => Domain::Bag {
            elem: Box::new(resolve_domain(e, consts)?),
            max: usize::try_from(bound(m)?).ok()?,
        },
        DomainExpr::Int(None) | DomainExpr::Nat | DomainExpr::Seq(_, None) | DomainExpr::Bag(_, None) => {
            return None
        }
    })
}

fn domain_ty(
    d: &DomainExpr,
    consts: &HashSet<&str>,
    context: &str,
    name: &str,
) -> Result<Ty, TypeError> {
    let unbounded = || TypeError::UnboundedDomain {
        context: context.to_string(),
        name: name.to_string(),
        domain: d.to_string(),
    };
    let check_bound = |b: &Bound| match b {
        Bound::Const(c) if !consts.contains(c.as_str()) => Err(TypeError::UnknownName {
            context: context.to_string(),
            name: c.clone(),
        }),
        _ => Ok(()),
    };
    Ok(match d {
        DomainExpr::Bool => Ty::Bool,
        DomainExpr::Nat | DomainExpr::Int(None) => return Err(unbounded()),
        DomainExpr::Int(Some((lo, hi))) => {
            check_bound(lo)?;
            check_bound(hi)?;
            Ty::Int
        }
        DomainExpr::Seq(_, None) | DomainExpr::Bag(_, None) => return Err(unbounded()),
        DomainExpr::Seq(e, Some(m)) => {
            check_bound(m)?;
            Ty::Seq(Box::new(domain_ty(e, consts, context, name)?))
        }
        DomainExpr::Bag(e, Some(m)) => {
            check_bound(m)?;
            Ty::Bag(Box::new(domain_ty(e, consts, context, name)?))
        }
    })
}

fn check_name(seen: &mut HashSet<String>, name: &str, context: &str) -> Result<(), TypeError> {
    if RESERVED.contains(&name) {
        return Err(TypeError::Reserved { context: context.into(), name: name.into() });
    }
    if !seen.insert(name.to_string()) {
        return Err(TypeError::Duplicate { context: context.into(), name: name.into() });
    }
    Ok(())
}

pub fn typecheck(ast: &MachineAst) -> Result<TypedMachine, TypeError> {
    let mctx = format!("machine {}", ast.name);
    let mut global = HashSet::new();
    for c in &ast.consts {
        check_name(&mut global, &c.name, &mctx)?;
    }
    let const_names: HashSet<&str> = ast.consts.iter().map(|c| c.name.as_str()).collect();

    let mut scope = Scope::new();
    for c in &ast.consts {
        scope = scope.with_const(&c.name);
    }
    let mut var_types = Vec::new();
    for v in &ast.vars {
        check_name(&mut global, &v.name, &mctx)?;
        let t = domain_ty(&v.domain, &const_names, &mctx, &v.name)?;
        scope = scope.with_var(&v.name, t.clone());
        var_types.push(t);
    }
    check_expr(&ast.init, &scope, &Ty::Bool, &format!("{mctx}: init"))?;

    let mut event_names = HashSet::new();
    for ev in &ast.events {
        let ctx = format!("{mctx}: event {}", ev.name);
        if ev.name == "skip" {
            return Err(TypeError::Reserved { context: ctx, name: ev.name.clone() });
        }
        if !event_names.insert(ev.name.as_str()) {
            return Err(TypeError::Duplicate { context: mctx.clone(), name: ev.name.clone() });
        }
        let mut local = global.clone();
        let mut escope = scope.clone();
        for p in ev.inputs.iter().chain(&ev.outputs) {
            check_name(&mut local, &p.name, &ctx)?;
            let t = domain_ty(&p.domain, &const_names, &ctx, &p.name)?;
            escope.names.insert(p.name.clone(), (t, NameKind::Param));
        }
        check_expr(&ev.guard, &escope, &Ty::Bool, &format!("{ctx}: guard"))?;

        let mut uscope = escope.clone();
        if let Update::Any { binders, .. } = &ev.update {
            for b in binders {
                check_name(&mut local, &b.name, &ctx)?;
                let t = domain_ty(&b.domain, &const_names, &ctx, &b.name)?;
                uscope.names.insert(b.name.clone(), (t, NameKind::Binder));
            }
        }
        let mut assigned = HashSet::new();
        for a in ev.update.assigns() {
            let actx = format!("{ctx}: {} :=", a.target);
            let vt = match scope.names.get(&a.target) {
                Some((t, NameKind::Var)) => t.clone(),
                _ => return Err(TypeError::NotAssignable { context: ctx, name: a.target.clone() }),
            };
            if !assigned.insert(a.target.as_str()) {
                return Err(TypeError::DoubleAssign { context: ctx, name: a.target.clone() });
            }
            check_expr(&a.value, &uscope, &vt, &actx)?;
        }
        if let Update::Any { condition, .. } = &ev.update {
            let mut wscope = uscope.clone();
            for (v, t) in ast.vars.iter().zip(&var_types) {
                wscope.primed.insert(v.name.clone(), t.clone());
            }
            check_expr(condition, &wscope, &Ty::Bool, &format!("{ctx}: where"))?;
        }
    }
    Ok(TypedMachine { ast: ast.clone(), var_types })
}

/// One row of the signature table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSignature {
    pub name: String,
    pub inputs: Vec<(String, DomainExpr)>,
    pub outputs: Vec<(String, DomainExpr)>,
    pub class: EventClass,
}

impl fmt::Display for EventSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |ps: &[(String, DomainExpr)], deco: char| {
            if ps.is_empty() {
                "-".to_string()
            } else {
                ps.iter().map(|(n, d)| format!("{n}{deco}:{d}")).collect::<Vec<_>>().join(", ")
            }
        };
        write!(f, "({}, {}, {}, {})", self.name, side(&self.inputs, '?'), side(&self.outputs, '!'), self.class)
    }
}

pub fn list_event_signatures(m: &TypedMachine) -> Vec<EventSignature> {
    m.ast
        .events
        .iter()
        .map(|e| EventSignature {
            name: e.name.clone(),
            inputs: e.inputs.iter().map(|p| (p.name.clone(), p.domain.clone())).collect(),
            outputs: e.outputs.iter().map(|p| (p.name.clone(), p.domain.clone())).collect(),
            class: e.class,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speclang::parser::parse;

    fn tc(src: &str) -> Result<TypedMachine, TypeError> {
        typecheck(&parse(src).unwrap())
    }

    #[test]
    fn sorted_on_bag_is_rejected() {
        let err = tc("machine M var b : bag int 0..2 max 2 init b = {||}\n\
                      event e () when sorted(b) then b := b")
        .unwrap_err();
        assert!(matches!(err, TypeError::Mismatch { ref expected, .. } if expected == "seq"), "{err}");
    }

    #[test]
    fn unbounded_nat_is_rejected() {
        let err = tc("machine M var n : nat init n = 0").unwrap_err();
        assert!(matches!(err, TypeError::UnboundedDomain { .. }), "{err}");
        let err = tc("machine M var s : seq int 0..1 init s = []").unwrap_err();
        assert!(matches!(err, TypeError::UnboundedDomain { .. }), "{err}");
    }

    #[test]
    fn primed_outside_update() {
        let err = tc("machine M var x : int 0..1 init x' = 0").unwrap_err();
        assert!(matches!(err, TypeError::PrimedOutsideUpdate { .. }), "{err}");
        let err = tc("machine M var x : int 0..1 init x = 0\n\
                       event e () when x' = 1 then x := 1")
        .unwrap_err();
        assert!(matches!(err, TypeError::PrimedOutsideUpdate { .. }), "{err}");
    }

    #[test]
    fn primed_allowed_in_any_condition() {
        tc("machine M var x : int 0..1 init x = 0\n\
            event e () when true then any t : int 0..1 where x' != x then x := t")
        .unwrap();
    }

    #[test]
    fn double_assignment() {
        let err = tc("machine M var x : int 0..1 init x = 0\n\
                      event e () when true then x := 0 x := 1")
        .unwrap_err();
        assert!(matches!(err, TypeError::DoubleAssign { .. }), "{err}");
    }

    #[test]
    fn unknown_and_duplicate_names() {
        assert!(matches!(
            tc("machine M var x : int 0..1 init y = 0").unwrap_err(),
            TypeError::UnknownName { .. }
        ));
        assert!(matches!(
            tc("machine M var x : int 0..1 var x : bool init true").unwrap_err(),
            TypeError::Duplicate { .. }
        ));
        assert!(matches!(
            tc("machine M var x : int 0..K init true").unwrap_err(),
            TypeError::UnknownName { .. }
        ));
    }

    #[test]
    fn empty_literals_unify() {
        tc("machine M var s : seq int 0..1 max 2 init s = [] and items(s) = {||}").unwrap();
    }
}
