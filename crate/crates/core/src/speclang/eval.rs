use std::collections::HashMap;

use super::ast::*;
use super::error::EvalError;
use super::value::Value;

/// A valuation of free names (constants, variables, parameters, binders) and
/// of primed variables.
#[derive(Debug, Clone, Default)]
pub struct Env {
    names: HashMap<String, Value>,
    primed: HashMap<String, Value>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, v: Value) -> &mut Self {
        self.names.insert(name.into(), v);
        self
    }

    pub fn bind_primed(&mut self, name: impl Into<String>, v: Value) -> &mut Self {
        self.primed.insert(name.into(), v);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.names.get(name)
    }
}

fn int(v: Value, op: &'static str) -> Result<i64, EvalError> {
    v.as_int().ok_or(EvalError::IllTyped(op))
}

fn boolean(v: Value, op: &'static str) -> Result<bool, EvalError> {
    v.as_bool().ok_or(EvalError::IllTyped(op))
}

fn elems(v: Value, op: &'static str) -> Result<Vec<Value>, EvalError> {
    match v {
        Value::Seq(x) | Value::Bag(x) => Ok(x),
        _ => Err(EvalError::IllTyped(op)),
    }
}

fn seq(v: Value, op: &'static str) -> Result<Vec<Value>, EvalError> {
    match v {
        Value::Seq(x) => Ok(x),
        _ => Err(EvalError::IllTyped(op)),
    }
}

fn bag(v: Value, op: &'static str) -> Result<Vec<Value>, EvalError> {
    match v {
        Value::Bag(x) => Ok(x),
        _ => Err(EvalError::IllTyped(op)),
    }
}

/// Evaluates a well-typed expression.
pub fn eval(e: &Expr, env: &Env) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Bool(b) => Value::Bool(*b),
        Expr::Int(i) => Value::Int(*i),
        Expr::Var(n) => env.names.get(n).cloned().ok_or_else(|| EvalError::Unbound(n.clone()))?,
        Expr::Primed(n) => env
            .primed
            .get(n)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(format!("{n}'")))?,
        Expr::SeqLit(items) => Value::Seq(items.iter().map(|x| eval(x, env)).collect::<Result<_, _>>()?),
        Expr::BagLit(items) => Value::bag(items.iter().map(|x| eval(x, env)).collect::<Result<_, _>>()?),
        Expr::Unary(op, a) => {
            let v = eval(a, env)?;
            match op {
                UnOp::Not => Value::Bool(!boolean(v, "not")?),
                UnOp::Neg => Value::Int(int(v, "-")?.checked_neg().ok_or(EvalError::Overflow)?),
                UnOp::Size => Value::Int(elems(v, "#")?.len() as i64),
            }
        }
        Expr::Binary(op, l, r) => {
            // short-circuit so guards can protect partial functions
            match op {
                BinOp::And => {
                    return Ok(Value::Bool(boolean(eval(l, env)?, "and")? && boolean(eval(r, env)?, "and")?))
                }
                BinOp::Or => {
                    return Ok(Value::Bool(boolean(eval(l, env)?, "or")? || boolean(eval(r, env)?, "or")?))
                }
                BinOp::Implies => {
                    return Ok(Value::Bool(!boolean(eval(l, env)?, "=>")? || boolean(eval(r, env)?, "=>")?))
                }
                _ => {}
            }
            let lv = eval(l, env)?;
            let rv = eval(r, env)?;
            match op {
                BinOp::Eq => Value::Bool(lv == rv),
                BinOp::Ne => Value::Bool(lv != rv),
                BinOp::Lt => Value::Bool(int(lv, "<")? < int(rv, "<")?),
                BinOp::Le => Value::Bool(int(lv, "<=")? <= int(rv, "<=")?),
                BinOp::Gt => Value::Bool(int(lv, ">")? > int(rv, ">")?),
                BinOp::Ge => Value::Bool(int(lv, ">=")? >= int(rv, ">=")?),
                BinOp::Add => Value::Int(int(lv, "+")?.checked_add(int(rv, "+")?).ok_or(EvalError::Overflow)?),
                BinOp::Sub => Value::Int(int(lv, "-")?.checked_sub(int(rv, "-")?).ok_or(EvalError::Overflow)?),
                BinOp::In => Value::Bool(elems(rv, "in")?.contains(&lv)),
                BinOp::Concat => {
                    let mut a = seq(lv, "++")?;
                    a.extend(seq(rv, "++")?);
                    Value::Seq(a)
                }
                BinOp::Union => {
                    let mut a = bag(lv, "\\/")?;
                    a.extend(bag(rv, "\\/")?);
                    Value::bag(a)
                }
                BinOp::Diff => {
                    let mut a = bag(lv, "\\")?;
                    for x in bag(rv, "\\")? {
                        if let Some(i) = a.iter().position(|y| *y == x) {
                            a.remove(i);
                        }
                    }
                    Value::Bag(a)
                }
                BinOp::And | BinOp::Or | BinOp::Implies => unreachable!(),
            }
        }
        Expr::Call(b, a) => {
            let v = eval(a, env)?;
            match b {
                Builtin::Sorted => {
                    let s = seq(v, "sorted")?;
                    Value::Bool(s.windows(2).all(|w| w[0] <= w[1]))
                }
                Builtin::Min => elems(v, "min")?
                    .into_iter()
                    .min()
                    .ok_or(EvalError::EmptyCollection { op: "min" })?,
                Builtin::Items => Value::bag(seq(v, "items")?),
                Builtin::Head => seq(v, "head")?
                    .into_iter()
                    .next()
                    .ok_or(EvalError::EmptyCollection { op: "head" })?,
                Builtin::Tail => {
                    let mut s = seq(v, "tail")?;
                    if s.is_empty() {
                        return Err(EvalError::EmptyCollection { op: "tail" });
                    }
                    s.remove(0);
                    Value::Seq(s)
                }
            }
        }
        Expr::If(c, t, f) => {
            if boolean(eval(c, env)?, "if")? {
                eval(t, env)?
            } else {
                eval(f, env)?
            }
        }
    })
}
