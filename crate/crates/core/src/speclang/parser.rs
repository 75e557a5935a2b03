//! Recursive-descent parser for machine sources and standalone expressions.

use super::ast::*;
use super::error::ParseError;
use super::lexer::{tokenize, Tok, Token};

/// Words that cannot name variables, parameters, binders or constants.
pub const RESERVED: &[&str] = &[
    "machine", "const", "var", "init", "event", "internal", "new", "when", "then", "any", "where",
    "max", "int", "nat", "bool", "seq", "bag", "and", "or", "not", "in", "if", "else", "true",
    "false", "skip",
];

pub fn parse(src: &str) -> Result<MachineAst, ParseError> {
    let mut p = Parser::new(src)?;
    let m = p.machine()?;
    p.expect_eof()?;
    Ok(m)
}

/// Parses a standalone expression such as a retrieve predicate or a variant.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        })
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if self.is_sym(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.error(&[&format!("`{kw}`")])
        }
    }

    fn expect_sym(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            self.error(&[&format!("`{sym}`")])
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            self.error(&["end of input"])
        }
    }

    /// A name that is not a reserved word.
    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.error(&[what]),
        }
    }

    fn int_lit(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat_sym("-");
        match self.peek() {
            Tok::Int(i) => {
                let i = *i;
                self.bump();
                Ok(if neg { -i } else { i })
            }
            _ => self.error(&["integer"]),
        }
    }

    fn machine(&mut self) -> Result<MachineAst, ParseError> {
        self.expect_kw("machine")?;
        let name = self.ident("machine name")?;
        let mut consts = Vec::new();
        while self.eat_kw("const") {
            let name = self.ident("constant name")?;
            self.expect_sym("=")?;
            let value = self.int_lit()?;
            consts.push(ConstDecl { name, value });
        }
        let mut vars = Vec::new();
        while self.is_kw("var") {
            self.bump();
            let name = self.ident("variable name")?;
            self.expect_sym(":")?;
            let domain = self.domain()?;
            vars.push(VarDecl { name, domain });
        }
        if vars.is_empty() {
            return self.error(&["`var`"]);
        }
        self.expect_kw("init")?;
        let init = self.expr()?;
        let mut events = Vec::new();
        while self.is_kw("event") {
            events.push(self.event()?);
        }
        Ok(MachineAst { name, consts, vars, init, events })
    }

    fn bound(&mut self) -> Result<Bound, ParseError> {
        match self.peek() {
            Tok::Int(_) | Tok::Sym("-") => Ok(Bound::Lit(self.int_lit()?)),
            _ => Ok(Bound::Const(self.ident("integer or constant name")?)),
        }
    }

    fn domain(&mut self) -> Result<DomainExpr, ParseError> {
        if self.eat_sym("(") {
            let d = self.domain()?;
            self.expect_sym(")")?;
            return Ok(d);
        }
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.error(&["domain"]);
        };
        match kw.as_str() {
            "bool" => {
                self.bump();
                Ok(DomainExpr::Bool)
            }
            "nat" => {
                self.bump();
                Ok(DomainExpr::Nat)
            }
            "int" => {
                self.bump();
                let starts_range =
                    matches!(self.peek(), Tok::Int(_) | Tok::Sym("-"))
                        || (matches!(self.peek(), Tok::Ident(_))
                            && matches!(self.peek_at(1), Tok::Sym("..")));
                if starts_range {
                    let lo = self.bound()?;
                    self.expect_sym("..")?;
                    let hi = self.bound()?;
                    Ok(DomainExpr::Int(Some((lo, hi))))
                } else {
                    Ok(DomainExpr::Int(None))
                }
            }
            "seq" | "bag" => {
                self.bump();
                let elem = Box::new(self.domain()?);
                let max = if self.eat_kw("max") { Some(self.bound()?) } else { None };
                Ok(if kw == "seq" { DomainExpr::Seq(elem, max) } else { DomainExpr::Bag(elem, max) })
            }
            _ => self.error(&["domain"]),
        }
    }

    fn event(&mut self) -> Result<EventDecl, ParseError> {
        self.expect_kw("event")?;
        // event names may coincide with keywords such as `in`
        let name = match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                s
            }
            _ => return self.error(&["event name"]),
        };
        let class = if self.eat_kw("internal") {
            EventClass::Internal
        } else if self.eat_kw("new") {
            EventClass::New
        } else {
            EventClass::External
        };
        self.expect_sym("(")?;
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        if !self.is_sym(")") {
            loop {
                match self.peek().clone() {
                    Tok::InName(n) => {
                        self.bump();
                        self.expect_sym(":")?;
                        inputs.push(Param { name: n, domain: self.domain()? });
                    }
                    Tok::OutName(n) => {
                        self.bump();
                        self.expect_sym(":")?;
                        outputs.push(Param { name: n, domain: self.domain()? });
                    }
                    _ => return self.error(&["`name?`", "`name!`"]),
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        self.expect_kw("when")?;
        let guard = self.expr()?;
        self.expect_kw("then")?;
        let update = if self.eat_kw("any") {
            let mut binders = Vec::new();
            loop {
                let name = self.ident("binder name")?;
                self.expect_sym(":")?;
                binders.push(VarDecl { name, domain: self.domain()? });
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_kw("where")?;
            let condition = self.expr()?;
            self.expect_kw("then")?;
            Update::Any { binders, condition, assigns: self.assigns()? }
        } else {
            Update::Assign(self.assigns()?)
        };
        Ok(EventDecl { name, class, inputs, outputs, guard, update })
    }

    fn assigns(&mut self) -> Result<Vec<Assign>, ParseError> {
        let mut out = Vec::new();
        loop {
            let target = self.ident("assignment target")?;
            self.expect_sym(":=")?;
            let value = self.expr()?;
            out.push(Assign { target, value });
            self.eat_sym(";");
            let more = matches!(self.peek(), Tok::Ident(s) if !RESERVED.contains(&s.as_str()))
                && matches!(self.peek_at(1), Tok::Sym(":="));
            if !more {
                break;
            }
        }
        Ok(out)
    }

    // -- expressions -------------------------------------------------------

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Expr, ParseError> {
        let l = self.or()?;
        if self.eat_sym("=>") {
            let r = self.implies()?;
            return Ok(Expr::binary(BinOp::Implies, l, r));
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<Expr, ParseError> {
        let mut l = self.and()?;
        while self.eat_kw("or") {
            let r = self.and()?;
            l = Expr::binary(BinOp::Or, l, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Expr, ParseError> {
        let mut l = self.not()?;
        while self.eat_kw("and") {
            let r = self.not()?;
            l = Expr::binary(BinOp::And, l, r);
        }
        Ok(l)
    }

    fn not(&mut self) -> Result<Expr, ParseError> {
        if self.eat_kw("not") {
            return Ok(Expr::Unary(UnOp::Not, Box::new(self.not()?)));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr, ParseError> {
        let l = self.additive()?;
        let op = match self.peek() {
            Tok::Sym("=") => BinOp::Eq,
            Tok::Sym("!=") => BinOp::Ne,
            Tok::Sym("<") => BinOp::Lt,
            Tok::Sym("<=") => BinOp::Le,
            Tok::Sym(">") => BinOp::Gt,
            Tok::Sym(">=") => BinOp::Ge,
            Tok::Ident(s) if s == "in" => BinOp::In,
            _ => return Ok(l),
        };
        self.bump();
        let r = self.additive()?;
        Ok(Expr::binary(op, l, r))
    }

    fn additive(&mut self) -> Result<Expr, ParseError> {
        let mut l = self.prefix()?;
        loop {
            let op = match self.peek() {
                Tok::Sym("++") => BinOp::Concat,
                Tok::Sym("\\/") => BinOp::Union,
                Tok::Sym("\\") | Tok::Sym("\\\\") => BinOp::Diff,
                Tok::Sym("+") => BinOp::Add,
                Tok::Sym("-") => BinOp::Sub,
                _ => return Ok(l),
            };
            self.bump();
            let r = self.prefix()?;
            l = Expr::binary(op, l, r);
        }
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        if self.is_sym("-") {
            if let Tok::Int(i) = self.peek_at(1) {
                let i = *i;
                self.bump();
                self.bump();
                return Ok(Expr::Int(-i));
            }
            self.bump();
            return Ok(Expr::Unary(UnOp::Neg, Box::new(self.prefix()?)));
        }
        if self.eat_sym("#") {
            return Ok(Expr::Unary(UnOp::Size, Box::new(self.prefix()?)));
        }
        self.primary()
    }

    fn list(&mut self, close: &str) -> Result<Vec<Expr>, ParseError> {
        let mut items = Vec::new();
        if self.eat_sym(close) {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(close)?;
        Ok(items)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(Expr::Int(i))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Sym("[") => {
                self.bump();
                Ok(Expr::SeqLit(self.list("]")?))
            }
            Tok::Sym("{|") => {
                self.bump();
                Ok(Expr::BagLit(self.list("|}")?))
            }
            Tok::InName(n) | Tok::OutName(n) => {
                self.bump();
                Ok(Expr::Var(n))
            }
            Tok::PrimedName(n) => {
                self.bump();
                Ok(Expr::Primed(n))
            }
            Tok::Ident(s) => match s.as_str() {
                "true" => {
                    self.bump();
                    Ok(Expr::Bool(true))
                }
                "false" => {
                    self.bump();
                    Ok(Expr::Bool(false))
                }
                "if" => {
                    self.bump();
                    let c = self.expr()?;
                    self.expect_kw("then")?;
                    let t = self.expr()?;
                    self.expect_kw("else")?;
                    let e = self.expr()?;
                    Ok(Expr::If(Box::new(c), Box::new(t), Box::new(e)))
                }
                name => {
                    if let Some(b) = Builtin::from_name(name) {
                        if matches!(self.peek_at(1), Tok::Sym("(")) {
                            self.bump();
                            self.bump();
                            let arg = self.expr()?;
                            self.expect_sym(")")?;
                            return Ok(Expr::Call(b, Box::new(arg)));
                        }
                    }
                    if RESERVED.contains(&name) {
                        return self.error(&["expression"]);
                    }
                    let n = name.to_string();
                    self.bump();
                    Ok(Expr::Var(n))
                }
            },
            _ => self.error(&["expression"]),
        }
    }
}
