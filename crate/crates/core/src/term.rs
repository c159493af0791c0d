//! Terms over `0, 1, ∨, ·, →` and named modal symbols, shared by equations
//! and by the Hilbert calculus.
//!
//! Concrete syntax: `|` for ∨, `*` for ·, `->` for →, constants `0`/`bot`
//! and `1`, `top` as sugar for `bot -> bot`, variables `v0, v1, …`, modal
//! application `m1(t)`. Precedence: modal > `*` > `|` > `->`; `*` and `|`
//! associate to the left, `->` to the right.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::modal::{FiniteIModalRirig, ModalSignature};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(u32),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Prod(Box<Term>, Box<Term>),
    Imp(Box<Term>, Box<Term>),
    Modal(String, Box<Term>),
}

impl Term {
    pub fn var(i: u32) -> Term {
        Term::Var(i)
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Term, b: Term) -> Term {
        Term::Prod(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Box::new(a), Box::new(b))
    }

    pub fn modal(name: impl Into<String>, a: Term) -> Term {
        Term::Modal(name.into(), Box::new(a))
    }

    /// `⊤ = ⊥ → ⊥`.
    pub fn top() -> Term {
        Term::imp(Term::Zero, Term::Zero)
    }

    /// `(a → b)·(b → a)`.
    pub fn star(a: Term, b: Term) -> Term {
        Term::prod(Term::imp(a.clone(), b.clone()), Term::imp(b, a))
    }

    /// Left-nested product of `items`; the empty product is `1`.
    pub fn product_of(items: impl IntoIterator<Item = Term>) -> Term {
        items.into_iter().reduce(Term::prod).unwrap_or(Term::One)
    }

    pub fn parse(text: &str) -> Result<Term> {
        let mut p = Parser::new(text)?;
        let t = p.imp()?;
        p.expect_end()?;
        Ok(t)
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::Zero | Term::One => {}
            Term::Join(a, b) | Term::Prod(a, b) | Term::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Modal(_, a) => a.collect_vars(out),
        }
    }

    pub fn modal_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_modals(&mut out);
        out
    }

    fn collect_modals(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(_) | Term::Zero | Term::One => {}
            Term::Join(a, b) | Term::Prod(a, b) | Term::Imp(a, b) => {
                a.collect_modals(out);
                b.collect_modals(out);
            }
            Term::Modal(m, a) => {
                out.insert(m.clone());
                a.collect_modals(out);
            }
        }
    }

    /// Replaces every variable `vi` by `subst(i)`.
    pub fn substitute(&self, subst: &impl Fn(u32) -> Term) -> Term {
        match self {
            Term::Var(i) => subst(*i),
            Term::Zero => Term::Zero,
            Term::One => Term::One,
            Term::Join(a, b) => Term::join(a.substitute(subst), b.substitute(subst)),
            Term::Prod(a, b) => Term::prod(a.substitute(subst), b.substitute(subst)),
            Term::Imp(a, b) => Term::imp(a.substitute(subst), b.substitute(subst)),
            Term::Modal(m, a) => Term::modal(m.clone(), a.substitute(subst)),
        }
    }

    pub fn compile(&self, sig: &ModalSignature) -> Result<CompiledTerm> {
        let mut ops = Vec::new();
        self.emit(sig, &mut ops)?;
        let arity = self.vars().last().map_or(0, |v| *v as usize + 1);
        Ok(CompiledTerm { ops, arity })
    }

    fn emit(&self, sig: &ModalSignature, ops: &mut Vec<Op>) -> Result<()> {
        match self {
            Term::Var(i) => ops.push(Op::Var(*i as usize)),
            Term::Zero => ops.push(Op::Zero),
            Term::One => ops.push(Op::One),
            Term::Join(a, b) | Term::Prod(a, b) | Term::Imp(a, b) => {
                a.emit(sig, ops)?;
                b.emit(sig, ops)?;
                ops.push(match self {
                    Term::Join(..) => Op::Join,
                    Term::Prod(..) => Op::Prod,
                    _ => Op::Imp,
                });
            }
            Term::Modal(m, a) => {
                a.emit(sig, ops)?;
                let j = sig.index_of(m).ok_or_else(|| Error::UnknownModal(m.clone()))?;
                ops.push(Op::Modal(j));
            }
        }
        Ok(())
    }

    /// Evaluates with `valuation[i]` as the value of `vi`.
    pub fn eval(&self, a: &FiniteIModalRirig, valuation: &[Elem]) -> Result<Elem> {
        self.compile(a.signature())?.eval(a, valuation)
    }

    /// Uniformly shaped random term of at most `depth` connectives over
    /// `vars` variables and the modal names in `sig`.
    pub fn random(rng: &mut impl Rng, depth: usize, vars: u32, sig: &ModalSignature) -> Term {
        if depth == 0 || rng.gen_bool(0.25) {
            return match rng.gen_range(0..8) {
                0 => Term::Zero,
                1 => Term::One,
                _ => Term::Var(rng.gen_range(0..vars.max(1))),
            };
        }
        let choices = if sig.is_empty() { 3 } else { 4 };
        match rng.gen_range(0..choices) {
            0 => Term::join(Term::random(rng, depth - 1, vars, sig), Term::random(rng, depth - 1, vars, sig)),
            1 => Term::prod(Term::random(rng, depth - 1, vars, sig), Term::random(rng, depth - 1, vars, sig)),
            2 => Term::imp(Term::random(rng, depth - 1, vars, sig), Term::random(rng, depth - 1, vars, sig)),
            _ => {
                let j = rng.gen_range(0..sig.len());
                Term::modal(sig.names()[j].clone(), Term::random(rng, depth - 1, vars, sig))
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Imp(..) => 0,
            Term::Join(..) => 1,
            Term::Prod(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
            if t.precedence() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        }
        match self {
            Term::Var(i) => write!(f, "v{i}"),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Modal(m, a) => write!(f, "{m}({a})"),
            Term::Join(a, b) => {
                side(f, a, 1)?;
                f.write_str(" | ")?;
                side(f, b, 2)
            }
            Term::Prod(a, b) => {
                side(f, a, 2)?;
                f.write_str(" * ")?;
                side(f, b, 3)
            }
            Term::Imp(a, b) => {
                side(f, a, 1)?;
                f.write_str(" -> ")?;
                side(f, b, 0)
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for Term {
    type Err = Error;
    fn from_str(s: &str) -> Result<Term> {
        Term::parse(s)
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(usize),
    Zero,
    One,
    Join,
    Prod,
    Imp,
    Modal(usize),
}

/// A term in postfix form with modal names resolved, for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledTerm {
    ops: Vec<Op>,
    arity: usize,
}

impl CompiledTerm {
    /// One more than the largest variable index.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, a: &FiniteIModalRirig, valuation: &[Elem]) -> Result<Elem> {
        if valuation.len() < self.arity {
            let missing = self
                .ops
                .iter()
                .find_map(|op| match op {
                    Op::Var(i) if *i >= valuation.len() => Some(*i as u32),
                    _ => None,
                })
                .unwrap_or(self.arity as u32 - 1);
            return Err(Error::UnboundVariable(missing));
        }
        Ok(self.eval_unchecked(a, valuation))
    }

    /// Evaluation assuming `valuation` covers every variable.
    pub fn eval_unchecked(&self, a: &FiniteIModalRirig, valuation: &[Elem]) -> Elem {
        let mut stack: Vec<Elem> = Vec::with_capacity(8);
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => valuation[i],
                Op::Zero => a.zero(),
                Op::One => a.one(),
                Op::Modal(j) => {
                    let x = stack.pop().unwrap();
                    a.modal(j, x)
                }
                Op::Join | Op::Prod | Op::Imp => {
                    let y = stack.pop().unwrap();
                    let x = stack.pop().unwrap();
                    match op {
                        Op::Join => a.join(x, y),
                        Op::Prod => a.prod(x, y),
                        _ => a.imp(x, y),
                    }
                }
            };
            stack.push(v);
        }
        stack.pop().expect("nonempty program")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Bar,
    Star,
    Arrow,
    Eq,
    Leq,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    len: usize,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column: column + 1,
        message: message.into(),
    }
}

fn is_var_name(s: &str) -> Option<u32> {
    let digits = s.strip_prefix('v')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            let tok = match c {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    i += 1;
                    continue;
                }
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'|' => Tok::Bar,
                b'*' => Tok::Star,
                b'=' => Tok::Eq,
                b'-' if bytes.get(i + 1) == Some(&b'>') => {
                    i += 1;
                    Tok::Arrow
                }
                b'<' if bytes.get(i + 1) == Some(&b'=') => {
                    i += 1;
                    Tok::Leq
                }
                b'0'..=b'9' => {
                    while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                    let n = text[start..=i].parse().map_err(|_| syntax(start, "number too large"))?;
                    Tok::Num(n)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                        i += 1;
                    }
                    Tok::Ident(text[start..=i].to_string())
                }
                _ => {
                    let ch = text[start..].chars().next().unwrap();
                    return Err(syntax(start, format!("unexpected character '{ch}'")));
                }
            };
            toks.push((tok, start));
            i += 1;
        }
        Ok(Parser {
            toks,
            pos: 0,
            len: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(_, c)| *c)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(syntax(self.column(), format!("unexpected {t:?} after complete term"))),
        }
    }

    fn imp(&mut self) -> Result<Term> {
        let lhs = self.join()?;
        if self.eat(&Tok::Arrow) {
            Ok(Term::imp(lhs, self.imp()?))
        } else {
            Ok(lhs)
        }
    }

    fn join(&mut self) -> Result<Term> {
        let mut t = self.prod()?;
        while self.eat(&Tok::Bar) {
            t = Term::join(t, self.prod()?);
        }
        Ok(t)
    }

    fn prod(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.eat(&Tok::Star) {
            t = Term::prod(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        let col = self.column();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(col, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::LParen => {
                let t = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return Err(syntax(self.column(), "expected ')'"));
                }
                Ok(t)
            }
            Tok::Num(0) => Ok(Term::Zero),
            Tok::Num(1) => Ok(Term::One),
            Tok::Num(n) => Err(syntax(col, format!("only 0 and 1 are constants, found {n}"))),
            Tok::Ident(name) => match name.as_str() {
                "bot" => Ok(Term::Zero),
                "top" => Ok(Term::top()),
                _ => {
                    if let Some(i) = is_var_name(&name) {
                        return Ok(Term::Var(i));
                    }
                    if !self.eat(&Tok::LParen) {
                        return Err(syntax(col, format!("'{name}' is not a variable (use v0, v1, ...) and is not applied")));
                    }
                    let t = self.imp()?;
                    if !self.eat(&Tok::RParen) {
                        return Err(syntax(self.column(), "expected ')'"));
                    }
                    Ok(Term::modal(name, t))
                }
            },
            other => Err(syntax(col, format!("unexpected {other:?}"))),
        }
    }
}

/// `lhs ≈ rhs`. Written `lhs = rhs`; `lhs <= rhs` abbreviates
/// `lhs | rhs = rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn leq(lhs: Term, rhs: Term) -> Self {
        Equation {
            lhs: Term::join(lhs, rhs.clone()),
            rhs,
        }
    }

    pub fn parse(text: &str) -> Result<Equation> {
        let mut p = Parser::new(text)?;
        let lhs = p.imp()?;
        let col = p.column();
        let leq = if p.eat(&Tok::Eq) {
            false
        } else if p.eat(&Tok::Leq) {
            true
        } else {
            return Err(syntax(col, "expected '=' or '<='"));
        };
        let rhs = p.imp()?;
        p.expect_end()?;
        Ok(if leq { Equation::leq(lhs, rhs) } else { Equation::new(lhs, rhs) })
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn modal_names(&self) -> BTreeSet<String> {
        let mut v = self.lhs.modal_names();
        v.extend(self.rhs.modal_names());
        v
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Equation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
