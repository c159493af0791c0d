//! Proof files, the proof checker, and a builder for writing proofs in code.
//!
//! File format, one step per line:
//!
//! ```text
//! assume: v0
//! 1. v0 ; hyp
//! 2. m1(v0) ; nec:m1 1
//! ```
//!
//! Justifications: `hyp`, `ax1`..`ax10`, `ax11:<m>`, `ax12:<m>`,
//! `mp <i> <j>` (line `i` is `line j -> this`), `nec:<m> <i>` and
//! `vel <i> <j>` (from `φ -> χ` and `ψ -> χ` infer `φ | ψ -> χ`). Blank
//! lines and lines starting with `#` are ignored.

use std::fmt;

use serde::Serialize;

use super::schema::{match_schema, AxiomId};
use crate::error::{Error, Result};
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Hyp,
    Axiom(AxiomId),
    Mp(usize, usize),
    Nec(String, usize),
    Vel(usize, usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Hyp => f.write_str("hyp"),
            Justification::Axiom(id) => write!(f, "{id}"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::Nec(m, i) => write!(f, "nec:{m} {i}"),
            Justification::Vel(i, j) => write!(f, "vel {i} {j}"),
        }
    }
}

impl Serialize for Justification {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofLine {
    pub formula: Term,
    pub justification: Justification,
}

/// Lines are numbered from 1 in files and in citations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Proof {
    pub hypotheses: Vec<Term>,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Term> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn parse(text: &str) -> Result<Proof> {
        let mut proof = Proof::default();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |column: usize, message: String| Error::Parse {
                line: lineno,
                column,
                message,
            };
            let offset = raw.len() - raw.trim_start().len();
            if let Some(rest) = line.strip_prefix("assume:") {
                let col = offset + "assume:".len();
                let f = Term::parse(rest).map_err(|e| shift(e, lineno, col))?;
                proof.hypotheses.push(f);
                continue;
            }
            let (idx, rest) = line
                .split_once('.')
                .ok_or_else(|| at(offset + 1, "expected `<index>. <formula> ; <justification>`".into()))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| at(offset + 1, format!("bad line index `{}`", idx.trim())))?;
            if idx != proof.lines.len() + 1 {
                return Err(at(offset + 1, format!("expected line index {}, found {idx}", proof.lines.len() + 1)));
            }
            let (formula, just) = rest
                .rsplit_once(';')
                .ok_or_else(|| at(offset + line.len(), "missing `; <justification>`".into()))?;
            let fcol = offset + line.len() - rest.len();
            let formula = Term::parse(formula).map_err(|e| shift(e, lineno, fcol))?;
            let jcol = offset + line.len() - just.len() + 1;
            let justification = parse_justification(just.trim()).map_err(|m| at(jcol, m))?;
            proof.lines.push(ProofLine { formula, justification });
        }
        Ok(proof)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.hypotheses {
            writeln!(f, "assume: {h}")?;
        }
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", i + 1, l.formula, l.justification)?;
        }
        Ok(())
    }
}

fn shift(e: Error, line: usize, col: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::Parse {
            line,
            column: column + col,
            message,
        },
        other => other,
    }
}

fn parse_justification(s: &str) -> std::result::Result<Justification, String> {
    let words: Vec<&str> = s.split_whitespace().collect();
    let num = |w: &str| w.parse::<usize>().map_err(|_| format!("bad line reference `{w}`"));
    match words.as_slice() {
        ["hyp"] => Ok(Justification::Hyp),
        ["mp", i, j] => Ok(Justification::Mp(num(i)?, num(j)?)),
        ["vel", i, j] => Ok(Justification::Vel(num(i)?, num(j)?)),
        [nec, i] if nec.starts_with("nec:") && nec.len() > 4 => Ok(Justification::Nec(nec[4..].to_string(), num(i)?)),
        [ax] if ax.starts_with("ax") => ax.parse().map(Justification::Axiom).map_err(|e: Error| e.to_string()),
        _ => Err(format!("unknown justification `{s}`")),
    }
}

/// The first line that does not check, with the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofError {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

/// Checks every line against the hypotheses `gamma`.
pub fn check_proof(gamma: &[Term], proof: &Proof) -> std::result::Result<(), ProofError> {
    for (k, line) in proof.lines.iter().enumerate() {
        let here = k + 1;
        let fail = |reason: String| ProofError { line: here, reason };
        let cite = |i: usize| -> std::result::Result<&Term, ProofError> {
            if i == 0 || i >= here {
                Err(fail(format!("cites line {i}, which is not an earlier line")))
            } else {
                Ok(&proof.lines[i - 1].formula)
            }
        };
        let phi = &line.formula;
        match &line.justification {
            Justification::Hyp => {
                if !gamma.contains(phi) {
                    return Err(fail("not among the hypotheses".into()));
                }
            }
            Justification::Axiom(id) => {
                if match_schema(phi, id).is_none() {
                    return Err(fail(format!("not an instance of {id}")));
                }
            }
            Justification::Mp(i, j) => {
                let (major, minor) = (cite(*i)?, cite(*j)?);
                match major {
                    Term::Imp(ante, cons) => {
                        if **ante != *minor {
                            return Err(fail(format!("minor premise mismatch: line {j} is not the antecedent of line {i}")));
                        }
                        if **cons != *phi {
                            return Err(fail(format!("conclusion is not the consequent of line {i}")));
                        }
                    }
                    _ => return Err(fail(format!("major premise shape: line {i} is not an implication"))),
                }
            }
            Justification::Nec(m, i) => {
                let premise = cite(*i)?;
                if *phi != Term::modal(m.clone(), premise.clone()) {
                    return Err(fail(format!("expected {m}(line {i})")));
                }
            }
            Justification::Vel(i, j) => {
                let (left, right) = (cite(*i)?, cite(*j)?);
                let (Term::Imp(a, c1), Term::Imp(b, c2)) = (left, right) else {
                    return Err(fail("premises of vel must be implications".into()));
                };
                if c1 != c2 {
                    return Err(fail("premises of vel have different consequents".into()));
                }
                let expect = Term::imp(Term::join((**a).clone(), (**b).clone()), (**c1).clone());
                if *phi != expect {
                    return Err(fail(format!("expected {expect}")));
                }
            }
        }
    }
    if proof.lines.is_empty() {
        return Err(ProofError {
            line: 0,
            reason: "empty proof".into(),
        });
    }
    Ok(())
}

/// Builds proofs step by step; each method returns the new line's number.
#[derive(Clone, Debug, Default)]
pub struct ProofBuilder {
    proof: Proof,
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assume(&mut self, phi: Term) -> &mut Self {
        self.proof.hypotheses.push(phi);
        self
    }

    fn push(&mut self, formula: Term, justification: Justification) -> usize {
        self.proof.lines.push(ProofLine { formula, justification });
        self.proof.lines.len()
    }

    pub fn formula(&self, line: usize) -> &Term {
        &self.proof.lines[line - 1].formula
    }

    pub fn hyp(&mut self, phi: Term) -> usize {
        self.push(phi, Justification::Hyp)
    }

    pub fn axiom(&mut self, id: AxiomId, phi: &Term, psi: &Term, chi: &Term) -> usize {
        let f = id.instantiate(phi, psi, chi);
        self.push(f, Justification::Axiom(id))
    }

    /// Axiom `n` of 1 to 10.
    pub fn ax(&mut self, n: u8, phi: &Term, psi: &Term, chi: &Term) -> usize {
        self.axiom(AxiomId::Plain(n), phi, psi, chi)
    }

    /// Modus ponens from `major = (A -> B)` and `minor = A`.
    pub fn mp(&mut self, major: usize, minor: usize) -> usize {
        let Term::Imp(_, cons) = self.formula(major).clone() else {
            panic!("line {major} is not an implication");
        };
        self.push(*cons, Justification::Mp(major, minor))
    }

    pub fn nec(&mut self, m: &str, line: usize) -> usize {
        let f = Term::modal(m, self.formula(line).clone());
        self.push(f, Justification::Nec(m.to_string(), line))
    }

    pub fn vel(&mut self, left: usize, right: usize) -> usize {
        let (Term::Imp(a, c), Term::Imp(b, _)) = (self.formula(left).clone(), self.formula(right).clone()) else {
            panic!("vel premises must be implications");
        };
        self.push(Term::imp(Term::join(*a, *b), *c), Justification::Vel(left, right))
    }

    fn parts(&self, line: usize) -> (Term, Term) {
        match self.formula(line).clone() {
            Term::Imp(a, b) => (*a, *b),
            other => panic!("line {line} is not an implication: {other}"),
        }
    }

    /// From `X -> Y` and `Y -> Z` derive `X -> Z`.
    pub fn syllogism(&mut self, xy: usize, yz: usize) -> usize {
        let (x, y) = self.parts(xy);
        let (_, z) = self.parts(yz);
        let a2 = self.ax(2, &x, &y, &z);
        let step = self.mp(a2, xy);
        self.mp(step, yz)
    }

    /// `Y -> (X -> X * Y)`.
    pub fn pairing(&mut self, x: &Term, y: &Term) -> usize {
        let xy = Term::prod(x.clone(), y.clone());
        let refl = self.ax(1, &xy, &xy, &xy);
        let a5 = self.ax(5, x, y, &xy);
        self.mp(a5, refl)
    }

    /// `(a -> (b -> c)) -> (b -> (a -> c))`.
    pub fn exchange(&mut self, a: &Term, b: &Term, c: &Term) -> usize {
        let e1 = self.ax(6, b, a, c);
        let ab = Term::prod(a.clone(), b.clone());
        let ba = Term::prod(b.clone(), a.clone());
        let a2 = self.ax(2, &ab, &ba, c);
        let comm = self.ax(4, a, b, c);
        let e2 = self.mp(a2, comm);
        let e3 = self.ax(5, a, b, c);
        let first = self.syllogism(e1, e2);
        self.syllogism(first, e3)
    }

    pub fn finish(self) -> Proof {
        self.proof
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_is_a_theorem() {
        let p = Proof::parse("1. bot -> bot ; ax1").unwrap();
        assert_eq!(check_proof(&[], &p), Ok(()));
    }

    #[test]
    fn necessitation_example() {
        let p = Proof::parse("assume: v0\n1. v0 ; hyp\n2. m1(v0) ; nec:m1 1\n").unwrap();
        assert_eq!(check_proof(&p.hypotheses, &p), Ok(()));
        assert!(check_proof(&[], &p).is_err());
    }

    #[test]
    fn mp_shape_errors() {
        let p = Proof::parse("1. v0 -> v0 ; ax1\n2. v1 -> v1 ; ax1\n3. v0 ; mp 2 1").unwrap();
        let e = check_proof(&[], &p).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.reason.contains("minor premise"), "{}", e.reason);
        let p = Proof::parse("1. v0 ; hyp\n2. v0 ; mp 1 1").unwrap();
        let e = check_proof(&[Term::var(0)], &p).unwrap_err();
        assert!(e.reason.contains("major premise shape"));
        let p = Proof::parse("1. v0 -> v0 ; mp 1 1").unwrap();
        assert!(check_proof(&[], &p).unwrap_err().reason.contains("not an earlier line"));
    }

    #[test]
    fn vel_rule() {
        let text = "assume: v0 -> v2\nassume: v1 -> v2\n1. v0 -> v2 ; hyp\n2. v1 -> v2 ; hyp\n3. v0 | v1 -> v2 ; vel 1 2";
        let p = Proof::parse(text).unwrap();
        assert_eq!(check_proof(&p.hypotheses, &p), Ok(()));
    }

    #[test]
    fn parse_errors_point_at_lines() {
        match Proof::parse("1. v0 -> v0 ; ax1\n3. v0 ; hyp") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match Proof::parse("1. v0 -> ; ax1") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 10)),
            other => panic!("{other:?}"),
        }
        assert!(Proof::parse("1. v0 ; frobnicate").is_err());
        assert!(Proof::parse("1. v0").is_err());
    }

    #[test]
    fn display_round_trips() {
        let mut b = ProofBuilder::new();
        let x = b.pairing(&Term::var(0), &Term::var(1));
        b.nec("m1", x);
        let p = b.finish();
        assert_eq!(check_proof(&[], &p), Ok(()));
        assert_eq!(Proof::parse(&p.to_text()).unwrap(), p);
    }
}
