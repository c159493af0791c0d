//! Axiom schemas of the Hilbert calculus and first-order pattern matching
//! against them.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::term::Term;

/// Metavariable names, indexed as the pattern variables `v0, v1, v2`.
pub const METAVARIABLES: [&str; 3] = ["phi", "psi", "chi"];

/// Placeholder modal name used inside the modal schema patterns.
const MODAL_PLACEHOLDER: &str = "m";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    /// Schemas 1 to 10.
    Plain(u8),
    /// `m(⊤) ↔ ⊤`, either direction.
    Top(String),
    /// `m(φ→ψ) → (m(φ) → m(ψ))`.
    Dist(String),
}

impl AxiomId {
    pub fn all_plain() -> impl Iterator<Item = AxiomId> {
        (1..=10).map(AxiomId::Plain)
    }

    pub fn modal_name(&self) -> Option<&str> {
        match self {
            AxiomId::Plain(_) => None,
            AxiomId::Top(m) | AxiomId::Dist(m) => Some(m),
        }
    }

    /// Patterns over `v0 = φ, v1 = ψ, v2 = χ`.
    pub fn patterns(&self) -> Vec<Term> {
        match self {
            AxiomId::Plain(i) => vec![plain_patterns()[*i as usize - 1].clone()],
            AxiomId::Top(m) => vec![
                Term::imp(Term::modal(m.clone(), Term::top()), Term::top()),
                Term::imp(Term::top(), Term::modal(m.clone(), Term::top())),
            ],
            AxiomId::Dist(m) => {
                let pat = Term::parse("m(v0 -> v1) -> (m(v0) -> m(v1))").expect("schema syntax");
                vec![rename_modal(&pat, m)]
            }
        }
    }

    /// The instance with `φ, ψ, χ` substituted; for the `m(⊤) ↔ ⊤` schema
    /// the first direction.
    pub fn instantiate(&self, phi: &Term, psi: &Term, chi: &Term) -> Term {
        let subst = [phi, psi, chi];
        self.patterns()[0].substitute(&|i| subst[i as usize].clone())
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomId::Plain(i) => write!(f, "ax{i}"),
            AxiomId::Top(m) => write!(f, "ax11:{m}"),
            AxiomId::Dist(m) => write!(f, "ax12:{m}"),
        }
    }
}

impl Serialize for AxiomId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for AxiomId {
    type Err = Error;
    fn from_str(s: &str) -> Result<AxiomId> {
        let bad = || Error::InvalidArgument(format!("unknown axiom `{s}` (expected ax1..ax10, ax11:<m>, ax12:<m>)"));
        let rest = s.strip_prefix("ax").ok_or_else(bad)?;
        if let Some((num, m)) = rest.split_once(':') {
            if m.is_empty() {
                return Err(bad());
            }
            return match num {
                "11" => Ok(AxiomId::Top(m.to_string())),
                "12" => Ok(AxiomId::Dist(m.to_string())),
                _ => Err(bad()),
            };
        }
        match rest.parse::<u8>() {
            Ok(i @ 1..=10) => Ok(AxiomId::Plain(i)),
            _ => Err(bad()),
        }
    }
}

fn plain_patterns() -> &'static [Term] {
    static PATTERNS: OnceLock<Vec<Term>> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        [
            "v0 -> v0",
            "(v0 -> v1) -> ((v1 -> v2) -> (v0 -> v2))",
            "v0 * v1 -> v0",
            "v0 * v1 -> v1 * v0",
            "(v0 * v1 -> v2) -> (v1 -> (v0 -> v2))",
            "(v1 -> (v0 -> v2)) -> (v0 * v1 -> v2)",
            "v0 -> v0 | v1",
            "v1 -> v0 | v1",
            "v0 * (v1 | v2) -> v0 * v1 | v0 * v2",
            "bot -> v0",
        ]
        .iter()
        .map(|s| Term::parse(s).expect("schema syntax"))
        .collect()
    })
}

fn rename_modal(t: &Term, name: &str) -> Term {
    match t {
        Term::Var(_) | Term::Zero | Term::One => t.clone(),
        Term::Join(a, b) => Term::join(rename_modal(a, name), rename_modal(b, name)),
        Term::Prod(a, b) => Term::prod(rename_modal(a, name), rename_modal(b, name)),
        Term::Imp(a, b) => Term::imp(rename_modal(a, name), rename_modal(b, name)),
        Term::Modal(m, a) => {
            let m = if m == MODAL_PLACEHOLDER { name.to_string() } else { m.clone() };
            Term::modal(m, rename_modal(a, name))
        }
    }
}

/// A metavariable assignment produced by matching.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Substitution {
    /// `(metavariable, formula)` in the order φ, ψ, χ; unused ones omitted.
    pub bindings: Vec<(String, Term)>,
    pub modal: Option<String>,
}

fn unify(pattern: &Term, t: &Term, slots: &mut [Option<Term>; 3]) -> bool {
    match (pattern, t) {
        (Term::Var(i), _) => match &slots[*i as usize] {
            Some(bound) => bound == t,
            None => {
                slots[*i as usize] = Some(t.clone());
                true
            }
        },
        (Term::Zero, Term::Zero) | (Term::One, Term::One) => true,
        (Term::Join(a, b), Term::Join(c, d)) | (Term::Prod(a, b), Term::Prod(c, d)) | (Term::Imp(a, b), Term::Imp(c, d)) => {
            unify(a, c, slots) && unify(b, d, slots)
        }
        (Term::Modal(m, a), Term::Modal(n, b)) => m == n && unify(a, b, slots),
        _ => false,
    }
}

fn match_patterns(id: &AxiomId, phi: &Term) -> Option<Substitution> {
    id.patterns().iter().find_map(|p| {
        let mut slots: [Option<Term>; 3] = [None, None, None];
        unify(p, phi, &mut slots).then(|| Substitution {
            bindings: slots
                .into_iter()
                .enumerate()
                .filter_map(|(i, s)| s.map(|t| (METAVARIABLES[i].to_string(), t)))
                .collect(),
            modal: id.modal_name().map(str::to_string),
        })
    })
}

/// Matches `phi` against the schema. For the modal schemas the modal name in
/// `id` is a hint: when it does not occur in `phi`, every modal name of
/// `phi` is tried instead.
pub fn match_schema(phi: &Term, id: &AxiomId) -> Option<Substitution> {
    if let Some(s) = match_patterns(id, phi) {
        return Some(s);
    }
    let rebuild: fn(String) -> AxiomId = match id {
        AxiomId::Plain(_) => return None,
        AxiomId::Top(_) => AxiomId::Top,
        AxiomId::Dist(_) => AxiomId::Dist,
    };
    phi.modal_names()
        .into_iter()
        .find_map(|m| match_patterns(&rebuild(m), phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    #[test]
    fn match_examples() {
        let s = match_schema(&t("bot -> bot"), &AxiomId::Plain(1)).unwrap();
        assert_eq!(s.bindings, vec![("phi".to_string(), Term::Zero)]);
        let s = match_schema(&t("m1(v0->v1) -> (m1(v0) -> m1(v1))"), &AxiomId::Dist("m1".into())).unwrap();
        assert_eq!(s.bindings, vec![("phi".into(), t("v0")), ("psi".into(), t("v1"))]);
        assert_eq!(s.modal.as_deref(), Some("m1"));
        assert_eq!(match_schema(&t("v0 -> v1"), &AxiomId::Plain(3)), None);
    }

    #[test]
    fn modal_top_either_direction() {
        let id = AxiomId::Top("m1".into());
        assert!(match_schema(&t("m1(top) -> top"), &id).is_some());
        assert!(match_schema(&t("top -> m1(top)"), &id).is_some());
        assert!(match_schema(&t("m1(v0) -> top"), &id).is_none());
    }

    #[test]
    fn ids_round_trip() {
        for s in ["ax1", "ax10", "ax11:m1", "ax12:box"] {
            assert_eq!(s.parse::<AxiomId>().unwrap().to_string(), s);
        }
        for s in ["ax0", "ax13", "ax11", "ax11:", "mp"] {
            assert!(s.parse::<AxiomId>().is_err(), "{s}");
        }
    }

    #[test]
    fn instances_match_their_schema() {
        let (a, b, c) = (t("m1(v0) | v1"), t("v2 * 0"), t("v0 -> 1"));
        for id in AxiomId::all_plain().chain([AxiomId::Top("m1".into()), AxiomId::Dist("m1".into())]) {
            let inst = id.instantiate(&a, &b, &c);
            assert!(match_schema(&inst, &id).is_some(), "{id}");
        }
    }
}
