//! The translations between formulas and equations, and equational
//! consequence relative to a finite catalog of algebras.
//!
//! Consequence over a finite catalog refutes entailment soundly (a
//! countermodel is a genuine certificate of non-derivability) but cannot
//! affirm it in general.

use serde::Serialize;

use super::proof::{check_proof, Proof, ProofError};
use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::modal::FiniteIModalRirig;
use crate::term::{Equation, Term};

/// Default cap on valuations per algebra in entailment checks.
pub const ENTAILMENT_VALUATION_CAP: usize = 1 << 16;

pub const CATALOG_NOTE: &str =
    "consequence relative to a finite catalog: a countermodel refutes entailment; agreement does not prove it";

/// `τ(φ) = {φ ≈ 1}`.
pub fn tau(phi: &Term) -> Vec<Equation> {
    vec![Equation::new(phi.clone(), Term::One)]
}

/// `ρ(φ ≈ ψ) = {φ → ψ, ψ → φ}`.
pub fn rho(eq: &Equation) -> Vec<Term> {
    vec![
        Term::imp(eq.lhs.clone(), eq.rhs.clone()),
        Term::imp(eq.rhs.clone(), eq.lhs.clone()),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    /// Position of the algebra in the catalog.
    pub algebra: usize,
    /// `(variable index, value)` pairs.
    pub valuation: Vec<(u32, Elem)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntailmentReport {
    pub holds: bool,
    pub countermodel: Option<Countermodel>,
    /// Catalog positions actually checked.
    pub checked: Vec<usize>,
    /// Catalog positions lacking a modal symbol in use.
    pub skipped: Vec<usize>,
    pub note: &'static str,
}

/// In every catalog algebra interpreting all modal symbols involved, every
/// valuation satisfying all of `theta` satisfies `goal`.
pub fn semantic_entails(
    catalog: &[FiniteIModalRirig],
    theta: &[Equation],
    goal: &Equation,
    cap: usize,
) -> Result<EntailmentReport> {
    let mut vars = goal.vars();
    let mut modals = goal.modal_names();
    for e in theta {
        vars.extend(e.vars());
        modals.extend(e.modal_names());
    }
    let vars: Vec<u32> = vars.into_iter().collect();
    let width = vars.last().map_or(0, |v| *v as usize + 1);
    let mut report = EntailmentReport {
        holds: true,
        countermodel: None,
        checked: Vec::new(),
        skipped: Vec::new(),
        note: CATALOG_NOTE,
    };
    for (pos, a) in catalog.iter().enumerate() {
        if !modals.iter().all(|m| a.signature().contains(m)) {
            report.skipped.push(pos);
            continue;
        }
        let total = (a.size() as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::InvalidArgument(format!(
                "{} variables over {} elements exceed the valuation cap of {cap}",
                vars.len(),
                a.size()
            )));
        }
        report.checked.push(pos);
        let premises = theta
            .iter()
            .map(|e| Ok((e.lhs.compile(a.signature())?, e.rhs.compile(a.signature())?)))
            .collect::<Result<Vec<_>>>()?;
        let (gl, gr) = (goal.lhs.compile(a.signature())?, goal.rhs.compile(a.signature())?);
        let mut dense = vec![a.zero(); width];
        let failure = crate::algebra::first_failure(a.size(), vars.len(), |vals| {
            for (v, &x) in vars.iter().zip(vals) {
                dense[*v as usize] = x;
            }
            let sat = premises
                .iter()
                .all(|(l, r)| l.eval_unchecked(a, &dense) == r.eval_unchecked(a, &dense));
            !sat || gl.eval_unchecked(a, &dense) == gr.eval_unchecked(a, &dense)
        });
        if let Some(vals) = failure {
            report.holds = false;
            report.countermodel = Some(Countermodel {
                algebra: pos,
                valuation: vars.iter().copied().zip(vals).collect(),
            });
            return Ok(report);
        }
    }
    if report.checked.is_empty() {
        return Err(Error::SignatureMismatch);
    }
    Ok(report)
}

/// `τ[Γ] ⊨ τ(φ)` over the catalog, for formulas.
pub fn formula_entails(catalog: &[FiniteIModalRirig], gamma: &[Term], phi: &Term, cap: usize) -> Result<EntailmentReport> {
    let theta: Vec<Equation> = gamma.iter().flat_map(tau).collect();
    semantic_entails(catalog, &theta, &tau(phi)[0], cap)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SoundnessOutcome {
    Rejected(ProofError),
    Checked(EntailmentReport),
}

/// Checks the proof, then that its conclusion is a catalog consequence of its
/// hypotheses. A checked proof with a countermodel is a bug certificate.
pub fn soundness_check(proof: &Proof, catalog: &[FiniteIModalRirig], cap: usize) -> Result<SoundnessOutcome> {
    if let Err(e) = check_proof(&proof.hypotheses, proof) {
        return Ok(SoundnessOutcome::Rejected(e));
    }
    let conclusion = proof.conclusion().expect("checked proofs are nonempty");
    formula_entails(catalog, &proof.hypotheses, conclusion, cap).map(SoundnessOutcome::Checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::logic::corpus;

    fn small_catalog() -> Vec<FiniteIModalRirig> {
        let with_m1 = |base| FiniteIModalRirig::new(base, crate::modal::ModalSignature::numbered(1), vec![vec![0, 1]]).unwrap();
        vec![with_m1(fixtures::b2()), fixtures::bare_g3(), fixtures::g3_delta(), fixtures::g3_id()]
    }

    fn eq(s: &str) -> Equation {
        Equation::parse(s).unwrap()
    }

    #[test]
    fn transformers() {
        let p = Term::var(0);
        assert_eq!(tau(&p), vec![Equation::new(p.clone(), Term::One)]);
        let r = rho(&eq("v0 = v1"));
        assert_eq!(r, vec![Term::parse("v0 -> v1").unwrap(), Term::parse("v1 -> v0").unwrap()]);
        assert_eq!(tau(&Term::top())[0].to_string(), "0 -> 0 = 1");
    }

    #[test]
    fn entailment_examples() {
        let cat = small_catalog();
        let r = semantic_entails(&cat, &[eq("v0 = 1"), eq("v0 -> v1 = 1")], &eq("v1 = 1"), 4096).unwrap();
        assert!(r.holds);
        let g3 = [fixtures::bare_g3()];
        let r = semantic_entails(&g3, &[], &eq("v0 | (v0 -> 0) = 1"), 4096).unwrap();
        assert_eq!(r.countermodel, Some(Countermodel { algebra: 0, valuation: vec![(0, 1)] }));
        let r = semantic_entails(&cat, &[eq("v0 = 1")], &eq("m1(v0) = 1"), 4096).unwrap();
        assert!(r.holds);
        assert_eq!(r.skipped, vec![1]);
        assert!(matches!(
            semantic_entails(&g3, &[], &eq("m1(v0) = 1"), 4096),
            Err(Error::SignatureMismatch)
        ));
    }

    #[test]
    fn corpus_is_sound() {
        let cat = small_catalog();
        for (name, p) in corpus::all() {
            match soundness_check(&p, &cat, 4096).unwrap() {
                SoundnessOutcome::Checked(r) => assert!(r.holds, "{name}"),
                SoundnessOutcome::Rejected(e) => panic!("{name}: {e}"),
            }
        }
    }

    #[test]
    fn bogus_inference_is_caught_semantically() {
        // What a broken checker would have accepted: v0 ⊢ v1.
        let r = formula_entails(&small_catalog(), &[Term::var(0)], &Term::var(1), 4096).unwrap();
        let cm = r.countermodel.unwrap();
        assert_eq!(cm.algebra, 0);
        assert_eq!(cm.valuation, vec![(0, 1), (1, 0)]);
    }
}
