//! Search for local deduction-detachment witnesses: blocks `Mⱼ` and members
//! `ψⱼ` of `Δ` with `Γ ⊢ ∏ Mⱼ(ψⱼ) → ψ`, certified semantically over a
//! catalog.

use serde::Serialize;

use super::semantics::{formula_entails, EntailmentReport};
use crate::error::Result;
use crate::modal::{enumerate_blocks, FiniteIModalRirig, IBlock, ModalSignature};
use crate::term::Term;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LddtBounds {
    pub block_len: usize,
    pub product_len: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LddtItem {
    pub block: String,
    /// Position in `Δ`.
    pub delta: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LddtWitness {
    pub items: Vec<LddtItem>,
    /// The shared exponent in λ mode.
    pub lambda: Option<usize>,
    pub formula: Term,
    pub certificate: EntailmentReport,
}

/// `M(φ)` as a formula.
pub fn block_formula(sig: &ModalSignature, block: &IBlock, phi: &Term) -> Term {
    block
        .0
        .iter()
        .rev()
        .fold(phi.clone(), |t, &j| Term::modal(sig.names()[j].clone(), t))
}

/// `λ(φ) = φ * m₁(φ) * … * m_k(φ)`.
pub fn lambda_formula(sig: &ModalSignature, phi: &Term) -> Term {
    Term::product_of(std::iter::once(phi.clone()).chain(sig.names().iter().map(|m| Term::modal(m.clone(), phi.clone()))))
}

pub fn lambda_iter_formula(sig: &ModalSignature, l: usize, phi: &Term) -> Term {
    (0..l).fold(phi.clone(), |t, _| lambda_formula(sig, &t))
}

/// Nondecreasing index sequences of length `len` over `0..items`.
fn multisets(items: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, items: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..items {
            cur.push(i);
            go(i, items, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, items, len, &mut Vec::new(), &mut out);
    out
}

/// First witness in the order (product size, then items by block
/// enumeration order and `Δ` position). `None` means the bounds ran out,
/// not that no witness exists.
pub fn lddt_witness(
    gamma: &[Term],
    delta: &[Term],
    psi: &Term,
    catalog: &[FiniteIModalRirig],
    sig: &ModalSignature,
    bounds: LddtBounds,
    cap: usize,
) -> Result<Option<LddtWitness>> {
    let blocks = enumerate_blocks(sig.len(), bounds.block_len);
    let items: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|b| (0..delta.len()).map(move |d| (b, d)))
        .collect();
    for size in 0..=bounds.product_len {
        for choice in multisets(items.len(), size) {
            let product = Term::product_of(choice.iter().map(|&i| {
                let (b, d) = items[i];
                block_formula(sig, &blocks[b], &delta[d])
            }));
            let formula = Term::imp(product, psi.clone());
            let report = formula_entails(catalog, gamma, &formula, cap)?;
            if report.holds {
                return Ok(Some(LddtWitness {
                    items: choice
                        .iter()
                        .map(|&i| LddtItem {
                            block: blocks[items[i].0].display(sig).to_string(),
                            delta: items[i].1,
                        })
                        .collect(),
                    lambda: None,
                    formula,
                    certificate: report,
                }));
            }
        }
    }
    Ok(None)
}

/// λ mode: the least shared `l ≤ max_l` (then fewest factors) with
/// `Γ ⊢ ∏ λ^l(ψⱼ) → ψ`.
pub fn lddt_witness_lambda(
    gamma: &[Term],
    delta: &[Term],
    psi: &Term,
    catalog: &[FiniteIModalRirig],
    sig: &ModalSignature,
    max_l: usize,
    product_len: usize,
    cap: usize,
) -> Result<Option<LddtWitness>> {
    for l in 0..=max_l {
        for size in 0..=product_len {
            for choice in multisets(delta.len(), size) {
                let product = Term::product_of(choice.iter().map(|&d| lambda_iter_formula(sig, l, &delta[d])));
                let formula = Term::imp(product, psi.clone());
                let report = formula_entails(catalog, gamma, &formula, cap)?;
                if report.holds {
                    return Ok(Some(LddtWitness {
                        items: choice
                            .iter()
                            .map(|&d| LddtItem {
                                block: format!("lambda^{l}"),
                                delta: d,
                            })
                            .collect(),
                        lambda: Some(l),
                        formula,
                        certificate: report,
                    }));
                }
            }
        }
    }
    Ok(None)
}
