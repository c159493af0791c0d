//! Hilbert proofs of the basic theorems, built in code and shipped as text
//! files under `proofs/`.

use super::proof::{Proof, ProofBuilder};
use crate::term::Term;

fn v(i: u32) -> Term {
    Term::var(i)
}

/// `⊤`, i.e. `bot -> bot`.
pub fn top() -> Proof {
    let mut b = ProofBuilder::new();
    b.ax(1, &Term::Zero, &Term::Zero, &Term::Zero);
    b.finish()
}

/// `v0 ⊢ m1(v0)`.
pub fn necessitation() -> Proof {
    let mut b = ProofBuilder::new();
    b.assume(v(0));
    let h = b.hyp(v(0));
    b.nec("m1", h);
    b.finish()
}

/// `φ -> (ψ -> φ)` inside `b`.
fn weakening(b: &mut ProofBuilder, phi: &Term, psi: &Term) -> usize {
    let comm = b.ax(4, psi, phi, phi);
    let proj = b.ax(3, phi, psi, phi);
    let swapped = b.syllogism(comm, proj);
    let curry = b.ax(5, psi, phi, phi);
    b.mp(curry, swapped)
}

/// `φ -> ⊤`.
pub fn implies_top() -> Proof {
    let mut b = ProofBuilder::new();
    let top = Term::top();
    let w = weakening(&mut b, &top, &v(0));
    let t = b.ax(1, &Term::Zero, &Term::Zero, &Term::Zero);
    b.mp(w, t);
    b.finish()
}

/// `φ -> (ψ -> φ)`.
pub fn weakening_proof() -> Proof {
    let mut b = ProofBuilder::new();
    weakening(&mut b, &v(0), &v(1));
    b.finish()
}

/// `(φ -> ψ) -> (φ * χ -> ψ * χ)`.
pub fn monotone_product() -> Proof {
    let (phi, psi, chi) = (v(0), v(1), v(2));
    let psichi = Term::prod(psi.clone(), chi.clone());
    let phi_to = Term::imp(phi.clone(), psichi.clone());
    let psi_to = Term::imp(psi.clone(), psichi.clone());
    let mut b = ProofBuilder::new();
    let s = b.pairing(&psi, &chi);
    let bb = b.ax(2, &phi, &psi, &psichi);
    let p0 = b.ax(2, &chi, &psi_to, &phi_to);
    let p = b.mp(p0, s);
    let c = b.syllogism(bb, p);
    let d = b.ax(6, &phi, &chi, &psichi);
    b.syllogism(c, d);
    b.finish()
}

/// `(φ * ψ) * χ -> φ * (ψ * χ)`.
pub fn associativity() -> Proof {
    let (phi, psi, chi) = (v(0), v(1), v(2));
    let psichi = Term::prod(psi.clone(), chi.clone());
    let z = Term::prod(phi.clone(), psichi.clone());
    let r = Term::imp(phi.clone(), z.clone());
    let mut b = ProofBuilder::new();
    let pr1 = b.pairing(&phi, &psichi);
    let pr2 = b.pairing(&psi, &chi);
    let a2 = b.ax(2, &psi, &psichi, &r);
    let ex = b.exchange(
        &Term::imp(psi.clone(), psichi.clone()),
        &Term::imp(psichi.clone(), r.clone()),
        &Term::imp(psi.clone(), r.clone()),
    );
    let swapped = b.mp(ex, a2);
    let q1 = b.mp(swapped, pr1);
    let chain = b.syllogism(pr2, q1);
    let u = b.ax(6, &phi, &psi, &z);
    let curried = b.syllogism(chain, u);
    let phipsi = Term::prod(phi.clone(), psi.clone());
    let last = b.ax(6, &phipsi, &chi, &z);
    b.mp(last, curried);
    b.finish()
}

/// Every corpus proof with its file name.
pub fn all() -> Vec<(&'static str, Proof)> {
    vec![
        ("top.prf", top()),
        ("nec.prf", necessitation()),
        ("implies_top.prf", implies_top()),
        ("weakening.prf", weakening_proof()),
        ("monotone_product.prf", monotone_product()),
        ("associativity.prf", associativity()),
    ]
}
