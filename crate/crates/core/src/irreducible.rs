//! Simplicity and subdirect irreducibility, with witnesses from both the
//! block route and the λ route.
//!
//! A single block image is not enough in general: in Ł3 with a constant-1
//! modal, `a` generates everything only because `a·a = 0`. Witnesses are
//! therefore products of block images (for the block route) and powers
//! `λ^l(a)^p` (for the λ route); both describe membership in `Fg(a)`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::filters::{all_ifilters, IFilter};
use crate::modal::{FiniteIModalRirig, IBlock};

/// Shortest list of blocks with `M₁(a)⋯Mₙ(a) ≤ b`, each block shortest for
/// its image. `None` when `b ∉ Fg(a)`.
pub fn block_product_witness(a: &FiniteIModalRirig, x: Elem, b: Elem) -> Option<Vec<IBlock>> {
    let images = a.block_images(x);
    let n = a.size();
    let mut prev: Vec<Option<(Elem, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([a.one()]);
    seen[a.one()] = true;
    while let Some(v) = queue.pop_front() {
        if a.leq(v, b) {
            let mut blocks = Vec::new();
            let mut cur = v;
            while let Some((p, i)) = prev[cur] {
                blocks.push(images[i].1.clone());
                cur = p;
            }
            blocks.reverse();
            return Some(blocks);
        }
        for (i, (img, _)) in images.iter().enumerate() {
            let w = a.prod(v, *img);
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, i));
                queue.push_back(w);
            }
        }
    }
    None
}

/// Lexicographically least `(l, p)` with `p ≥ 1` and `λ^l(a)^p ≤ b`.
pub fn lambda_witness(a: &FiniteIModalRirig, x: Elem, b: Elem) -> Option<(usize, usize)> {
    let orbit = a.lambda_orbit(x);
    for (l, &v) in orbit.iter().enumerate() {
        let mut power = v;
        for p in 1..=a.size() {
            if a.leq(power, b) {
                return Some((l, p));
            }
            power = a.prod(power, v);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElemWitness {
    pub elem: Elem,
    pub blocks: Vec<IBlock>,
    pub lambda: (usize, usize),
}

fn witnesses_below(a: &FiniteIModalRirig, b: Elem) -> std::result::Result<Vec<ElemWitness>, Elem> {
    a.elements()
        .filter(|&x| x != a.one())
        .map(|x| {
            let blocks = block_product_witness(a, x, b).ok_or(x)?;
            let lambda = lambda_witness(a, x, b).ok_or(x)?;
            Ok(ElemWitness { elem: x, blocks, lambda })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpleReport {
    pub simple: bool,
    /// For each `a ≠ 1`, how it reaches 0; empty when not simple.
    pub witnesses: Vec<ElemWitness>,
    /// First `a ≠ 1` whose generated filter is proper.
    pub counterexample: Option<Elem>,
}

pub fn is_simple(a: &FiniteIModalRirig) -> Result<SimpleReport> {
    if a.is_trivial() {
        return Err(Error::TrivialAlgebra);
    }
    Ok(match witnesses_below(a, a.zero()) {
        Ok(witnesses) => SimpleReport {
            simple: true,
            witnesses,
            counterexample: None,
        },
        Err(x) => SimpleReport {
            simple: false,
            witnesses: Vec::new(),
            counterexample: Some(x),
        },
    })
}

/// The least nontrivial I-filter, when there is exactly one minimal one.
pub fn monolith(a: &FiniteIModalRirig) -> Option<IFilter> {
    let nontrivial: Vec<IFilter> = all_ifilters(a).into_iter().filter(|f| !f.is_trivial(a)).collect();
    let minimal: Vec<IFilter> = nontrivial
        .iter()
        .copied()
        .filter(|f| !nontrivial.iter().any(|g| g != f && g.mask().is_subset(f.mask())))
        .collect();
    match minimal.as_slice() {
        [only] => Some(*only),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SiReport {
    pub si: bool,
    /// A maximal `b ≠ 1` lying in `Fg(a)` for every `a ≠ 1`; smallest index
    /// among ties.
    pub witness: Option<Elem>,
    pub witnesses: Vec<ElemWitness>,
    pub monolith: Option<IFilter>,
}

pub fn is_subdirectly_irreducible(a: &FiniteIModalRirig) -> Result<SiReport> {
    if a.is_trivial() {
        return Err(Error::TrivialAlgebra);
    }
    let valid: Vec<(Elem, Vec<ElemWitness>)> = a
        .elements()
        .filter(|&b| b != a.one())
        .filter_map(|b| witnesses_below(a, b).ok().map(|w| (b, w)))
        .collect();
    let maximal = valid
        .iter()
        .find(|(b, _)| !valid.iter().any(|(c, _)| c != b && a.leq(*b, *c)));
    Ok(match maximal {
        Some((b, w)) => SiReport {
            si: true,
            witness: Some(*b),
            witnesses: w.clone(),
            monolith: monolith(a),
        },
        None => SiReport {
            si: false,
            witness: None,
            witnesses: Vec::new(),
            monolith: None,
        },
    })
}
