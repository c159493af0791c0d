//! Modal operators, I-blocks and the λ operator.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::algebra::{first_failure, AxiomFailure, AxiomReport, Elem, FiniteRirig, RirigTables};
use crate::error::{Error, Result};
use crate::mask::SubsetMask;

const RESERVED: &[&str] = &["bot", "top", "eps"];

/// Ordered, duplicate-free list of modal symbol names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModalSignature {
    names: Vec<String>,
}

fn valid_modal_name(name: &str) -> bool {
    let mut chars = name.chars();
    let starts_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    let is_var = name.len() > 1
        && name.starts_with('v')
        && name[1..].chars().all(|c| c.is_ascii_digit());
    starts_ok
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !is_var
        && !RESERVED.contains(&name)
}

impl ModalSignature {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if !valid_modal_name(name) {
                return Err(Error::Signature(format!("`{name}` is not a usable modal name")));
            }
            if names[..i].contains(name) {
                return Err(Error::Signature(format!("duplicate modal name `{name}`")));
            }
        }
        Ok(ModalSignature { names })
    }

    /// `m1, …, mk`.
    pub fn numbered(k: usize) -> Self {
        ModalSignature {
            names: (1..=k).map(|i| format!("m{i}")).collect(),
        }
    }

    pub fn empty() -> Self {
        ModalSignature::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }
}

/// A word over the modal signature. The word `mN` denotes `m ∘ N`, so the
/// last letter is applied first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IBlock(pub Vec<usize>);

impl IBlock {
    pub fn empty() -> Self {
        IBlock(Vec::new())
    }

    pub fn letter(j: usize) -> Self {
        IBlock(vec![j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &IBlock) -> IBlock {
        IBlock(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn prepend(&self, j: usize) -> IBlock {
        let mut word = Vec::with_capacity(self.len() + 1);
        word.push(j);
        word.extend_from_slice(&self.0);
        IBlock(word)
    }

    /// Parses `m1.m1.m2` or `eps`.
    pub fn parse(sig: &ModalSignature, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "eps" || text.is_empty() {
            return Ok(IBlock::empty());
        }
        text.split('.')
            .map(|name| {
                sig.index_of(name.trim())
                    .ok_or_else(|| Error::UnknownModal(name.trim().to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(IBlock)
    }

    pub fn display<'a>(&'a self, sig: &'a ModalSignature) -> BlockDisplay<'a> {
        BlockDisplay { block: self, sig }
    }
}

pub struct BlockDisplay<'a> {
    block: &'a IBlock,
    sig: &'a ModalSignature,
}

impl fmt::Display for BlockDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.block.is_empty() {
            return write!(f, "eps");
        }
        for (i, &j) in self.block.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            match self.sig.names().get(j) {
                Some(name) => write!(f, "{name}")?,
                None => write!(f, "#{j}")?,
            }
        }
        Ok(())
    }
}

/// All words of length at most `max_len` over `k` letters, shortest first and
/// lexicographic within a length.
pub fn enumerate_blocks(k: usize, max_len: usize) -> Vec<IBlock> {
    let mut out = vec![IBlock::empty()];
    let mut layer = vec![IBlock::empty()];
    for _ in 0..max_len {
        if k == 0 {
            break;
        }
        let next: Vec<IBlock> = layer
            .iter()
            .flat_map(|w| {
                (0..k).map(move |j| {
                    let mut word = w.0.clone();
                    word.push(j);
                    IBlock(word)
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A finite ririg expanded with one unary table per modal symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteIModalRirig {
    base: FiniteRirig,
    sig: ModalSignature,
    tables: Vec<Vec<Elem>>,
}

impl Deref for FiniteIModalRirig {
    type Target = FiniteRirig;

    fn deref(&self) -> &FiniteRirig {
        &self.base
    }
}

impl FiniteIModalRirig {
    /// Builds the algebra and rejects modal tables violating `m(1) = 1` or
    /// `m(x→y) ≤ m(x)→m(y)`.
    pub fn new(base: FiniteRirig, sig: ModalSignature, tables: Vec<Vec<Elem>>) -> Result<Self> {
        let a = Self::new_unvalidated(base, sig, tables)?;
        let report = a.validate_modal();
        if !report.passed {
            return Err(Error::AxiomsViolated(report));
        }
        Ok(a)
    }

    /// Checks table shapes only; the modal axioms are left to
    /// [`validate_modal`](Self::validate_modal).
    pub fn new_unvalidated(
        base: FiniteRirig,
        sig: ModalSignature,
        tables: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        if tables.len() != sig.len() {
            return Err(Error::BadShape {
                table: "modals".into(),
                expected: sig.len(),
                found: tables.len(),
            });
        }
        let n = base.size();
        for (name, t) in sig.names().iter().zip(&tables) {
            if t.len() != n {
                return Err(Error::BadShape {
                    table: name.clone(),
                    expected: n,
                    found: t.len(),
                });
            }
            if let Some((position, &value)) = t.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(Error::EntryOutOfRange {
                    table: name.clone(),
                    position,
                    value,
                    size: n,
                });
            }
        }
        Ok(FiniteIModalRirig { base, sig, tables })
    }

    /// The algebra with an empty modal signature.
    pub fn bare(base: FiniteRirig) -> Self {
        FiniteIModalRirig {
            base,
            sig: ModalSignature::empty(),
            tables: Vec::new(),
        }
    }

    pub fn base(&self) -> &FiniteRirig {
        &self.base
    }

    pub fn signature(&self) -> &ModalSignature {
        &self.sig
    }

    pub fn modal_tables(&self) -> &[Vec<Elem>] {
        &self.tables
    }

    /// Number of modal symbols.
    pub fn k(&self) -> usize {
        self.sig.len()
    }

    #[inline]
    pub fn modal(&self, j: usize, x: Elem) -> Elem {
        self.tables[j][x]
    }

    pub fn modal_index(&self, name: &str) -> Result<usize> {
        self.sig
            .index_of(name)
            .ok_or_else(|| Error::UnknownModal(name.to_string()))
    }

    pub fn validate_modal(&self) -> AxiomReport {
        let n = self.size();
        let mut failures = Vec::new();
        for (j, name) in self.sig.names().iter().enumerate() {
            if self.modal(j, self.one()) != self.one() {
                failures.push(AxiomFailure {
                    axiom: format!("{name}: m(1)=1"),
                    witness: vec![],
                });
            }
            if let Some(witness) = first_failure(n, 2, |x| self.distribution_at(j, x[0], x[1])) {
                failures.push(AxiomFailure {
                    axiom: format!("{name}: m(x->y) <= m(x)->m(y)"),
                    witness,
                });
            }
        }
        AxiomReport::from_failures(failures)
    }

    fn distribution_at(&self, j: usize, x: Elem, y: Elem) -> bool {
        let lhs = self.modal(j, self.imp(x, y));
        self.leq(lhs, self.imp(self.modal(j, x), self.modal(j, y)))
    }

    fn product_form_at(&self, j: usize, x: Elem, y: Elem) -> bool {
        self.leq(
            self.prod(self.modal(j, x), self.modal(j, y)),
            self.modal(j, self.prod(x, y)),
        )
    }

    /// `m(x→y) ≤ m(x)→m(y)` for all `x, y`.
    pub fn distribution_law(&self, j: usize) -> bool {
        first_failure(self.size(), 2, |x| self.distribution_at(j, x[0], x[1])).is_none()
    }

    /// `m(x)·m(y) ≤ m(x·y)` for all `x, y`.
    pub fn product_form(&self, j: usize) -> bool {
        first_failure(self.size(), 2, |x| self.product_form_at(j, x[0], x[1])).is_none()
    }

    pub fn check_product_form(&self, name: &str) -> Result<bool> {
        Ok(self.product_form(self.modal_index(name)?))
    }

    pub fn apply_block(&self, block: &IBlock, a: Elem) -> Elem {
        block.0.iter().rev().fold(a, |x, &j| self.modal(j, x))
    }

    /// `λ(a) = a · m₁(a) ⋯ m_k(a)`, multiplied in signature order.
    pub fn lambda(&self, a: Elem) -> Elem {
        (0..self.k()).fold(a, |acc, j| self.prod(acc, self.modal(j, a)))
    }

    pub fn lambda_iter(&self, l: usize, a: Elem) -> Elem {
        (0..l).fold(a, |x, _| self.lambda(x))
    }

    /// The sequence `a, λ(a), λ²(a), …` up to and including its first
    /// repeated value; the last entry is the stable value.
    pub fn lambda_orbit(&self, a: Elem) -> Vec<Elem> {
        let mut orbit = vec![a];
        loop {
            let last = *orbit.last().unwrap();
            let next = self.lambda(last);
            if next == last {
                return orbit;
            }
            orbit.push(next);
        }
    }

    /// Least `l` with `λ^l(x) = λ^{l+1}(x)` for every element `x`.
    pub fn lambda_stabilization(&self) -> usize {
        self.elements()
            .map(|a| self.lambda_orbit(a).len() - 1)
            .max()
            .unwrap_or(0)
    }

    /// Every value `M(a)` over all blocks, each paired with a shortest block
    /// reaching it. Values are listed in discovery order; the first is `a`.
    pub fn block_images(&self, a: Elem) -> Vec<(Elem, IBlock)> {
        let n = self.size();
        let mut best: Vec<Option<IBlock>> = vec![None; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        best[a] = Some(IBlock::empty());
        order.push(a);
        queue.push_back(a);
        while let Some(v) = queue.pop_front() {
            let word = best[v].clone().unwrap();
            for j in 0..self.k() {
                let w = self.modal(j, v);
                if best[w].is_none() {
                    best[w] = Some(word.prepend(j));
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        order
            .into_iter()
            .map(|v| (v, best[v].clone().unwrap()))
            .collect()
    }

    /// Whether `mask` contains 0 and 1 and is closed under every operation.
    pub fn is_subuniverse(&self, mask: SubsetMask) -> bool {
        if !mask.contains(self.zero()) || !mask.contains(self.one()) {
            return false;
        }
        for x in mask.iter() {
            if (0..self.k()).any(|j| !mask.contains(self.modal(j, x))) {
                return false;
            }
            for y in mask.iter() {
                if !mask.contains(self.join(x, y))
                    || !mask.contains(self.prod(x, y))
                    || !mask.contains(self.imp(x, y))
                {
                    return false;
                }
            }
        }
        true
    }

    /// The subalgebra on a subuniverse, together with its embedding (new index
    /// to old index).
    pub fn subalgebra(&self, mask: SubsetMask) -> Result<(FiniteIModalRirig, Vec<Elem>)> {
        if !self.is_subuniverse(mask) {
            return Err(Error::InvalidArgument(format!("{mask:?} is not a subuniverse")));
        }
        let embed = mask.to_vec();
        let mut index = vec![usize::MAX; self.size()];
        for (i, &x) in embed.iter().enumerate() {
            index[x] = i;
        }
        let m = embed.len();
        let table = |op: &dyn Fn(Elem, Elem) -> Elem| {
            let mut out = Vec::with_capacity(m * m);
            for &x in &embed {
                for &y in &embed {
                    out.push(index[op(x, y)]);
                }
            }
            out
        };
        let tables = RirigTables {
            size: m,
            zero: index[self.zero()],
            one: index[self.one()],
            join: table(&|x, y| self.join(x, y)),
            prod: table(&|x, y| self.prod(x, y)),
            imp: table(&|x, y| self.imp(x, y)),
        };
        let labels = embed.iter().map(|&x| self.label(x).to_string()).collect();
        let base = FiniteRirig::new(tables)?.with_labels(labels)?;
        let modal = self
            .tables
            .iter()
            .map(|t| embed.iter().map(|&x| index[t[x]]).collect())
            .collect();
        Ok((
            FiniteIModalRirig::new_unvalidated(base, self.sig.clone(), modal)?,
            embed,
        ))
    }

    /// Direct product with componentwise modal tables; signatures must agree.
    pub fn product(&self, other: &FiniteIModalRirig) -> Result<FiniteIModalRirig> {
        if self.sig != other.sig {
            return Err(Error::Signature("product of algebras with different signatures".into()));
        }
        let base = self.base.product(&other.base)?;
        let m = other.size();
        let tables = self
            .tables
            .iter()
            .zip(&other.tables)
            .map(|(s, t)| (0..base.size()).map(|x| s[x / m] * m + t[x % m]).collect())
            .collect();
        FiniteIModalRirig::new(base, self.sig.clone(), tables)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn validate_modal_examples() {
        assert!(fixtures::g3_delta().validate_modal().passed);
        assert!(fixtures::g3_id().validate_modal().passed);
        let bad = FiniteIModalRirig::new_unvalidated(
            fixtures::g3(),
            ModalSignature::numbered(1),
            vec![vec![0, 1, 1]],
        )
        .unwrap();
        let report = bad.validate_modal();
        assert!(!report.passed);
        let fail = &report.failures[0];
        assert!(fail.axiom.ends_with("m(1)=1"));
        assert!(fail.witness.is_empty());
    }

    #[test]
    fn product_form_examples() {
        assert!(fixtures::g3_delta().check_product_form("m1").unwrap());
        assert!(fixtures::g3_id().check_product_form("m1").unwrap());
        let swap = FiniteIModalRirig::new_unvalidated(
            fixtures::g3(),
            ModalSignature::numbered(1),
            vec![vec![1, 0, 2]],
        )
        .unwrap();
        // Not monotone: the product form holds while distribution fails, so
        // the two only agree on genuine modal operators.
        assert!(swap.product_form(0));
        assert!(!swap.distribution_law(0));
        assert!(matches!(
            fixtures::g3_id().check_product_form("box"),
            Err(Error::UnknownModal(_))
        ));
    }

    #[test]
    fn apply_block_examples() {
        let a = fixtures::g3_delta();
        assert_eq!(a.apply_block(&IBlock::empty(), 1), 1);
        assert_eq!(a.apply_block(&IBlock(vec![0]), 1), 0);
        assert_eq!(a.apply_block(&IBlock(vec![0, 0]), 2), 2);
    }

    #[test]
    fn block_orientation_applies_last_letter_first() {
        // m1 = Δ and m2 = (0 -> a, a -> 1) do not commute on 0.
        let a = fixtures::g3_two_modals();
        let word = IBlock(vec![0, 1]);
        for x in a.elements() {
            assert_eq!(a.apply_block(&word, x), a.modal(0, a.modal(1, x)));
        }
        assert_eq!(a.apply_block(&word, 0), 0);
        assert_eq!(a.apply_block(&IBlock(vec![1, 0]), 0), 1);
    }

    #[test]
    fn lambda_examples() {
        let d = fixtures::g3_delta();
        let id = fixtures::g3_id();
        assert_eq!(d.lambda(1), 0);
        assert_eq!(id.lambda(1), 1);
        assert_eq!(d.lambda(2), 2);
        assert_eq!(d.lambda_iter(0, 1), 1);
        assert_eq!(d.lambda_iter(2, 1), 0);
        assert_eq!(id.lambda_iter(5, 1), 1);
        let bare = FiniteIModalRirig::bare(fixtures::g3());
        assert_eq!(bare.lambda(1), 1);
    }

    #[test]
    fn enumerate_blocks_examples() {
        let show = |k: usize, len: usize| {
            let sig = ModalSignature::numbered(k);
            enumerate_blocks(k, len)
                .iter()
                .map(|b| b.display(&sig).to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(show(1, 2), vec!["eps", "m1", "m1.m1"]);
        assert_eq!(show(2, 1), vec!["eps", "m1", "m2"]);
        assert_eq!(show(0, 3), vec!["eps"]);
        assert_eq!(enumerate_blocks(2, 3).len(), 1 + 2 + 4 + 8);
    }

    #[test]
    fn block_literals() {
        let sig = ModalSignature::numbered(2);
        let b = IBlock::parse(&sig, "m1.m1.m2").unwrap();
        assert_eq!(b, IBlock(vec![0, 0, 1]));
        assert_eq!(b.display(&sig).to_string(), "m1.m1.m2");
        assert_eq!(IBlock::parse(&sig, "eps").unwrap(), IBlock::empty());
        assert!(IBlock::parse(&sig, "m3").is_err());
    }

    #[test]
    fn signature_rejects_bad_names() {
        assert!(ModalSignature::new(["m", "m"]).is_err());
        assert!(ModalSignature::new(["v1"]).is_err());
        assert!(ModalSignature::new(["top"]).is_err());
        assert!(ModalSignature::new(["1"]).is_err());
        assert!(ModalSignature::new(["box", "dia"]).is_ok());
    }

    #[test]
    fn subalgebra_of_g3_delta() {
        let a = fixtures::g3_delta();
        let (sub, embed) = a.subalgebra(SubsetMask::from_elems(3, [0, 2])).unwrap();
        assert_eq!(embed, vec![0, 2]);
        assert_eq!(sub.size(), 2);
        assert!(sub.validate_modal().passed);
    }
}
