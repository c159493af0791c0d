//! Compatible functions: the definitional check against every congruence,
//! the block and λ witness characterizations, the slot-wise reduction, and
//! the join representation on a finite set of points.
//!
//! Witnesses are products, not single images: `f` is compatible iff for all
//! tuples `ā, b̄` the value `f(ā)∗f(b̄)` lies in the filter generated by the
//! `aᵢ∗bᵢ`, i.e. lies above some product of block images of them, or above
//! `∏ λ^l(aᵢ∗bᵢ)^p` for some `l, p`.

use serde::Serialize;

use crate::algebra::Elem;
use crate::congruence::{all_congruences_direct, Congruence};
use crate::error::{Error, Result};
use crate::modal::{FiniteIModalRirig, IBlock};

/// A total function `Aᵏ → A` stored row-major, first argument most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteFunction {
    size: usize,
    arity: usize,
    table: Vec<Elem>,
}

impl FiniteFunction {
    pub fn new(size: usize, arity: usize, table: Vec<Elem>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidArgument("function arity must be at least 1".into()));
        }
        let expected = size
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::InvalidArgument("function table too large".into()))?;
        if table.len() != expected {
            return Err(Error::BadShape {
                table: "function".into(),
                expected,
                found: table.len(),
            });
        }
        if let Some((position, &value)) = table.iter().enumerate().find(|(_, &v)| v >= size) {
            return Err(Error::EntryOutOfRange {
                table: "function".into(),
                position,
                value,
                size,
            });
        }
        Ok(FiniteFunction { size, arity, table })
    }

    pub fn from_fn(size: usize, arity: usize, f: impl Fn(&[Elem]) -> Elem) -> Self {
        let table = tuples(size, arity).map(|t| f(&t)).collect();
        FiniteFunction { size, arity, table }
    }

    pub fn constant(size: usize, arity: usize, c: Elem) -> Self {
        Self::from_fn(size, arity, |_| c)
    }

    pub fn projection(size: usize, arity: usize, i: usize) -> Self {
        Self::from_fn(size, arity, |t| t[i])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn index_of(&self, args: &[Elem]) -> usize {
        args.iter().fold(0, |acc, &x| acc * self.size + x)
    }

    pub fn eval(&self, args: &[Elem]) -> Elem {
        self.table[self.index_of(args)]
    }
}

/// Every `k`-tuple over `0..n` in lexicographic order.
pub fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = n.pow(k as u32);
    (0..total).map(move |mut i| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        t
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Compatible,
    NotCompatible,
    /// The block-length bound ran out before a witness or a refutation.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Per argument slot, the blocks whose images of `aᵢ∗bᵢ` are multiplied.
    Blocks(Vec<Vec<IBlock>>),
    /// `∏ λ^l(aᵢ∗bᵢ)^p ≤ f(ā)∗f(b̄)`.
    Lambda { l: usize, p: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub left: Vec<Elem>,
    pub right: Vec<Elem>,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatFailure {
    /// The congruence that is not preserved; absent for the witness routes.
    pub congruence: Option<Congruence>,
    pub left: Vec<Elem>,
    pub right: Vec<Elem>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatReport {
    pub verdict: Verdict,
    pub witnesses: Vec<PairWitness>,
    pub failure: Option<CompatFailure>,
}

impl CompatReport {
    pub fn compatible(&self) -> bool {
        self.verdict == Verdict::Compatible
    }

    fn fail(left: &[Elem], right: &[Elem], congruence: Option<Congruence>) -> Self {
        CompatReport {
            verdict: Verdict::NotCompatible,
            witnesses: Vec::new(),
            failure: Some(CompatFailure {
                congruence,
                left: left.to_vec(),
                right: right.to_vec(),
            }),
        }
    }
}

fn check_function(a: &FiniteIModalRirig, f: &FiniteFunction) -> Result<()> {
    if f.size() != a.size() {
        return Err(Error::InvalidArgument(format!(
            "function is over {} elements, algebra has {}",
            f.size(),
            a.size()
        )));
    }
    Ok(())
}

/// Per element `c`, every product of block images of `c` with a shortest
/// list of blocks producing it. Entry `[c][v]` is `Some(blocks)` when `v` is
/// such a product.
type ProductTable = Vec<Vec<Option<Vec<IBlock>>>>;

fn product_table(a: &FiniteIModalRirig, block_len_bound: Option<usize>) -> (ProductTable, ProductTable) {
    let n = a.size();
    let mut bounded = vec![vec![None; n]; n];
    let mut full = vec![vec![None; n]; n];
    for c in a.elements() {
        let images = a.block_images(c);
        let within: Vec<(Elem, IBlock)> = match block_len_bound {
            Some(b) => images.iter().filter(|(_, m)| m.len() <= b).cloned().collect(),
            None => images.clone(),
        };
        bounded[c] = products_of(a, &within);
        full[c] = products_of(a, &images);
    }
    (bounded, full)
}

fn products_of(a: &FiniteIModalRirig, images: &[(Elem, IBlock)]) -> Vec<Option<Vec<IBlock>>> {
    let mut reach: Vec<Option<Vec<IBlock>>> = vec![None; a.size()];
    reach[a.one()] = Some(Vec::new());
    let mut frontier = vec![a.one()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in frontier {
            for (img, m) in images {
                let w = a.prod(v, *img);
                if reach[w].is_none() {
                    let mut blocks = reach[v].clone().unwrap();
                    blocks.push(m.clone());
                    reach[w] = Some(blocks);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    reach
}

/// Shortest per-slot choice of products whose overall product is below
/// `target`, searched over the Cartesian product of the slots.
fn slot_search(a: &FiniteIModalRirig, table: &ProductTable, cs: &[Elem], target: Elem) -> Option<Vec<Vec<IBlock>>> {
    let options: Vec<Vec<(Elem, &Vec<IBlock>)>> = cs
        .iter()
        .map(|&c| {
            let mut o: Vec<_> = table[c]
                .iter()
                .enumerate()
                .filter_map(|(v, w)| w.as_ref().map(|w| (v, w)))
                .collect();
            o.sort_by_key(|(v, w)| (w.len(), *v));
            o
        })
        .collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut choice = vec![0usize; cs.len()];
    loop {
        let value = a.product_of(choice.iter().zip(&options).map(|(&i, o)| o[i].0));
        if a.leq(value, target) {
            let cost = choice.iter().zip(&options).map(|(&i, o)| o[i].1.len()).sum();
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, choice.clone()));
            }
        }
        let mut slot = cs.len();
        loop {
            if slot == 0 {
                return best.map(|(_, ch)| ch.iter().zip(&options).map(|(&i, o)| o[i].1.clone()).collect());
            }
            slot -= 1;
            choice[slot] += 1;
            if choice[slot] < options[slot].len() {
                break;
            }
            choice[slot] = 0;
        }
    }
}

fn star_vector(a: &FiniteIModalRirig, left: &[Elem], right: &[Elem]) -> Vec<Elem> {
    left.iter().zip(right).map(|(&x, &y)| a.star(x, y)).collect()
}

fn pairs(n: usize, k: usize) -> impl Iterator<Item = (Vec<Elem>, Vec<Elem>)> {
    tuples(n, k).flat_map(move |l| tuples(n, k).map(move |r| (l.clone(), r)))
}

/// Per-algebra data shared by repeated compatibility checks.
pub struct CompatContext<'a> {
    a: &'a FiniteIModalRirig,
    congruences: Option<Vec<Congruence>>,
    products: ProductTable,
    unbounded: ProductTable,
    bound: Option<usize>,
    orbits: Vec<Vec<Elem>>,
}

impl<'a> CompatContext<'a> {
    /// `block_len_bound = None` searches all blocks (exact).
    pub fn new(a: &'a FiniteIModalRirig, block_len_bound: Option<usize>, congruence_cap: usize) -> Self {
        let (products, unbounded) = product_table(a, block_len_bound);
        CompatContext {
            a,
            congruences: all_congruences_direct(a, congruence_cap).ok(),
            products,
            unbounded,
            bound: block_len_bound,
            orbits: a.elements().map(|c| a.lambda_orbit(c)).collect(),
        }
    }

    pub fn algebra(&self) -> &FiniteIModalRirig {
        self.a
    }

    pub fn direct(&self, f: &FiniteFunction) -> Result<CompatReport> {
        check_function(self.a, f)?;
        let congruences = self.congruences.as_ref().ok_or(Error::SizeCap {
            what: "direct congruence enumeration",
            n: self.a.size(),
            cap: crate::congruence::DIRECT_CONGRUENCE_CAP,
        })?;
        for theta in congruences {
            for (l, r) in pairs(self.a.size(), f.arity()) {
                let related = l.iter().zip(&r).all(|(&x, &y)| theta.related(x, y));
                if related && !theta.related(f.eval(&l), f.eval(&r)) {
                    return Ok(CompatReport::fail(&l, &r, Some(theta.clone())));
                }
            }
        }
        Ok(CompatReport {
            verdict: Verdict::Compatible,
            witnesses: Vec::new(),
            failure: None,
        })
    }

    pub fn blocks(&self, f: &FiniteFunction) -> Result<CompatReport> {
        check_function(self.a, f)?;
        let mut witnesses = Vec::new();
        let mut undecided = None;
        for (l, r) in pairs(self.a.size(), f.arity()) {
            let cs = star_vector(self.a, &l, &r);
            let target = self.a.star(f.eval(&l), f.eval(&r));
            match slot_search(self.a, &self.products, &cs, target) {
                Some(blocks) => witnesses.push(PairWitness {
                    left: l,
                    right: r,
                    witness: Witness::Blocks(blocks),
                }),
                None => {
                    if self.bound.is_none() || slot_search(self.a, &self.unbounded, &cs, target).is_none() {
                        return Ok(CompatReport::fail(&l, &r, None));
                    }
                    undecided.get_or_insert((l, r));
                }
            }
        }
        Ok(match undecided {
            Some((l, r)) => CompatReport {
                verdict: Verdict::Undecided,
                witnesses,
                failure: Some(CompatFailure {
                    congruence: None,
                    left: l,
                    right: r,
                }),
            },
            None => CompatReport {
                verdict: Verdict::Compatible,
                witnesses,
                failure: None,
            },
        })
    }

    /// Least `(l, p)` with `∏ λ^l(cᵢ)^p ≤ target`, `l` up to stabilization.
    fn lambda_exponents(&self, cs: &[Elem], target: Elem) -> Option<(usize, usize)> {
        let a = self.a;
        let depth = cs.iter().map(|&c| self.orbits[c].len()).max().unwrap_or(1);
        for l in 0..depth {
            let base = a.product_of(cs.iter().map(|&c| {
                let orbit = &self.orbits[c];
                orbit[l.min(orbit.len() - 1)]
            }));
            let mut power = base;
            for p in 1..=a.size() {
                if a.leq(power, target) {
                    return Some((l, p));
                }
                power = a.prod(power, base);
            }
        }
        None
    }

    pub fn lambda(&self, f: &FiniteFunction) -> Result<CompatReport> {
        check_function(self.a, f)?;
        let mut witnesses = Vec::new();
        for (l, r) in pairs(self.a.size(), f.arity()) {
            let cs = star_vector(self.a, &l, &r);
            let target = self.a.star(f.eval(&l), f.eval(&r));
            match self.lambda_exponents(&cs, target) {
                Some((el, p)) => witnesses.push(PairWitness {
                    left: l,
                    right: r,
                    witness: Witness::Lambda { l: el, p },
                }),
                None => return Ok(CompatReport::fail(&l, &r, None)),
            }
        }
        Ok(CompatReport {
            verdict: Verdict::Compatible,
            witnesses,
            failure: None,
        })
    }

    /// Slot-wise reduction: `f` is compatible iff every unary section
    /// `x ↦ f(a₁,…,x,…,a_k)` is. Each section is checked with the block
    /// route; the first failing pair differs in one slot only.
    pub fn slotwise(&self, f: &FiniteFunction) -> Result<CompatReport> {
        check_function(self.a, f)?;
        let n = self.a.size();
        for slot in 0..f.arity() {
            for anchor in tuples(n, f.arity()) {
                let section = FiniteFunction::from_fn(n, 1, |x| {
                    let mut t = anchor.clone();
                    t[slot] = x[0];
                    f.eval(&t)
                });
                let report = self.blocks(&section)?;
                if report.verdict != Verdict::Compatible {
                    let fail = report.failure.expect("non-compatible reports carry a pair");
                    let mut l = anchor.clone();
                    let mut r = anchor.clone();
                    l[slot] = fail.left[0];
                    r[slot] = fail.right[0];
                    return Ok(CompatReport {
                        verdict: report.verdict,
                        witnesses: Vec::new(),
                        failure: Some(CompatFailure {
                            congruence: None,
                            left: l,
                            right: r,
                        }),
                    });
                }
            }
        }
        Ok(CompatReport {
            verdict: Verdict::Compatible,
            witnesses: Vec::new(),
            failure: None,
        })
    }
}

/// Definitional check over every congruence (needs `n` within the direct
/// congruence cap).
pub fn is_compatible_direct(a: &FiniteIModalRirig, f: &FiniteFunction) -> Result<CompatReport> {
    CompatContext::new(a, None, crate::congruence::DIRECT_CONGRUENCE_CAP).direct(f)
}

pub fn compat_witness_unary(a: &FiniteIModalRirig, f: &FiniteFunction, block_len_bound: Option<usize>) -> Result<CompatReport> {
    if f.arity() != 1 {
        return Err(Error::InvalidArgument(format!("expected a unary function, got arity {}", f.arity())));
    }
    compat_witness_kary(a, f, block_len_bound)
}

pub fn compat_witness_kary(a: &FiniteIModalRirig, f: &FiniteFunction, block_len_bound: Option<usize>) -> Result<CompatReport> {
    CompatContext::new(a, block_len_bound, 0).blocks(f)
}

pub fn compat_witness_lambda(a: &FiniteIModalRirig, f: &FiniteFunction) -> Result<CompatReport> {
    CompatContext::new(a, None, 0).lambda(f)
}

#[derive(Clone, Debug, Serialize)]
pub struct LafAnchor {
    pub anchor: Vec<Elem>,
    /// `(l, p)`: componentwise maximum over the points of the least valid
    /// exponents.
    pub exponent: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct LafPoint {
    pub point: Vec<Elem>,
    pub value: Elem,
    /// `T_x⃗`, one term per anchor in anchor order.
    pub terms: Vec<Elem>,
    pub join: Elem,
}

#[derive(Clone, Debug, Serialize)]
pub struct LafReport {
    pub anchors: Vec<LafAnchor>,
    pub points: Vec<LafPoint>,
    pub verified: bool,
}

/// `f(x⃗) = ⋁ { (∏ λ^l(aᵢ∗xᵢ))^p · f(ā) : ā ∈ B }` for every `x⃗ ∈ B`, with
/// `(l, p)` fixed per anchor.
pub fn laf_representation(a: &FiniteIModalRirig, f: &FiniteFunction, points: &[Vec<Elem>]) -> Result<LafReport> {
    check_function(a, f)?;
    if points.is_empty() {
        return Err(Error::InvalidArgument("the point set B must be nonempty".into()));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != f.arity() || p.iter().any(|&x| x >= a.size())) {
        return Err(Error::InvalidArgument(format!("point {bad:?} is not a {}-tuple of elements", f.arity())));
    }
    let ctx = CompatContext::new(a, None, 0);
    if !ctx.lambda(f)?.compatible() {
        return Err(Error::NotCompatible);
    }
    let anchors: Vec<LafAnchor> = points
        .iter()
        .map(|anchor| {
            let exponent = points.iter().fold((0, 1), |(ml, mp), x| {
                let cs = star_vector(a, anchor, x);
                let target = a.star(f.eval(anchor), f.eval(x));
                let (l, p) = ctx
                    .lambda_exponents(&cs, target)
                    .expect("compatible functions have witnesses");
                (ml.max(l), mp.max(p))
            });
            LafAnchor {
                anchor: anchor.clone(),
                exponent,
            }
        })
        .collect();
    let pts: Vec<LafPoint> = points
        .iter()
        .map(|x| {
            let terms: Vec<Elem> = anchors
                .iter()
                .map(|an| {
                    let (l, p) = an.exponent;
                    let base = a.product_of(an.anchor.iter().zip(x).map(|(&ai, &xi)| a.lambda_iter(l, a.star(ai, xi))));
                    a.prod(a.power(base, p), f.eval(&an.anchor))
                })
                .collect();
            LafPoint {
                point: x.clone(),
                value: f.eval(x),
                join: a.join_of(terms.iter().copied()),
                terms,
            }
        })
        .collect();
    let verified = pts.iter().all(|p| p.join == p.value);
    Ok(LafReport {
        anchors,
        points: pts,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn unary(table: [Elem; 3]) -> FiniteFunction {
        FiniteFunction::new(3, 1, table.to_vec()).unwrap()
    }

    #[test]
    fn function_shape_errors() {
        assert!(FiniteFunction::new(3, 1, vec![0, 1]).is_err());
        assert!(FiniteFunction::new(3, 1, vec![0, 1, 3]).is_err());
        assert!(FiniteFunction::new(3, 0, vec![0]).is_err());
        let f = FiniteFunction::from_fn(3, 2, |t| t[1]);
        assert_eq!(f.eval(&[2, 1]), 1);
        assert_eq!(tuples(2, 2).collect::<Vec<_>>(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn direct_examples() {
        let a = fixtures::g3_id();
        assert!(is_compatible_direct(&a, &unary([0, 2, 2])).unwrap().compatible());
        let r = is_compatible_direct(&a, &unary([0, 0, 2])).unwrap();
        assert_eq!(r.verdict, Verdict::NotCompatible);
        let fail = r.failure.unwrap();
        assert_eq!(fail.congruence.unwrap().classes(), vec![vec![0], vec![1, 2]]);
        assert_eq!((fail.left, fail.right), (vec![1], vec![2]));
        for c in 0..3 {
            assert!(is_compatible_direct(&a, &FiniteFunction::constant(3, 1, c)).unwrap().compatible());
        }
    }

    #[test]
    fn unary_witness_examples() {
        let a = fixtures::g3_id();
        let r = compat_witness_unary(&a, &unary([0, 2, 2]), None).unwrap();
        assert!(r.compatible());
        for w in &r.witnesses {
            let Witness::Blocks(slots) = &w.witness else { panic!() };
            assert!(slots[0].iter().all(|b| b.is_empty()));
        }
        let r = compat_witness_unary(&a, &unary([0, 0, 2]), Some(5)).unwrap();
        assert_eq!(r.verdict, Verdict::NotCompatible);
        let fail = r.failure.unwrap();
        assert_eq!((fail.left, fail.right), (vec![1], vec![2]));
        assert!(compat_witness_unary(&a, &FiniteFunction::projection(3, 1, 0), Some(0)).unwrap().compatible());
    }

    #[test]
    fn bounded_search_can_be_undecided() {
        let a = fixtures::g3_delta();
        // Needs Δ(a) = 0 to relate a and 1 to 0 and 1.
        let f = unary([0, 0, 2]);
        assert_eq!(compat_witness_unary(&a, &f, Some(0)).unwrap().verdict, Verdict::Undecided);
        assert_eq!(compat_witness_unary(&a, &f, Some(1)).unwrap().verdict, Verdict::Compatible);
    }

    #[test]
    fn kary_examples() {
        let a = fixtures::g3_id();
        let mul = FiniteFunction::from_fn(3, 2, |t| a.prod(t[0], t[1]));
        let r = compat_witness_kary(&a, &mul, None).unwrap();
        assert!(r.compatible());
        assert!(r.witnesses.iter().all(|w| match &w.witness {
            Witness::Blocks(s) => s.iter().flatten().all(|b| b.is_empty()),
            _ => false,
        }));
        assert!(compat_witness_kary(&a, &FiniteFunction::projection(3, 2, 0), None).unwrap().compatible());
        let broken = FiniteFunction::from_fn(3, 2, |t| if t[0] == 1 { 0 } else { t[0] });
        let ctx = CompatContext::new(&a, None, 5);
        assert_eq!(ctx.blocks(&broken).unwrap().verdict, Verdict::NotCompatible);
        assert_eq!(ctx.direct(&broken).unwrap().verdict, Verdict::NotCompatible);
        assert_eq!(ctx.slotwise(&broken).unwrap().verdict, Verdict::NotCompatible);
    }

    #[test]
    fn lambda_examples() {
        let f = unary([0, 2, 2]);
        let r = compat_witness_lambda(&fixtures::g3_id(), &f).unwrap();
        assert!(r.witnesses.iter().all(|w| matches!(w.witness, Witness::Lambda { l: 0, .. })));
        assert!(compat_witness_lambda(&fixtures::g3_delta(), &f).unwrap().compatible());
        let id = FiniteFunction::projection(3, 1, 0);
        let r = compat_witness_lambda(&fixtures::g3_delta(), &id).unwrap();
        assert!(r.witnesses.iter().all(|w| w.witness == Witness::Lambda { l: 0, p: 1 }));
    }

    #[test]
    fn laf_examples() {
        let a = fixtures::g3_id();
        let all: Vec<Vec<Elem>> = (0..3).map(|x| vec![x]).collect();
        for f in [FiniteFunction::projection(3, 1, 0), unary([0, 2, 2]), FiniteFunction::constant(3, 1, 2)] {
            let r = laf_representation(&a, &f, &all).unwrap();
            assert!(r.verified);
        }
        let r = laf_representation(&a, &FiniteFunction::constant(3, 1, 2), &all).unwrap();
        assert!(r.points.iter().all(|p| p.terms.contains(&2)));
        assert!(matches!(laf_representation(&a, &unary([0, 0, 2]), &all), Err(Error::NotCompatible)));
    }

    #[test]
    fn laf_needs_powers_on_l3() {
        let a = fixtures::l3_top();
        let all: Vec<Vec<Elem>> = (0..3).map(|x| vec![x]).collect();
        let f = unary([0, 0, 2]);
        assert!(is_compatible_direct(&a, &f).unwrap().compatible());
        let r = laf_representation(&a, &f, &all).unwrap();
        assert!(r.verified);
        assert!(r.anchors.iter().any(|an| an.exponent.1 == 2));
    }
}
