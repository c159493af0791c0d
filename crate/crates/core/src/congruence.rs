//! Congruences, their correspondence with I-filters, subuniverses and the
//! congruence extension property.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Elem;
use crate::error::{Error, Result};
use crate::filters::{all_ifilters, generate_filter_of, is_ifilter, IFilter};
use crate::mask::SubsetMask;
use crate::modal::FiniteIModalRirig;

/// Default size cap of the direct congruence enumeration.
pub const DIRECT_CONGRUENCE_CAP: usize = 5;
/// Default size cap of the subuniverse scan.
pub const SUBUNIVERSE_CAP: usize = 6;

/// A partition of the universe, stored as class identifiers numbered by
/// first occurrence so equal partitions compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    class_of: Vec<usize>,
}

impl Congruence {
    /// Normalizes arbitrary class labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut seen: Vec<usize> = Vec::new();
        let class_of = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(i) => i,
                None => {
                    seen.push(*l);
                    seen.len() - 1
                }
            })
            .collect();
        Congruence { class_of }
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            class_of: (0..n).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Congruence {
            class_of: vec![0; n],
        }
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn size(&self) -> usize {
        self.class_of.len()
    }

    pub fn related(&self, x: Elem, y: Elem) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn num_classes(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn classes(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn class_mask(&self, x: Elem) -> SubsetMask {
        SubsetMask::from_elems(self.size(), (0..self.size()).filter(|&y| self.related(x, y)))
    }

    /// Inclusion of relations.
    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        (0..self.size()).all(|x| (0..self.size()).all(|y| !self.related(x, y) || other.related(x, y)))
    }

    /// Restriction to the elements listed in `embedding`, in the subalgebra's
    /// own indices.
    pub fn restrict(&self, embedding: &[Elem]) -> Congruence {
        let labels: Vec<usize> = embedding.iter().map(|&e| self.class_of[e]).collect();
        Congruence::from_labels(&labels)
    }
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.classes()).finish()
    }
}

/// First operation the partition fails to respect, if any.
pub fn congruence_violation(a: &FiniteIModalRirig, theta: &Congruence) -> Option<String> {
    if theta.size() != a.size() {
        return Some(format!("partition has {} entries, algebra has {}", theta.size(), a.size()));
    }
    let n = a.size();
    for x in 0..n {
        for y in 0..n {
            if !theta.related(x, y) {
                continue;
            }
            for j in 0..a.k() {
                if !theta.related(a.modal(j, x), a.modal(j, y)) {
                    return Some(format!("{} breaks ({x},{y})", a.signature().names()[j]));
                }
            }
            for z in 0..n {
                let ops: [(&str, fn(&FiniteIModalRirig, Elem, Elem) -> Elem); 3] =
                    [("join", |a, p, q| a.join(p, q)), ("prod", |a, p, q| a.prod(p, q)), ("imp", |a, p, q| a.imp(p, q))];
                for (name, op) in ops {
                    if !theta.related(op(a, x, z), op(a, y, z)) || !theta.related(op(a, z, x), op(a, z, y)) {
                        return Some(format!("{name} breaks ({x},{y}) with {z}"));
                    }
                }
            }
        }
    }
    None
}

pub fn is_congruence(a: &FiniteIModalRirig, theta: &Congruence) -> bool {
    congruence_violation(a, theta).is_none()
}

/// `θ_F`: `x ~ y` iff `x ∗ y ∈ F`.
pub fn theta_from_filter(a: &FiniteIModalRirig, f: SubsetMask) -> Result<Congruence> {
    if !is_ifilter(a, f) {
        return Err(Error::NotAFilter);
    }
    let n = a.size();
    let mut labels = vec![usize::MAX; n];
    for x in 0..n {
        if labels[x] == usize::MAX {
            for y in x..n {
                if f.contains(a.star(x, y)) {
                    labels[y] = x;
                }
            }
        }
    }
    Ok(Congruence::from_labels(&labels))
}

/// `F_θ = 1/θ`.
pub fn filter_from_theta(a: &FiniteIModalRirig, theta: &Congruence) -> Result<IFilter> {
    if let Some(v) = congruence_violation(a, theta) {
        return Err(Error::NotACongruence(v));
    }
    IFilter::new(a, theta.class_mask(a.one())).ok_or(Error::NotAFilter)
}

/// Restricted-growth strings of length `n`, i.e. every set partition once.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = if prefix.is_empty() { 0 } else { max + 1 };
        for c in 0..=next {
            prefix.push(c);
            go(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

/// Every compatible partition, by scanning all set partitions. Sorted by
/// number of classes descending (identity first), then class array.
pub fn all_congruences_direct(a: &FiniteIModalRirig, cap: usize) -> Result<Vec<Congruence>> {
    if a.size() > cap {
        return Err(Error::SizeCap {
            what: "direct congruence enumeration",
            n: a.size(),
            cap,
        });
    }
    let mut out: Vec<Congruence> = partitions(a.size())
        .into_iter()
        .map(|p| Congruence { class_of: p })
        .filter(|t| is_congruence(a, t))
        .collect();
    out.sort_by(|x, y| y.num_classes().cmp(&x.num_classes()).then(x.cmp(y)));
    Ok(out)
}

/// Congruences through the filter correspondence, in filter order.
pub fn all_congruences(a: &FiniteIModalRirig) -> Vec<Congruence> {
    all_ifilters(a)
        .into_iter()
        .map(|f| theta_from_filter(a, f.mask()).expect("all_ifilters returns filters"))
        .collect()
}

/// `Cg(x, y) = θ_{Fg(x∗y)}`.
pub fn cg(a: &FiniteIModalRirig, x: Elem, y: Elem) -> Congruence {
    let f = generate_filter_of(a, [a.star(x, y)]);
    theta_from_filter(a, f.mask()).expect("generated filters are filters")
}

/// Least congruence containing `pairs`, by union-find closure under every
/// operation. Independent of the filter correspondence.
pub fn cg_direct(a: &FiniteIModalRirig, pairs: &[(Elem, Elem)]) -> Congruence {
    let n = a.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let union = |parent: &mut Vec<usize>, x: usize, y: usize| -> bool {
        let (rx, ry) = (find(parent, x), find(parent, y));
        if rx == ry {
            return false;
        }
        parent[rx.max(ry)] = rx.min(ry);
        true
    };
    for &(x, y) in pairs {
        union(&mut parent, x, y);
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in x + 1..n {
                if find(&mut parent, x) != find(&mut parent, y) {
                    continue;
                }
                for j in 0..a.k() {
                    changed |= union(&mut parent, a.modal(j, x), a.modal(j, y));
                }
                for z in 0..n {
                    changed |= union(&mut parent, a.join(x, z), a.join(y, z));
                    changed |= union(&mut parent, a.prod(x, z), a.prod(y, z));
                    changed |= union(&mut parent, a.imp(x, z), a.imp(y, z));
                    changed |= union(&mut parent, a.imp(z, x), a.imp(z, y));
                }
            }
        }
        if !changed {
            break;
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    Congruence::from_labels(&labels)
}

/// Join in the congruence lattice: the closure of the union.
pub fn congruence_join(a: &FiniteIModalRirig, s: &Congruence, t: &Congruence) -> Congruence {
    let pairs: Vec<(Elem, Elem)> = (0..a.size())
        .flat_map(|x| (0..a.size()).map(move |y| (x, y)))
        .filter(|&(x, y)| s.related(x, y) || t.related(x, y))
        .collect();
    cg_direct(a, &pairs)
}

/// Subsets containing 0 and 1 closed under every operation, in mask order.
pub fn subuniverses(a: &FiniteIModalRirig, cap: usize) -> Result<Vec<SubsetMask>> {
    if a.size() > cap {
        return Err(Error::SizeCap {
            what: "subuniverse scan",
            n: a.size(),
            cap,
        });
    }
    let base = SubsetMask::from_elems(a.size(), [a.zero(), a.one()]);
    let mut out: Vec<SubsetMask> = (0..1u64 << a.size())
        .into_par_iter()
        .map(|bits| SubsetMask::from_bits(a.size(), bits))
        .filter(|&s| base.is_subset(s) && a.is_subuniverse(s))
        .collect();
    out.sort_by_key(|s| s.bits());
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CepCounterexample {
    pub subuniverse: SubsetMask,
    /// Congruence of the subalgebra, in the subalgebra's own indices.
    pub theta: Congruence,
}

/// For each subuniverse `B` and congruence `θ` of `B`, checks that
/// `Cg^A(θ) ∩ B² = θ`. Any extension of `θ` contains `Cg^A(θ)`, so this is
/// exactly the existence of an extension.
pub fn cep_check(a: &FiniteIModalRirig, cap: usize) -> Result<Option<CepCounterexample>> {
    for sub in subuniverses(a, cap)? {
        let (b, embedding) = a.subalgebra(sub)?;
        for theta in all_congruences(&b) {
            let pairs: Vec<(Elem, Elem)> = (0..b.size())
                .flat_map(|x| (0..b.size()).map(move |y| (x, y)))
                .filter(|&(x, y)| theta.related(x, y))
                .map(|(x, y)| (embedding[x], embedding[y]))
                .collect();
            let xi = cg_direct(a, &pairs);
            if xi.restrict(&embedding) != theta {
                return Ok(Some(CepCounterexample { subuniverse: sub, theta }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(n: usize, e: &[Elem]) -> SubsetMask {
        SubsetMask::from_elems(n, e.iter().copied())
    }

    #[test]
    fn partitions_are_bell_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn theta_from_filter_examples() {
        let a = fixtures::g3_id();
        assert_eq!(theta_from_filter(&a, set(3, &[1, 2])).unwrap().classes(), vec![vec![0], vec![1, 2]]);
        assert_eq!(theta_from_filter(&a, set(3, &[2])).unwrap(), Congruence::identity(3));
        assert_eq!(theta_from_filter(&a, SubsetMask::full(3)).unwrap(), Congruence::full(3));
        assert!(matches!(theta_from_filter(&fixtures::g3_delta(), set(3, &[1, 2])), Err(Error::NotAFilter)));
    }

    #[test]
    fn filter_from_theta_examples() {
        let a = fixtures::g3_id();
        assert_eq!(filter_from_theta(&a, &Congruence::identity(3)).unwrap().to_vec(), vec![2]);
        assert_eq!(filter_from_theta(&a, &Congruence::full(3)).unwrap().to_vec(), vec![0, 1, 2]);
        let t = Congruence::from_labels(&[0, 1, 1]);
        assert_eq!(filter_from_theta(&a, &t).unwrap().to_vec(), vec![1, 2]);
        assert!(matches!(
            filter_from_theta(&fixtures::g3_delta(), &t),
            Err(Error::NotACongruence(_))
        ));
    }

    #[test]
    fn direct_congruence_counts() {
        assert_eq!(all_congruences_direct(&fixtures::g3_id(), 5).unwrap().len(), 3);
        assert_eq!(all_congruences_direct(&fixtures::g3_delta(), 5).unwrap().len(), 2);
        assert_eq!(all_congruences_direct(&fixtures::bare_b2(), 5).unwrap().len(), 2);
        let sq = fixtures::b2_squared_id();
        assert!(matches!(all_congruences_direct(&sq, 3), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn cg_examples() {
        let a = fixtures::g3_id();
        assert_eq!(cg(&a, 1, 2).classes(), vec![vec![0], vec![1, 2]]);
        assert_eq!(cg(&a, 1, 1), Congruence::identity(3));
        assert_eq!(cg(&fixtures::g3_delta(), 1, 2), Congruence::full(3));
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(cg(&a, x, y), cg_direct(&a, &[(x, y)]));
            }
        }
    }

    #[test]
    fn subuniverse_examples() {
        let show = |a: &FiniteIModalRirig| subuniverses(a, 6).unwrap().iter().map(|s| s.to_vec()).collect::<Vec<_>>();
        assert_eq!(show(&fixtures::g3_id()), vec![vec![0, 2], vec![0, 1, 2]]);
        assert_eq!(show(&fixtures::bare_b2()), vec![vec![0, 1]]);
        assert_eq!(show(&fixtures::g3_delta()), vec![vec![0, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn cep_examples() {
        for a in [fixtures::g3_id(), fixtures::bare_b2(), fixtures::g3_delta(), fixtures::b2_squared_id()] {
            assert!(cep_check(&a, 6).unwrap().is_none());
        }
    }

    #[test]
    fn join_of_principal_congruences() {
        let sq = fixtures::b2_squared_id();
        let left = cg(&sq, 1, 3);
        let right = cg(&sq, 2, 3);
        assert_eq!(congruence_join(&sq, &left, &right), Congruence::full(4));
    }
}
