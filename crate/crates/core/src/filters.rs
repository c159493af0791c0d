//! I-filters and three independent routes to the filter generated by a set.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::Elem;
use crate::modal::FiniteIModalRirig;
use crate::mask::SubsetMask;

/// A nonempty up-set closed under `·` and every modal operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IFilter(SubsetMask);

impl IFilter {
    /// Wraps `mask` if it is an I-filter of `a`.
    pub fn new(a: &FiniteIModalRirig, mask: SubsetMask) -> Option<Self> {
        is_ifilter(a, mask).then_some(IFilter(mask))
    }

    pub fn mask(self) -> SubsetMask {
        self.0
    }

    pub fn contains(self, e: Elem) -> bool {
        self.0.contains(e)
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn to_vec(self) -> Vec<Elem> {
        self.0.to_vec()
    }

    pub fn is_trivial(self, a: &FiniteIModalRirig) -> bool {
        self.0 == SubsetMask::singleton(a.size(), a.one())
    }
}

/// `{b : b ≥ a}`.
pub fn principal_up(a: &FiniteIModalRirig, x: Elem) -> SubsetMask {
    SubsetMask::from_elems(a.size(), a.elements().filter(|&b| a.leq(x, b)))
}

pub fn up_set(a: &FiniteIModalRirig, s: SubsetMask) -> SubsetMask {
    s.iter()
        .fold(SubsetMask::empty(a.size()), |acc, x| acc.union(principal_up(a, x)))
}

pub fn is_ifilter(a: &FiniteIModalRirig, s: SubsetMask) -> bool {
    if s.is_empty() || up_set(a, s) != s {
        return false;
    }
    s.iter().all(|x| {
        (0..a.k()).all(|j| s.contains(a.modal(j, x))) && s.iter().all(|y| s.contains(a.prod(x, y)))
    })
}

/// Least I-filter containing `x`, by closure under up-sets, products and
/// modal images starting from `x ∪ {1}`.
pub fn generate_filter(a: &FiniteIModalRirig, x: SubsetMask) -> IFilter {
    let mut f = x;
    f.insert(a.one());
    loop {
        let mut next = up_set(a, f);
        for p in f.iter() {
            for j in 0..a.k() {
                next.insert(a.modal(j, p));
            }
            for q in f.iter() {
                next.insert(a.prod(p, q));
            }
        }
        if next == f {
            return IFilter(f);
        }
        f = next;
    }
}

pub fn generate_filter_of(a: &FiniteIModalRirig, elems: impl IntoIterator<Item = Elem>) -> IFilter {
    generate_filter(a, SubsetMask::from_elems(a.size(), elems))
}

/// Raw generator sets of the block characterization at given bounds: the
/// block images `M(x)` with `|M| ≤ block_len` and the products of at most
/// `product_len` of them (the empty product is 1).
fn block_generators(
    a: &FiniteIModalRirig,
    x: SubsetMask,
    block_len: usize,
    product_len: usize,
) -> (SubsetMask, SubsetMask) {
    let mut images = x;
    let mut layer = x;
    for _ in 0..block_len {
        let mut next = SubsetMask::empty(a.size());
        for v in layer.iter() {
            for j in 0..a.k() {
                next.insert(a.modal(j, v));
            }
        }
        images = images.union(next);
        layer = next;
    }
    let mut products = SubsetMask::singleton(a.size(), a.one());
    for _ in 0..product_len {
        let mut next = products;
        for p in products.iter() {
            for v in images.iter() {
                next.insert(a.prod(p, v));
            }
        }
        products = next;
    }
    (images, products)
}

/// `↑{M₁(x₁)⋯Mₙ(xₙ)}` with `|Mᵢ| ≤ block_len` and `n ≤ product_len`.
pub fn generate_filter_blocks_oracle(
    a: &FiniteIModalRirig,
    x: SubsetMask,
    block_len: usize,
    product_len: usize,
) -> SubsetMask {
    up_set(a, block_generators(a, x, block_len, product_len).1)
}

/// The block oracle at the first round `r` where raising both bounds from
/// `r` to `r + 1` changes neither the block images nor the products.
/// Returns the filter and `r`.
pub fn generate_filter_blocks_stabilized(a: &FiniteIModalRirig, x: SubsetMask) -> (SubsetMask, usize) {
    let mut round = 0;
    let mut current = block_generators(a, x, 0, 0);
    loop {
        let next = block_generators(a, x, round + 1, round + 1);
        if next == current {
            return (up_set(a, current.1), round);
        }
        current = next;
        round += 1;
    }
}

fn product_closure(a: &FiniteIModalRirig, gens: SubsetMask) -> SubsetMask {
    let mut closed = gens;
    closed.insert(a.one());
    loop {
        let mut next = closed;
        for p in closed.iter() {
            for q in gens.iter() {
                next.insert(a.prod(p, q));
            }
        }
        if next == closed {
            return closed;
        }
        closed = next;
    }
}

/// `↑{λ^l(x₁)⋯λ^l(xₙ)}` over every shared exponent `l` up to stabilization.
pub fn generate_filter_lambda(a: &FiniteIModalRirig, x: SubsetMask) -> IFilter {
    let mut level = x;
    let mut acc = SubsetMask::empty(a.size());
    loop {
        acc = acc.union(product_closure(a, level));
        let next = SubsetMask::from_elems(a.size(), level.iter().map(|v| a.lambda(v)));
        if next == level {
            return IFilter(up_set(a, acc));
        }
        level = next;
    }
}

/// All I-filters, sorted by cardinality then mask.
///
/// Every filter is the join of the principal filters of its elements, so the
/// principal filters are closed under pairwise joins.
pub fn all_ifilters(a: &FiniteIModalRirig) -> Vec<IFilter> {
    let mut found: BTreeSet<SubsetMask> = BTreeSet::new();
    found.insert(generate_filter(a, SubsetMask::empty(a.size())).mask());
    for x in a.elements() {
        found.insert(generate_filter_of(a, [x]).mask());
    }
    loop {
        let current: Vec<SubsetMask> = found.iter().copied().collect();
        let mut grew = false;
        for (i, &f) in current.iter().enumerate() {
            for &g in &current[i + 1..] {
                let joined = generate_filter(a, f.union(g)).mask();
                grew |= found.insert(joined);
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<IFilter> = found.into_iter().map(IFilter).collect();
    out.sort_by_key(|f| (f.len(), f.mask().bits()));
    out
}

/// Brute-force filter list by scanning every subset; an oracle for
/// [`all_ifilters`].
pub fn all_ifilters_by_scan(a: &FiniteIModalRirig) -> Vec<IFilter> {
    let mut out: Vec<IFilter> = SubsetMask::all_subsets(a.size())
        .filter(|&s| is_ifilter(a, s))
        .map(IFilter)
        .collect();
    out.sort_by_key(|f| (f.len(), f.mask().bits()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(elems: &[Elem]) -> SubsetMask {
        SubsetMask::from_elems(3, elems.iter().copied())
    }

    const A: Elem = 1;

    #[test]
    fn is_ifilter_examples() {
        assert!(is_ifilter(&fixtures::g3_id(), set(&[2])));
        assert!(!is_ifilter(&fixtures::g3_delta(), set(&[A, 2])));
        assert!(is_ifilter(&fixtures::g3_delta(), set(&[0, A, 2])));
        assert!(!is_ifilter(&fixtures::g3_id(), set(&[])));
    }

    #[test]
    fn generate_filter_examples() {
        assert_eq!(generate_filter(&fixtures::g3_delta(), set(&[A])).to_vec(), vec![0, 1, 2]);
        assert_eq!(generate_filter(&fixtures::g3_id(), set(&[A])).to_vec(), vec![1, 2]);
        let a = fixtures::g3_delta();
        assert_eq!(generate_filter(&a, set(&[])), generate_filter(&a, set(&[2])));
        // Ł3: a·a = 0 puts 0 in the filter of a.
        let l3 = fixtures::l3_top();
        assert_eq!(generate_filter(&l3, set(&[A])).len(), 3);
    }

    #[test]
    fn blocks_oracle_examples() {
        let a = fixtures::g3_delta();
        assert_eq!(generate_filter_blocks_oracle(&a, set(&[A]), 0, 1), set(&[A, 2]));
        assert_eq!(generate_filter_blocks_oracle(&a, set(&[A]), 1, 1), set(&[0, A, 2]));
        for (b, p) in [(0, 0), (2, 3), (5, 1)] {
            assert_eq!(generate_filter_blocks_oracle(&a, set(&[2]), b, p), set(&[2]));
        }
        let (f, round) = generate_filter_blocks_stabilized(&a, set(&[A]));
        assert_eq!(f, set(&[0, A, 2]));
        assert!(round >= 1);
    }

    #[test]
    fn lambda_route_examples() {
        assert_eq!(generate_filter_lambda(&fixtures::g3_delta(), set(&[A])).to_vec(), vec![0, 1, 2]);
        assert_eq!(generate_filter_lambda(&fixtures::g3_id(), set(&[A])).to_vec(), vec![1, 2]);
        let b2 = fixtures::bare_b2();
        assert_eq!(
            generate_filter_lambda(&b2, SubsetMask::singleton(2, 0)).to_vec(),
            vec![0, 1]
        );
    }

    #[test]
    fn all_ifilters_examples() {
        let show = |a: &FiniteIModalRirig| {
            all_ifilters(a).iter().map(|f| f.to_vec()).collect::<Vec<_>>()
        };
        assert_eq!(show(&fixtures::g3_id()), vec![vec![2], vec![1, 2], vec![0, 1, 2]]);
        assert_eq!(show(&fixtures::g3_delta()), vec![vec![2], vec![0, 1, 2]]);
        assert_eq!(show(&fixtures::bare_b2()), vec![vec![1], vec![0, 1]]);
        let sq = fixtures::b2_squared_id();
        assert_eq!(all_ifilters(&sq), all_ifilters_by_scan(&sq));
        assert_eq!(all_ifilters(&sq).len(), 4);
    }
}
