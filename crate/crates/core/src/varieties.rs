//! Equations, the contractive and chain-generated subvarieties, and the
//! join-splitting block construction.

use serde::Serialize;

use crate::algebra::{first_failure, Elem};
use crate::error::{Error, Result};
use crate::filters::generate_filter_of;
use crate::modal::{FiniteIModalRirig, IBlock};
use crate::term::Equation;

/// Default cap on the number of valuations `holds` will scan.
pub const VALUATION_CAP: usize = 256;

/// A valuation as `(variable index, value)` pairs in variable order.
pub type Valuation = Vec<(u32, Elem)>;

/// Exhaustive check of `eq` over every valuation of its variables. Returns
/// the first failing valuation in lexicographic order (lowest variable most
/// significant), or `None` when the equation holds.
pub fn holds(a: &FiniteIModalRirig, eq: &Equation, cap: usize) -> Result<Option<Valuation>> {
    let vars: Vec<u32> = eq.vars().into_iter().collect();
    let total = (a.size() as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::InvalidArgument(format!(
            "{} variables over {} elements need {total} valuations, above the cap of {cap}",
            vars.len(),
            a.size()
        )));
    }
    let lhs = eq.lhs.compile(a.signature())?;
    let rhs = eq.rhs.compile(a.signature())?;
    let width = vars.last().map_or(0, |v| *v as usize + 1);
    let mut dense = vec![a.zero(); width];
    let found = first_failure(a.size(), vars.len(), |vals| {
        for (v, &x) in vars.iter().zip(vals) {
            dense[*v as usize] = x;
        }
        lhs.eval_unchecked(a, &dense) == rhs.eval_unchecked(a, &dense)
    });
    Ok(found.map(|vals| vars.iter().copied().zip(vals).collect()))
}

/// First `(modal index, x)` with `m(x) ≰ x`.
pub fn contractive_violation(a: &FiniteIModalRirig) -> Option<(usize, Elem)> {
    (0..a.k()).find_map(|j| a.elements().find(|&x| !a.leq(a.modal(j, x), x)).map(|x| (j, x)))
}

pub fn is_contractive(a: &FiniteIModalRirig) -> bool {
    contractive_violation(a).is_none()
}

/// First pair with `(a→b) ∨ (b→a) ≠ 1`.
pub fn prelinearity_violation(a: &FiniteIModalRirig) -> Option<(Elem, Elem)> {
    first_failure(a.size(), 2, |x| a.join(a.imp(x[0], x[1]), a.imp(x[1], x[0])) == a.one()).map(|w| (w[0], w[1]))
}

/// First `(modal index, a, b)` with `m(a∨b) ≰ m(a) ∨ m(b)`.
pub fn cm_violation(a: &FiniteIModalRirig) -> Option<(usize, Elem, Elem)> {
    (0..a.k()).find_map(|j| {
        first_failure(a.size(), 2, |x| {
            a.leq(a.modal(j, a.join(x[0], x[1])), a.join(a.modal(j, x[0]), a.modal(j, x[1])))
        })
        .map(|w| (j, w[0], w[1]))
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RcReport {
    pub contractive: Option<(usize, Elem)>,
    pub prelinear: Option<(Elem, Elem)>,
    pub cm: Option<(usize, Elem, Elem)>,
}

impl RcReport {
    pub fn member(&self) -> bool {
        self.contractive.is_none() && self.prelinear.is_none() && self.cm.is_none()
    }
}

pub fn rc_report(a: &FiniteIModalRirig) -> RcReport {
    RcReport {
        contractive: contractive_violation(a),
        prelinear: prelinearity_violation(a),
        cm: cm_violation(a),
    }
}

/// Contractive, prelinear and every modal satisfies (Cm).
pub fn in_rc(a: &FiniteIModalRirig) -> bool {
    rc_report(a).member()
}

/// First incomparable pair, if any.
pub fn incomparable_pair(a: &FiniteIModalRirig) -> Option<(Elem, Elem)> {
    first_failure(a.size(), 2, |x| a.leq(x[0], x[1]) || a.leq(x[1], x[0])).map(|w| (w[0], w[1]))
}

pub fn is_chain(a: &FiniteIModalRirig) -> bool {
    incomparable_pair(a).is_none()
}

/// A block `Q` with `Q(x∨y) ≤ M(x) ∨ N(y)` in every member of R_C(I).
///
/// Both of length at most one: `ε`, `mmn`, `nn` or `mm`. Otherwise the first
/// letter of `M` (or of `N` once `M` is spent) is peeled off and prepended to
/// the block for the rest; monotonicity, (Cm) and contractivity carry the
/// inequality through.
pub fn join_splitting_block(m: &IBlock, n: &IBlock) -> IBlock {
    match (m.0.as_slice(), n.0.as_slice()) {
        ([], []) => IBlock::empty(),
        ([x], [y]) => IBlock(vec![*x, *x, *y]),
        ([], [y]) => IBlock(vec![*y, *y]),
        ([x], []) => IBlock(vec![*x, *x]),
        ([x, rest @ ..], _) => join_splitting_block(&IBlock(rest.to_vec()), n).prepend(*x),
        ([], [y, rest @ ..]) => join_splitting_block(m, &IBlock(rest.to_vec())).prepend(*y),
    }
}

/// First `(x, y)` with `Q(x∨y) ≰ M(x) ∨ N(y)`.
pub fn join_splitting_violation(
    a: &FiniteIModalRirig,
    q: &IBlock,
    m: &IBlock,
    n: &IBlock,
) -> Option<(Elem, Elem)> {
    first_failure(a.size(), 2, |v| {
        a.leq(
            a.apply_block(q, a.join(v[0], v[1])),
            a.join(a.apply_block(m, v[0]), a.apply_block(n, v[1])),
        )
    })
    .map(|w| (w[0], w[1]))
}

/// First `(m, n, a, b)` with `mn(a∨b) ≰ a ∨ n(b)`.
pub fn two_letter_split_violation(a: &FiniteIModalRirig) -> Option<(usize, usize, Elem, Elem)> {
    for j in 0..a.k() {
        for i in 0..a.k() {
            let q = IBlock(vec![j, i]);
            if let Some(w) = join_splitting_violation(a, &q, &IBlock::empty(), &IBlock::letter(i)) {
                return Some((j, i, w.0, w.1));
            }
        }
    }
    None
}

/// Checks `Fg(a∨b) = Fg(a) ∩ Fg(b)` for all pairs; refuses algebras outside
/// R_C(I). Returns the first failing pair.
pub fn fg_intersection_check(a: &FiniteIModalRirig) -> Result<Option<(Elem, Elem)>> {
    let report = rc_report(a);
    if !report.member() {
        return Err(Error::NotInRc(format!("{report:?}")));
    }
    let principal: Vec<_> = a.elements().map(|x| generate_filter_of(a, [x]).mask()).collect();
    Ok(first_failure(a.size(), 2, |x| {
        principal[a.join(x[0], x[1])] == principal[x[0]].intersection(principal[x[1]])
    })
    .map(|w| (w[0], w[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::modal::{enumerate_blocks, ModalSignature};

    #[test]
    fn holds_examples() {
        let g3 = fixtures::bare_g3();
        assert_eq!(holds(&g3, &Equation::parse("(v0 -> v1) | (v1 -> v0) = 1").unwrap(), 256).unwrap(), None);
        let d = fixtures::g3_delta();
        assert_eq!(holds(&d, &Equation::parse("m1(v0) = v0").unwrap(), 256).unwrap(), Some(vec![(0, 1)]));
        assert_eq!(holds(&d, &Equation::parse("v0 = v0").unwrap(), 256).unwrap(), None);
        let wide = Equation::parse("v0 * v1 * v2 * v3 * v4 * v5 = 0").unwrap();
        assert!(holds(&d, &wide, 256).is_err());
    }

    #[test]
    fn rc_examples() {
        assert!(is_contractive(&fixtures::g3_delta()));
        assert!(is_contractive(&fixtures::g3_id()));
        let up = FiniteIModalRirig::new_unvalidated(fixtures::g3(), ModalSignature::numbered(1), vec![vec![2, 1, 2]]).unwrap();
        assert_eq!(contractive_violation(&up), Some((0, 0)));
        assert!(in_rc(&fixtures::g3_delta()));
        assert!(in_rc(&fixtures::g3_id()));
        assert!(in_rc(&fixtures::b2_squared_id()));
    }

    #[test]
    fn chain_examples() {
        assert!(is_chain(&fixtures::bare_g3()));
        assert!(is_chain(&fixtures::bare_b2()));
        assert_eq!(incomparable_pair(&fixtures::b2_squared_id()), Some((1, 2)));
    }

    #[test]
    fn join_splitting_examples() {
        let m = IBlock::letter(0);
        assert_eq!(join_splitting_block(&m, &m), IBlock(vec![0, 0, 0]));
        assert_eq!(join_splitting_block(&IBlock::empty(), &IBlock::empty()), IBlock::empty());
        let d = fixtures::g3_delta();
        let q = join_splitting_block(&m, &m);
        assert_eq!(d.apply_block(&q, d.join(1, 0)), 0);
        assert_eq!(join_splitting_violation(&d, &q, &m, &m), None);
    }

    #[test]
    fn join_splitting_holds_on_two_modals() {
        let a = fixtures::g3_two_modals();
        // m2 is not contractive, so use a contractive pair instead.
        assert!(!is_contractive(&a));
        let c = FiniteIModalRirig::new(fixtures::g3(), ModalSignature::numbered(2), vec![vec![0, 0, 2], vec![0, 1, 2]]).unwrap();
        assert!(in_rc(&c));
        for m in enumerate_blocks(2, 3) {
            for n in enumerate_blocks(2, 3) {
                let q = join_splitting_block(&m, &n);
                assert_eq!(join_splitting_violation(&c, &q, &m, &n), None, "{m:?} {n:?}");
            }
        }
        assert_eq!(two_letter_split_violation(&c), None);
    }

    #[test]
    fn fg_intersection_examples() {
        assert_eq!(fg_intersection_check(&fixtures::g3_delta()).unwrap(), None);
        assert_eq!(fg_intersection_check(&fixtures::g3_id()).unwrap(), None);
        assert_eq!(fg_intersection_check(&fixtures::bare_b2()).unwrap(), None);
        let l3 = FiniteIModalRirig::new(fixtures::l3(), ModalSignature::numbered(1), vec![vec![2, 2, 2]]).unwrap();
        assert!(matches!(fg_intersection_check(&l3), Err(Error::NotInRc(_))));
    }
}
