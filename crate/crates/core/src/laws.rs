//! Derived ririg laws, checked exhaustively over all element tuples.
//!
//! These hold in every ririg; a failure means the tables or the evaluator
//! are wrong, so the suite doubles as a regression net for the enumerator.

use crate::algebra::{first_failure, AxiomFailure, Elem, FiniteRirig};

type Law = (&'static str, usize, fn(&FiniteRirig, &[Elem]) -> bool);

const LAWS: &[Law] = &[
    ("a->1 = 1", 1, |a, x| a.imp(x[0], a.one()) == a.one()),
    ("1->a = a", 1, |a, x| a.imp(a.one(), x[0]) == x[0]),
    ("a->a = 1", 1, |a, x| a.imp(x[0], x[0]) == a.one()),
    ("a(a->b) <= b", 2, |a, x| a.leq(a.prod(x[0], a.imp(x[0], x[1])), x[1])),
    ("a->b <= ac->bc", 3, |a, x| {
        a.leq(a.imp(x[0], x[1]), a.imp(a.prod(x[0], x[2]), a.prod(x[1], x[2])))
    }),
    ("a <= (a->b)->b", 2, |a, x| a.leq(x[0], a.imp(a.imp(x[0], x[1]), x[1]))),
    ("a<=b implies c->a <= c->b and b->c <= a->c", 3, |a, x| {
        let (p, q, r) = (x[0], x[1], x[2]);
        !a.leq(p, q) || (a.leq(a.imp(r, p), a.imp(r, q)) && a.leq(a.imp(q, r), a.imp(p, r)))
    }),
    ("a->(b->c) = ab->c = b->(a->c)", 3, |a, x| {
        let (p, q, r) = (x[0], x[1], x[2]);
        let lhs = a.imp(p, a.imp(q, r));
        lhs == a.imp(a.prod(p, q), r) && lhs == a.imp(q, a.imp(p, r))
    }),
    ("a <= b->c iff b <= a->c", 3, |a, x| {
        a.leq(x[0], a.imp(x[1], x[2])) == a.leq(x[1], a.imp(x[0], x[2]))
    }),
    ("a <= b->a", 2, |a, x| a.leq(x[0], a.imp(x[1], x[0]))),
    ("a->b <= (c->a)->(c->b)", 3, |a, x| {
        let (p, q, r) = (x[0], x[1], x[2]);
        a.leq(a.imp(p, q), a.imp(a.imp(r, p), a.imp(r, q)))
    }),
    ("a->b <= (b->c)->(a->c)", 3, |a, x| {
        let (p, q, r) = (x[0], x[1], x[2]);
        a.leq(a.imp(p, q), a.imp(a.imp(q, r), a.imp(p, r)))
    }),
    ("a->b = ((a->b)->b)->b", 2, |a, x| {
        let ab = a.imp(x[0], x[1]);
        ab == a.imp(a.imp(ab, x[1]), x[1])
    }),
    ("a <= b iff a->b = 1", 2, |a, x| a.leq(x[0], x[1]) == (a.imp(x[0], x[1]) == a.one())),
    ("star transitivity: (a*b)(b*c) <= a*c", 3, |a, x| {
        a.leq(a.prod(a.star(x[0], x[1]), a.star(x[1], x[2])), a.star(x[0], x[2]))
    }),
];

/// Names of every law in the suite, in checking order.
pub fn law_names() -> impl Iterator<Item = &'static str> {
    LAWS.iter().map(|(name, _, _)| *name)
}

/// Every violated law with its lexicographically first witness.
pub fn ririg_law_violations(a: &FiniteRirig) -> Vec<AxiomFailure> {
    LAWS.iter()
        .filter_map(|(name, arity, law)| {
            first_failure(a.size(), *arity, |x| law(a, x)).map(|witness| AxiomFailure {
                axiom: name.to_string(),
                witness,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn laws_hold_on_fixtures() {
        for a in [fixtures::b2(), fixtures::g3(), fixtures::l3()] {
            assert!(ririg_law_violations(&a).is_empty());
        }
        let b2 = fixtures::b2();
        assert!(ririg_law_violations(&b2.product(&b2).unwrap()).is_empty());
    }

    #[test]
    fn suite_has_fifteen_laws() {
        assert_eq!(law_names().count(), 15);
    }
}
