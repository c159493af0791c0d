//! Small named algebras used throughout the tests and the CLI examples.
//!
//! Three-element fixtures label their elements `0`, `a`, `1` with indices
//! 0, 1, 2. The modal symbol of the one-modal fixtures is `m1`.

use crate::algebra::{Elem, FiniteRirig, RirigTables};
use crate::modal::{FiniteIModalRirig, ModalSignature};

fn chain(size: usize, prod: impl Fn(Elem, Elem) -> Elem, imp: impl Fn(Elem, Elem) -> Elem) -> RirigTables {
    let mut t = RirigTables {
        size,
        zero: 0,
        one: size - 1,
        join: Vec::new(),
        prod: Vec::new(),
        imp: Vec::new(),
    };
    for x in 0..size {
        for y in 0..size {
            t.join.push(x.max(y));
            t.prod.push(prod(x, y));
            t.imp.push(imp(x, y));
        }
    }
    t
}

fn three_labels() -> Vec<String> {
    ["0", "a", "1"].map(String::from).to_vec()
}

/// Two-element Boolean chain.
pub fn b2() -> FiniteRirig {
    let t = chain(2, |x, y| x.min(y), |x, y| if x <= y { 1 } else { 0 });
    FiniteRirig::new(t).expect("B2 is a ririg")
}

/// Three-element Gödel chain: `· = min`, `x → y = 1` if `x ≤ y` else `y`.
pub fn g3() -> FiniteRirig {
    let t = chain(3, |x, y| x.min(y), |x, y| if x <= y { 2 } else { y });
    FiniteRirig::new(t)
        .and_then(|a| a.with_labels(three_labels()))
        .expect("G3 is a ririg")
}

/// Three-element Łukasiewicz chain: `a · a = 0`.
pub fn l3() -> FiniteRirig {
    let t = chain(3, |x, y| (x + y).saturating_sub(2), |x, y| (2 + y - x).min(2));
    FiniteRirig::new(t)
        .and_then(|a| a.with_labels(three_labels()))
        .expect("L3 is a ririg")
}

fn with_one_modal(base: FiniteRirig, table: Vec<Elem>) -> FiniteIModalRirig {
    FiniteIModalRirig::new(base, ModalSignature::numbered(1), vec![table]).expect("modal table")
}

/// G3 with `m1 = Δ`: `Δ(0) = Δ(a) = 0`, `Δ(1) = 1`.
pub fn g3_delta() -> FiniteIModalRirig {
    with_one_modal(g3(), vec![0, 0, 2])
}

/// G3 with `m1 = id`.
pub fn g3_id() -> FiniteIModalRirig {
    with_one_modal(g3(), vec![0, 1, 2])
}

/// Ł3 with `m1` constantly 1. Simple, yet no single block sends `a` to 0.
pub fn l3_top() -> FiniteIModalRirig {
    with_one_modal(l3(), vec![2, 2, 2])
}

/// G3 with `m1 = Δ` and `m2 = (0 ↦ a, a ↦ 1, 1 ↦ 1)`.
pub fn g3_two_modals() -> FiniteIModalRirig {
    FiniteIModalRirig::new(
        g3(),
        ModalSignature::numbered(2),
        vec![vec![0, 0, 2], vec![1, 2, 2]],
    )
    .expect("modal tables")
}

pub fn bare_b2() -> FiniteIModalRirig {
    FiniteIModalRirig::bare(b2())
}

pub fn bare_g3() -> FiniteIModalRirig {
    FiniteIModalRirig::bare(g3())
}

/// `B2 × B2` with `m1 = id`.
pub fn b2_squared_id() -> FiniteIModalRirig {
    let b2 = with_one_modal(b2(), vec![0, 1]);
    b2.product(&b2).expect("product of B2 with itself")
}
