//! Exhaustive generation of small ririgs and their modal expansions, up to
//! isomorphism.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, FiniteRirig, RirigTables};
use crate::error::{Error, Result};
use crate::modal::{FiniteIModalRirig, ModalSignature};
use crate::varieties;

/// Largest universe [`enumerate_ririgs`] accepts.
pub const ENUMERATION_CAP: usize = 5;
/// Most modal symbols [`enumerate_modal_expansions`] accepts.
pub const MODAL_CAP: usize = 2;

/// Isomorphism invariant encoding: the lexicographically least relabeled
/// table dump `[n, 0, 1, join, prod, imp, k, (name, table)*]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if !s.len().is_multiple_of(2) || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::InvalidArgument(format!("`{s}` is not a hex string")));
        }
        let bytes = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).expect("checked hex"))
            .collect();
        Ok(CanonicalForm(bytes))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalForm::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Encoding of `a` relabeled by `perm` (old index to new index).
fn encode(a: &FiniteIModalRirig, perm: &[Elem]) -> Vec<u8> {
    let n = a.size();
    let mut inv = vec![0; n];
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    let mut out = Vec::with_capacity(4 + 3 * n * n + a.k() * (n + 8));
    out.extend([n as u8, perm[a.zero()] as u8, perm[a.one()] as u8]);
    for op in [FiniteRirig::join, FiniteRirig::prod, FiniteRirig::imp] {
        for x in 0..n {
            for y in 0..n {
                out.push(perm[op(a, inv[x], inv[y])] as u8);
            }
        }
    }
    out.push(a.k() as u8);
    for (name, table) in a.signature().names().iter().zip(a.modal_tables()) {
        out.push(name.len() as u8);
        out.extend(name.bytes());
        out.extend((0..n).map(|x| perm[table[inv[x]]] as u8));
    }
    out
}

/// Calls `visit` on every permutation of `0..n` with `zero ↦ 0` and
/// `one ↦ 1`. The encoding starts with the images of `0` and `1`, so the
/// least encoding over all permutations is reached among these.
fn for_each_normalized_perm(n: usize, zero: Elem, one: Elem, mut visit: impl FnMut(&[Elem])) {
    let mut perm = vec![usize::MAX; n];
    perm[zero] = 0;
    perm[one] = if zero == one { 0 } else { 1 };
    let rest: Vec<Elem> = (0..n).filter(|&x| x != zero && x != one).collect();
    let first_free = n - rest.len();
    let mut images: Vec<Elem> = (first_free..n).collect();
    // Heap's algorithm over the images of the remaining elements.
    let assign = |perm: &mut Vec<Elem>, images: &[Elem]| {
        for (&x, &img) in rest.iter().zip(images) {
            perm[x] = img;
        }
    };
    assign(&mut perm, &images);
    visit(&perm);
    let m = images.len();
    let mut c = vec![0; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                images.swap(0, i);
            } else {
                images.swap(c[i], i);
            }
            assign(&mut perm, &images);
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn least_perm(a: &FiniteIModalRirig) -> (Vec<u8>, Vec<Elem>) {
    let mut best: Option<(Vec<u8>, Vec<Elem>)> = None;
    for_each_normalized_perm(a.size(), a.zero(), a.one(), |perm| {
        let code = encode(a, perm);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            best = Some((code, perm.to_vec()));
        }
    });
    best.expect("at least one permutation")
}

/// Permutation-minimal encoding of `a`. Runs over `(n-2)!` relabelings, so
/// it is meant for the small algebras of a catalog.
pub fn canonical_form(a: &FiniteIModalRirig) -> CanonicalForm {
    CanonicalForm(least_perm(a).0)
}

/// The isomorphic copy of `a` with element `x` renamed `perm[x]`.
pub fn relabel(a: &FiniteIModalRirig, perm: &[Elem]) -> Result<FiniteIModalRirig> {
    let n = a.size();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
    }
    let mut inv = vec![0; n];
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    let table = |op: fn(&FiniteRirig, Elem, Elem) -> Elem| -> Vec<Elem> {
        (0..n * n).map(|i| perm[op(a, inv[i / n], inv[i % n])]).collect()
    };
    let tables = RirigTables {
        size: n,
        zero: perm[a.zero()],
        one: perm[a.one()],
        join: table(FiniteRirig::join),
        prod: table(FiniteRirig::prod),
        imp: table(FiniteRirig::imp),
    };
    let labels = (0..n).map(|x| a.label(inv[x]).to_string()).collect();
    let base = FiniteRirig::new(tables)?.with_labels(labels)?;
    let modals = a
        .modal_tables()
        .iter()
        .map(|t| (0..n).map(|x| perm[t[inv[x]]]).collect())
        .collect();
    FiniteIModalRirig::new_unvalidated(base, a.signature().clone(), modals)
}

/// The canonical representative: `a` relabeled by its minimizing
/// permutation, with default labels.
pub fn canonicalize(a: &FiniteIModalRirig) -> (FiniteIModalRirig, CanonicalForm) {
    let (code, perm) = least_perm(a);
    let r = relabel(a, &perm).expect("valid permutation");
    let base = FiniteRirig::new(r.tables().clone()).expect("relabeling keeps the axioms");
    let r = FiniteIModalRirig::new_unvalidated(base, r.signature().clone(), r.modal_tables().to_vec())
        .expect("same shapes");
    (r, CanonicalForm(code))
}

/// Join tables of the bounded lattices on `0..n` with bottom `0`, top `n-1`
/// and the index order as a linear extension.
fn lattice_orders(n: usize) -> Vec<Vec<Elem>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let top = n - 1;
    let middle_pairs: Vec<(Elem, Elem)> = (1..top)
        .flat_map(|i| (i + 1..top).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u64..(1 << middle_pairs.len()) {
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
            leq[x] = true;
            leq[x * n + top] = true;
        }
        for (b, &(i, j)) in middle_pairs.iter().enumerate() {
            if bits >> b & 1 == 1 {
                leq[i * n + j] = true;
            }
        }
        let transitive = (0..n).all(|x| {
            (0..n).all(|y| !leq[x * n + y] || (0..n).all(|z| !leq[y * n + z] || leq[x * n + z]))
        });
        if !transitive {
            continue;
        }
        let lub = |x: Elem, y: Elem| {
            let upper: Vec<Elem> = (0..n).filter(|&u| leq[x * n + u] && leq[y * n + u]).collect();
            upper.iter().copied().find(|&u| upper.iter().all(|&v| leq[u * n + v]))
        };
        let join: Option<Vec<Elem>> = (0..n * n).map(|i| lub(i / n, i % n)).collect();
        if let Some(join) = join {
            out.push(join);
        }
    }
    out
}

/// Product tables over a fixed lattice: commutative, unit `top`, annihilator
/// `0`, below both arguments, monotone in each argument (pruned as cells are
/// filled), then associative and distributive.
fn product_tables(n: usize, join: &[Elem]) -> Vec<Vec<Elem>> {
    let top = n - 1;
    let leq = |x: Elem, y: Elem| join[x * n + y] == y;
    let mut prod = vec![0; n * n];
    for x in 0..n {
        prod[x * n + top] = x;
        prod[top * n + x] = x;
    }
    let cells: Vec<(Elem, Elem)> = (1..top).flat_map(|i| (i..top).map(move |j| (i, j))).collect();

    fn go(
        idx: usize,
        cells: &[(Elem, Elem)],
        n: usize,
        prod: &mut Vec<Elem>,
        leq: &dyn Fn(Elem, Elem) -> bool,
        done: &mut Vec<Vec<Elem>>,
    ) {
        let Some(&(i, j)) = cells.get(idx) else {
            done.push(prod.clone());
            return;
        };
        for v in 0..n {
            if !leq(v, i) || !leq(v, j) {
                continue;
            }
            prod[i * n + j] = v;
            prod[j * n + i] = v;
            // Monotonicity against every cell filled so far.
            let monotone = cells[..=idx].iter().all(|&(p, q)| {
                cells[..=idx].iter().all(|&(r, s)| {
                    let a = prod[p * n + q];
                    let b = prod[r * n + s];
                    let below = (leq(p, r) && leq(q, s)) || (leq(p, s) && leq(q, r));
                    !below || leq(a, b)
                })
            });
            if monotone {
                go(idx + 1, cells, n, prod, leq, done);
            }
        }
    }
    let mut candidates = Vec::new();
    go(0, &cells, n, &mut prod, &leq, &mut candidates);
    candidates.retain(|p| {
        let pr = |x: Elem, y: Elem| p[x * n + y];
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    pr(pr(x, y), z) == pr(x, pr(y, z))
                        && pr(x, join[y * n + z]) == join[pr(x, y) * n + pr(x, z)]
                })
            })
        })
    });
    candidates
}

/// Every ririg of size `n` up to isomorphism, in canonical labeling and
/// sorted by canonical form.
pub fn enumerate_ririgs(n: usize) -> Result<Vec<FiniteRirig>> {
    if n > ENUMERATION_CAP {
        return Err(Error::SizeCap {
            what: "enumerated algebra size",
            n,
            cap: ENUMERATION_CAP,
        });
    }
    if n == 0 {
        return Err(Error::UnsupportedSize(0));
    }
    let found: Vec<(CanonicalForm, FiniteIModalRirig)> = lattice_orders(n)
        .into_par_iter()
        .flat_map_iter(|join| {
            product_tables(n, &join)
                .into_iter()
                .filter_map(move |prod| FiniteRirig::from_join_prod(n, 0, n - 1, join.clone(), prod).ok())
        })
        .map(|r| {
            let (c, form) = canonicalize(&FiniteIModalRirig::bare(r));
            (form, c)
        })
        .collect();
    let unique: BTreeMap<CanonicalForm, FiniteIModalRirig> = found.into_iter().collect();
    Ok(unique.into_values().map(|a| a.base().clone()).collect())
}

/// Extra conditions on enumerated expansions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraints {
    pub contractive: bool,
    pub prelinear: bool,
    pub cm: bool,
    pub chain: bool,
}

impl Constraints {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn with(mut self, c: Constraint) -> Self {
        match c {
            Constraint::Contractive => self.contractive = true,
            Constraint::Prelinear => self.prelinear = true,
            Constraint::Cm => self.cm = true,
            Constraint::Chain => self.chain = true,
        }
        self
    }

    pub fn admits(&self, a: &FiniteIModalRirig) -> bool {
        (!self.contractive || varieties::is_contractive(a))
            && (!self.prelinear || varieties::prelinearity_violation(a).is_none())
            && (!self.cm || varieties::cm_violation(a).is_none())
            && (!self.chain || varieties::is_chain(a))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    Contractive,
    Prelinear,
    Cm,
    Chain,
}

impl FromStr for Constraint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contractive" => Ok(Constraint::Contractive),
            "P" | "prelinear" => Ok(Constraint::Prelinear),
            "Cm" | "cm" => Ok(Constraint::Cm),
            "chain" => Ok(Constraint::Chain),
            _ => Err(Error::InvalidArgument(format!(
                "unknown constraint `{s}` (expected contractive, P, Cm or chain)"
            ))),
        }
    }
}

/// Unary tables on `a` satisfying the modal axioms, in lexicographic order.
pub fn modal_operators(a: &FiniteRirig) -> Vec<Vec<Elem>> {
    let n = a.size();
    let sig = ModalSignature::numbered(1);
    let free: Vec<Elem> = (0..n).filter(|&x| x != a.one()).collect();
    crate::compat::tuples(n, free.len())
        .filter_map(|vals| {
            let mut t = vec![a.one(); n];
            for (&x, v) in free.iter().zip(vals) {
                t[x] = v;
            }
            let m = FiniteIModalRirig::new_unvalidated(a.clone(), sig.clone(), vec![t.clone()]).ok()?;
            m.validate_modal().passed.then_some(t)
        })
        .collect()
}

/// All expansions of `a` by `k` modal operators named `m1..mk` that satisfy
/// `constraints`, up to isomorphism, in canonical labeling and sorted by
/// canonical form.
pub fn enumerate_modal_expansions(
    a: &FiniteRirig,
    k: usize,
    constraints: Constraints,
) -> Result<Vec<FiniteIModalRirig>> {
    if k > MODAL_CAP {
        return Err(Error::SizeCap {
            what: "modal symbols",
            n: k,
            cap: MODAL_CAP,
        });
    }
    let ops = modal_operators(a);
    let sig = ModalSignature::numbered(k);
    let found: Vec<(CanonicalForm, FiniteIModalRirig)> = crate::compat::tuples(ops.len(), k)
        .par_bridge()
        .filter_map(|choice| {
            let tables = choice.iter().map(|&i| ops[i].clone()).collect();
            let m = FiniteIModalRirig::new_unvalidated(a.clone(), sig.clone(), tables).ok()?;
            constraints.admits(&m).then(|| {
                let (c, form) = canonicalize(&m);
                (form, c)
            })
        })
        .collect();
    let unique: BTreeMap<CanonicalForm, FiniteIModalRirig> = found.into_iter().collect();
    Ok(unique.into_values().collect())
}
