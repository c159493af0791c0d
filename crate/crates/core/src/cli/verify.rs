//! Independent replays of failure witnesses, used by `--verify-witness`.
//!
//! These recompute from the raw tables with naive loops rather than calling
//! the deciding routines that produced the witness.

use ririg::algebra::{AxiomFailure, Elem, RirigTables};
use ririg::congruence::Congruence;
use ririg::{FiniteIModalRirig, SubsetMask};

type Check = Result<(), String>;

fn expect(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// The named ririg axiom is false at the witness tuple.
pub fn ririg_failure(t: &RirigTables, f: &AxiomFailure) -> Check {
    let n = t.size;
    let j = |a: Elem, b: Elem| t.join[a * n + b];
    let p = |a: Elem, b: Elem| t.prod[a * n + b];
    let i = |a: Elem, b: Elem| t.imp[a * n + b];
    let w = &f.witness;
    let arg = |k: usize| w.get(k).copied().ok_or_else(|| format!("witness for {} too short", f.axiom));
    let holds = match f.axiom.as_str() {
        "join-commutative" => j(arg(0)?, arg(1)?) == j(arg(1)?, arg(0)?),
        "join-associative" => j(j(arg(0)?, arg(1)?), arg(2)?) == j(arg(0)?, j(arg(1)?, arg(2)?)),
        "join-unit" => j(t.zero, arg(0)?) == arg(0)?,
        "prod-commutative" => p(arg(0)?, arg(1)?) == p(arg(1)?, arg(0)?),
        "prod-associative" => p(p(arg(0)?, arg(1)?), arg(2)?) == p(arg(0)?, p(arg(1)?, arg(2)?)),
        "prod-unit" => p(t.one, arg(0)?) == arg(0)?,
        "distributive" => {
            let (x, y, z) = (arg(0)?, arg(1)?, arg(2)?);
            p(x, j(y, z)) == j(p(x, y), p(x, z))
        }
        "annihilation" => p(arg(0)?, t.zero) == t.zero,
        "integrality" => j(t.one, arg(0)?) == t.one,
        "residuation" => {
            let (x, y, z) = (arg(0)?, arg(1)?, arg(2)?);
            let leq = |a: Elem, b: Elem| j(a, b) == b;
            leq(p(x, y), z) == leq(x, i(y, z))
        }
        other => return Err(format!("no replay for axiom `{other}`")),
    };
    expect(!holds, || format!("{} holds at {:?}", f.axiom, w))
}

/// The named modal axiom is false at the witness.
pub fn modal_failure(a: &FiniteIModalRirig, f: &AxiomFailure) -> Check {
    let (name, law) = f
        .axiom
        .split_once(": ")
        .ok_or_else(|| format!("unrecognized modal axiom `{}`", f.axiom))?;
    let j = a
        .signature()
        .index_of(name)
        .ok_or_else(|| format!("unknown modal `{name}`"))?;
    let m = |x: Elem| a.modal_tables()[j][x];
    let holds = if law == "m(1)=1" {
        m(a.one()) == a.one()
    } else {
        let (x, y) = (f.witness[0], f.witness[1]);
        a.leq(m(a.imp(x, y)), a.imp(m(x), m(y)))
    };
    expect(!holds, || format!("{} holds at {:?}", f.axiom, f.witness))
}

/// Naive closure of `seed ∪ {1}` under up-sets, products and modals.
pub fn naive_filter(a: &FiniteIModalRirig, seed: &[Elem]) -> Vec<bool> {
    let n = a.size();
    let mut inside = vec![false; n];
    inside[a.one()] = true;
    for &x in seed {
        inside[x] = true;
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            if !inside[x] {
                continue;
            }
            let mut add = Vec::new();
            for y in 0..n {
                if a.leq(x, y) {
                    add.push(y);
                }
                if inside[y] {
                    add.push(a.prod(x, y));
                }
            }
            add.extend(a.modal_tables().iter().map(|t| t[x]));
            for z in add {
                if !inside[z] {
                    inside[z] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return inside;
        }
    }
}

/// `x ≠ 1` generates a filter that misses `0`.
pub fn not_simple(a: &FiniteIModalRirig, x: Elem) -> Check {
    expect(x != a.one(), || "counterexample is 1".into())?;
    expect(!naive_filter(a, &[x])[a.zero()], || format!("Fg({x}) contains 0"))
}

pub fn is_ifilter(a: &FiniteIModalRirig, s: SubsetMask) -> bool {
    let n = a.size();
    s.contains(a.one())
        && (0..n).all(|x| {
            !s.contains(x)
                || ((0..n).all(|y| (!a.leq(x, y) || s.contains(y)) && (!s.contains(y) || s.contains(a.prod(x, y))))
                    && a.modal_tables().iter().all(|t| s.contains(t[x])))
        })
}

/// Two nontrivial I-filters meeting in `{1}`.
pub fn not_si(a: &FiniteIModalRirig, f: SubsetMask, g: SubsetMask) -> Check {
    for s in [f, g] {
        expect(is_ifilter(a, s), || format!("{s:?} is not an I-filter"))?;
        expect(s.len() > 1, || format!("{s:?} is trivial"))?;
    }
    expect(f.intersection(g) == SubsetMask::singleton(a.size(), a.one()), || {
        "the filters meet in more than {1}".into()
    })
}

/// `θ` is a congruence relating `left` and `right` componentwise but not
/// their images.
pub fn not_compatible(
    a: &FiniteIModalRirig,
    theta: &Congruence,
    left: &[Elem],
    right: &[Elem],
    image: impl Fn(&[Elem]) -> Elem,
) -> Check {
    let n = a.size();
    let r = |x: Elem, y: Elem| theta.class_of()[x] == theta.class_of()[y];
    for x in 0..n {
        for y in 0..n {
            if !r(x, y) {
                continue;
            }
            for z in 0..n {
                let ok = r(a.join(x, z), a.join(y, z)) && r(a.prod(x, z), a.prod(y, z)) && r(a.imp(x, z), a.imp(y, z)) && r(a.imp(z, x), a.imp(z, y));
                expect(ok, || format!("partition is not a congruence at ({x}, {y}, {z})"))?;
            }
            for t in a.modal_tables() {
                expect(r(t[x], t[y]), || format!("partition is not a congruence at ({x}, {y})"))?;
            }
        }
    }
    expect(left.iter().zip(right).all(|(&x, &y)| r(x, y)), || "arguments not related".into())?;
    expect(!r(image(left), image(right)), || "images are related".into())
}

/// Every premise evaluates to `1` and the goal does not.
pub fn countermodel(values: &[Elem], goal: Elem, one: Elem) -> Check {
    expect(values.iter().all(|&v| v == one), || "a premise is not 1".into())?;
    expect(goal != one, || "the goal evaluates to 1".into())
}

/// `θ` on the subuniverse has no extension: the congruence of `A` generated
/// by its pairs relates two elements of `B` that `θ` separates.
pub fn no_extension(a: &FiniteIModalRirig, sub: SubsetMask, theta: &Congruence) -> Check {
    let n = a.size();
    let embed = sub.to_vec();
    let mut class: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        c[x] = r;
        r
    }
    let union = |c: &mut Vec<usize>, x: usize, y: usize| -> bool {
        let (rx, ry) = (find(c, x), find(c, y));
        if rx != ry {
            c[rx.max(ry)] = rx.min(ry);
            true
        } else {
            false
        }
    };
    for (i, &x) in embed.iter().enumerate() {
        for (j, &y) in embed.iter().enumerate() {
            if theta.class_of()[i] == theta.class_of()[j] {
                union(&mut class, x, y);
            }
        }
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if find(&mut class, x) != find(&mut class, y) {
                    continue;
                }
                for z in 0..n {
                    for (u, v) in [
                        (a.join(x, z), a.join(y, z)),
                        (a.prod(x, z), a.prod(y, z)),
                        (a.imp(x, z), a.imp(y, z)),
                        (a.imp(z, x), a.imp(z, y)),
                    ] {
                        changed |= union(&mut class, u, v);
                    }
                }
                for t in a.modal_tables() {
                    changed |= union(&mut class, t[x], t[y]);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let root: Vec<usize> = (0..n).map(|x| find(&mut class, x)).collect();
    let separated_but_joined = embed.iter().enumerate().any(|(i, &x)| {
        embed
            .iter()
            .enumerate()
            .any(|(j, &y)| theta.class_of()[i] != theta.class_of()[j] && root[x] == root[y])
    });
    expect(separated_but_joined, || "the generated congruence restricts back to θ".into())
}
