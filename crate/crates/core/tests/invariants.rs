//! Property tests over the size-4, one-modal catalog.

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ririg::catalog::{catalog_build, Catalog, CatalogFlags};
use ririg::compat::{CompatContext, FiniteFunction};
use ririg::congruence::{cg, theta_from_filter, DIRECT_CONGRUENCE_CAP};
use ririg::enumerate::{canonical_form, relabel, Constraints};
use ririg::filters::{all_ifilters, all_ifilters_by_scan, generate_filter, is_ifilter};
use ririg::io::{algebra_to_json, parse_algebra};
use ririg::logic::semantics::{rho, tau};
use ririg::term::Term;
use ririg::{FiniteIModalRirig, ModalSignature, SubsetMask};

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| catalog_build(4, 1, Constraints::none()).unwrap())
}

fn algebra(i: usize) -> FiniteIModalRirig {
    let cat = catalog();
    cat.entries[i % cat.len()].algebra.clone()
}

fn algebra_and_perm() -> impl Strategy<Value = (FiniteIModalRirig, Vec<usize>)> {
    (0..catalog().len()).prop_flat_map(|i| {
        let a = algebra(i);
        let n = a.size();
        (Just(a), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

#[test]
fn stored_flags_match_recomputation() {
    for e in &catalog().entries {
        assert_eq!(e.flags, CatalogFlags::compute(&e.algebra).unwrap());
        assert_eq!(e.form, canonical_form(&e.algebra));
    }
}

#[test]
fn catalog_text_round_trip() {
    let cat = catalog();
    let back = Catalog::from_text(&cat.to_text()).unwrap();
    assert_eq!(back.len(), cat.len());
    for (x, y) in cat.entries.iter().zip(&back.entries) {
        assert_eq!(x, y);
    }
}

#[test]
fn lambda_is_deflationary_and_modals_are_monotone() {
    for a in catalog().algebras() {
        for x in a.elements() {
            assert!(a.leq(a.lambda(x), x));
            for y in a.elements() {
                if a.leq(x, y) {
                    for t in a.modal_tables() {
                        assert!(a.leq(t[x], t[y]));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_ignores_labeling((a, perm) in algebra_and_perm()) {
        let b = relabel(&a, &perm).unwrap();
        prop_assert_eq!(canonical_form(&a), canonical_form(&b));
        prop_assert_eq!(all_ifilters(&a).len(), all_ifilters(&b).len());
        prop_assert_eq!(CatalogFlags::compute(&a).unwrap(), CatalogFlags::compute(&b).unwrap());
    }

    #[test]
    fn relabeled_algebras_survive_json((a, perm) in algebra_and_perm()) {
        let b = relabel(&a, &perm).unwrap();
        let back = parse_algebra(&algebra_to_json(&b)).unwrap();
        prop_assert_eq!(back.tables(), b.tables());
        prop_assert_eq!(back.modal_tables(), b.modal_tables());
        prop_assert_eq!(back.labels(), b.labels());
    }

    #[test]
    fn generated_filter_is_least(i in 0..111usize, bits in any::<u64>()) {
        let a = algebra(i);
        let x = SubsetMask::from_bits(a.size(), bits & ((1 << a.size()) - 1));
        let f = generate_filter(&a, x).mask();
        prop_assert!(is_ifilter(&a, f));
        prop_assert!(x.is_subset(f));
        for g in all_ifilters_by_scan(&a) {
            if x.is_subset(g.mask()) {
                prop_assert!(f.is_subset(g.mask()));
            }
        }
    }

    #[test]
    fn principal_congruence_is_kernel_of_star_filter(i in 0..111usize, x in 0..4usize, y in 0..4usize) {
        let a = algebra(i);
        let (x, y) = (x % a.size(), y % a.size());
        let f = generate_filter(&a, SubsetMask::singleton(a.size(), a.star(x, y))).mask();
        prop_assert_eq!(cg(&a, x, y), theta_from_filter(&a, f).unwrap());
    }

    #[test]
    fn rho_tau_coherence(i in 0..111usize, seed in any::<u64>(), v in prop::collection::vec(0..4usize, 2)) {
        let a = algebra(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = Term::random(&mut rng, 4, 2, a.signature());
        let v: Vec<usize> = v.iter().map(|x| x % a.size()).collect();
        let is_one = |t: &Term| t.eval(&a, &v).unwrap() == a.one();
        let back: Vec<Term> = tau(&phi).iter().flat_map(rho).collect();
        prop_assert_eq!(back.len(), 2);
        prop_assert_eq!(is_one(&phi), back.iter().all(is_one));
    }

    #[test]
    fn term_functions_are_compatible(i in 0..111usize, seed in any::<u64>()) {
        let a = algebra(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Term::random(&mut rng, 3, 2, a.signature());
        let f = FiniteFunction::from_fn(a.size(), 2, |x| t.eval(&a, x).unwrap());
        let ctx = CompatContext::new(&a, None, DIRECT_CONGRUENCE_CAP);
        prop_assert!(ctx.direct(&f).unwrap().compatible());
        prop_assert!(ctx.lambda(&f).unwrap().compatible());
    }

    #[test]
    fn formulas_round_trip_through_text(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Term::random(&mut rng, 5, 3, &ModalSignature::numbered(2));
        prop_assert_eq!(Term::parse(&t.to_string()).unwrap(), t);
    }
}
