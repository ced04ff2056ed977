mod common;

use std::sync::OnceLock;

use knotcrypt::codes::{dt_connected_sum, extract_dt, strip_suffix};
use knotcrypt::invariants::{kauffman_bracket_with, BracketEngine};
use knotcrypt::moves::apply_with_inverse;
use knotcrypt::protocol::{
    decrypt_message, derive_key_knots, encrypt_message, make_key_package, Ciphertext, Codebook, KeyPackage,
};
use knotcrypt::table::KnotTable;
use knotcrypt::{
    connected_sum, jones, kauffman_bracket, mirror_diagram, mutate, writhe, Diagram, LaurentPolynomial, MoveSpec,
    Parallelism, RotationKind,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn table() -> &'static KnotTable {
    static T: OnceLock<KnotTable> = OnceLock::new();
    T.get_or_init(KnotTable::bundled)
}

fn codebook() -> &'static Codebook {
    static C: OnceLock<Codebook> = OnceLock::new();
    C.get_or_init(|| Codebook::default_for(table()).unwrap())
}

fn small() -> Vec<Diagram> {
    common::small_knots(table(), 7)
}

fn poly() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((-6i32..=6, -5i64..=5), 0..6).prop_map(LaurentPolynomial::from_terms)
}

fn rotation() -> impl Strategy<Value = RotationKind> {
    prop::sample::select(RotationKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &LaurentPolynomial::one(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).divide_exact(&b).unwrap(), a.clone());
        }
        let text = a.display_in("A");
        prop_assert_eq!(LaurentPolynomial::parse_in(&text, "A").unwrap(), a);
    }

    #[test]
    fn dt_concat_strips_and_associates(i in 0usize..37, j in 0usize..37, k in 0usize..37) {
        let e = table().entries();
        let (a, b, c) = (&e[i].dt, &e[j].dt, &e[k].dt);
        let ab = dt_connected_sum(a, b);
        prop_assert_eq!(strip_suffix(&ab, b).unwrap(), a.clone());
        prop_assert_eq!(dt_connected_sum(&ab, c), dt_connected_sum(a, &dt_connected_sum(b, c)));
        let text = ab.to_string();
        prop_assert_eq!(text.parse::<knotcrypt::DtCode>().unwrap(), ab);
    }

    #[test]
    fn connected_sum_codes_for_composites(i in 0usize..37, j in 0usize..37, k in 0usize..14) {
        let e = table().entries();
        let ab = connected_sum(&e[i].pd, &e[j].pd).unwrap();
        let abc = connected_sum(&ab, &e[k].pd).unwrap();
        prop_assert_eq!(
            extract_dt(&abc).unwrap(),
            dt_connected_sum(&dt_connected_sum(&e[i].dt, &e[j].dt), &e[k].dt)
        );
        prop_assert_eq!(jones(&abc).unwrap(), &(&jones(&e[i].pd).unwrap() * &jones(&e[j].pd).unwrap()) * &jones(&e[k].pd).unwrap());
    }

    #[test]
    fn unknot_is_a_unit(i in 0usize..37) {
        let d = &table().entries()[i].pd;
        prop_assert!(connected_sum(d, &Diagram::unknot()).unwrap().is_isomorphic(d));
        prop_assert!(connected_sum(&Diagram::unknot(), d).unwrap().is_isomorphic(d));
    }

    #[test]
    fn reidemeister_walks_preserve_jones(seed in any::<u64>(), start in 0usize..14, len in 1usize..=8) {
        let ks = small();
        let d = &ks[start % ks.len()];
        let j = jones(d).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut prev_w = writhe(d).unwrap();
        for (m, next) in common::random_walk(d, len, 16, &mut rng) {
            prop_assert!(next.validate().is_ok());
            prop_assert_eq!(jones(&next).unwrap(), j.clone(), "after {}", m);
            let w = writhe(&next).unwrap();
            if m.is_r1() {
                prop_assert_eq!((w - prev_w).abs(), 1);
            } else {
                prop_assert_eq!(w, prev_w);
            }
            prev_w = w;
        }
    }

    #[test]
    fn moves_undo(seed in any::<u64>(), start in 0usize..14) {
        let ks = small();
        let d = &ks[start % ks.len()];
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        if let Some(m) = common::random_move(d, 16, &mut rng) {
            let (out, inverse) = apply_with_inverse(d, &m).unwrap();
            prop_assert_eq!(out.crossing_count() as i32, d.crossing_count() as i32 + m.crossing_delta());
            if let Some(inv) = inverse {
                let back = apply_with_inverse(&out, &inv).unwrap().0;
                prop_assert!(back.is_isomorphic_unbased(d), "{} then {}", m, inv);
            }
        }
    }

    #[test]
    fn engines_agree(seed in any::<u64>(), start in 0usize..14) {
        let ks = small();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let walk = common::random_walk(&ks[start % ks.len()], 3, 12, &mut rng);
        let d = walk.last().map(|(_, d)| d.clone()).unwrap_or_else(|| ks[start % ks.len()].clone());
        let c = kauffman_bracket(&d).unwrap();
        for mode in [Parallelism::Sequential, Parallelism::Parallel] {
            prop_assert_eq!(kauffman_bracket_with(&d, BracketEngine::Enumeration(mode)).unwrap(), c.clone());
        }
    }

    #[test]
    fn mirror_laws(i in 0usize..37) {
        let e = &table().entries()[i];
        let m = mirror_diagram(&e.pd).unwrap();
        prop_assert!(mirror_diagram(&m).unwrap().is_isomorphic(&e.pd));
        prop_assert_eq!(writhe(&m).unwrap(), -writhe(&e.pd).unwrap());
        let j = jones(&e.pd).unwrap();
        prop_assert_eq!(jones(&m).unwrap(), j.mirrored());
        if !e.chiral {
            prop_assert_eq!(j.mirrored(), j);
        }
    }

    #[test]
    fn mutation_keeps_jones(i in 0usize..37, r in rotation()) {
        let e = &table().entries()[i];
        let m = mutate(&e.tangle, r).unwrap();
        prop_assert!(m.validate().is_ok());
        prop_assert_eq!(m.crossing_count(), e.crossing_number);
        prop_assert_eq!(jones(&m).unwrap(), jones(&e.pd).unwrap());
    }

    #[test]
    fn rotations_form_a_group(a in rotation(), b in rotation(), c in rotation()) {
        prop_assert_eq!(a.compose(b), b.compose(a));
        prop_assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
        prop_assert_eq!(a.compose(a), RotationKind::None);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn encryption_round_trips(seed in any::<u64>(), n in 1usize..6, msg in prop::collection::vec(any::<u8>(), 0..48)) {
        let pkg = make_key_package(table(), n, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
        let keys = derive_key_knots(&pkg, table()).unwrap();
        let c = encrypt_message(&msg, &keys, codebook()).unwrap();
        prop_assert_eq!(c.len(), msg.len());
        let text = c.to_string();
        let parsed: Ciphertext = text.parse().unwrap();
        prop_assert_eq!(decrypt_message(&parsed, &keys, codebook()).unwrap(), msg);
    }

    #[test]
    fn package_forms_round_trip(seed in any::<u64>(), n in 1usize..40) {
        let pkg = make_key_package(table(), n, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(KeyPackage::from_bytes(&pkg.to_bytes()).unwrap(), pkg.clone());
        prop_assert_eq!(KeyPackage::from_clear(pkg.session(), &pkg.to_clear()).unwrap(), pkg);
    }

    #[test]
    fn ciphertext_grows_linearly(seed in any::<u64>(), msg in prop::collection::vec(any::<u8>(), 0..64)) {
        let pkg = make_key_package(table(), 4, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
        let keys = derive_key_knots(&pkg, table()).unwrap();
        let c = encrypt_message(&msg, &keys, codebook()).unwrap();
        // Each record has at most 2*8 + 11 entries of at most 3 characters
        // plus a separator.
        let per_record = 4 * (2 * codebook().max_crossings() + 11);
        prop_assert!(c.serialized_len() <= 32 + per_record * msg.len());
    }
}

#[test]
fn r1_scales_bracket_by_a_cubed() {
    let d = &small()[0];
    let b = kauffman_bracket(d).unwrap();
    for m in knotcrypt::moves::applicable_moves(d).into_iter().filter(MoveSpec::is_r1) {
        let out = knotcrypt::apply_reidemeister(d, &m).unwrap();
        let nb = kauffman_bracket(&out).unwrap();
        let up = &b * &LaurentPolynomial::monomial(-1, 3);
        let down = &b * &LaurentPolynomial::monomial(-1, -3);
        let w = writhe(&out).unwrap() - writhe(d).unwrap();
        // A positive kink multiplies the bracket by -A^3.
        assert_eq!(nb, if w > 0 { up } else { down }, "{m}");
    }
}
