mod common;

use common::terms_upto;
use proptest::prelude::*;
use spdesc::ideal::{contains_ideal, intersect};
use spdesc::relation::to_relation;
use spdesc::{forb_upto, is_suborder, make_ideal, member, parse_term, SpTerm};

/// Terms built without canonicalizing, so nesting and ordering are arbitrary.
fn raw_term() -> impl Strategy<Value = SpTerm> {
    let leaf = prop_oneof![Just(SpTerm::Empty), Just(SpTerm::Point)];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(SpTerm::Chain),
            prop::collection::vec(inner, 2..4).prop_map(SpTerm::Antichain),
        ]
    })
}

fn canonical(n: usize) -> impl Strategy<Value = SpTerm> {
    let all = terms_upto(n);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonicalize_is_idempotent(raw in raw_term()) {
        let once = raw.canonicalize();
        prop_assert!(once.is_canonical());
        prop_assert_eq!(once.canonicalize(), once.clone());
        prop_assert_eq!(once.size(), raw.size());
    }

    #[test]
    fn canonical_form_preserves_the_order(raw in raw_term()) {
        let a = to_relation(&raw.canonicalize());
        let b = to_relation(&raw);
        prop_assert!(spdesc::oracle::embeds(&a, &b) && spdesc::oracle::embeds(&b, &a));
    }

    #[test]
    fn suborder_is_a_partial_order(p in canonical(6), q in canonical(6), r in canonical(6)) {
        prop_assert!(is_suborder(&p, &p));
        if is_suborder(&p, &q) && is_suborder(&q, &r) {
            prop_assert!(is_suborder(&p, &r));
        }
        if is_suborder(&p, &q) && is_suborder(&q, &p) {
            prop_assert_eq!(p, q);
        }
    }

    #[test]
    fn transitivity_along_actual_chains(p in canonical(6), q in canonical(6), r in canonical(6)) {
        // random triples rarely line up, so build one that does
        let mid = SpTerm::antichain([p.clone(), q]);
        let top = SpTerm::chain([mid.clone(), r]);
        prop_assert!(is_suborder(&p, &mid) && is_suborder(&mid, &top) && is_suborder(&p, &top));
    }

    #[test]
    fn membership_matches_enumeration(
        forbidden in prop::collection::vec(canonical(5), 1..3),
        p in canonical(7),
    ) {
        let ideal = make_ideal(&forbidden);
        let direct = forb_upto(&forbidden, 7).unwrap();
        prop_assert_eq!(member(&ideal, &p), direct.contains(&p));
    }

    #[test]
    fn intersection_is_the_meet(
        a in prop::collection::vec(canonical(5), 0..3),
        b in prop::collection::vec(canonical(5), 0..3),
        p in canonical(7),
    ) {
        let (i, j) = (make_ideal(&a), make_ideal(&b));
        let both = intersect(&i, &j);
        prop_assert_eq!(member(&both, &p), member(&i, &p) && member(&j, &p));
        prop_assert!(contains_ideal(&i, &both) && contains_ideal(&j, &both));
        if contains_ideal(&i, &j) && contains_ideal(&j, &i) {
            prop_assert_eq!(i, j);
        }
    }

    #[test]
    fn containment_matches_membership(
        a in prop::collection::vec(canonical(4), 0..3),
        b in prop::collection::vec(canonical(4), 0..3),
    ) {
        let (i, j) = (make_ideal(&a), make_ideal(&b));
        if contains_ideal(&i, &j) {
            for p in terms_upto(6) {
                prop_assert!(!member(&j, p) || member(&i, p));
            }
        }
    }

    #[test]
    fn make_ideal_yields_an_antichain(forbidden in prop::collection::vec(canonical(5), 0..6)) {
        let ideal = make_ideal(&forbidden);
        let obs = ideal.obstructions();
        for (x, p) in obs.iter().enumerate() {
            for (y, q) in obs.iter().enumerate() {
                prop_assert!(x == y || !is_suborder(p, q));
            }
        }
        for f in &forbidden {
            prop_assert!(obs.iter().any(|o| is_suborder(o, f)));
        }
    }
}

#[test]
fn print_parse_round_trip_up_to_eight() {
    for p in terms_upto(8) {
        assert_eq!(&parse_term(&p.to_string()).unwrap(), p);
    }
}

#[test]
fn enumerated_terms_are_canonical() {
    for p in terms_upto(8) {
        assert!(p.is_canonical(), "{p}");
        match p {
            SpTerm::Chain(parts) => assert!(parts
                .iter()
                .all(|c| !matches!(c, SpTerm::Chain(_) | SpTerm::Empty))),
            SpTerm::Antichain(parts) => assert!(parts
                .iter()
                .all(|c| !matches!(c, SpTerm::Antichain(_) | SpTerm::Empty))),
            _ => {}
        }
    }
}

#[test]
fn relations_are_n_free_orders() {
    for p in terms_upto(7) {
        let rel = to_relation(p);
        assert!(rel.is_partial_order() && rel.is_n_free(), "{p}");
    }
}
