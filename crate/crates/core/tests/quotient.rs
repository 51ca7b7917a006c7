mod common;

use common::data;
use kacfusion_core::quotient::{f_k_prime, hong_quotient, projected_verlinde_deviation, two_thirds_check};
use kacfusion_core::{enum_weights, Error, FiniteWeight, WeightVariant};
use proptest::prelude::*;

const TWO_LENGTH: [&str; 5] = ["B2~1", "B3~1", "C3~1", "G2~1", "F4~1"];

#[test]
fn homomorphism_and_verlinde_projection() {
    for (t, ks) in [("B2~1", 1..=3), ("B3~1", 1..=2), ("C3~1", 1..=2), ("G2~1", 1..=3), ("A3~2", 1..=2), ("D4~3", 1..=2)] {
        let d = data(t);
        for k in ks {
            let q = hong_quotient(&d, k).unwrap();
            assert!(q.homomorphism_violations().is_empty(), "{t} k={k}");
            assert!(projected_verlinde_deviation(&q).unwrap() < 1e-8, "{t} k={k}");
            for i in 0..q.dim() {
                assert_eq!(q.product(q.identity, i), &[(i, 1)]);
            }
        }
    }
}

#[test]
fn a2l_quotient_is_identity() {
    for (t, k) in [("A2~2", 3), ("A4~2", 2)] {
        let q = hong_quotient(&data(t), k).unwrap();
        assert_eq!(q.dim(), q.source.dim());
        assert!(q.projection.iter().enumerate().all(|(i, p)| *p == Some((i, 1))));
        assert!(q.homomorphism_violations().is_empty());
    }
}

#[test]
fn odd_level_two_thirds_not_applicable() {
    let r = two_thirds_check(&hong_quotient(&data("B3~1"), 1).unwrap());
    assert!(!r.applicable && r.negatives.is_empty());
}

#[test]
fn single_length_rejected() {
    assert!(matches!(hong_quotient(&data("D4~1"), 1), Err(Error::SingleRootLength(_))));
    assert!(matches!(hong_quotient(&data("B3~1"), 0), Err(Error::LevelNonPositive(0))));
    assert!(matches!(f_k_prime(&data("A3~2"), 1, &FiniteWeight::zero(3)), Err(Error::Unsupported(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn primed_basis_is_fixed(t in 0..TWO_LENGTH.len(), k in 1i64..4) {
        let d = data(TWO_LENGTH[t]);
        let basis = enum_weights(&d, k, WeightVariant::PrimedPk).unwrap();
        for w in basis.finite_weights() {
            let r = f_k_prime(&d, k, &w).unwrap();
            prop_assert!(!r.null);
            prop_assert_eq!(r.weight, w);
            prop_assert_eq!(r.sign, 1);
        }
    }

    #[test]
    fn fold_lands_in_primed_basis(t in 0..TWO_LENGTH.len(), k in 1i64..4, v in prop::collection::vec(0i64..12, 4)) {
        let d = data(TWO_LENGTH[t]);
        let basis = enum_weights(&d, k, WeightVariant::PrimedPk).unwrap();
        let r = f_k_prime(&d, k, &FiniteWeight::from_ints(&v[..d.rank])).unwrap();
        if !r.null {
            prop_assert!(basis.index_of(&r.weight).is_some(), "{}", r.weight);
        }
    }
}
