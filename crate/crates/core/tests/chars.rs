mod common;

use common::data;
use kacfusion_core::chars::{char_eval, char_eval_weights, load_cache, save_cache, tensor_decompose, weight_system, weyl_dimension};
use kacfusion_core::weyl::reflect;
use kacfusion_core::{AffineAlgebraData, FiniteWeight, Q};
use proptest::prelude::*;
use std::collections::BTreeMap;

const TYPES: [&str; 7] = ["A1~1", "A2~1", "A3~1", "B2~1", "B3~1", "C3~1", "G2~1"];

fn fw(v: &[i64]) -> FiniteWeight {
    FiniteWeight::from_ints(v)
}

/// Decompose `λ⊗μ` by peeling highest weights off the convolved weight multiset.
fn brute_tensor(d: &AffineAlgebraData, l: &FiniteWeight, m: &FiniteWeight) -> BTreeMap<FiniteWeight, u64> {
    let (a, b) = (weight_system(d, l).unwrap(), weight_system(d, m).unwrap());
    let mut prod: BTreeMap<FiniteWeight, i64> = BTreeMap::new();
    for (x, p) in &a.mults {
        for (y, q) in &b.mults {
            *prod.entry(x + y).or_insert(0) += (*p * *q) as i64;
        }
    }
    let mut out = BTreeMap::new();
    loop {
        prod.retain(|_, c| *c != 0);
        let top = prod.iter().filter(|(w, _)| w.is_dominant()).max_by_key(|(w, _)| d.form(w, &d.rho())).map(|(w, c)| (w.clone(), *c));
        let Some((w, c)) = top else { break };
        assert!(c > 0);
        out.insert(w.clone(), c as u64);
        for (x, p) in weight_system(d, &w).unwrap().mults {
            *prod.get_mut(&x).unwrap() -= c * p as i64;
        }
    }
    out
}

#[test]
fn fundamental_dimensions() {
    let cases: [(&str, &[u64]); 6] = [
        ("G2~1", &[7, 14]),
        ("F4~1", &[26, 52, 273, 1274]),
        ("E6~1", &[27, 27, 78, 351, 351, 2925]),
        ("D4~1", &[8, 8, 8, 28]),
        ("B3~1", &[7, 8, 21]),
        ("C3~1", &[6, 14, 14]),
    ];
    for (t, want) in cases {
        let d = data(t);
        let mut got: Vec<u64> = (1..=d.rank).map(|i| weyl_dimension(&d, &FiniteWeight::fundamental(d.rank, i)).unwrap()).collect();
        got.sort();
        assert_eq!(got, want, "{t}");
    }
    let e8 = data("E8~1");
    let smallest = (1..=8).map(|i| weyl_dimension(&e8, &FiniteWeight::fundamental(8, i)).unwrap()).min();
    assert_eq!(smallest, Some(248));
    assert_eq!(weyl_dimension(&data("A2~1"), &fw(&[3, 3])).unwrap(), 64);
}

#[test]
fn g2_seven_squared() {
    let d = data("G2~1");
    let seven = (1..=2).map(|i| FiniteWeight::fundamental(2, i)).find(|w| weyl_dimension(&d, w).unwrap() == 7).unwrap();
    let dec = tensor_decompose(&d, &seven, &seven).unwrap();
    let mut dims: Vec<u64> = dec.terms.iter().map(|(w, c)| c * weyl_dimension(&d, w).unwrap()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 7, 14, 27]);
}

#[test]
fn rank_one_dimension_limit() {
    let d = data("A1~1");
    let xi = fw(&[1]);
    for n in 0..6 {
        let dim = (n + 1) as f64;
        let f = |m: i64| char_eval(&d, &fw(&[n]), &xi, m).unwrap();
        let m = 400;
        let (coarse, fine) = (f(m), f(2 * m));
        let rich = (fine * 4.0 - coarse) / 3.0;
        assert!(fine.im.abs() < 1e-9 && rich.im.abs() < 1e-9);
        assert!((rich.re - dim).abs() < 1e-7, "n={n} {rich}");
        if n > 0 {
            assert!((rich.re - dim).abs() < (fine.re - dim).abs() / 100.0);
        }
    }
}

#[test]
fn cache_round_trip() {
    let d = data("B3~1");
    let ws = weight_system(&d, &fw(&[1, 1, 1])).unwrap();
    let dir = tempfile::tempdir().unwrap();
    save_cache(dir.path()).unwrap();
    assert!(load_cache(dir.path()).unwrap() >= 1);
    assert_eq!(weight_system(&d, &fw(&[1, 1, 1])).unwrap(), ws);
    assert_eq!(load_cache(&dir.path().join("absent")).unwrap(), 0);
}

fn small_weight(rank: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..3, rank)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn tensor_matches_brute_force(t in 0..TYPES.len(), a in small_weight(3), b in small_weight(3)) {
        let d = data(TYPES[t]);
        let (l, m) = (fw(&a[..d.rank]), fw(&b[..d.rank]));
        let dec = tensor_decompose(&d, &l, &m).unwrap();
        prop_assert_eq!(&dec.terms, &brute_tensor(&d, &l, &m));
        prop_assert_eq!(dec.terms, tensor_decompose(&d, &m, &l).unwrap().terms);
    }

    #[test]
    fn tensor_dimension_multiplies(t in 0..TYPES.len(), a in small_weight(3), b in small_weight(3)) {
        let d = data(TYPES[t]);
        let (l, m) = (fw(&a[..d.rank]), fw(&b[..d.rank]));
        let total: u64 = tensor_decompose(&d, &l, &m).unwrap().terms.iter().map(|(w, c)| c * weyl_dimension(&d, w).unwrap()).sum();
        prop_assert_eq!(total, weyl_dimension(&d, &l).unwrap() * weyl_dimension(&d, &m).unwrap());
    }

    #[test]
    fn weight_system_is_weyl_invariant(t in 0..TYPES.len(), a in small_weight(3)) {
        let d = data(TYPES[t]);
        let ws = weight_system(&d, &fw(&a[..d.rank])).unwrap();
        prop_assert_eq!(ws.dim(), weyl_dimension(&d, &ws.highest).unwrap());
        for (w, c) in &ws.mults {
            for i in 1..=d.rank {
                prop_assert_eq!(ws.mults.get(&reflect(&d, i, w)), Some(c));
            }
        }
    }

    #[test]
    fn character_formula_matches_weight_sum(t in 0..TYPES.len(), a in small_weight(3), x in prop::collection::vec(1i64..6, 3), m in 7i64..20) {
        let d = data(TYPES[t]);
        let (l, xi) = (fw(&a[..d.rank]), fw(&x[..d.rank]));
        let sum = char_eval_weights(&d, &l, &xi, m).unwrap();
        if let Ok(v) = char_eval(&d, &l, &xi, m) {
            prop_assert!((v - sum).norm() < 1e-8 * (1.0 + sum.norm()), "{} vs {}", v, sum);
        }
        let half = xi.scale(Q::new(1, 2));
        let w = char_eval_weights(&d, &l, &half, m).unwrap();
        let v2 = char_eval_weights(&d, &l, &xi, 2 * m).unwrap();
        prop_assert!((w - v2).norm() < 1e-9 * (1.0 + w.norm()));
    }
}
