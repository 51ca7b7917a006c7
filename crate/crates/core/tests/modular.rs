mod common;

use common::{data, SMALL_UNTWISTED};
use kacfusion_core::modular::{
    anomaly, modular_action, pairing_closed_form, pairing_matrix, pairing_r, relation_exponent, t_compatibility, u21_action,
    unitarity_analogue, validate_beta,
};
use kacfusion_core::{ComplexMatrix, Error, FiniteWeight, LevelWeight, C64, Q};

fn closed_form_matrix(t: &str, k: i64, r: u32, beta: &FiniteWeight) -> (ComplexMatrix, ComplexMatrix) {
    let d = data(t);
    let defining = pairing_matrix(&d, k, r).unwrap();
    let basis = kacfusion_core::enum_weights(&d, k, kacfusion_core::WeightVariant::Pk).unwrap();
    let n = basis.len();
    let closed = ComplexMatrix::from_fn(n, n, |a, b| pairing_closed_form(&d, k, r, basis.finite(a), basis.finite(b), beta).unwrap());
    (defining, closed)
}

fn relative_fit(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let (c, res) = a.fit_scalar(b);
    assert!(c.norm() > 1e-9);
    res / a.max_abs()
}

#[test]
fn exponents() {
    assert_eq!([1, 2, 3].map(relation_exponent), [3, 4, 6]);
}

#[test]
fn modular_relations_hold() {
    for (t, ks) in [
        ("A2~1", 1..=3),
        ("B3~1", 1..=2),
        ("G2~1", 1..=2),
        ("A2~2", 1..=5),
        ("A4~2", 1..=3),
        ("A3~2", 1..=3),
        ("D4~2", 1..=2),
        ("E6~2", 1..=1),
    ] {
        let d = data(t);
        for k in ks {
            let m = modular_action(&d, k).unwrap();
            assert_eq!(m.r, d.atype.r);
            for (name, res) in &m.relations_residuals {
                if t != "A2~1" || !name.ends_with("c*I") {
                    assert!(*res < 1e-8, "{t} k={k} {name}: {res:e}");
                }
            }
        }
    }
}

#[test]
fn a2_cube_is_charge_conjugation() {
    let m = modular_action(&data("A2~1"), 2).unwrap();
    assert!(m.relations_residuals["(u12 u21)^3 = c*C"] < 1e-10);
    assert!(m.relations_residuals["(u12 u21^1)^3 = c*I"] > 1e-3);
}

#[test]
fn u21_double_sum_is_tst() {
    for t in SMALL_UNTWISTED {
        let d = data(t);
        for k in 1..=2 {
            let m = modular_action(&d, k).unwrap();
            let tst = &(&m.t * &m.s) * &m.t;
            assert!(relative_fit(&u21_action(&d, k).unwrap(), &tst) < 1e-8, "{t} k={k}");
        }
    }
}

#[test]
fn characters_orthonormal() {
    for t in SMALL_UNTWISTED {
        for k in 1..=3 {
            assert!(unitarity_analogue(&data(t), k).unwrap() < 1e-9, "{t} k={k}");
        }
    }
}

#[test]
fn own_t_agrees_with_ambient() {
    for t in ["A3~2", "A5~2", "D3~2", "D4~3"] {
        for k in 1..=2 {
            let (c, res) = t_compatibility(&data(t), k).unwrap();
            assert!((c.norm() - 1.0).abs() < 1e-9 && res < 1e-9, "{t} k={k}: {c} {res:e}");
        }
    }
}

#[test]
fn vacuum_pairing_is_gauss_sum() {
    for t in SMALL_UNTWISTED {
        let d = data(t);
        for k in 1..=3 {
            let m = modular_action(&d, k).unwrap();
            let z = m.basis.index_of(&FiniteWeight::zero(d.rank)).unwrap();
            for r in 1..=2 {
                let gauss: C64 = (0..m.s.rows()).map(|nu| m.s[(z, nu)] * m.t[(nu, nu)].inv().powu(r) * m.s[(nu, z)]).sum();
                let vac = LevelWeight::new(FiniteWeight::zero(d.rank), k);
                let got = pairing_r(&d, k, r, &vac, &vac).unwrap();
                assert!((got - gauss).norm() < 1e-10, "{t} k={k} r={r}: {got} vs {gauss}");
            }
        }
    }
}

#[test]
fn closed_form_r1() {
    for t in SMALL_UNTWISTED {
        let d = data(t);
        for k in 1..=3 {
            let beta = FiniteWeight::zero(d.rank);
            validate_beta(&d, k, 1, &beta).unwrap();
            let (def, closed) = closed_form_matrix(t, k, 1, &beta);
            assert!(relative_fit(&def, &closed) < 1e-8, "{t} k={k}");
        }
    }
}

#[test]
fn closed_form_a1_r2_even_level() {
    let d = data("A1~1");
    let beta = FiniteWeight::zero(1);
    for k in [2, 4, 6, 8] {
        validate_beta(&d, k, 2, &beta).unwrap();
        let (def, closed) = closed_form_matrix("A1~1", k, 2, &beta);
        assert!(relative_fit(&def, &closed) < 1e-8, "k={k}");
    }
    for k in [1, 3, 5] {
        assert!(matches!(validate_beta(&d, k, 2, &beta), Err(Error::InvalidBeta(_))), "k={k}");
    }
}

#[test]
fn closed_form_vanishes_off_alcove() {
    let d = data("A2~1");
    let k = 2;
    let mu = FiniteWeight::from_ints(&[1, 0]);
    let beta = &mu + &d.rho();
    let lam = FiniteWeight::zero(2);
    assert_eq!(pairing_closed_form(&d, k, 1, &lam, &mu, &beta).unwrap(), C64::new(0.0, 0.0));
    let far = FiniteWeight::from_ints(&[-4, 0]);
    assert_eq!(pairing_closed_form(&d, k, 1, &lam, &mu, &far).unwrap(), C64::new(0.0, 0.0));
    assert!(matches!(
        pairing_closed_form(&data("A3~2"), 1, 2, &FiniteWeight::zero(3), &FiniteWeight::zero(3), &FiniteWeight::zero(3)),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn anomaly_of_vacuum() {
    let d = data("E8~1");
    let a = anomaly(&d, &LevelWeight::new(FiniteWeight::zero(8), 1));
    assert_eq!(a.m, Q::new(-1, 3));
}
