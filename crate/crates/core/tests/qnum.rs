//! Quantum integers and their identities against a direct sine oracle.

use cellforge::{check_identities, qint, QContext};
use proptest::prelude::*;

fn sine_q(n: u32, m: i64) -> f64 {
    let t = std::f64::consts::PI / f64::from(n);
    (m as f64 * t).sin() / t.sin()
}

fn ctx(n: u32) -> QContext {
    QContext::root_of_unity(n).unwrap()
}

#[test]
fn first_values() {
    for n in [4, 7, 12, 24] {
        assert_eq!(qint(&ctx(n), 0), 0.0);
        assert_eq!(qint(&ctx(n), 1), 1.0);
    }
    assert!((qint(&ctx(6), 3) - 2.0).abs() < 1e-15);
    assert!((qint(&ctx(6), 3) - sine_q(6, 3)).abs() < 1e-15);
}

#[test]
fn reflection_at_n8() {
    let q = ctx(8);
    assert!((q.qint(6) - 1.8477590650).abs() < 1e-10);
    assert!((q.qint(6) - q.qint(2)).abs() < 1e-15);
}

#[test]
fn determinant_at_n6() {
    let q = ctx(6);
    assert!((q.qint(2).powi(2) - q.qint(1) * q.qint(3) - 1.0).abs() < 1e-14);
}

#[test]
fn fusion_at_n12() {
    let lhs = sine_q(12, 4) * sine_q(12, 2);
    let rhs = sine_q(12, 3) + sine_q(12, 5);
    assert!((lhs - rhs).abs() < 1e-12);
    let q = ctx(12);
    assert!((q.qint(4) * q.qint(2) - q.qint(3) - q.qint(5)).abs() < 1e-12);
    assert!(check_identities(&q, 10).unwrap().fusion < 1e-12);
}

#[test]
fn e24_relation() {
    assert!((sine_q(24, 4).powi(2) - sine_q(24, 2) * sine_q(24, 10)).abs() < 1e-12);
    let rep = check_identities(&ctx(24), 22).unwrap();
    assert!(rep.e24_relation.unwrap() < 1e-12);
    assert!(check_identities(&ctx(12), 10)
        .unwrap()
        .e24_relation
        .is_none());
}

#[test]
fn identity_range_is_checked() {
    assert!(check_identities(&ctx(10), 9).is_err());
    assert!(check_identities(&QContext::generic(0.5).unwrap(), 3).is_err());
}

#[test]
fn extended_precision_agrees() {
    for n in [8, 24, 64] {
        let q = ctx(n).with_precision(128).unwrap();
        assert_eq!(q.precision(), 128);
        for m in 0..=i64::from(n) {
            assert!((q.qint(m) - sine_q(n, m)).abs() < 1e-13, "n = {n}, m = {m}");
        }
    }
}

#[test]
fn generic_q() {
    let x = 0.37;
    let q = QContext::generic(x).unwrap();
    for m in 1..20 {
        let want = (m as f64 * x).sinh() / x.sinh();
        assert!((q.qint(m) - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn invalid_contexts() {
    assert!(QContext::root_of_unity(3).is_err());
    assert!(QContext::generic(0.0).is_err());
    assert!(QContext::generic(-1.0).is_err());
    assert!(ctx(8).with_precision(20).is_err());
}

proptest! {
    #[test]
    fn positive_and_symmetric(n in 4u32..=64, m in 1i64..64) {
        let m = 1 + (m - 1) % (i64::from(n) - 1);
        let q = ctx(n);
        prop_assert!(q.qint(m) > 0.0);
        prop_assert!((q.qint(m) - q.qint(i64::from(n) - m)).abs() <= 1e-12);
        prop_assert!((q.qint(m) - sine_q(n, m)).abs() <= 1e-12);
    }

    #[test]
    fn identity_families_hold(n in 4u32..=64) {
        let rep = check_identities(&ctx(n), n - 2).unwrap();
        prop_assert!(rep.passes(1e-12), "n = {n}: {rep:?}");
    }
}
