//! Constructed cell systems: frame equations through an independent
//! brute-force evaluation, closed-form values, gauge behaviour and equivalence.

use std::collections::HashMap;

use cellforge::cells::lift_cells;
use cellforge::error::CellforgeError;
use cellforge::graphs::d_orbifold;
use cellforge::{
    construct_cells, equivalent, fingerprint, gauge_transform, random_gauge, verify_type_i,
    verify_type_ii, CellSystem, Family, GraphSpec, Variant,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spec(s: &str) -> GraphSpec {
    s.parse().unwrap()
}

fn cells(s: &str, v: Variant) -> CellSystem {
    construct_cells(spec(s), v).unwrap()
}

fn all_systems() -> Vec<CellSystem> {
    GraphSpec::catalog()
        .into_iter()
        .flat_map(|s| {
            Variant::admissible(s)
                .into_iter()
                .map(move |v| construct_cells(s, v).unwrap())
        })
        .collect()
}

/// Cell lookup by any rotation of an edge triple, built without the
/// library's own lookup.
fn table(cs: &CellSystem) -> HashMap<[usize; 3], Complex64> {
    let mut t = HashMap::new();
    for (tri, w) in cs.graph().triangles().iter().zip(cs.values()) {
        let e = tri.edges.map(|e| e.0);
        for r in [e, [e[1], e[2], e[0]], [e[2], e[0], e[1]]] {
            t.insert(r, *w);
        }
    }
    t
}

/// Largest type I residual by summing over every edge pair.
fn brute_type_i(cs: &CellSystem) -> f64 {
    let g = cs.graph();
    let w = table(cs);
    let zero = Complex64::new(0.0, 0.0);
    let get = |k: [usize; 3]| w.get(&k).copied().unwrap_or(zero);
    let q2 = g.qcontext().qint(2);
    let mut worst: f64 = 0.0;
    for a in g.edges() {
        for a2 in g.edges() {
            if (a.source, a.target) != (a2.source, a2.target) {
                continue;
            }
            let mut s = zero;
            for b in g.edges().iter().filter(|b| b.source == a.target) {
                for c in g
                    .edges()
                    .iter()
                    .filter(|c| c.source == b.target && c.target == a.source)
                {
                    s += get([a.id.0, b.id.0, c.id.0]) * get([a2.id.0, b.id.0, c.id.0]).conj();
                }
            }
            let rhs = if a.id == a2.id {
                q2 * g.phi(a.source) * g.phi(a.target)
            } else {
                0.0
            };
            worst = worst.max((s - rhs).norm());
        }
    }
    worst
}

/// Largest type II residual over all frames `a1: a->b, a2: c->b, a3: c->d,
/// a4: a->d`.
fn brute_type_ii(cs: &CellSystem) -> f64 {
    let g = cs.graph();
    let w = table(cs);
    let zero = Complex64::new(0.0, 0.0);
    let get = |k: [usize; 3]| w.get(&k).copied().unwrap_or(zero);
    let e = g.edges();
    let mut worst: f64 = 0.0;
    for a1 in e {
        for a2 in e.iter().filter(|x| x.target == a1.target) {
            for a3 in e.iter().filter(|x| x.source == a2.source) {
                for a4 in e
                    .iter()
                    .filter(|x| x.source == a1.source && x.target == a3.target)
                {
                    let mut s = zero;
                    for beta in e.iter().filter(|x| x.source == a1.target) {
                        let x = beta.target;
                        for delta in e.iter().filter(|d| d.source == a3.target && d.target == x) {
                            for g1 in e.iter().filter(|y| y.source == x && y.target == a1.source) {
                                for g2 in
                                    e.iter().filter(|y| y.source == x && y.target == a2.source)
                                {
                                    s += get([a1.id.0, beta.id.0, g1.id.0])
                                        * get([a2.id.0, beta.id.0, g2.id.0]).conj()
                                        * get([a3.id.0, delta.id.0, g2.id.0])
                                        * get([a4.id.0, delta.id.0, g1.id.0]).conj()
                                        / g.phi(x);
                                }
                            }
                        }
                    }
                    let (pa, pb) = (g.phi(a1.source), g.phi(a1.target));
                    let (pc, pd) = (g.phi(a2.source), g.phi(a3.target));
                    let mut rhs = 0.0;
                    if a1.id == a2.id && a3.id == a4.id {
                        rhs += pa * pb * pd;
                    }
                    if a1.id == a4.id && a2.id == a3.id {
                        rhs += pa * pb * pc;
                    }
                    worst = worst.max((s - rhs).norm());
                }
            }
        }
    }
    worst
}

#[test]
fn every_system_satisfies_type_i() {
    for cs in all_systems() {
        let r = brute_type_i(&cs);
        assert!(r <= 1e-9, "{} {}: {r:e}", cs.graph().name(), cs.variant());
        assert!((verify_type_i(&cs).max - r).abs() < 1e-9);
    }
}

#[test]
fn small_systems_satisfy_type_ii() {
    for cs in all_systems()
        .into_iter()
        .filter(|cs| cs.graph().edge_count() <= 60)
    {
        let r = brute_type_ii(&cs);
        assert!(r <= 1e-9, "{} {}: {r:e}", cs.graph().name(), cs.variant());
        assert!(verify_type_ii(&cs).max <= 1e-9);
    }
}

#[test]
fn large_systems_satisfy_type_ii() {
    for cs in all_systems()
        .into_iter()
        .filter(|cs| cs.graph().edge_count() > 60)
    {
        assert!(verify_type_ii(&cs).max <= 1e-9, "{}", cs.graph().name());
    }
}

#[test]
fn e8star_closed_form_cells() {
    let cs = cells("E8star", Variant::Default);
    let q = cs.graph().qcontext();
    let (q2, q3) = (q.qint(2), q.qint(3));
    let close = |a: Complex64, b: f64| (a - b).norm() < 1e-12;
    assert!(close(cs.cell("1", "2", "3").unwrap(), (q2 * q3).sqrt()));
    assert!(close(cs.cell("2", "4", "3").unwrap(), (q2 * q3).sqrt()));
    assert!(close(cs.cell("2", "2", "3").unwrap(), q3 / q2.sqrt()));
    assert!(close(cs.cell("2", "3", "3").unwrap(), q3 / q2.sqrt()));
    assert!(close(
        cs.cell("2", "2", "2").unwrap(),
        q3.powi(3).sqrt() / q2.sqrt()
    ));
    assert!(close(
        cs.cell("3", "3", "3").unwrap(),
        -q3.powi(3).sqrt() / q2.sqrt()
    ));
}

#[test]
fn a_magnitudes_match_sine_products() {
    for n in 4..=12u32 {
        let s = |m: i64| {
            let t = std::f64::consts::PI / f64::from(n);
            (m as f64 * t).sin() / t.sin()
        };
        let cs = cells(&format!("A:{n}"), Variant::Default);
        for k in 0..=i64::from(n) - 4 {
            for m in 0..=i64::from(n) - 4 - k {
                let lab = |a: i64, b: i64| format!("({a},{b})");
                let up = cs.cell(&lab(k, m), &lab(k + 1, m), &lab(k, m + 1)).unwrap();
                let want = s(k + 1) * s(k + 2) * s(m + 1) * s(m + 2) * s(k + m + 2) * s(k + m + 3)
                    / s(2).powi(2);
                assert!(
                    (up.norm_sqr() - want).abs() <= 1e-10 * want.max(1.0),
                    "A({n}) up({k},{m})"
                );
                if k + m + 5 <= i64::from(n) {
                    let down = cs
                        .cell(&lab(k + 1, m), &lab(k, m + 1), &lab(k + 1, m + 1))
                        .unwrap();
                    let want =
                        s(k + 1) * s(k + 2) * s(m + 1) * s(m + 2) * s(k + m + 3) * s(k + m + 4)
                            / s(2).powi(2);
                    assert!(
                        (down.norm_sqr() - want).abs() <= 1e-10 * want.max(1.0),
                        "A({n}) down({k},{m})"
                    );
                }
            }
        }
    }
}

#[test]
fn fixed_point_cells_are_a_third() {
    for n in [6, 9, 12] {
        let (a, orb) = d_orbifold(n).unwrap();
        let parent = construct_cells(a.spec().unwrap(), Variant::Default).unwrap();
        let lifted = lift_cells(&orb, &parent).unwrap();
        let catalog = construct_cells(
            GraphSpec::new(Family::D, Some(n)).unwrap(),
            Variant::Default,
        )
        .unwrap();
        assert_eq!(lifted.values(), catalog.values(), "D({n})");
        let mut seen = 0;
        for (t, tri) in a.triangles().iter().enumerate() {
            if !orb.touches_fixed(&a, tri) {
                continue;
            }
            for sheet in 0..3 {
                if let Some(child) = orb.image(tri, sheet) {
                    let (p, c) = (parent.value(t).norm_sqr(), catalog.value(child).norm_sqr());
                    assert!((3.0 * c - p).abs() <= 1e-10 * p, "D({n})");
                    seen += 1;
                }
            }
        }
        assert!(seen > 0);
    }
}

#[test]
fn conjugate_variant_is_complex_conjugate() {
    for n in [6, 9, 12] {
        let a = cells(&format!("D:{n}"), Variant::Default);
        let b = cells(&format!("D:{n}"), Variant::Conjugate);
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x.conj() - y).norm() < 1e-14);
        }
    }
}

#[test]
fn rejected_requests() {
    assert!(matches!(
        construct_cells(spec("A:6"), Variant::Plus),
        Err(CellforgeError::IllegalVariant { .. })
    ));
    assert!(matches!(
        construct_cells(spec("E4:12"), Variant::Default),
        Err(CellforgeError::Unsupported(_))
    ));
    assert!(construct_cells(spec("E1:12"), Variant::Conjugate).is_err());
}

#[test]
fn gauge_keeps_residuals_and_fingerprint() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in ["A:7", "D:9", "Astar:8", "E8star", "E1:12", "E2:12", "E5"] {
        let cs = cells(s, Variant::Default);
        let fp = fingerprint(&cs);
        for _ in 0..10 {
            let moved = gauge_transform(&cs, &random_gauge(cs.graph(), &mut rng)).unwrap();
            assert!(verify_type_i(&moved).max <= 1e-9, "{s}");
            assert!(verify_type_ii(&moved).max <= 1e-9, "{s}");
            assert!(fingerprint(&moved).distance(&fp) <= 1e-8, "{s}");
        }
    }
}

#[test]
fn rephased_a6_is_equivalent_with_witness() {
    let cs = cells("A:6", Variant::Default);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let moved = gauge_transform(&cs, &random_gauge(cs.graph(), &mut rng)).unwrap();
    match equivalent(&cs, &moved).unwrap() {
        cellforge::Equivalence::Equivalent { witness, residual } => {
            assert!(residual < 1e-8);
            let back = gauge_transform(&moved, &witness).unwrap();
            for (x, y) in back.values().iter().zip(cs.values()) {
                assert!((x - y).norm() < 1e-8);
            }
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn plus_and_minus_are_inequivalent() {
    for s in ["Astar:6", "Astar:8", "Dstar:8", "E1:12", "E2:12"] {
        let p = cells(s, Variant::Plus);
        let m = cells(s, Variant::Minus);
        assert!(equivalent(&p, &m).unwrap().is_inequivalent(), "{s}");
    }
}

#[test]
fn e2_conjugate_of_plus_is_minus_after_relabelling() {
    let p = cells("E2:12", Variant::Plus);
    let m = cells("E2:12", Variant::Minus);
    let sigma = cellforge::suite::e2_sigma(p.graph()).unwrap();
    let relabelled = cellforge::permute_vertices(&p.conj(), &sigma).unwrap();
    assert!(equivalent(&relabelled, &m).unwrap().is_equivalent());
}
