//! Graph catalog, triangle and frame enumeration, PF data and orbifolds.

use std::collections::BTreeSet;

use cellforge::graphs::{d_orbifold, e1_orbifold};
use cellforge::{
    build_graph, pf_data, EdgeTag, Family, Graph, GraphSpec, QContext, Triangle, VertexId,
};

fn graph(s: &str) -> Graph {
    build_graph(s.parse().unwrap()).unwrap()
}

fn sine_q(n: u32, m: i64) -> f64 {
    let t = std::f64::consts::PI / n as f64;
    (m as f64 * t).sin() / t.sin()
}

/// Brute force over all ordered edge triples.
fn brute_triangles(g: &Graph) -> BTreeSet<[usize; 3]> {
    let e = g.edges();
    let mut out = BTreeSet::new();
    for a in e {
        for b in e {
            for c in e {
                if a.target == b.source && b.target == c.source && c.target == a.source {
                    let t = [a.id.0, b.id.0, c.id.0];
                    let rots = [t, [t[1], t[2], t[0]], [t[2], t[0], t[1]]];
                    out.insert(*rots.iter().min().unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn a5_counts() {
    let g = graph("A:5");
    assert_eq!(g.vertex_count(), 6);
    assert_eq!(g.edge_count(), 9);
    // the up-triangles at (0,0), (1,0), (0,1) and the down-triangle at (0,0)
    assert_eq!(g.triangles().len(), 4);
}

#[test]
fn triangle_enumeration_matches_brute_force() {
    for spec in GraphSpec::catalog() {
        let g = build_graph(spec).unwrap();
        let fast: BTreeSet<[usize; 3]> =
            g.triangles().iter().map(|t| t.edges.map(|e| e.0)).collect();
        assert_eq!(fast, brute_triangles(&g), "{spec}");
        assert_eq!(fast.len(), g.triangles().len(), "{spec}");
    }
}

#[test]
fn every_edge_lies_on_a_triangle() {
    for spec in GraphSpec::catalog() {
        let g = build_graph(spec).unwrap();
        let used: BTreeSet<_> = g.triangles().iter().flat_map(|t| t.edges).collect();
        assert_eq!(used.len(), g.edge_count(), "{spec}");
    }
}

#[test]
fn pf_eigenvalue_is_q3_and_weights_agree() {
    for spec in GraphSpec::catalog() {
        let g = build_graph(spec).unwrap();
        let pf = pf_data(&g).unwrap();
        let q3 = sine_q(spec.n, 3);
        assert!(
            (pf.eigenvalue - q3).abs() < 1e-9,
            "{spec}: {}",
            pf.eigenvalue
        );
        for (k, (&a, &b)) in pf.weights.iter().zip(g.pf_weights()).enumerate() {
            assert!(
                (a - b).abs() < 1e-10 * b.max(1.0),
                "{spec} vertex {k}: {a} vs {b}"
            );
        }
        let adj = g.adjacency();
        let phi = nalgebra::DVector::from_column_slice(g.pf_weights());
        assert!((&adj * &phi - &phi * q3).amax() < 1e-9, "{spec}");
        assert!((adj.transpose() * &phi - &phi * q3).amax() < 1e-9, "{spec}");
        assert_eq!(g.phi(g.distinguished()), 1.0, "{spec}");
    }
}

#[test]
fn closed_form_weights() {
    let g = graph("E8");
    assert_eq!(g.vertex_count(), 12);
    let ctx = QContext::root_of_unity(8).unwrap();
    for l in 1..=6 {
        assert_eq!(g.phi(g.require_vertex(&format!("i_{l}")).unwrap()), 1.0);
        let j = g.phi(g.require_vertex(&format!("j_{l}")).unwrap());
        assert!((j - ctx.qint(3)).abs() < 1e-12);
    }
    let g = graph("E5:12");
    assert_eq!(g.vertex_count(), 17);
    let q = |m| sine_q(12, m);
    let phi = |l: &str| g.phi(g.require_vertex(l).unwrap());
    assert!((phi("1") - q(3) * q(6) / q(2)).abs() < 1e-10);
    assert!((phi("6") - q(2) * q(3) * q(3) / q(6)).abs() < 1e-10);
    assert!((phi("12") - q(2) * q(2)).abs() < 1e-10);
    assert_eq!(g.label(g.distinguished()), "10");
    let g = graph("E24");
    let pf = pf_data(&g).unwrap();
    let q = |m| sine_q(24, m);
    let v = |l: &str| pf.weights[g.require_vertex(l).unwrap().0];
    assert!((v("4") / v("1") - q(4) * q(7) / q(2)).abs() < 1e-10);
}

#[test]
fn e8star_triangles_include_loops() {
    let g = graph("E8star");
    assert_eq!(g.triangles().len(), 6);
    let loops = g
        .triangles()
        .iter()
        .filter(|t| t.edges[0] == t.edges[1] && t.edges[1] == t.edges[2])
        .count();
    assert_eq!(loops, 2);
}

#[test]
fn type_i_frames_on_simple_and_multiple_edges() {
    let g = graph("A:5");
    assert!(g.type_i_frames().iter().all(|f| f.alpha == f.alpha_prime));
    let g = graph("D:9");
    let gamma: Vec<_> = g
        .type_i_frames()
        .into_iter()
        .filter(|f| f.alpha != f.alpha_prime)
        .collect();
    assert_eq!(gamma.len(), 2);
    let tags: BTreeSet<_> = gamma.iter().map(|f| g.edge(f.alpha).tag).collect();
    assert_eq!(
        tags,
        BTreeSet::from([Some(EdgeTag::Gamma), Some(EdgeTag::GammaPrime)])
    );
}

#[test]
fn type_ii_frame_count_matches_adjacency_oracle() {
    // A type II frame is a pair of two-step paths a -> b <- c and
    // a -> d <- c sharing endpoints, so the count is the squared Frobenius
    // norm of A A^T.
    for s in ["A:6", "D:9", "E8star", "E1:12", "E24"] {
        let g = graph(s);
        let a = g.adjacency();
        let m = &a * a.transpose();
        let expected: f64 = m.iter().map(|x| x * x).sum();
        assert_eq!(g.type_ii_frames().len() as f64, expected, "{s}");
    }
}

#[test]
fn orbifold_vertex_counts() {
    for n in 5..=12u32 {
        let (a, orb) = d_orbifold(n).unwrap();
        let f = orb.fixed.iter().filter(|&&x| x).count();
        assert_eq!(
            orb.graph.vertex_count(),
            (a.vertex_count() - f) / 3 + 3 * f,
            "n={n}"
        );
        assert_eq!(f, usize::from(n % 3 == 0), "n={n}");
    }
    let (_, orb) = d_orbifold(6).unwrap();
    for c in 1..=3 {
        orb.graph.require_vertex(&format!("(1,1)_{c}")).unwrap();
    }
    let (_, orb) = d_orbifold(9).unwrap();
    let g = &orb.graph;
    let x = g.require_vertex("(2,1)").unwrap();
    let y = g.require_vertex("(1,2)").unwrap();
    let tags: Vec<_> = g
        .edges_between(x, y)
        .iter()
        .map(|&e| g.edge(e).tag)
        .collect();
    assert_eq!(tags, vec![Some(EdgeTag::Gamma), Some(EdgeTag::GammaPrime)]);
    let k = g.require_vertex("(2,2)_1").unwrap();
    assert!(
        (g.phi(k) - sine_q(9, 3) * sine_q(9, 3) * sine_q(9, 6) / sine_q(9, 2) / 3.0).abs() < 1e-12
    );
}

#[test]
fn e1_from_e2() {
    let (_, orb) = e1_orbifold().unwrap();
    let g = &orb.graph;
    assert_eq!(g.vertex_count(), 12);
    let p = g.require_vertex("p").unwrap();
    let q = g.require_vertex("q").unwrap();
    let r = g.require_vertex("r").unwrap();
    let tags = |a, b| -> Vec<_> {
        g.edges_between(a, b)
            .iter()
            .map(|&e| g.edge(e).tag)
            .collect()
    };
    assert_eq!(
        tags(r, p),
        vec![Some(EdgeTag::Alpha), Some(EdgeTag::AlphaPrime)]
    );
    assert_eq!(
        tags(p, q),
        vec![Some(EdgeTag::Beta), Some(EdgeTag::BetaPrime)]
    );
    for l in 1..=3 {
        for x in ["i", "j", "k"] {
            g.require_vertex(&format!("{x}_{l}")).unwrap();
        }
    }
}

#[test]
fn selectors() {
    let s = |x: &str| x.parse::<GraphSpec>().unwrap();
    assert_eq!(s("A:6"), s("A(6)"));
    assert_eq!(s("Astar:7"), s("A*:7"));
    assert_eq!(s("E8star"), s("E(8)*"));
    assert_eq!(s("E24"), s("E(24)"));
    assert_eq!(s("E1:12").family, Family::E1);
    assert_eq!(s("Dstar:8").to_string(), "D*(8)");
    assert!("A:3".parse::<GraphSpec>().is_err());
    assert!("Dstar:5".parse::<GraphSpec>().is_err());
    assert!("E8:9".parse::<GraphSpec>().is_err());
    assert!("F4".parse::<GraphSpec>().is_err());
    let e4 = build_graph(s("E4:12")).unwrap_err();
    assert!(e4.to_string().contains("not determined"));
}

#[test]
fn canonical_triangle_is_smallest_rotation() {
    let g = graph("E1:12");
    for t in g.triangles() {
        for r in t.rotations() {
            assert_eq!(Triangle::canonical(r), *t);
            assert!(t.edges <= r);
        }
    }
    assert_eq!(g.triangle_vertices(&g.triangles()[0]).len(), 3);
    let _ = VertexId(0);
}
