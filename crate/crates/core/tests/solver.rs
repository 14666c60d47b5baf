//! Solving the frame equations from random starts and classifying the
//! solutions by gauge invariants.

use cellforge::solver::objective;
use cellforge::{
    build_graph, classify_solutions, construct_cells, fingerprint, solve_cells, verify_type_i,
    verify_type_ii, GraphSpec, SolveOptions, SolveStatus, Variant,
};

fn spec(s: &str) -> GraphSpec {
    s.parse().unwrap()
}

fn opts(seed: u64) -> SolveOptions {
    SolveOptions {
        restarts: 20,
        seed,
        ..SolveOptions::default()
    }
}

#[test]
fn constructed_cells_have_zero_objective() {
    for s in ["A:6", "E8star", "Astar:8"] {
        let cs = construct_cells(spec(s), Variant::Default).unwrap();
        assert!(objective(&cs) < 1e-20, "{s}");
    }
}

#[test]
fn small_graphs_solve_to_the_constructed_class() {
    for s in ["A:5", "A:6", "E8star"] {
        let g = build_graph(spec(s)).unwrap();
        let out = solve_cells(&g, &opts(1)).unwrap();
        assert_eq!(out.status, SolveStatus::Solved, "{s}");
        assert!(out.objective <= 1e-16, "{s}: {:e}", out.objective);
        assert!(out.restart_objectives.iter().any(|&o| o <= 1e-16));
        let cs = out.cells.as_ref().unwrap();
        assert!(verify_type_i(cs).max <= 1e-7 && verify_type_ii(cs).max <= 1e-7);
        let want = fingerprint(&construct_cells(spec(s), Variant::Default).unwrap());
        assert!(
            out.fingerprint.as_ref().unwrap().matches(&want, 1e-6),
            "{s}"
        );
    }
}

#[test]
fn solver_is_deterministic_per_seed() {
    let g = build_graph(spec("A:6")).unwrap();
    let a = solve_cells(&g, &opts(7)).unwrap();
    let b = solve_cells(&g, &opts(7)).unwrap();
    assert_eq!(a.objective, b.objective);
    assert_eq!(a.cells.unwrap().values(), b.cells.unwrap().values());
}

#[test]
fn a8star_has_two_classes() {
    let s = spec("Astar:8");
    let g = build_graph(s).unwrap();
    let classes = classify_solutions(&g, 50, &opts(1)).unwrap();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().map(|c| c.count).sum::<usize>() <= 50);
    for v in [Variant::Plus, Variant::Minus] {
        let fp = fingerprint(&construct_cells(s, v).unwrap());
        assert!(
            classes.iter().any(|c| c.fingerprint.matches(&fp, 1e-6)),
            "{v}"
        );
    }
}
