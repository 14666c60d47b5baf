//! Construction, verification, fingerprints, the connection and the solver.

use cellforge::{
    build_graph, check_yang_baxter, connection, construct_cells, fingerprint, solve_cells,
    verify_type_i, verify_type_ii, GraphSpec, SolveOptions, Variant,
};
use cellforge_bench::{system, GRAPHS};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn construct(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct");
    for g in GRAPHS {
        let spec: GraphSpec = g.parse().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g), &spec, |b, &spec| {
            b.iter(|| construct_cells(black_box(spec), Variant::admissible(spec)[0]).unwrap())
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    for g in GRAPHS {
        let cs = system(g);
        group.bench_with_input(BenchmarkId::from_parameter(g), &cs, |b, cs| {
            b.iter(|| {
                (
                    verify_type_i(black_box(cs)).max,
                    verify_type_ii(black_box(cs)).max,
                )
            })
        });
    }
    group.finish();
}

fn fingerprints(c: &mut Criterion) {
    let mut group = c.benchmark_group("fingerprint");
    for g in GRAPHS {
        let cs = system(g);
        group.bench_with_input(BenchmarkId::from_parameter(g), &cs, |b, cs| {
            b.iter(|| fingerprint(black_box(cs)))
        });
    }
    group.finish();
}

fn yang_baxter(c: &mut Criterion) {
    let mut group = c.benchmark_group("yang_baxter");
    group.sample_size(10);
    for g in GRAPHS {
        let cs = system(g);
        group.bench_with_input(BenchmarkId::from_parameter(g), &cs, |b, cs| {
            b.iter(|| check_yang_baxter(&connection(black_box(cs))).residual)
        });
    }
    group.finish();
}

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for g in ["A:6", "E8star", "Astar:8"] {
        let graph = build_graph(g.parse().unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g), &graph, |b, graph| {
            b.iter(|| {
                solve_cells(black_box(graph), &SolveOptions::default())
                    .unwrap()
                    .objective
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    construct,
    verify,
    fingerprints,
    yang_baxter,
    solver
);
criterion_main!(benches);
