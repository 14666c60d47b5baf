//! Numerical discovery of cell systems by least squares on the type I and
//! type II frame residuals, with gauge fixing and classification of the
//! solutions found by fingerprint.
//!
//! Each triangle carries a complex unknown `W = a + ib`. Every residual is
//! a sum of products of cells and conjugated cells, so residuals and their
//! derivatives are evaluated from a compiled list of monomials.

pub mod lm;

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cells::{fingerprint, verify_type_i, verify_type_ii, CellSystem, Fingerprint, Variant};
use crate::error::{CellforgeError, Result};
use crate::graphs::{EdgeId, Graph, VertexId};
use lm::{levenberg_marquardt, LmOptions};

/// Relative tolerance for bucketing solutions by fingerprint.
pub const CLASSIFY_TOL: f64 = 1e-6;

/// How angles are pinned before solving.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GaugeFixing {
    /// Make a maximal set of gauge-independent triangles real.
    #[default]
    Spanning,
    None,
}

/// Parameters of [`solve_cells`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Success when every frame residual is at most this value, which the
    /// objective bound `residual_tol^2` guarantees.
    pub residual_tol: f64,
    pub seed: u64,
    pub gauge_fixing: GaugeFixing,
    /// A vertex automorphism; cells along its orbits share one unknown.
    /// Gauge fixing is skipped in this mode.
    pub symmetry: Option<Vec<VertexId>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 500,
            residual_tol: 1e-8,
            seed: 1,
            gauge_fixing: GaugeFixing::Spanning,
            symmetry: None,
        }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || !(self.residual_tol > 0.0) {
            return Err(CellforgeError::Document(
                "solve options need restarts >= 1 and residual_tol > 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Solved,
    Failed,
}

/// Result of [`solve_cells`].
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// The best system found; present whenever the graph has triangles.
    pub cells: Option<CellSystem>,
    pub objective: f64,
    /// Iterations of the restart that produced `cells`.
    pub iterations: usize,
    /// Final objective of every restart that ran.
    pub restart_objectives: Vec<f64>,
    pub fingerprint: Option<Fingerprint>,
}

impl SolveOutcome {
    pub fn solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }
}

/// `coeff * prod(W_t or conj(W_t))`.
#[derive(Debug, Clone)]
struct Term {
    coeff: f64,
    factors: Vec<(usize, bool)>,
}

#[derive(Debug, Clone)]
struct Equation {
    terms: Vec<Term>,
    rhs: f64,
}

/// Frame equations over triangle unknowns.
#[derive(Debug, Clone)]
struct System {
    equations: Vec<Equation>,
    triangles: usize,
}

fn compile(g: &Graph) -> System {
    let mut equations = Vec::new();
    let tid = |e: [EdgeId; 3]| g.triangle_id(e);
    let q2 = g.qcontext().qint(2);
    for f in g.type_i_frames() {
        let (a, b) = (g.edge(f.alpha).source, g.edge(f.alpha).target);
        let mut terms = Vec::new();
        for &beta in g.out_edges(b) {
            let c = g.edge(beta).target;
            for &gamma in g.edges_between(c, a) {
                if let (Some(t1), Some(t2)) = (
                    tid([f.alpha, beta, gamma]),
                    tid([f.alpha_prime, beta, gamma]),
                ) {
                    terms.push(Term {
                        coeff: 1.0,
                        factors: vec![(t1, false), (t2, true)],
                    });
                }
            }
        }
        let rhs = if f.alpha == f.alpha_prime {
            q2 * g.phi(a) * g.phi(b)
        } else {
            0.0
        };
        equations.push(Equation { terms, rhs });
    }
    for f in g.type_ii_frames() {
        let a = g.edge(f.a1).source;
        let b = g.edge(f.a1).target;
        let c = g.edge(f.a2).source;
        let d = g.edge(f.a3).target;
        let mut terms = Vec::new();
        for &beta in g.out_edges(b) {
            let x = g.edge(beta).target;
            for &delta in g.edges_between(d, x) {
                for &g1 in g.edges_between(x, a) {
                    for &g2 in g.edges_between(x, c) {
                        let ids = (
                            tid([f.a1, beta, g1]),
                            tid([f.a2, beta, g2]),
                            tid([f.a3, delta, g2]),
                            tid([f.a4, delta, g1]),
                        );
                        if let (Some(t1), Some(t2), Some(t3), Some(t4)) = ids {
                            terms.push(Term {
                                coeff: 1.0 / g.phi(x),
                                factors: vec![(t1, false), (t2, true), (t3, false), (t4, true)],
                            });
                        }
                    }
                }
            }
        }
        let phi = |v: VertexId| g.phi(v);
        let mut rhs = 0.0;
        if f.a1 == f.a2 && f.a3 == f.a4 {
            rhs += phi(a) * phi(b) * phi(d);
        }
        if f.a1 == f.a4 && f.a2 == f.a3 {
            rhs += phi(a) * phi(b) * phi(c);
        }
        equations.push(Equation { terms, rhs });
    }
    System {
        equations,
        triangles: g.triangles().len(),
    }
}

/// Maps triangle unknowns to positions in the real parameter vector.
#[derive(Debug, Clone)]
struct Layout {
    /// `(index of a, index of b or None when pinned real)` per triangle.
    slots: Vec<(usize, Option<usize>)>,
    params: usize,
}

impl Layout {
    fn cells(&self, x: &DVector<f64>) -> Vec<Complex64> {
        self.slots
            .iter()
            .map(|&(a, b)| Complex64::new(x[a], b.map_or(0.0, |b| x[b])))
            .collect()
    }
}

fn layout(g: &Graph, opts: &SolveOptions) -> Layout {
    let nt = g.triangles().len();
    if let Some(perm) = &opts.symmetry {
        let orbit = triangle_orbits(g, perm);
        let mut rep: HashMap<usize, (usize, Option<usize>)> = HashMap::new();
        let mut params = 0;
        let slots = (0..nt)
            .map(|t| {
                *rep.entry(orbit[t]).or_insert_with(|| {
                    params += 2;
                    (params - 2, Some(params - 1))
                })
            })
            .collect();
        return Layout { slots, params };
    }
    let pinned = match opts.gauge_fixing {
        GaugeFixing::Spanning => spanning_pins(g),
        GaugeFixing::None => vec![false; nt],
    };
    let mut params = 0;
    let slots = (0..nt)
        .map(|t| {
            let a = params;
            params += 1;
            if pinned[t] {
                (a, None)
            } else {
                params += 1;
                (a, Some(a + 1))
            }
        })
        .collect();
    Layout { slots, params }
}

/// Smallest triangle index in the orbit of each triangle under `perm`.
fn triangle_orbits(g: &Graph, perm: &[VertexId]) -> Vec<usize> {
    let image = |t: usize| -> Option<usize> {
        let edges = g.triangles()[t].edges.map(|e| {
            let ed = g.edge(e);
            g.edges_between(perm[ed.source.0], perm[ed.target.0])
                .iter()
                .copied()
                .find(|&f| g.edge(f).tag == ed.tag)
        });
        match edges {
            [Some(a), Some(b), Some(c)] => g.triangle_id([a, b, c]),
            _ => None,
        }
    };
    (0..g.triangles().len())
        .map(|t| {
            let mut best = t;
            let mut cur = t;
            for _ in 0..g.triangles().len() {
                match image(cur) {
                    Some(next) if next != t => {
                        best = best.min(next);
                        cur = next;
                    }
                    _ => break,
                }
            }
            best
        })
        .collect()
}

/// Triangles whose edge-incidence rows are linearly independent, chosen
/// greedily; their phases can all be set to zero by a diagonal gauge.
fn spanning_pins(g: &Graph) -> Vec<bool> {
    let ne = g.edge_count();
    let mut basis: Vec<(usize, Vec<f64>)> = Vec::new();
    g.triangles()
        .iter()
        .map(|tri| {
            let mut row = vec![0.0; ne];
            for e in tri.edges {
                row[e.0] += 1.0;
            }
            for (pivot, b) in &basis {
                let f = row[*pivot] / b[*pivot];
                if f != 0.0 {
                    for (x, y) in row.iter_mut().zip(b) {
                        *x -= f * y;
                    }
                }
            }
            match row.iter().enumerate().find(|(_, x)| x.abs() > 1e-9) {
                Some((pivot, _)) => {
                    basis.push((pivot, row));
                    true
                }
                None => false,
            }
        })
        .collect()
}

fn residuals(sys: &System, lay: &Layout, x: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let w = lay.cells(x);
    let m = sys.equations.len();
    let mut r = DVector::zeros(2 * m);
    let mut j = DMatrix::zeros(2 * m, lay.params);
    let i = Complex64::new(0.0, 1.0);
    for (k, eq) in sys.equations.iter().enumerate() {
        let mut value = Complex64::new(-eq.rhs, 0.0);
        for term in &eq.terms {
            let f: Vec<Complex64> = term
                .factors
                .iter()
                .map(|&(t, c)| if c { w[t].conj() } else { w[t] })
                .collect();
            value += f.iter().product::<Complex64>() * term.coeff;
            for (pos, &(t, c)) in term.factors.iter().enumerate() {
                let rest: Complex64 = f
                    .iter()
                    .enumerate()
                    .filter(|(q, _)| *q != pos)
                    .map(|(_, z)| *z)
                    .product::<Complex64>()
                    * term.coeff;
                let (sa, sb) = lay.slots[t];
                j[(2 * k, sa)] += rest.re;
                j[(2 * k + 1, sa)] += rest.im;
                if let Some(sb) = sb {
                    let d = if c { -i * rest } else { i * rest };
                    j[(2 * k, sb)] += d.re;
                    j[(2 * k + 1, sb)] += d.im;
                }
            }
        }
        r[2 * k] = value.re;
        r[2 * k + 1] = value.im;
    }
    (r, j)
}

fn initial_point(g: &Graph, lay: &Layout, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let q2 = g.qcontext().qint(2);
    let mut x = DVector::zeros(lay.params);
    let mut seen = vec![false; lay.params];
    for (t, tri) in g.triangles().iter().enumerate() {
        let (sa, sb) = lay.slots[t];
        if seen[sa] {
            continue;
        }
        seen[sa] = true;
        let budget = tri
            .edges
            .iter()
            .map(|&e| {
                let ed = g.edge(e);
                q2 * g.phi(ed.source) * g.phi(ed.target)
            })
            .fold(f64::INFINITY, f64::min);
        let mag = (rng.gen::<f64>() * budget).sqrt();
        let angle = rng.gen::<f64>() * std::f64::consts::TAU;
        match sb {
            Some(sb) => {
                x[sa] = mag * angle.cos();
                x[sb] = mag * angle.sin();
            }
            None => {
                x[sa] = if angle < std::f64::consts::PI {
                    mag
                } else {
                    -mag
                }
            }
        }
    }
    x
}

/// Searches for cells on `g` from random starting points.
pub fn solve_cells(g: &Graph, opts: &SolveOptions) -> Result<SolveOutcome> {
    opts.validate()?;
    let graph = Arc::new(g.clone());
    let sys = compile(g);
    let lay = layout(g, opts);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let target = opts.residual_tol * opts.residual_tol;
    let mut best: Option<(f64, usize, Vec<Complex64>)> = None;
    let mut restart_objectives = Vec::new();
    let mut solved = false;
    for _ in 0..opts.restarts {
        let x0 = initial_point(g, &lay, &mut rng);
        let lm_opts = LmOptions {
            max_iterations: opts.max_iterations,
            objective_tol: target * 1e-4,
            step_tol: 1e-15,
        };
        let res = levenberg_marquardt(x0, |x| residuals(&sys, &lay, x), lm_opts);
        restart_objectives.push(res.objective);
        if best.as_ref().map_or(true, |(o, _, _)| res.objective < *o) {
            best = Some((res.objective, res.iterations, lay.cells(&res.x)));
        }
        if res.objective <= target {
            let cs = CellSystem::new(Arc::clone(&graph), lay.cells(&res.x), Variant::Default)?;
            let ok = verify_type_i(&cs).max <= opts.residual_tol
                && verify_type_ii(&cs).max <= opts.residual_tol;
            if ok {
                solved = true;
                best = Some((res.objective, res.iterations, lay.cells(&res.x)));
                break;
            }
        }
    }
    let (objective, iterations, cells) = best.expect("at least one restart");
    let cells = if sys.triangles > 0 {
        Some(CellSystem::new(graph, cells, Variant::Default)?)
    } else {
        None
    };
    let fp = cells.as_ref().filter(|_| solved).map(fingerprint);
    Ok(SolveOutcome {
        status: if solved {
            SolveStatus::Solved
        } else {
            SolveStatus::Failed
        },
        cells,
        objective,
        iterations,
        restart_objectives,
        fingerprint: fp,
    })
}

/// One bucket of solutions sharing a fingerprint.
#[derive(Debug, Clone)]
pub struct SolutionClass {
    pub fingerprint: Fingerprint,
    /// A representative system.
    pub cells: CellSystem,
    pub count: usize,
}

/// Runs `trials` independent solves (seeds `opts.seed + t`) and buckets
/// the solved outcomes by fingerprint within [`CLASSIFY_TOL`].
pub fn classify_solutions(
    g: &Graph,
    trials: usize,
    opts: &SolveOptions,
) -> Result<Vec<SolutionClass>> {
    let mut classes: Vec<SolutionClass> = Vec::new();
    for t in 0..trials {
        let o = SolveOptions {
            seed: opts.seed.wrapping_add(t as u64),
            ..opts.clone()
        };
        let out = solve_cells(g, &o)?;
        let (Some(fp), Some(cells)) = (out.fingerprint, out.cells) else {
            continue;
        };
        match classes
            .iter_mut()
            .find(|c| c.fingerprint.matches(&fp, CLASSIFY_TOL))
        {
            Some(c) => c.count += 1,
            None => classes.push(SolutionClass {
                fingerprint: fp,
                cells,
                count: 1,
            }),
        }
    }
    Ok(classes)
}

/// Frame-residual objective of an arbitrary system, as minimized by the
/// solver.
pub fn objective(cs: &CellSystem) -> f64 {
    let g = cs.graph();
    let sys = compile(g);
    let lay = layout(
        g,
        &SolveOptions {
            gauge_fixing: GaugeFixing::None,
            ..SolveOptions::default()
        },
    );
    let x = DVector::from_iterator(lay.params, cs.values().iter().flat_map(|z| [z.re, z.im]));
    residuals(&sys, &lay, &x).0.norm_squared()
}
