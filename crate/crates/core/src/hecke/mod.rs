//! Hecke operators built from cells, the connection, its unitarity and
//! Yang-Baxter checks, the Wenzl sine-formula oracle for A graphs and the
//! reference matrices.

mod connection;
mod fixtures;
mod wenzl;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

pub use connection::{check_unitarity, check_yang_baxter, connection, Connection, YbeReport};
pub use fixtures::{
    conjugate_tables, fixture_check, fixture_set, Fixture, FixtureDeviation, FixtureReport,
};
pub use wenzl::{wenzl_weight, Direction};

use crate::cells::CellSystem;
use crate::error::{CellforgeError, Result};
use crate::graphs::{EdgeId, Graph, VertexId};

/// A length-two path `first: x -> i`, `second: i -> y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path2 {
    pub first: EdgeId,
    pub second: EdgeId,
}

impl Path2 {
    pub fn intermediate(&self, g: &Graph) -> VertexId {
        g.edge(self.first).target
    }

    /// Intermediate vertex label followed by the tags of the two edges,
    /// e.g. `p/alpha/beta'` or `(2,1)/gamma`.
    pub fn label(&self, g: &Graph) -> String {
        let mut s = g.label(self.intermediate(g)).to_string();
        for e in [self.first, self.second] {
            if let Some(t) = g.edge(e).tag {
                s.push('/');
                s.push_str(t.as_str());
            }
        }
        s
    }
}

/// All length-two paths from `x` to `y` in (first, second) edge-id order.
pub fn paths2(g: &Graph, x: VertexId, y: VertexId) -> Vec<Path2> {
    let mut out = Vec::new();
    for &first in g.out_edges(x) {
        let i = g.edge(first).target;
        for &second in g.edges_between(i, y) {
            out.push(Path2 { first, second });
        }
    }
    out.sort();
    out
}

/// The matrix `U^(x,y)` on length-two paths from `x` to `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeOperator {
    pub x: VertexId,
    pub y: VertexId,
    pub paths: Vec<Path2>,
    pub matrix: DMatrix<Complex64>,
}

impl HeckeOperator {
    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn row_labels(&self, g: &Graph) -> Vec<String> {
        self.paths.iter().map(|p| p.label(g)).collect()
    }

    /// Index of the row with the given label.
    pub fn row(&self, g: &Graph, label: &str) -> Option<usize> {
        self.paths.iter().position(|p| p.label(g) == label)
    }

    /// `max |U - U*|`.
    pub fn self_adjointness(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// `max |U^2 - [2] U|`.
    pub fn quadratic_residual(&self, q2: f64) -> f64 {
        max_abs(&(&self.matrix * &self.matrix - &self.matrix * Complex64::new(q2, 0.0)))
    }
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entry `(p, p')` is the sum over closing edges `lambda: y -> x` of
/// `W(lambda, p') conj(W(lambda, p)) / (phi_x phi_y)`.
pub fn hecke_operator(cs: &CellSystem, x: VertexId, y: VertexId) -> Result<HeckeOperator> {
    let g = cs.graph();
    let paths = paths2(g, x, y);
    if paths.is_empty() {
        return Err(CellforgeError::NoPath {
            x: g.label(x).into(),
            y: g.label(y).into(),
        });
    }
    let norm = 1.0 / (g.phi(x) * g.phi(y));
    let closing = g.edges_between(y, x);
    let k = paths.len();
    let mut w = DMatrix::<Complex64>::zeros(closing.len(), k);
    for (li, &lambda) in closing.iter().enumerate() {
        for (pi, p) in paths.iter().enumerate() {
            w[(li, pi)] = cs.w([lambda, p.first, p.second]);
        }
    }
    let matrix = DMatrix::from_fn(k, k, |r, c| {
        (0..closing.len())
            .map(|l| w[(l, c)] * w[(l, r)].conj())
            .sum::<Complex64>()
            * norm
    });
    Ok(HeckeOperator {
        x,
        y,
        paths,
        matrix,
    })
}

/// Like [`hecke_operator`] with vertices given by label.
pub fn hecke_operator_by_label(cs: &CellSystem, x: &str, y: &str) -> Result<HeckeOperator> {
    let g = cs.graph();
    hecke_operator(cs, g.require_vertex(x)?, g.require_vertex(y)?)
}

/// Every operator `U^(x,y)` with at least one path, ordered by `(x, y)`.
pub fn hecke_operators(cs: &CellSystem) -> Vec<HeckeOperator> {
    let g = cs.graph();
    let mut out = Vec::new();
    for x in 0..g.vertex_count() {
        for y in 0..g.vertex_count() {
            if let Ok(u) = hecke_operator(cs, VertexId(x), VertexId(y)) {
                out.push(u);
            }
        }
    }
    out
}

/// Hecke-layer residuals maximized over all `(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeckeReport {
    pub operators: usize,
    pub self_adjoint: f64,
    pub quadratic: f64,
}

/// Self-adjointness and `U^2 = [2] U` over every operator.
pub fn check_hecke(cs: &CellSystem) -> HeckeReport {
    let q2 = cs.graph().qcontext().qint(2);
    let ops = hecke_operators(cs);
    HeckeReport {
        operators: ops.len(),
        self_adjoint: ops
            .iter()
            .map(HeckeOperator::self_adjointness)
            .fold(0.0, f64::max),
        quadratic: ops
            .iter()
            .map(|u| u.quadratic_residual(q2))
            .fold(0.0, f64::max),
    }
}
