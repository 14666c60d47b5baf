//! The connection `X = q^(2/3) I - q^(-1/3) U`, its unitarity and the
//! Yang-Baxter (braid) relation on length-three paths.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{hecke_operators, max_abs, HeckeOperator, Path2};
use crate::cells::CellSystem;
use crate::graphs::{EdgeId, Graph, VertexId};

/// The connection of a cell system, stored through its Hecke operators.
#[derive(Debug, Clone)]
pub struct Connection {
    /// `q^(2/3) = exp(2 pi i / 3n)`.
    pub identity_coeff: Complex64,
    /// `q^(-1/3) = exp(-pi i / 3n)`.
    pub hecke_coeff: Complex64,
    operators: HashMap<(VertexId, VertexId), (HeckeOperator, HashMap<Path2, usize>)>,
    graph: Graph,
}

/// Builds the connection from the Hecke operators of `cs`.
pub fn connection(cs: &CellSystem) -> Connection {
    let n = f64::from(cs.graph().coxeter_n());
    let operators = hecke_operators(cs)
        .into_iter()
        .map(|u| {
            let idx = u.paths.iter().enumerate().map(|(i, p)| (*p, i)).collect();
            ((u.x, u.y), (u, idx))
        })
        .collect();
    Connection {
        identity_coeff: Complex64::from_polar(1.0, 2.0 * PI / (3.0 * n)),
        hecke_coeff: Complex64::from_polar(1.0, -PI / (3.0 * n)),
        operators,
        graph: cs.graph().clone(),
    }
}

impl Connection {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `U^{r1 r2}_{r3 r4}`, zero when the paths do not share endpoints.
    pub fn hecke_entry(&self, r1: EdgeId, r2: EdgeId, r3: EdgeId, r4: EdgeId) -> Complex64 {
        let g = &self.graph;
        let (x, y) = (g.edge(r1).source, g.edge(r2).target);
        if g.edge(r3).source != x || g.edge(r4).target != y {
            return Complex64::new(0.0, 0.0);
        }
        let Some((u, idx)) = self.operators.get(&(x, y)) else {
            return Complex64::new(0.0, 0.0);
        };
        let (Some(&a), Some(&b)) = (
            idx.get(&Path2 {
                first: r1,
                second: r2,
            }),
            idx.get(&Path2 {
                first: r3,
                second: r4,
            }),
        ) else {
            return Complex64::new(0.0, 0.0);
        };
        u.matrix[(a, b)]
    }

    /// `X^{r1 r2}_{r3 r4}`.
    pub fn value(&self, r1: EdgeId, r2: EdgeId, r3: EdgeId, r4: EdgeId) -> Complex64 {
        let delta = if r1 == r3 && r2 == r4 {
            self.identity_coeff
        } else {
            Complex64::new(0.0, 0.0)
        };
        delta - self.hecke_coeff * self.hecke_entry(r1, r2, r3, r4)
    }

    /// The block of `X` on paths from `x` to `y`.
    pub fn block(&self, x: VertexId, y: VertexId) -> Option<DMatrix<Complex64>> {
        let (u, _) = self.operators.get(&(x, y))?;
        let k = u.dim();
        Some(DMatrix::identity(k, k) * self.identity_coeff - &u.matrix * self.hecke_coeff)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.operators.keys().copied()
    }
}

/// `max |X X* - I|` over all blocks.
pub fn check_unitarity(conn: &Connection) -> f64 {
    conn.blocks()
        .filter_map(|(x, y)| conn.block(x, y))
        .map(|x| {
            let k = x.nrows();
            max_abs(&(&x * x.adjoint() - DMatrix::identity(k, k)))
        })
        .fold(0.0, f64::max)
}

/// Yang-Baxter residual summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YbeReport {
    /// Number of `(s, t)` blocks of length-three paths.
    pub blocks: usize,
    /// Largest block dimension.
    pub max_dim: usize,
    /// `max |X1 X2 X1 - X2 X1 X2|`.
    pub residual: f64,
}

/// Checks the braid form of the Yang-Baxter equation. On the space of
/// length-three paths `(e1, e2, e3)` from `s` to `t`, `X1` acts on
/// `(e1, e2)` and is diagonal in `e3`; `X2` acts on `(e2, e3)` and is
/// diagonal in `e1`.
pub fn check_yang_baxter(conn: &Connection) -> YbeReport {
    let g = &conn.graph;
    let mut by_ends: HashMap<(VertexId, VertexId), Vec<[EdgeId; 3]>> = HashMap::new();
    for e1 in g.edges() {
        for &e2 in g.out_edges(e1.target) {
            for &e3 in g.out_edges(g.edge(e2).target) {
                by_ends
                    .entry((e1.source, g.edge(e3).target))
                    .or_default()
                    .push([e1.id, e2, e3]);
            }
        }
    }
    let mut rep = YbeReport {
        blocks: by_ends.len(),
        max_dim: 0,
        residual: 0.0,
    };
    for paths in by_ends.values() {
        let k = paths.len();
        rep.max_dim = rep.max_dim.max(k);
        let x1 = DMatrix::from_fn(k, k, |r, c| {
            let (e, f) = (paths[r], paths[c]);
            if e[2] == f[2] {
                conn.value(e[0], e[1], f[0], f[1])
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let x2 = DMatrix::from_fn(k, k, |r, c| {
            let (e, f) = (paths[r], paths[c]);
            if e[0] == f[0] {
                conn.value(e[1], e[2], f[1], f[2])
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let lhs = &x1 * &x2 * &x1;
        let rhs = &x2 * &x1 * &x2;
        rep.residual = rep.residual.max(max_abs(&(lhs - rhs)));
    }
    rep
}
