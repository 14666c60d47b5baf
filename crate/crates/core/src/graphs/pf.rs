//! Perron-Frobenius eigenvalue and eigenvector of a graph's adjacency matrix.

use nalgebra::{DMatrix, DVector};

use super::{Graph, VertexId};
use crate::error::{CellforgeError, Result};

/// Power iteration limit.
pub const MAX_ITERATIONS: usize = 200_000;

/// Perron-Frobenius data computed from the adjacency matrix alone.
#[derive(Debug, Clone, PartialEq)]
pub struct PfData {
    pub eigenvalue: f64,
    /// Positive eigenvector normalized to 1 at the distinguished vertex.
    pub weights: Vec<f64>,
    pub iterations: usize,
}

fn connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![VertexId(0)];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        let nbrs = g
            .out_edges(v)
            .iter()
            .map(|&e| g.edge(e).target)
            .chain(g.in_edges(v).iter().map(|&e| g.edge(e).source));
        for w in nbrs {
            if !std::mem::replace(&mut seen[w.0], true) {
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Computes the Perron-Frobenius eigenpair by power iteration on `A + I`
/// (the shift removes the periodicity of the graph) refined by inverse
/// iteration.
pub fn pf_data(g: &Graph) -> Result<PfData> {
    if !connected(g) {
        return Err(CellforgeError::Disconnected);
    }
    let a = g.adjacency();
    let n = a.nrows();
    let shifted = &a + DMatrix::<f64>::identity(n, n);
    let mut x = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut iterations = 0;
    let mut delta = f64::INFINITY;
    while iterations < MAX_ITERATIONS && delta > 1e-11 {
        let mut y = &shifted * &x;
        y /= y.norm();
        delta = (&y - &x).amax();
        x = y;
        iterations += 1;
    }
    let mut lambda = rayleigh(&a, &x);
    for _ in 0..3 {
        let m = &a - DMatrix::<f64>::identity(n, n) * (lambda + 1e-9);
        let Some(y) = m.lu().solve(&x) else { break };
        let norm = y.norm();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        x = y / norm;
        if x.sum() < 0.0 {
            x = -x;
        }
        lambda = rayleigh(&a, &x);
    }
    let residual = (&a * &x - &x * lambda).amax();
    if residual > 1e-9 || x.iter().any(|&v| v <= 0.0) {
        return Err(CellforgeError::NoConvergence {
            iterations,
            residual,
        });
    }
    let d = x[g.distinguished().0];
    Ok(PfData {
        eigenvalue: lambda,
        weights: x.iter().map(|v| v / d).collect(),
        iterations,
    })
}

fn rayleigh(a: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    (a * x).dot(x) / x.dot(x)
}
