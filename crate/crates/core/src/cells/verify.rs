//! Residuals of the type I and type II frame equations.

use num_complex::Complex64;
use serde::Serialize;

use super::CellSystem;
use crate::graphs::{EdgeId, TypeIFrame, TypeIIFrame};

/// Largest residual over all frames of one type, with the frame attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub max: f64,
    pub frames: usize,
    /// Edge names of the worst frame.
    pub worst: Vec<String>,
}

impl FrameReport {
    fn push(&mut self, residual: f64, frame: impl FnOnce() -> Vec<String>) {
        self.frames += 1;
        if residual > self.max || self.worst.is_empty() {
            self.max = self.max.max(residual);
            self.worst = frame();
        }
    }
}

/// Left-hand side of the type I equation for the frame `(alpha, alpha')`:
/// the sum over completions `beta: b -> c`, `gamma: c -> a` of
/// `W(alpha, beta, gamma) * conj(W(alpha', beta, gamma))`.
pub fn type_i_sum(cs: &CellSystem, f: TypeIFrame) -> Complex64 {
    let g = cs.graph();
    let (a, b) = (g.edge(f.alpha).source, g.edge(f.alpha).target);
    let mut s = Complex64::new(0.0, 0.0);
    for &beta in g.out_edges(b) {
        let c = g.edge(beta).target;
        for &gamma in g.edges_between(c, a) {
            s += cs.w([f.alpha, beta, gamma]) * cs.w([f.alpha_prime, beta, gamma]).conj();
        }
    }
    s
}

/// Right-hand side of the type I equation: `[2] phi_a phi_b` on the
/// diagonal, zero otherwise.
pub fn type_i_rhs(cs: &CellSystem, f: TypeIFrame) -> f64 {
    if f.alpha != f.alpha_prime {
        return 0.0;
    }
    let g = cs.graph();
    let e = g.edge(f.alpha);
    g.qcontext().qint(2) * g.phi(e.source) * g.phi(e.target)
}

/// Maximal type I residual.
pub fn verify_type_i(cs: &CellSystem) -> FrameReport {
    let g = cs.graph();
    let mut rep = FrameReport {
        max: 0.0,
        frames: 0,
        worst: Vec::new(),
    };
    for f in g.type_i_frames() {
        let r = (type_i_sum(cs, f) - type_i_rhs(cs, f)).norm();
        rep.push(r, || vec![g.edge_name(f.alpha), g.edge_name(f.alpha_prime)]);
    }
    rep
}

/// Left-hand side of the type II equation for a frame.
pub fn type_ii_sum(cs: &CellSystem, f: TypeIIFrame) -> Complex64 {
    let g = cs.graph();
    let a = g.edge(f.a1).source;
    let b = g.edge(f.a1).target;
    let c = g.edge(f.a2).source;
    let d = g.edge(f.a3).target;
    let mut s = Complex64::new(0.0, 0.0);
    for &beta in g.out_edges(b) {
        let x = g.edge(beta).target;
        let inv_phi = 1.0 / g.phi(x);
        for &delta in g.edges_between(d, x) {
            for &g1 in g.edges_between(x, a) {
                let left = cs.w([f.a1, beta, g1]);
                let right = cs.w([f.a4, delta, g1]).conj();
                if left == Complex64::new(0.0, 0.0) || right == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for &g2 in g.edges_between(x, c) {
                    s += left
                        * cs.w([f.a2, beta, g2]).conj()
                        * cs.w([f.a3, delta, g2])
                        * right
                        * inv_phi;
                }
            }
        }
    }
    s
}

/// Right-hand side of the type II equation.
pub fn type_ii_rhs(cs: &CellSystem, f: TypeIIFrame) -> f64 {
    let g = cs.graph();
    let phi = |e: EdgeId, src: bool| {
        let ed = g.edge(e);
        g.phi(if src { ed.source } else { ed.target })
    };
    let (pa, pb, pc, pd) = (
        phi(f.a1, true),
        phi(f.a1, false),
        phi(f.a2, true),
        phi(f.a3, false),
    );
    let mut r = 0.0;
    if f.a1 == f.a2 && f.a3 == f.a4 {
        r += pa * pb * pd;
    }
    if f.a1 == f.a4 && f.a2 == f.a3 {
        r += pa * pb * pc;
    }
    r
}

/// Maximal type II residual.
pub fn verify_type_ii(cs: &CellSystem) -> FrameReport {
    let g = cs.graph();
    let mut rep = FrameReport {
        max: 0.0,
        frames: 0,
        worst: Vec::new(),
    };
    for f in g.type_ii_frames() {
        let r = (type_ii_sum(cs, f) - type_ii_rhs(cs, f)).norm();
        rep.push(r, || {
            [f.a1, f.a2, f.a3, f.a4].map(|e| g.edge_name(e)).to_vec()
        });
    }
    rep
}
