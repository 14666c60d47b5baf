//! The sine-formula Boltzmann weights on A(n).
//!
//! With `e1 = (1,0)`, `e2 = (-1,1)`, `e3 = (0,-1)` the three edge
//! directions of A(n) in `(a,b)` coordinates, and `rho = (1,1)`,
//! `s_jl(mu) = sin(pi/n (e_j - e_l) . mu)` where the pairing of weights
//! gives `(e_j - e_l) . (x,y) = x (d_j1 - d_l1) - y (d_j3 - d_l3)`.

use std::f64::consts::PI;

use crate::error::{CellforgeError, Result};

/// An edge direction of A(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    E1,
    E2,
    E3,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::E1, Direction::E2, Direction::E3];

    pub fn vector(self) -> (i64, i64) {
        match self {
            Direction::E1 => (1, 0),
            Direction::E2 => (-1, 1),
            Direction::E3 => (0, -1),
        }
    }

    fn index(self) -> usize {
        match self {
            Direction::E1 => 1,
            Direction::E2 => 2,
            Direction::E3 => 3,
        }
    }
}

fn on_lattice(n: u32, p: (i64, i64)) -> bool {
    p.0 >= 0 && p.1 >= 0 && p.0 + p.1 <= i64::from(n) - 3
}

fn add(p: (i64, i64), d: Direction) -> (i64, i64) {
    let v = d.vector();
    (p.0 + v.0, p.1 + v.1)
}

fn s(n: u32, j: Direction, l: Direction, mu: (i64, i64)) -> f64 {
    let delta = |a: Direction, k: usize| f64::from(u8::from(a.index() == k));
    let pairing =
        mu.0 as f64 * (delta(j, 1) - delta(l, 1)) - mu.1 as f64 * (delta(j, 3) - delta(l, 3));
    (PI / f64::from(n) * pairing).sin()
}

/// The entry `[U^(lambda, lambda+e_j+e_l)]` between the paths through
/// `lambda + e_j` (row) and `lambda + e_k` (column), for `k` one of `j`, `l`:
/// `sqrt(s_jl(mu+e_j) s_jl(mu+e_k)) / s_jl(mu)` with `mu = lambda + (1,1)`,
/// evaluated as `sqrt(r_j r_k)` with `r_m = s_jl(mu+e_m) / s_jl(mu)`. The
/// weight vanishes when `j = l`.
pub fn wenzl_weight(
    n: u32,
    lambda: (i64, i64),
    j: Direction,
    l: Direction,
    k: Direction,
) -> Result<f64> {
    let off = |p: (i64, i64)| CellforgeError::OffLattice(format!("({},{})", p.0, p.1));
    if k != j && k != l {
        return Err(CellforgeError::OffLattice(format!(
            "direction {k:?} is neither {j:?} nor {l:?}"
        )));
    }
    let top = add(add(lambda, j), l);
    for p in [lambda, add(lambda, j), add(lambda, k), top] {
        if !on_lattice(n, p) {
            return Err(off(p));
        }
    }
    if j == l {
        return Ok(0.0);
    }
    let mu = (lambda.0 + 1, lambda.1 + 1);
    let base = s(n, j, l, mu);
    let ratio = |m: Direction| s(n, j, l, add(mu, m)) / base;
    Ok((ratio(j) * ratio(k)).max(0.0).sqrt())
}
