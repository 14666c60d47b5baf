//! Gauge-invariant fingerprints and the equivalence decision.
//!
//! On a graph without parallel edges a gauge multiplies each cell by the
//! phases of its three edges, so equivalence is a linear system over the
//! integers for the edge angles modulo `2 pi`, solved exactly through a
//! Smith normal form. With parallel edges the search is numerical.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::gauge::{gauge_transform, GaugeFamily};
use super::CellSystem;
use crate::error::{CellforgeError, Result};
use crate::graphs::{Graph, VertexId};
use crate::hecke::{hecke_operators, HeckeOperator};
use crate::solver::lm::{levenberg_marquardt, numeric_jacobian, LmOptions};

/// Relative tolerance for comparing fingerprints.
pub const FINGERPRINT_TOL: f64 = 1e-8;

/// Largest cell deviation accepted for a gauge witness (relative to the
/// largest cell).
pub const WITNESS_TOL: f64 = 1e-8;

/// Restarts of the numerical gauge search.
pub const SEARCH_RESTARTS: usize = 20;

/// Iterations per restart of the numerical gauge search.
pub const SEARCH_ITERATIONS: usize = 500;

/// Gauge-invariant data of a cell system, keyed by vertex labels.
///
/// * `w2:a|b|c` is the sum of `|W|^2` over triangles `a -> b -> c -> a`
///   (keyed by the rotation with the smallest label sequence);
/// * for each Hecke block `U^(x,y)` and intermediate vertices `c_i`, with
///   `P_c` the projection onto paths through `c`, the traces
///   `tr(P_c1 U)`, `tr(P_c1 U P_c2 U)` and `tr(P_c1 U P_c2 U P_c3 U)`
///   (real and imaginary parts).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub graph: String,
    pub values: BTreeMap<String, f64>,
}

impl Fingerprint {
    /// Largest relative difference `|a - b| / max(1, |a|, |b|)`; infinite
    /// when the key sets differ.
    pub fn distance(&self, other: &Fingerprint) -> f64 {
        self.first_difference(other).map_or(0.0, |(_, d)| d)
    }

    /// The key with the largest relative difference.
    pub fn first_difference(&self, other: &Fingerprint) -> Option<(String, f64)> {
        if self.graph != other.graph || self.values.len() != other.values.len() {
            return Some(("graph".into(), f64::INFINITY));
        }
        let mut worst: Option<(String, f64)> = None;
        for ((k, a), (k2, b)) in self.values.iter().zip(&other.values) {
            if k != k2 {
                return Some((k.clone(), f64::INFINITY));
            }
            let d = (a - b).abs() / 1f64.max(a.abs()).max(b.abs());
            if worst.as_ref().map_or(true, |(_, w)| d > *w) {
                worst = Some((k.clone(), d));
            }
        }
        worst.filter(|(_, d)| *d > 0.0)
    }

    pub fn matches(&self, other: &Fingerprint, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// Computes the fingerprint of `cs`.
pub fn fingerprint(cs: &CellSystem) -> Fingerprint {
    let g = cs.graph();
    let mut values = BTreeMap::new();
    for (t, tri) in g.triangles().iter().enumerate() {
        let vs = g.triangle_vertices(tri).map(|v| g.label(v).to_string());
        let key = (0..3)
            .map(|s| {
                [
                    vs[s].clone(),
                    vs[(s + 1) % 3].clone(),
                    vs[(s + 2) % 3].clone(),
                ]
            })
            .min()
            .expect("three rotations")
            .join("|");
        *values.entry(format!("w2:{key}")).or_insert(0.0) += cs.value(t).norm_sqr();
    }
    for u in hecke_operators(cs) {
        block_traces(g, &u, &mut values);
    }
    Fingerprint {
        graph: g.name().to_string(),
        values,
    }
}

fn block_traces(g: &Graph, u: &HeckeOperator, values: &mut BTreeMap<String, f64>) {
    let mut groups: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (i, p) in u.paths.iter().enumerate() {
        groups.entry(p.intermediate(g)).or_default().push(i);
    }
    let head = format!("{}|{}", g.label(u.x), g.label(u.y));
    let cs: Vec<(&str, &Vec<usize>)> = groups.iter().map(|(v, ix)| (g.label(*v), ix)).collect();
    let m = &u.matrix;
    for (c1, i1) in &cs {
        let t1: Complex64 = i1.iter().map(|&i| m[(i, i)]).sum();
        values.insert(format!("tr1:{head}|{c1}"), t1.re);
        for (c2, i2) in &cs {
            let mut t2 = Complex64::new(0.0, 0.0);
            for &a in i1.iter() {
                for &b in i2.iter() {
                    t2 += m[(a, b)] * m[(b, a)];
                }
            }
            values.insert(format!("tr2:{head}|{c1}|{c2}"), t2.re);
            for (c3, i3) in &cs {
                let mut t3 = Complex64::new(0.0, 0.0);
                for &a in i1.iter() {
                    for &b in i2.iter() {
                        for &c in i3.iter() {
                            t3 += m[(a, b)] * m[(b, c)] * m[(c, a)];
                        }
                    }
                }
                values.insert(format!("tr3re:{head}|{c1}|{c2}|{c3}"), t3.re);
                values.insert(format!("tr3im:{head}|{c1}|{c2}|{c3}"), t3.im);
            }
        }
    }
}

/// Outcome of [`equivalent`].
#[derive(Debug, Clone, PartialEq)]
pub enum Equivalence {
    /// `gauge_transform(cs2, witness)` reproduces `cs1` up to `residual`.
    Equivalent { witness: GaugeFamily, residual: f64 },
    /// A gauge-invariant quantity differs.
    Inequivalent { obstruction: String },
    /// The numerical search neither found a gauge nor an obstruction.
    Inconclusive { best_objective: f64 },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }

    pub fn is_inequivalent(&self) -> bool {
        matches!(self, Equivalence::Inequivalent { .. })
    }

    /// `equivalent`, `inequivalent` or `inconclusive`.
    pub fn kind(&self) -> &'static str {
        match self {
            Equivalence::Equivalent { .. } => "equivalent",
            Equivalence::Inequivalent { .. } => "inequivalent",
            Equivalence::Inconclusive { .. } => "inconclusive",
        }
    }
}

fn same_graph(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && a.vertices()
            .iter()
            .zip(b.vertices())
            .all(|(x, y)| x.label == y.label)
        && a.edges()
            .iter()
            .zip(b.edges())
            .all(|(x, y)| x.source == y.source && x.target == y.target && x.tag == y.tag)
}

fn scale(cs: &CellSystem) -> f64 {
    cs.values().iter().map(|z| z.norm()).fold(1.0, f64::max)
}

/// Largest `|W1 - W2|` relative to the largest cell of `a`.
fn cell_distance(a: &CellSystem, b: &CellSystem) -> f64 {
    let d = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    d / scale(a)
}

/// Decides whether `cs1` and `cs2` differ by a gauge family; the witness
/// maps `cs2` to `cs1`.
pub fn equivalent(cs1: &CellSystem, cs2: &CellSystem) -> Result<Equivalence> {
    let (g1, g2) = (cs1.graph(), cs2.graph());
    if !same_graph(g1, g2) {
        return Err(CellforgeError::GraphMismatch(
            g1.name().into(),
            g2.name().into(),
        ));
    }
    if g1.has_multiple_edges() {
        numeric_equivalence(cs1, cs2)
    } else {
        exact_equivalence(cs1, cs2)
    }
}

fn exact_equivalence(cs1: &CellSystem, cs2: &CellSystem) -> Result<Equivalence> {
    let g = cs1.graph();
    let tol = WITNESS_TOL * scale(cs1).max(scale(cs2));
    let mut rows = Vec::new();
    let mut delta = Vec::new();
    for (t, tri) in g.triangles().iter().enumerate() {
        let (w1, w2) = (cs1.value(t), cs2.value(t));
        if (w1.norm() - w2.norm()).abs() > tol {
            return Ok(Equivalence::Inequivalent {
                obstruction: format!(
                    "|W| differs on {}: {} vs {}",
                    cs1.triangle_name(t),
                    w1.norm(),
                    w2.norm()
                ),
            });
        }
        if w1.norm() <= tol {
            continue;
        }
        let mut row = vec![0i128; g.edge_count()];
        for e in tri.edges {
            row[e.0] += 1;
        }
        rows.push(row);
        delta.push((w1 / w2).arg());
    }
    let theta = match solve_phases(&rows, &delta, g.edge_count()) {
        Ok(theta) => theta,
        Err(row) => {
            return Ok(Equivalence::Inequivalent {
                obstruction: format!(
                    "phase system is inconsistent modulo 2 pi (residual {row:.3e} on a cycle of the incidence lattice)"
                ),
            })
        }
    };
    let witness = GaugeFamily::from_edge_angles(g, &theta)?;
    let image = gauge_transform(cs2, &witness)?;
    let residual = cell_distance(cs1, &image);
    if residual <= WITNESS_TOL {
        Ok(Equivalence::Equivalent { witness, residual })
    } else {
        Ok(Equivalence::Inconclusive {
            best_objective: residual,
        })
    }
}

/// Solves `A theta = delta (mod 2 pi)`. On inconsistency returns the
/// distance to `2 pi Z` of the offending combination.
fn solve_phases(rows: &[Vec<i128>], delta: &[f64], n: usize) -> std::result::Result<Vec<f64>, f64> {
    let m = rows.len();
    if m == 0 {
        return Ok(vec![0.0; n]);
    }
    let snf = smith_normal_form(rows, n);
    let two_pi = 2.0 * std::f64::consts::PI;
    let b: Vec<f64> = (0..m)
        .map(|i| (0..m).map(|k| snf.p[i][k] as f64 * delta[k]).sum())
        .collect();
    for (i, bi) in b.iter().enumerate().skip(snf.rank) {
        let weight: f64 = snf.p[i]
            .iter()
            .map(|&x| (x as f64).abs())
            .sum::<f64>()
            .max(1.0);
        let off = (bi - two_pi * (bi / two_pi).round()).abs();
        if off > 1e-8 * weight {
            return Err(off);
        }
    }
    let mut phi = vec![0.0; n];
    for i in 0..snf.rank {
        phi[i] = b[i] / snf.diag[i] as f64;
    }
    Ok((0..n)
        .map(|e| (0..n).map(|k| snf.q[e][k] as f64 * phi[k]).sum())
        .collect())
}

/// `P A Q = diag(d_0, ..., d_{r-1}, 0, ...)` with `P`, `Q` unimodular.
pub(crate) struct Smith {
    pub p: Vec<Vec<i128>>,
    pub q: Vec<Vec<i128>>,
    pub diag: Vec<i128>,
    pub rank: usize,
}

pub(crate) fn smith_normal_form(a: &[Vec<i128>], n: usize) -> Smith {
    let m = a.len();
    let mut a: Vec<Vec<i128>> = a.to_vec();
    let identity = |k: usize| -> Vec<Vec<i128>> {
        (0..k)
            .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
            .collect()
    };
    let (mut p, mut q) = (identity(m), identity(n));
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_entry(&a, t) else {
            break;
        };
        a.swap(t, pi);
        p.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut q, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let f = a[i][t].div_euclid(a[t][t]);
                    row_sub(&mut a, i, t, f);
                    row_sub(&mut p, i, t, f);
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let f = a[t][j].div_euclid(a[t][t]);
                    col_sub(&mut a, j, t, f);
                    col_sub(&mut q, j, t, f);
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
            let (mut bi, mut bj, mut best) = (t, t, a[t][t].abs());
            for i in t + 1..m {
                if a[i][t] != 0 && a[i][t].abs() < best {
                    (bi, bj, best) = (i, t, a[i][t].abs());
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 && a[t][j].abs() < best {
                    (bi, bj, best) = (t, j, a[t][j].abs());
                }
            }
            a.swap(t, bi);
            p.swap(t, bi);
            swap_cols(&mut a, t, bj);
            swap_cols(&mut q, t, bj);
        }
        diag.push(a[t][t]);
    }
    Smith {
        p,
        q,
        rank: diag.len(),
        diag,
    }
}

fn min_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i128)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.map_or(true, |(_, _, b)| x.abs() < b) {
                best = Some((i, j, x.abs()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn swap_cols(a: &mut [Vec<i128>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn row_sub(a: &mut [Vec<i128>], target: usize, src: usize, f: i128) {
    let s = a[src].clone();
    for (x, y) in a[target].iter_mut().zip(s) {
        *x -= f * y;
    }
}

fn col_sub(a: &mut [Vec<i128>], target: usize, src: usize, f: i128) {
    for row in a.iter_mut() {
        row[target] -= f * row[src];
    }
}

fn numeric_equivalence(cs1: &CellSystem, cs2: &CellSystem) -> Result<Equivalence> {
    let (f1, f2) = (fingerprint(cs1), fingerprint(cs2));
    if let Some((key, d)) = f1.first_difference(&f2) {
        if d > FINGERPRINT_TOL {
            return Ok(Equivalence::Inequivalent {
                obstruction: format!("gauge invariant `{key}` differs (relative {d:.3e})"),
            });
        }
    }
    let g = cs1.graph();
    let classes = g.parallel_classes();
    let dims: Vec<usize> = classes.iter().map(|(_, es)| es.len()).collect();
    let nparams: usize = dims.iter().map(|k| k * k).sum();
    let family = |x: &DVector<f64>| -> GaugeFamily {
        let mut blocks = BTreeMap::new();
        let mut off = 0;
        for ((key, _), &k) in classes.iter().zip(&dims) {
            blocks.insert(*key, unitary_from(&x.as_slice()[off..off + k * k], k));
            off += k * k;
        }
        GaugeFamily::from_blocks(blocks)
    };
    let residual = |x: &DVector<f64>| -> DVector<f64> {
        let image = gauge_transform(cs2, &family(x)).expect("generated gauges are unitary");
        let mut r = DVector::zeros(2 * image.values().len());
        for (t, (a, b)) in cs1.values().iter().zip(image.values()).enumerate() {
            r[2 * t] = a.re - b.re;
            r[2 * t + 1] = a.im - b.im;
        }
        r
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let norm = scale(cs1);
    let mut best = f64::INFINITY;
    for restart in 0..SEARCH_RESTARTS {
        let x0 = if restart == 0 {
            DVector::zeros(nparams)
        } else {
            DVector::from_fn(nparams, |_, _| {
                let z: f64 = StandardNormal.sample(&mut rng);
                std::f64::consts::PI * z
            })
        };
        let eval = |x: &DVector<f64>| {
            let r = residual(x);
            let j = numeric_jacobian(x, &r, residual);
            (r, j)
        };
        let opts = LmOptions {
            max_iterations: SEARCH_ITERATIONS,
            objective_tol: (1e-3 * WITNESS_TOL * norm).powi(2),
            step_tol: 1e-15,
        };
        let res = levenberg_marquardt(x0, eval, opts);
        best = best.min(res.objective);
        let witness = family(&res.x);
        let image = gauge_transform(cs2, &witness)?;
        let residual = cell_distance(cs1, &image);
        if residual <= WITNESS_TOL {
            return Ok(Equivalence::Equivalent { witness, residual });
        }
    }
    Ok(Equivalence::Inconclusive {
        best_objective: best,
    })
}

/// `exp(i H)` for the Hermitian `H` with `k` diagonal entries followed by
/// the real and imaginary parts of the strict upper triangle.
fn unitary_from(p: &[f64], k: usize) -> DMatrix<Complex64> {
    let mut h = DMatrix::<Complex64>::zeros(k, k);
    let mut idx = k;
    for i in 0..k {
        h[(i, i)] = Complex64::new(p[i], 0.0);
        for j in i + 1..k {
            let z = Complex64::new(p[idx], p[idx + 1]);
            idx += 2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    (h * Complex64::new(0.0, 1.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_diagonalizes() {
        let a = vec![vec![2i128, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&a, 3);
        let mul = |x: &[Vec<i128>], y: &[Vec<i128>]| -> Vec<Vec<i128>> {
            (0..x.len())
                .map(|i| {
                    (0..y[0].len())
                        .map(|j| (0..y.len()).map(|k| x[i][k] * y[k][j]).sum())
                        .collect()
                })
                .collect()
        };
        let d = mul(&mul(&s.p, &a), &s.q);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(x, 0);
                }
            }
        }
        assert_eq!(s.rank, 3);
        let det: i128 = s.diag.iter().product();
        assert_eq!(det.abs(), 144);
    }

    #[test]
    fn unitary_from_is_unitary() {
        let u = unitary_from(&[0.3, -1.2, 0.7, 2.1], 2);
        let dev = (&u * u.adjoint() - DMatrix::identity(2, 2))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12);
    }
}
