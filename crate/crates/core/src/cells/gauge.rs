//! Gauge families of unitary matrices on parallel-edge classes.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::CellSystem;
use crate::error::{CellforgeError, Result};
use crate::graphs::{EdgeId, Graph, VertexId};

/// Unitarity tolerance for gauge matrices.
pub const UNITARY_TOL: f64 = 1e-9;

/// One unitary matrix per ordered vertex pair joined by edges, indexed by
/// the edges of that pair in id order.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFamily {
    blocks: BTreeMap<(VertexId, VertexId), DMatrix<Complex64>>,
}

impl GaugeFamily {
    pub fn identity(g: &Graph) -> Self {
        let blocks = g
            .parallel_classes()
            .into_iter()
            .map(|(k, es)| (k, DMatrix::identity(es.len(), es.len())))
            .collect();
        Self { blocks }
    }

    /// Scalar phases `exp(i*theta_e)` on a multiplicity-free graph.
    pub fn from_edge_angles(g: &Graph, theta: &[f64]) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        for (k, es) in g.parallel_classes() {
            if es.len() != 1 {
                return Err(CellforgeError::Document(
                    "edge angles describe a gauge only on a multiplicity-free graph".into(),
                ));
            }
            let phase = Complex64::from_polar(1.0, theta[es[0].0]);
            blocks.insert(k, DMatrix::from_element(1, 1, phase));
        }
        Ok(Self { blocks })
    }

    /// Builds a family from explicit blocks.
    pub fn from_blocks(blocks: BTreeMap<(VertexId, VertexId), DMatrix<Complex64>>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &BTreeMap<(VertexId, VertexId), DMatrix<Complex64>> {
        &self.blocks
    }

    pub fn block(&self, a: VertexId, b: VertexId) -> Option<&DMatrix<Complex64>> {
        self.blocks.get(&(a, b))
    }

    pub fn set_block(&mut self, a: VertexId, b: VertexId, u: DMatrix<Complex64>) {
        self.blocks.insert((a, b), u);
    }

    /// Checks coverage and unitarity against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for ((a, b), es) in g.parallel_classes() {
            let u = self.blocks.get(&(a, b)).ok_or_else(|| {
                CellforgeError::IncompleteGauge(g.label(a).into(), g.label(b).into())
            })?;
            if u.nrows() != es.len() || u.ncols() != es.len() {
                return Err(CellforgeError::IncompleteGauge(
                    g.label(a).into(),
                    g.label(b).into(),
                ));
            }
            let dev = (u * u.adjoint() - DMatrix::identity(es.len(), es.len()))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if dev > UNITARY_TOL {
                return Err(CellforgeError::NonUnitary {
                    source_label: g.label(a).into(),
                    target_label: g.label(b).into(),
                    deviation: dev,
                });
            }
        }
        Ok(())
    }

    /// Position of `e` in its class.
    fn slot(g: &Graph, e: EdgeId) -> usize {
        let ed = g.edge(e);
        g.edges_between(ed.source, ed.target)
            .iter()
            .position(|&f| f == e)
            .expect("edge belongs to its class")
    }
}

/// Haar-random gauge family.
pub fn random_gauge<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> GaugeFamily {
    let mut blocks = BTreeMap::new();
    for (k, es) in g.parallel_classes() {
        blocks.insert(k, random_unitary(es.len(), rng));
    }
    GaugeFamily { blocks }
}

fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Applies a gauge family:
/// `W1(s, r, c) = sum u(s,s') u(r,r') u(c,c') W2(s', r', c')`.
pub fn gauge_transform(cs: &CellSystem, gauge: &GaugeFamily) -> Result<CellSystem> {
    let g = cs.graph();
    gauge.validate(g)?;
    let class = |e: EdgeId| {
        let ed = g.edge(e);
        (
            g.edges_between(ed.source, ed.target),
            &gauge.blocks[&(ed.source, ed.target)],
            GaugeFamily::slot(g, e),
        )
    };
    let values = g
        .triangles()
        .iter()
        .map(|t| {
            let [(c1, u1, i1), (c2, u2, i2), (c3, u3, i3)] = t.edges.map(class);
            let mut s = Complex64::new(0.0, 0.0);
            for (j1, &e1) in c1.iter().enumerate() {
                let f1 = u1[(i1, j1)];
                for (j2, &e2) in c2.iter().enumerate() {
                    let f2 = f1 * u2[(i2, j2)];
                    for (j3, &e3) in c3.iter().enumerate() {
                        s += f2 * u3[(i3, j3)] * cs.w([e1, e2, e3]);
                    }
                }
            }
            s
        })
        .collect();
    cs.with_values(values)
}

/// Relabels a system along a vertex automorphism: the cell of the image
/// of a triangle is the cell of the triangle.
pub fn permute_vertices(cs: &CellSystem, perm: &[VertexId]) -> Result<CellSystem> {
    let g = cs.graph();
    if perm.len() != g.vertex_count() {
        return Err(CellforgeError::InvalidRotation(
            "permutation has the wrong length".into(),
        ));
    }
    let image = |e: EdgeId| -> Result<EdgeId> {
        let ed = g.edge(e);
        g.edges_between(perm[ed.source.0], perm[ed.target.0])
            .iter()
            .copied()
            .find(|&f| g.edge(f).tag == ed.tag)
            .ok_or_else(|| {
                CellforgeError::InvalidRotation(format!("edge {} has no image", g.edge_name(e)))
            })
    };
    let mut values = vec![Complex64::new(0.0, 0.0); g.triangles().len()];
    let mut hit = vec![false; values.len()];
    for (t, tri) in g.triangles().iter().enumerate() {
        let img = [
            image(tri.edges[0])?,
            image(tri.edges[1])?,
            image(tri.edges[2])?,
        ];
        let k = g
            .triangle_id(img)
            .ok_or_else(|| CellforgeError::InvalidRotation("triangle has no image".into()))?;
        values[k] = cs.value(t);
        hit[k] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(CellforgeError::InvalidRotation(
            "not a bijection on triangles".into(),
        ));
    }
    cs.with_values(values)
}
