//! Lifting a Z3-invariant cell system to the orbifold graph.

use std::sync::Arc;

use num_complex::Complex64;

use super::{CellSystem, Variant};
use crate::error::{CellforgeError, Result};
use crate::expr::omega;
use crate::graphs::{EdgeTag, Orbifold};

#[derive(Clone, Copy)]
struct Acc {
    norm_sq: f64,
    count: usize,
    sign: Option<f64>,
    fixed: bool,
    sheet: usize,
}

/// Cells on the orbifold graph from the cells of the parent graph.
///
/// A child triangle collects the parent triangles mapping to it; its
/// modulus squared is their mean (divided by 9 instead when the triangle
/// touches a fixed vertex, where each sheet receives all three rotated
/// parents). The sign is that of the first parent. On sheet `c` a
/// fixed-vertex triangle using the unprimed member of a multiple edge
/// carries the phase `w^c`, one using the primed member `w^-c`. Every value
/// is multiplied by the orbifold scale.
pub fn lift_cells(orb: &Orbifold, parent: &CellSystem) -> Result<CellSystem> {
    let pg = parent.graph();
    let child = &orb.graph;
    let mut acc: Vec<Option<Acc>> = vec![None; child.triangles().len()];
    for (t, tri) in pg.triangles().iter().enumerate() {
        let fixed = orb.touches_fixed(pg, tri);
        for sheet in 0..orb.sheets(pg, tri) {
            let key = orb.image(tri, sheet).ok_or_else(|| {
                CellforgeError::InvalidRotation(format!(
                    "triangle {t} has no image on sheet {sheet}"
                ))
            })?;
            let w = parent.value(t);
            let a = acc[key].get_or_insert(Acc {
                norm_sq: 0.0,
                count: 0,
                sign: None,
                fixed,
                sheet,
            });
            a.norm_sq += w.norm_sqr();
            a.count += 1;
            if a.sign.is_none() {
                a.sign = Some(if w.re > 0.0 {
                    1.0
                } else if w.re < 0.0 {
                    -1.0
                } else {
                    0.0
                });
            }
        }
    }
    let values = child
        .triangles()
        .iter()
        .zip(acc)
        .map(|(tri, a)| {
            let Some(a) = a else {
                return Complex64::new(0.0, 0.0);
            };
            let divisor = if a.fixed { 9.0 } else { a.count as f64 };
            let modulus = (a.norm_sq / divisor).sqrt() * a.sign.unwrap_or(0.0) * orb.scale;
            let phase = if a.fixed {
                let tags: Vec<_> = tri
                    .edges
                    .iter()
                    .filter_map(|&e| child.edge(e).tag)
                    .collect();
                let eps = omega().powi(a.sheet as i32);
                if tags.iter().any(|t| is_unprimed(*t)) {
                    eps
                } else if !tags.is_empty() {
                    eps.conj()
                } else {
                    Complex64::new(1.0, 0.0)
                }
            } else {
                Complex64::new(1.0, 0.0)
            };
            phase * modulus
        })
        .collect();
    CellSystem::new(Arc::new(child.clone()), values, Variant::Default)
}

fn is_unprimed(t: EdgeTag) -> bool {
    matches!(t, EdgeTag::Alpha | EdgeTag::Beta | EdgeTag::Gamma)
}
