//! Cell systems: storage, the closed-form constructors for every catalog
//! graph, the type I/II frame verifiers and gauge equivalence.

mod construct;
mod equivalence;
mod gauge;
mod lift;
mod verify;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use construct::{construct_cells, construct_cells_in};
pub use equivalence::{equivalent, fingerprint, Equivalence, Fingerprint, FINGERPRINT_TOL};
pub use gauge::{gauge_transform, permute_vertices, random_gauge, GaugeFamily};
pub use lift::lift_cells;
pub use verify::{
    type_i_rhs, type_i_sum, type_ii_rhs, type_ii_sum, verify_type_i, verify_type_ii, FrameReport,
};

use crate::error::{CellforgeError, Result};
use crate::graphs::{EdgeId, Graph, GraphSpec};

/// Which of a family's solutions a system represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Default,
    #[serde(rename = "conj")]
    Conjugate,
    Plus,
    Minus,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Default => "default",
            Variant::Conjugate => "conj",
            Variant::Plus => "plus",
            Variant::Minus => "minus",
        }
    }

    /// Variants admitted by a catalog entry. The first is what
    /// [`Variant::Default`] resolves to.
    pub fn admissible(spec: GraphSpec) -> Vec<Variant> {
        use crate::graphs::Family::*;
        match spec.family {
            D if spec.n % 3 == 0 => vec![Variant::Default, Variant::Conjugate],
            AStar | DStar if spec.n % 2 == 0 => vec![Variant::Plus, Variant::Minus],
            E1 | E2 => vec![Variant::Plus, Variant::Minus],
            _ => vec![Variant::Default],
        }
    }

    /// Resolves `Default` and rejects variants the family does not have.
    pub fn resolve(self, spec: GraphSpec) -> Result<Variant> {
        let adm = Self::admissible(spec);
        let v = if self == Variant::Default {
            adm[0]
        } else {
            self
        };
        if adm.contains(&v) {
            Ok(v)
        } else {
            Err(CellforgeError::IllegalVariant {
                graph: spec.to_string(),
                variant: self.as_str().to_string(),
            })
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = CellforgeError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "default" => Ok(Variant::Default),
            "conj" | "conjugate" => Ok(Variant::Conjugate),
            "plus" | "+" => Ok(Variant::Plus),
            "minus" | "-" => Ok(Variant::Minus),
            _ => Err(CellforgeError::IllegalVariant {
                graph: "any graph".into(),
                variant: s.to_string(),
            }),
        }
    }
}

/// A complex value on every triangle of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSystem {
    graph: Arc<Graph>,
    values: Vec<Complex64>,
    variant: Variant,
}

impl CellSystem {
    /// Wraps values given in the order of `graph.triangles()`.
    pub fn new(graph: Arc<Graph>, values: Vec<Complex64>, variant: Variant) -> Result<Self> {
        if values.len() != graph.triangles().len() {
            return Err(CellforgeError::Document(format!(
                "{} values for {} triangles",
                values.len(),
                graph.triangles().len()
            )));
        }
        Ok(Self {
            graph,
            values,
            variant,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Values in triangle order.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, triangle: usize) -> Complex64 {
        self.values[triangle]
    }

    /// The cell on the closed path `e`, or zero when `e` is not a triangle.
    pub fn w(&self, e: [EdgeId; 3]) -> Complex64 {
        self.graph
            .triangle_id(e)
            .map_or(Complex64::new(0.0, 0.0), |t| self.values[t])
    }

    /// Cells on every triangle through the labelled vertices.
    pub fn by_labels(&self, a: &str, b: &str, c: &str) -> Result<Vec<Complex64>> {
        let g = &self.graph;
        let ids = g.triangles_through(
            g.require_vertex(a)?,
            g.require_vertex(b)?,
            g.require_vertex(c)?,
        );
        Ok(ids.into_iter().map(|t| self.values[t]).collect())
    }

    /// The single cell through the labelled vertices (errors when the
    /// vertices carry several or no triangles).
    pub fn cell(&self, a: &str, b: &str, c: &str) -> Result<Complex64> {
        match self.by_labels(a, b, c)?.as_slice() {
            [w] => Ok(*w),
            other => Err(CellforgeError::Document(format!(
                "{} triangles through {a}, {b}, {c}",
                other.len()
            ))),
        }
    }

    /// Same graph and variant, new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        Self::new(self.graph_arc(), values, self.variant)
    }

    /// Complex conjugate system.
    pub fn conj(&self) -> Self {
        let variant = match self.variant {
            Variant::Default => Variant::Conjugate,
            Variant::Conjugate => Variant::Default,
            v => v,
        };
        Self {
            graph: self.graph_arc(),
            values: self.values.iter().map(|w| w.conj()).collect(),
            variant,
        }
    }

    /// Human readable name of a triangle, e.g. `W_{(0,0),(1,0),(0,1)}`.
    pub fn triangle_name(&self, t: usize) -> String {
        let g = &self.graph;
        let tri = &g.triangles()[t];
        let parts: Vec<String> = tri
            .edges
            .iter()
            .map(|&e| {
                let ed = g.edge(e);
                match ed.tag {
                    Some(tag) => format!("{}[{}]", g.label(ed.source), tag),
                    None => g.label(ed.source).to_string(),
                }
            })
            .collect();
        format!("W_{{{}}}", parts.join(","))
    }
}
