//! JSON and CSV documents for graphs, cell systems, Hecke matrices and
//! solver reports.
//!
//! Floating point values in JSON are written as C99 hexadecimal floats
//! (`"0x1.8p+1"`), so a document read back reproduces every bit. CSV output
//! uses the shortest decimal that round-trips.

use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cells::{CellSystem, Variant};
use crate::error::{CellforgeError, Result};
use crate::graphs::{
    build_graph, Edge, EdgeId, EdgeTag, Graph, GraphSpec, Triangle, Vertex, VertexId,
};
use crate::hecke::HeckeOperator;
use crate::solver::{SolveOutcome, SolveStatus};

/// Formats a finite `f64` as a C99 hexadecimal float, e.g. `0x1.8p+1`.
pub fn format_hex(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(CellforgeError::Document(format!(
            "{x} has no hex-float encoding"
        )));
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    let digits = |m: u64| {
        let s = format!("{m:013x}");
        s.trim_end_matches('0').to_string()
    };
    Ok(match (exp, mant) {
        (0, 0) => format!("{sign}0x0p+0"),
        (0, m) => format!("{sign}0x0.{}p-1022", digits(m)),
        (e, 0) => format!("{sign}0x1p{:+}", e - 1023),
        (e, m) => format!("{sign}0x1.{}p{:+}", digits(m), e - 1023),
    })
}

/// Parses a hexadecimal float written by [`format_hex`] (or any exact C99
/// hex float).
pub fn parse_hex(s: &str) -> Result<f64> {
    hexf_parse::parse_hexf64(s, false)
        .map_err(|e| CellforgeError::Document(format!("bad hex float `{s}`: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VertexDoc {
    id: usize,
    label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EdgeDoc {
    id: usize,
    source: usize,
    target: usize,
    tag: Option<EdgeTag>,
}

/// The graph document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    name: String,
    coxeter_n: u32,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
    pf_weights: IndexMap<String, String>,
    distinguished: usize,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Result<Self> {
        Ok(Self {
            name: g.name().to_string(),
            coxeter_n: g.coxeter_n(),
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexDoc {
                    id: v.id.0,
                    label: v.label.clone(),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.0,
                    source: e.source.0,
                    target: e.target.0,
                    tag: e.tag,
                })
                .collect(),
            pf_weights: g
                .pf_weights()
                .iter()
                .enumerate()
                .map(|(i, &w)| Ok((i.to_string(), format_hex(w)?)))
                .collect::<Result<_>>()?,
            distinguished: g.distinguished().0,
        })
    }

    /// Rebuilds the graph. A document whose name is a catalog entry and
    /// whose content equals that entry keeps its catalog identity.
    pub fn to_graph(&self) -> Result<Graph> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: VertexId(v.id),
                label: v.label.clone(),
            })
            .collect::<Vec<_>>();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                id: EdgeId(e.id),
                source: VertexId(e.source),
                target: VertexId(e.target),
                tag: e.tag,
            })
            .collect();
        let mut weights = vec![f64::NAN; vertices.len()];
        for (k, v) in &self.pf_weights {
            let i: usize = k
                .parse()
                .ok()
                .filter(|&i| i < weights.len())
                .ok_or_else(|| CellforgeError::Document(format!("bad weight key `{k}`")))?;
            weights[i] = parse_hex(v)?;
        }
        if weights.iter().any(|w| w.is_nan()) {
            return Err(CellforgeError::Document(
                "missing Perron-Frobenius weight".into(),
            ));
        }
        let spec = self.name.parse::<GraphSpec>().ok();
        let plain = Graph::from_parts(
            self.name.clone(),
            None,
            self.coxeter_n,
            vertices.clone(),
            edges,
            weights,
            VertexId(self.distinguished),
        )?;
        match spec.and_then(|s| build_graph(s).ok()) {
            Some(catalog) if catalog == plain => Ok(catalog),
            _ => Ok(plain),
        }
    }
}

/// Serializes a graph as a JSON document (with trailing newline).
pub fn graph_to_json(g: &Graph) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GraphDocument::from_graph(g)?)? + "\n")
}

/// Reads a graph document.
pub fn graph_from_json(s: &str) -> Result<Graph> {
    serde_json::from_str::<GraphDocument>(s)?.to_graph()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct GraphRef {
    name: String,
    coxeter_n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CellDoc {
    triangle: [usize; 3],
    re: String,
    im: String,
}

/// The cell document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellsDocument {
    graph: GraphRef,
    variant: String,
    cells: Vec<CellDoc>,
}

impl CellsDocument {
    pub fn from_cells(cs: &CellSystem) -> Result<Self> {
        let g = cs.graph();
        let cells = g
            .triangles()
            .iter()
            .zip(cs.values())
            .map(|(t, w)| {
                Ok(CellDoc {
                    triangle: t.edges.map(|e| e.0),
                    re: format_hex(w.re)?,
                    im: format_hex(w.im)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            graph: GraphRef {
                name: g.name().to_string(),
                coxeter_n: g.coxeter_n(),
            },
            variant: cs.variant().as_str().to_string(),
            cells,
        })
    }

    /// Name of the graph the cells live on.
    pub fn graph_name(&self) -> &str {
        &self.graph.name
    }

    /// Attaches the cells to `graph`, or to the catalog graph named in the
    /// document when `graph` is `None`.
    pub fn to_cells(&self, graph: Option<Arc<Graph>>) -> Result<CellSystem> {
        let graph = match graph {
            Some(g) => g,
            None => Arc::new(build_graph(self.graph.name.parse()?)?),
        };
        if graph.name() != self.graph.name || graph.coxeter_n() != self.graph.coxeter_n {
            return Err(CellforgeError::GraphMismatch(
                self.graph.name.clone(),
                graph.name().to_string(),
            ));
        }
        let variant: Variant = self.variant.parse()?;
        let mut values = vec![None; graph.triangles().len()];
        for c in &self.cells {
            let edges = c.triangle.map(EdgeId);
            if edges.iter().any(|e| e.0 >= graph.edge_count()) {
                return Err(CellforgeError::Document(format!(
                    "edge out of range in {:?}",
                    c.triangle
                )));
            }
            let t = graph
                .triangle_id(Triangle::canonical(edges).edges)
                .ok_or_else(|| {
                    CellforgeError::Document(format!("{:?} is not a triangle", c.triangle))
                })?;
            if values[t].is_some() {
                return Err(CellforgeError::Document(format!(
                    "triangle {:?} listed twice",
                    c.triangle
                )));
            }
            values[t] = Some(Complex64::new(parse_hex(&c.re)?, parse_hex(&c.im)?));
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CellforgeError::Document("a triangle has no cell".into()))?;
        CellSystem::new(graph, values, variant)
    }
}

/// Serializes a cell system as a JSON document (with trailing newline).
pub fn cells_to_json(cs: &CellSystem) -> Result<String> {
    Ok(serde_json::to_string_pretty(&CellsDocument::from_cells(cs)?)? + "\n")
}

/// Reads a cell document; see [`CellsDocument::to_cells`].
pub fn cells_from_json(s: &str, graph: Option<Arc<Graph>>) -> Result<CellSystem> {
    serde_json::from_str::<CellsDocument>(s)?.to_cells(graph)
}

/// Hecke matrices as CSV with columns `x,y,row,col,re,im`, one line per
/// entry; rows and columns are path labels.
pub fn hecke_to_csv(g: &Graph, ops: &[HeckeOperator]) -> String {
    let mut out = String::from("x,y,row,col,re,im\n");
    for u in ops {
        let labels = u.row_labels(g);
        for (r, rl) in labels.iter().enumerate() {
            for (c, cl) in labels.iter().enumerate() {
                let z = u.matrix[(r, c)];
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_field(g.label(u.x)),
                    csv_field(g.label(u.y)),
                    csv_field(rl),
                    csv_field(cl),
                    z.re,
                    z.im
                ));
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The solver report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub objective: String,
    pub iterations: usize,
    pub fingerprint: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<CellsDocument>,
}

impl SolveReport {
    pub fn from_outcome(o: &SolveOutcome, with_cells: bool) -> Result<Self> {
        Ok(Self {
            status: o.status,
            objective: format_hex(o.objective)?,
            iterations: o.iterations,
            fingerprint: match &o.fingerprint {
                Some(f) => f
                    .values
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), format_hex(*v)?)))
                    .collect::<Result<_>>()?,
                None => BTreeMap::new(),
            },
            cells: match (&o.cells, with_cells) {
                (Some(cs), true) => Some(CellsDocument::from_cells(cs)?),
                _ => None,
            },
        })
    }
}

/// Serializes a solver outcome (with trailing newline).
pub fn solve_report_to_json(o: &SolveOutcome, with_cells: bool) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SolveReport::from_outcome(o, with_cells)?)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_examples() {
        assert_eq!(format_hex(3.0).unwrap(), "0x1.8p+1");
        assert_eq!(format_hex(1.0).unwrap(), "0x1p+0");
        assert_eq!(format_hex(-0.0).unwrap(), "-0x0p+0");
        assert_eq!(format_hex(f64::MIN_POSITIVE / 4.0).unwrap(), "0x0.4p-1022");
        assert!(format_hex(f64::NAN).is_err());
        for s in [
            "0x1.8p+1",
            "-0x0p+0",
            "0x0.4p-1022",
            "0x1.fffffffffffffp+1023",
        ] {
            assert_eq!(format_hex(parse_hex(s).unwrap()).unwrap(), s);
        }
    }
}
