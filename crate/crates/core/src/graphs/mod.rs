//! Directed multigraphs with Perron-Frobenius data, triangle and frame
//! enumeration, the ADE catalog and the Z3 orbifold construction.

mod catalog;
mod orbifold;
mod pf;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use catalog::{build_graph, d_orbifold, e1_orbifold, Family, GraphSpec};
pub(crate) use catalog::{E24_CELLS, E5_CELLS};
pub use orbifold::{
    a_rotation, d_tag_rules, e2_rotation, z3_orbifold, Orbifold, OrbifoldOptions, OrbitLabel,
    TagRule,
};
pub use pf::{pf_data, PfData};

use crate::error::{CellforgeError, Result};
use crate::qnum::QContext;

/// Opaque vertex identifier (dense index into [`Graph::vertices`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

/// Opaque edge identifier (dense index into [`Graph::edges`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Names distinguishing the members of a multiple edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeTag {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "alpha'")]
    AlphaPrime,
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "beta'")]
    BetaPrime,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "gamma'")]
    GammaPrime,
}

impl EdgeTag {
    pub const ALL: [EdgeTag; 6] = [
        EdgeTag::Alpha,
        EdgeTag::AlphaPrime,
        EdgeTag::Beta,
        EdgeTag::BetaPrime,
        EdgeTag::Gamma,
        EdgeTag::GammaPrime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::Alpha => "alpha",
            EdgeTag::AlphaPrime => "alpha'",
            EdgeTag::Beta => "beta",
            EdgeTag::BetaPrime => "beta'",
            EdgeTag::Gamma => "gamma",
            EdgeTag::GammaPrime => "gamma'",
        }
    }
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeTag {
    type Err = CellforgeError;
    fn from_str(s: &str) -> Result<Self> {
        EdgeTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| CellforgeError::Document(format!("unknown edge tag `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
    pub tag: Option<EdgeTag>,
}

/// A closed path of three composable edges, stored as the rotation of its
/// cyclic class whose edge-id triple is lexicographically smallest. Edge ids
/// are assigned in (source, target, tag) order, so this is the rotation that
/// is smallest by (vertex, edge tag).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    pub edges: [EdgeId; 3],
}

impl Triangle {
    /// The canonical rotation of `(e1, e2, e3)`.
    pub fn canonical(e: [EdgeId; 3]) -> Self {
        let rots = [e, [e[1], e[2], e[0]], [e[2], e[0], e[1]]];
        Triangle {
            edges: *rots.iter().min().expect("three rotations"),
        }
    }

    /// The three rotations, canonical one first.
    pub fn rotations(&self) -> [[EdgeId; 3]; 3] {
        let e = self.edges;
        [e, [e[1], e[2], e[0]], [e[2], e[0], e[1]]]
    }
}

/// Two edges with common source and common target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeIFrame {
    pub alpha: EdgeId,
    pub alpha_prime: EdgeId,
}

/// Four edges `a1: a->b`, `a2: c->b`, `a3: c->d`, `a4: a->d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeIIFrame {
    pub a1: EdgeId,
    pub a2: EdgeId,
    pub a3: EdgeId,
    pub a4: EdgeId,
}

/// An immutable directed multigraph with Perron-Frobenius weights.
#[derive(Debug, Clone)]
pub struct Graph {
    name: String,
    spec: Option<GraphSpec>,
    coxeter_n: u32,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    pf_weights: Vec<f64>,
    distinguished: VertexId,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    between: HashMap<(VertexId, VertexId), Vec<EdgeId>>,
    label_index: HashMap<String, VertexId>,
    triangles: Vec<Triangle>,
    triangle_index: HashMap<[EdgeId; 3], usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.coxeter_n == other.coxeter_n
            && self.vertices == other.vertices
            && self.edges == other.edges
            && self.pf_weights == other.pf_weights
            && self.distinguished == other.distinguished
    }
}

impl Graph {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Catalog entry this graph was built from, if any.
    pub fn spec(&self) -> Option<GraphSpec> {
        self.spec
    }

    pub fn coxeter_n(&self) -> u32 {
        self.coxeter_n
    }

    /// Double precision context `q = exp(i*pi/n)` for this graph.
    pub fn qcontext(&self) -> QContext {
        QContext::root_of_unity(self.coxeter_n).expect("catalog graphs have n >= 4")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.vertices[v.0].label
    }

    /// Vertex with the given label.
    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.label_index.get(label).copied()
    }

    /// Like [`Graph::vertex_by_label`] but reports a missing label as an error.
    pub fn require_vertex(&self, label: &str) -> Result<VertexId> {
        self.vertex_by_label(label)
            .ok_or_else(|| CellforgeError::UnknownVertex(label.to_string()))
    }

    pub fn pf_weights(&self) -> &[f64] {
        &self.pf_weights
    }

    pub fn phi(&self, v: VertexId) -> f64 {
        self.pf_weights[v.0]
    }

    /// The vertex normalized to weight 1.
    pub fn distinguished(&self) -> VertexId {
        self.distinguished
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    /// All edges from `a` to `b`, in id order.
    pub fn edges_between(&self, a: VertexId, b: VertexId) -> &[EdgeId] {
        self.between.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Ordered vertex pairs joined by at least one edge, with their edges.
    pub fn parallel_classes(&self) -> Vec<((VertexId, VertexId), Vec<EdgeId>)> {
        let mut v: Vec<_> = self.between.iter().map(|(k, e)| (*k, e.clone())).collect();
        v.sort();
        v
    }

    /// True when some ordered vertex pair carries more than one edge.
    pub fn has_multiple_edges(&self) -> bool {
        self.between.values().any(|e| e.len() > 1)
    }

    /// Human readable edge name such as `(1,0)->(0,1)` or `r->p[alpha]`.
    pub fn edge_name(&self, e: EdgeId) -> String {
        let ed = self.edge(e);
        let mut s = format!("{}->{}", self.label(ed.source), self.label(ed.target));
        if let Some(t) = ed.tag {
            s.push('[');
            s.push_str(t.as_str());
            s.push(']');
        }
        s
    }

    /// Triangles in canonical order.
    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// Index of the triangle traversing `e` (in any rotation).
    pub fn triangle_id(&self, e: [EdgeId; 3]) -> Option<usize> {
        self.triangle_index
            .get(&Triangle::canonical(e).edges)
            .copied()
    }

    /// Vertices `(s(e1), s(e2), s(e3))` of a triangle.
    pub fn triangle_vertices(&self, t: &Triangle) -> [VertexId; 3] {
        t.edges.map(|e| self.edge(e).source)
    }

    /// Triangles whose boundary visits `a -> b -> c -> a`.
    pub fn triangles_through(&self, a: VertexId, b: VertexId, c: VertexId) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for &e1 in self.edges_between(a, b) {
            for &e2 in self.edges_between(b, c) {
                for &e3 in self.edges_between(c, a) {
                    if let Some(t) = self.triangle_id([e1, e2, e3]) {
                        out.insert(t);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Adjacency matrix `A[a][b] = #edges a -> b`.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let n = self.vertices.len();
        let mut a = DMatrix::zeros(n, n);
        for e in &self.edges {
            a[(e.source.0, e.target.0)] += 1.0;
        }
        a
    }

    /// Every ordered pair of parallel edges, grouped by vertex pair.
    pub fn type_i_frames(&self) -> Vec<TypeIFrame> {
        let mut out = Vec::new();
        for (_, class) in self.parallel_classes() {
            for &alpha in &class {
                for &alpha_prime in &class {
                    out.push(TypeIFrame { alpha, alpha_prime });
                }
            }
        }
        out
    }

    /// Every type II frame, degenerate ones included, in a deterministic
    /// order (by `b`, `d`, then edge ids).
    pub fn type_ii_frames(&self) -> Vec<TypeIIFrame> {
        let mut out = Vec::new();
        for b in 0..self.vertices.len() {
            for d in 0..self.vertices.len() {
                self.for_each_type_ii(VertexId(b), VertexId(d), |f| out.push(f));
            }
        }
        out
    }

    pub(crate) fn for_each_type_ii(
        &self,
        b: VertexId,
        d: VertexId,
        mut f: impl FnMut(TypeIIFrame),
    ) {
        for &a1 in self.in_edges(b) {
            let a = self.edge(a1).source;
            let a4s = self.edges_between(a, d);
            if a4s.is_empty() {
                continue;
            }
            for &a2 in self.in_edges(b) {
                let c = self.edge(a2).source;
                for &a3 in self.edges_between(c, d) {
                    for &a4 in a4s {
                        f(TypeIIFrame { a1, a2, a3, a4 });
                    }
                }
            }
        }
    }
}

/// Free-function form of [`Graph::triangles`].
pub fn triangles(g: &Graph) -> Vec<Triangle> {
    g.triangles().to_vec()
}

/// Free-function form of [`Graph::type_i_frames`].
pub fn type_i_frames(g: &Graph) -> Vec<TypeIFrame> {
    g.type_i_frames()
}

/// Free-function form of [`Graph::type_ii_frames`].
pub fn type_ii_frames(g: &Graph) -> Vec<TypeIIFrame> {
    g.type_ii_frames()
}

/// Incremental construction of a [`Graph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    name: String,
    coxeter_n: u32,
    labels: Vec<String>,
    weights: Vec<f64>,
    edges: Vec<(VertexId, VertexId, Option<EdgeTag>)>,
    distinguished: Option<VertexId>,
    spec: Option<GraphSpec>,
}

impl GraphBuilder {
    pub fn new(name: impl Into<String>, coxeter_n: u32) -> Self {
        Self {
            name: name.into(),
            coxeter_n,
            ..Self::default()
        }
    }

    pub fn spec(mut self, spec: GraphSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    /// Adds a vertex with its Perron-Frobenius weight.
    pub fn vertex(&mut self, label: impl Into<String>, phi: f64) -> VertexId {
        self.labels.push(label.into());
        self.weights.push(phi);
        VertexId(self.labels.len() - 1)
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label).map(VertexId)
    }

    /// Adds an edge and returns its insertion index; final ids are
    /// reported by [`GraphBuilder::build_with_map`].
    pub fn edge(&mut self, s: VertexId, t: VertexId, tag: Option<EdgeTag>) -> usize {
        self.edges.push((s, t, tag));
        self.edges.len() - 1
    }

    pub fn has_edge(&self, s: VertexId, t: VertexId) -> bool {
        self.edges.iter().any(|&(a, b, _)| a == s && b == t)
    }

    /// Endpoints of each inserted edge, by insertion index.
    pub fn edge_endpoints(&self) -> Vec<(VertexId, VertexId)> {
        self.edges.iter().map(|&(s, t, _)| (s, t)).collect()
    }

    pub fn label_of(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    /// Overrides the tags of edges given by insertion index.
    pub fn set_tags(&mut self, tags: &HashMap<usize, EdgeTag>) {
        for (&i, &t) in tags {
            self.edges[i].2 = Some(t);
        }
    }

    pub fn distinguished(&mut self, v: VertexId) {
        self.distinguished = Some(v);
    }

    pub fn build(self) -> Result<Graph> {
        self.build_with_map().map(|(g, _)| g)
    }

    /// Builds the graph and returns, for each insertion index, the final
    /// edge id.
    pub fn build_with_map(self) -> Result<(Graph, Vec<EdgeId>)> {
        let nv = self.labels.len();
        let mut label_index = HashMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if label_index.insert(l.clone(), VertexId(i)).is_some() {
                return Err(CellforgeError::Document(format!(
                    "duplicate vertex label `{l}`"
                )));
            }
        }
        for &(s, t, _) in &self.edges {
            if s.0 >= nv || t.0 >= nv {
                return Err(CellforgeError::Document(
                    "edge endpoint out of range".into(),
                ));
            }
        }
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by_key(|&i| self.edges[i]);
        for w in order.windows(2) {
            if self.edges[w[0]] == self.edges[w[1]] {
                let (s, t, tag) = self.edges[w[0]];
                return Err(CellforgeError::Document(format!(
                    "duplicate edge {} -> {} with tag {:?}",
                    self.labels[s.0], self.labels[t.0], tag
                )));
            }
        }
        let mut map = vec![EdgeId(0); self.edges.len()];
        let mut edges = Vec::with_capacity(self.edges.len());
        for (new, &old) in order.iter().enumerate() {
            map[old] = EdgeId(new);
            let (source, target, tag) = self.edges[old];
            edges.push(Edge {
                id: EdgeId(new),
                source,
                target,
                tag,
            });
        }
        let vertices = self
            .labels
            .into_iter()
            .enumerate()
            .map(|(i, label)| Vertex {
                id: VertexId(i),
                label,
            })
            .collect();
        let g = Graph::assemble(
            self.name,
            self.spec,
            self.coxeter_n,
            vertices,
            edges,
            self.weights,
            self.distinguished.unwrap_or(VertexId(0)),
            label_index,
        );
        Ok((g, map))
    }
}

impl Graph {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: String,
        spec: Option<GraphSpec>,
        coxeter_n: u32,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        pf_weights: Vec<f64>,
        distinguished: VertexId,
        label_index: HashMap<String, VertexId>,
    ) -> Self {
        let nv = vertices.len();
        let mut out_edges = vec![Vec::new(); nv];
        let mut in_edges = vec![Vec::new(); nv];
        let mut between: HashMap<(VertexId, VertexId), Vec<EdgeId>> = HashMap::new();
        for e in &edges {
            out_edges[e.source.0].push(e.id);
            in_edges[e.target.0].push(e.id);
            between.entry((e.source, e.target)).or_default().push(e.id);
        }
        let mut set = BTreeSet::new();
        for e1 in &edges {
            for &e2 in &out_edges[e1.target.0] {
                for &e3 in &out_edges[edges[e2.0].target.0] {
                    if edges[e3.0].target == e1.source {
                        set.insert(Triangle::canonical([e1.id, e2, e3]));
                    }
                }
            }
        }
        let triangles: Vec<Triangle> = set.into_iter().collect();
        let triangle_index = triangles
            .iter()
            .enumerate()
            .map(|(i, t)| (t.edges, i))
            .collect();
        Graph {
            name,
            spec,
            coxeter_n,
            vertices,
            edges,
            pf_weights,
            distinguished,
            out_edges,
            in_edges,
            between,
            label_index,
            triangles,
            triangle_index,
        }
    }

    /// Rebuilds a graph from raw parts (used by document import).
    pub fn from_parts(
        name: String,
        spec: Option<GraphSpec>,
        coxeter_n: u32,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        pf_weights: Vec<f64>,
        distinguished: VertexId,
    ) -> Result<Self> {
        let nv = vertices.len();
        if pf_weights.len() != nv {
            return Err(CellforgeError::Document(
                "one weight per vertex required".into(),
            ));
        }
        if distinguished.0 >= nv {
            return Err(CellforgeError::Document(
                "distinguished vertex out of range".into(),
            ));
        }
        let mut label_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.id.0 != i {
                return Err(CellforgeError::Document(
                    "vertex ids must be 0..n in order".into(),
                ));
            }
            if label_index.insert(v.label.clone(), v.id).is_some() {
                return Err(CellforgeError::Document(format!(
                    "duplicate label `{}`",
                    v.label
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.id.0 != i || e.source.0 >= nv || e.target.0 >= nv {
                return Err(CellforgeError::Document(format!("malformed edge {i}")));
            }
            if !seen.insert((e.source, e.target, e.tag)) {
                return Err(CellforgeError::Document(format!("duplicate edge {i}")));
            }
        }
        Ok(Self::assemble(
            name,
            spec,
            coxeter_n,
            vertices,
            edges,
            pf_weights,
            distinguished,
            label_index,
        ))
    }
}
