//! The Z3 orbifold of a graph with respect to an order-3 automorphism.
//!
//! Non-fixed vertex orbits collapse to a single vertex and every fixed
//! vertex splits into three copies carrying a third of its weight. Edge
//! orbits collapse in the same way; edges touching a fixed vertex are
//! copied once per sheet. Distinct edge orbits joining the same pair of
//! vertices become a tagged multiple edge.

use std::collections::{BTreeMap, HashMap};

use super::catalog::{Family, GraphSpec};
use super::{EdgeId, EdgeTag, Graph, GraphBuilder, Triangle, VertexId};
use crate::error::{CellforgeError, Result};

/// Names one member of a multiple edge of the orbifold: the image of the
/// parent edge `source -> target` receives `tag`, the other member of the
/// same parallel class receives `partner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagRule {
    pub source: String,
    pub target: String,
    pub tag: EdgeTag,
    pub partner: EdgeTag,
}

/// How a non-fixed vertex orbit is labelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitLabel {
    /// The lexicographically smallest parent label.
    Smallest,
    /// For `(a,b)` labels: smallest `a+b`, ties going to the larger `a`.
    LatticeMinimal,
    /// The parent label with a trailing `_l` index removed.
    StripIndex,
}

/// Parameters of [`z3_orbifold`].
#[derive(Debug, Clone)]
pub struct OrbifoldOptions {
    pub name: String,
    /// Factor applied to every vertex weight (and, when lifting cells, to
    /// every cell).
    pub scale: f64,
    pub tags: Vec<TagRule>,
    pub orbit_label: OrbitLabel,
    pub spec: Option<GraphSpec>,
}

impl OrbifoldOptions {
    /// Plain orbifold without tags or rescaling.
    pub fn plain(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            scale: 1.0,
            tags: Vec::new(),
            orbit_label: OrbitLabel::Smallest,
            spec: None,
        }
    }

    /// Options producing E1(12) from E2(12).
    pub fn e1() -> Self {
        let rule = |s: &str, t: &str, tag, partner| TagRule {
            source: s.into(),
            target: t.into(),
            tag,
            partner,
        };
        Self {
            name: "E1(12)".into(),
            scale: 3.0,
            tags: vec![
                rule("r_1", "p_1", EdgeTag::Alpha, EdgeTag::AlphaPrime),
                rule("p_1", "q_1", EdgeTag::Beta, EdgeTag::BetaPrime),
            ],
            orbit_label: OrbitLabel::StripIndex,
            spec: Some(GraphSpec {
                family: Family::E1,
                n: 12,
            }),
        }
    }
}

/// Result of [`z3_orbifold`]: the quotient graph plus the parent-to-child
/// correspondence needed to lift cells.
#[derive(Debug, Clone)]
pub struct Orbifold {
    pub graph: Graph,
    pub scale: f64,
    /// Whether each parent vertex is fixed by the rotation.
    pub fixed: Vec<bool>,
    /// For each parent edge, its image on sheets 0, 1, 2 (all equal when
    /// the edge touches no fixed vertex).
    pub edge_image: Vec<[EdgeId; 3]>,
    /// The parent rotation.
    pub rotation: Vec<VertexId>,
}

impl Orbifold {
    /// Sheets on which a parent triangle has an image.
    pub fn sheets(&self, parent: &Graph, t: &Triangle) -> usize {
        if parent_vertices(parent, t).iter().any(|v| self.fixed[v.0]) {
            3
        } else {
            1
        }
    }

    /// Child triangle index of a parent triangle on `sheet`.
    pub fn image(&self, t: &Triangle, sheet: usize) -> Option<usize> {
        self.graph
            .triangle_id(t.edges.map(|e| self.edge_image[e.0][sheet]))
    }

    /// True when the triangle has a vertex fixed by the rotation.
    pub fn touches_fixed(&self, parent: &Graph, t: &Triangle) -> bool {
        parent_vertices(parent, t).iter().any(|v| self.fixed[v.0])
    }
}

fn parent_vertices(g: &Graph, t: &Triangle) -> [VertexId; 3] {
    g.triangle_vertices(t)
}

/// Checks that `rotation` is an automorphism of order exactly 3.
fn validate_rotation(g: &Graph, rotation: &[VertexId]) -> Result<HashMap<EdgeId, EdgeId>> {
    let n = g.vertex_count();
    if rotation.len() != n {
        return Err(CellforgeError::InvalidRotation(format!(
            "expected {n} images, got {}",
            rotation.len()
        )));
    }
    let mut seen = vec![false; n];
    for v in rotation {
        if v.0 >= n || std::mem::replace(&mut seen[v.0], true) {
            return Err(CellforgeError::InvalidRotation("not a permutation".into()));
        }
    }
    let r = |v: VertexId| rotation[v.0];
    if (0..n).any(|i| r(r(r(VertexId(i)))) != VertexId(i)) {
        return Err(CellforgeError::InvalidRotation(
            "cube is not the identity".into(),
        ));
    }
    if (0..n).all(|i| r(VertexId(i)) == VertexId(i)) {
        return Err(CellforgeError::InvalidRotation(
            "rotation is the identity".into(),
        ));
    }
    let mut erot = HashMap::new();
    for e in g.edges() {
        let image = g
            .edges_between(r(e.source), r(e.target))
            .iter()
            .copied()
            .find(|&f| g.edge(f).tag == e.tag)
            .ok_or_else(|| {
                CellforgeError::InvalidRotation(format!("edge {} has no image", g.edge_name(e.id)))
            })?;
        erot.insert(e.id, image);
    }
    Ok(erot)
}

fn orbit_label(g: &Graph, orbit: [VertexId; 3], how: OrbitLabel) -> String {
    let labels = orbit.map(|v| g.label(v).to_string());
    match how {
        OrbitLabel::Smallest => labels.iter().min().cloned().unwrap_or_default(),
        OrbitLabel::StripIndex => {
            let l = &labels[0];
            l.rsplit_once('_')
                .map(|(h, _)| h.to_string())
                .unwrap_or_else(|| l.clone())
        }
        OrbitLabel::LatticeMinimal => labels
            .iter()
            .filter_map(|l| parse_pair(l).map(|p| (p, l)))
            .min_by_key(|((a, b), _)| (a + b, -a))
            .map(|(_, l)| l.clone())
            .unwrap_or_else(|| labels.iter().min().cloned().unwrap_or_default()),
    }
}

pub(crate) fn parse_pair(label: &str) -> Option<(i64, i64)> {
    let inner = label.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Z3 orbifold of `g` under `rotation` (given as the image of each vertex).
pub fn z3_orbifold(g: &Graph, rotation: &[VertexId], opts: &OrbifoldOptions) -> Result<Orbifold> {
    let erot = validate_rotation(g, rotation)?;
    let r = |v: VertexId| rotation[v.0];
    let nv = g.vertex_count();
    let fixed: Vec<bool> = (0..nv).map(|i| r(VertexId(i)) == VertexId(i)).collect();

    let mut b = GraphBuilder::new(opts.name.clone(), g.coxeter_n());
    if let Some(spec) = opts.spec {
        b = b.spec(spec);
    }
    let mut child: Vec<[Option<VertexId>; 3]> = vec![[None; 3]; nv];
    for i in 0..nv {
        let v = VertexId(i);
        if fixed[i] {
            for (c, slot) in child[i].iter_mut().enumerate() {
                let id = b.vertex(
                    format!("{}_{}", g.label(v), c + 1),
                    g.phi(v) / 3.0 * opts.scale,
                );
                *slot = Some(id);
            }
        } else if child[i][0].is_none() {
            let orbit = [v, r(v), r(r(v))];
            let id = b.vertex(
                orbit_label(g, orbit, opts.orbit_label),
                g.phi(v) * opts.scale,
            );
            for w in orbit {
                child[w.0] = [Some(id); 3];
            }
        }
    }
    let cv = |v: VertexId, c: usize| child[v.0][c].expect("assigned");

    let ne = g.edge_count();
    let mut insert: Vec<Option<[usize; 3]>> = vec![None; ne];
    for e in g.edges() {
        if insert[e.id.0].is_some() {
            continue;
        }
        let orbit = [e.id, erot[&e.id], erot[&erot[&e.id]]];
        let (s, t) = (e.source, e.target);
        let slots = if fixed[s.0] || fixed[t.0] {
            let mut ids = [0; 3];
            for (c, id) in ids.iter_mut().enumerate() {
                *id = b.edge(cv(s, c), cv(t, c), None);
            }
            ids
        } else {
            let id = b.edge(cv(s, 0), cv(t, 0), None);
            [id; 3]
        };
        for o in orbit {
            insert[o.0] = Some(slots);
        }
    }

    let parent_of_slot: HashMap<usize, EdgeId> = insert
        .iter()
        .enumerate()
        .flat_map(|(e, s)| s.expect("assigned").map(|slot| (slot, EdgeId(e))))
        .collect();
    let endpoints = b.edge_endpoints();
    let mut classes: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
    for (slot, &st) in endpoints.iter().enumerate() {
        classes.entry(st).or_default().push(slot);
    }
    let mut tags: HashMap<usize, EdgeTag> = HashMap::new();
    for (_, members) in classes.iter().filter(|(_, m)| m.len() > 1) {
        if members.len() != 2 {
            return Err(CellforgeError::InvalidRotation(format!(
                "{} parallel edges cannot be tagged",
                members.len()
            )));
        }
        let rule = opts.tags.iter().find_map(|rule| {
            let (rs, rt) = (
                g.vertex_by_label(&rule.source)?,
                g.vertex_by_label(&rule.target)?,
            );
            let pe = *g.edges_between(rs, rt).first()?;
            let orbit = [pe, erot[&pe], erot[&erot[&pe]]];
            members
                .iter()
                .position(|m| orbit.contains(&parent_of_slot[m]))
                .map(|k| (rule, k))
        });
        let (rule, k) = rule.ok_or_else(|| {
            let (s, t) = endpoints[members[0]];
            CellforgeError::InvalidRotation(format!(
                "no tag rule for the multiple edge {} -> {}",
                b.label_of(s),
                b.label_of(t)
            ))
        })?;
        tags.insert(members[k], rule.tag);
        tags.insert(members[1 - k], rule.partner);
    }
    b.set_tags(&tags);

    let (graph, map) = b.build_with_map()?;
    let edge_image = insert
        .into_iter()
        .map(|s| s.expect("assigned").map(|slot| map[slot]))
        .collect();
    Ok(Orbifold {
        graph,
        scale: opts.scale,
        fixed,
        edge_image,
        rotation: rotation.to_vec(),
    })
}

/// The rotation `(a,b) -> (n-3-a-b, a)` of A(n).
pub fn a_rotation(g: &Graph) -> Result<Vec<VertexId>> {
    let n = g.coxeter_n() as i64;
    g.vertices()
        .iter()
        .map(|v| {
            let (a, b) =
                parse_pair(&v.label).ok_or_else(|| CellforgeError::OffLattice(v.label.clone()))?;
            g.require_vertex(&format!("({},{})", n - 3 - a - b, a))
        })
        .collect()
}

/// The rotation of E2(12) fixing `i`, `j`, `k` and sending `x_l` to
/// `x_{l+1}`.
pub fn e2_rotation(g: &Graph) -> Result<Vec<VertexId>> {
    g.vertices()
        .iter()
        .map(|v| match v.label.split_once('_') {
            Some((h, l)) => {
                let l: u32 = l
                    .parse()
                    .map_err(|_| CellforgeError::InvalidRotation(v.label.clone()))?;
                g.require_vertex(&format!("{h}_{}", l % 3 + 1))
            }
            None => Ok(v.id),
        })
        .collect()
}

/// Tag rules for D(n): the orbit of `(k,k-1) -> (k-1,k)` is `gamma`.
pub fn d_tag_rules(n: u32) -> Vec<TagRule> {
    if n % 3 != 0 || n < 6 {
        return Vec::new();
    }
    let k = (n as i64 - 3) / 3;
    vec![TagRule {
        source: format!("({k},{})", k - 1),
        target: format!("({},{k})", k - 1),
        tag: EdgeTag::Gamma,
        partner: EdgeTag::GammaPrime,
    }]
}
