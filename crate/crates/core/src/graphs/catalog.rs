//! The catalog of SU(3) ADE graphs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::orbifold::{
    a_rotation, d_tag_rules, e2_rotation, z3_orbifold, Orbifold, OrbifoldOptions, OrbitLabel,
};
use super::{Graph, GraphBuilder};
use crate::error::{CellforgeError, Result};
use crate::expr;
use crate::qnum::QContext;

/// Graph families of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    AStar,
    DStar,
    E8,
    E8Star,
    E1,
    E2,
    E5,
    E24,
    E4,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::A,
        Family::D,
        Family::AStar,
        Family::DStar,
        Family::E8,
        Family::E8Star,
        Family::E1,
        Family::E2,
        Family::E5,
        Family::E24,
        Family::E4,
    ];

    /// Coxeter number of an exceptional graph, `None` for the series.
    pub fn fixed_n(self) -> Option<u32> {
        match self {
            Family::A | Family::D | Family::AStar | Family::DStar => None,
            Family::E8 | Family::E8Star => Some(8),
            Family::E1 | Family::E2 | Family::E5 | Family::E4 => Some(12),
            Family::E24 => Some(24),
        }
    }

    /// Smallest admissible `n` of a series.
    pub fn min_n(self) -> u32 {
        match self {
            Family::A => 4,
            Family::D | Family::AStar => 5,
            Family::DStar => 6,
            other => other.fixed_n().unwrap_or(4),
        }
    }

    /// Short selector keyword, e.g. `Astar`.
    pub fn keyword(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::D => "D",
            Family::AStar => "Astar",
            Family::DStar => "Dstar",
            Family::E8 => "E8",
            Family::E8Star => "E8star",
            Family::E1 => "E1",
            Family::E2 => "E2",
            Family::E5 => "E5",
            Family::E24 => "E24",
            Family::E4 => "E4",
        }
    }
}

/// A resolved catalog entry: family plus Coxeter number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphSpec {
    pub family: Family,
    pub n: u32,
}

impl GraphSpec {
    /// Validates `n` for the family. Exceptional graphs accept `None` or
    /// their own Coxeter number.
    pub fn new(family: Family, n: Option<u32>) -> Result<Self> {
        let out_of_range = |n: u32, expected: String| CellforgeError::OutOfRange {
            family: family.keyword().to_string(),
            n,
            expected,
        };
        match (family.fixed_n(), n) {
            (Some(f), None) => Ok(Self { family, n: f }),
            (Some(f), Some(m)) if m == f => Ok(Self { family, n: f }),
            (Some(f), Some(m)) => Err(out_of_range(m, format!("n = {f}"))),
            (None, None) => Err(CellforgeError::OutOfRange {
                family: family.keyword().to_string(),
                n: 0,
                expected: format!("an explicit n >= {}", family.min_n()),
            }),
            (None, Some(m)) if m < family.min_n() => {
                Err(out_of_range(m, format!("n >= {}", family.min_n())))
            }
            (None, Some(m)) => Ok(Self { family, n: m }),
        }
    }

    /// The default catalog used by `list` and the acceptance battery.
    pub fn catalog() -> Vec<GraphSpec> {
        let mut v = Vec::new();
        let s = |family, n| GraphSpec { family, n };
        v.extend((4..=12).map(|n| s(Family::A, n)));
        v.extend((5..=12).map(|n| s(Family::D, n)));
        v.extend((5..=12).map(|n| s(Family::AStar, n)));
        v.extend((6..=12).map(|n| s(Family::DStar, n)));
        for f in [
            Family::E8,
            Family::E8Star,
            Family::E1,
            Family::E2,
            Family::E5,
            Family::E24,
        ] {
            v.push(s(f, f.fixed_n().expect("exceptional")));
        }
        v
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        match self.family {
            Family::A => write!(f, "A({n})"),
            Family::D => write!(f, "D({n})"),
            Family::AStar => write!(f, "A*({n})"),
            Family::DStar => write!(f, "D*({n})"),
            Family::E8 => f.write_str("E(8)"),
            Family::E8Star => f.write_str("E(8)*"),
            Family::E1 => f.write_str("E1(12)"),
            Family::E2 => f.write_str("E2(12)"),
            Family::E5 => f.write_str("E5(12)"),
            Family::E24 => f.write_str("E(24)"),
            Family::E4 => f.write_str("E4(12)"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = CellforgeError;

    /// Accepts `A:6`, `A(6)`, `Astar:7`, `A*:7`, `A*(7)`, `D:9`, `Dstar:8`,
    /// `E8`, `E(8)`, `E8star`, `E8*`, `E(8)*`, `E1:12`, `E2(12)`, `E5`,
    /// `E24`, `E(24)` and `E4:12`, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || CellforgeError::UnknownFamily(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = t.to_ascii_lowercase();
        let (head, n) = if let Some((h, n)) = lower.split_once(':') {
            (h.to_string(), Some(n.to_string()))
        } else if let Some(open) = lower.find('(') {
            let close = lower.rfind(')').ok_or_else(unknown)?;
            if close < open {
                return Err(unknown());
            }
            let mut h = lower[..open].to_string();
            h.push_str(&lower[close + 1..]);
            (h, Some(lower[open + 1..close].to_string()))
        } else {
            (lower.clone(), None)
        };
        let mut n: Option<u32> = match n {
            Some(n) => Some(n.parse().map_err(|_| unknown())?),
            None => None,
        };
        let family = match head.as_str() {
            "a" => Family::A,
            "d" => Family::D,
            "astar" | "a*" => Family::AStar,
            "dstar" | "d*" => Family::DStar,
            "e8" => Family::E8,
            "e8star" | "e8*" => Family::E8Star,
            "e1" | "e1_12" => Family::E1,
            "e2" | "e2_12" => Family::E2,
            "e5" | "e5_12" => Family::E5,
            "e24" => Family::E24,
            "e4" | "e4_12" => Family::E4,
            "e*" | "estar" if n == Some(8) => Family::E8Star,
            "e" => match n {
                Some(8) => Family::E8,
                Some(24) => Family::E24,
                _ => return Err(unknown()),
            },
            _ => return Err(unknown()),
        };
        if family.fixed_n().is_some() && n.is_none() {
            n = family.fixed_n();
        }
        GraphSpec::new(family, n)
    }
}

/// Builds the catalog graph for `spec`.
pub fn build_graph(spec: GraphSpec) -> Result<Graph> {
    let spec = GraphSpec::new(spec.family, Some(spec.n))?;
    let ctx = QContext::root_of_unity(spec.n)?;
    let q = |m: i64| ctx.qint(m);
    let name = spec.to_string();
    let g = match spec.family {
        Family::A => a_graph(spec, &name, &q)?,
        Family::D => d_orbifold(spec.n)?.1.graph,
        Family::AStar => astar_graph(spec, &name, &q)?,
        Family::DStar => dstar_graph(spec, &name, &q)?,
        Family::E8 => e8_graph(spec, &q)?,
        Family::E8Star => e8star_graph(spec, &q)?,
        Family::E2 => e2_graph(spec, &q)?,
        Family::E1 => e1_orbifold()?.1.graph,
        Family::E5 => table_graph(spec, E5_WEIGHTS, E5_CELLS, 10, &ctx)?,
        Family::E24 => table_graph(spec, E24_WEIGHTS, E24_CELLS, 1, &ctx)?,
        Family::E4 => return Err(CellforgeError::Unsupported(name)),
    };
    Ok(g)
}

/// A(n) together with its Z3 orbifold D(n).
pub fn d_orbifold(n: u32) -> Result<(Graph, Orbifold)> {
    let spec = GraphSpec::new(Family::D, Some(n))?;
    let a = build_graph(GraphSpec {
        family: Family::A,
        n,
    })?;
    let rot = a_rotation(&a)?;
    let opts = OrbifoldOptions {
        name: spec.to_string(),
        scale: 1.0,
        tags: d_tag_rules(n),
        orbit_label: OrbitLabel::LatticeMinimal,
        spec: Some(spec),
    };
    let orb = z3_orbifold(&a, &rot, &opts)?;
    Ok((a, orb))
}

/// E2(12) together with its Z3 orbifold E1(12).
pub fn e1_orbifold() -> Result<(Graph, Orbifold)> {
    let e2 = build_graph(GraphSpec {
        family: Family::E2,
        n: 12,
    })?;
    let rot = e2_rotation(&e2)?;
    let orb = z3_orbifold(&e2, &rot, &OrbifoldOptions::e1())?;
    Ok((e2, orb))
}

fn a_graph(spec: GraphSpec, name: &str, q: &dyn Fn(i64) -> f64) -> Result<Graph> {
    let n = spec.n as i64;
    let mut b = GraphBuilder::new(name, spec.n).spec(spec);
    let mut verts = Vec::new();
    for x in 0..=n - 3 {
        for y in 0..=n - 3 - x {
            let phi = q(x + 1) * q(y + 1) * q(x + y + 2) / q(2);
            verts.push(((x, y), b.vertex(format!("({x},{y})"), phi)));
        }
    }
    let find = |p: (i64, i64)| verts.iter().find(|(l, _)| *l == p).map(|(_, v)| *v);
    for &((x, y), v) in &verts {
        for t in [(x + 1, y), (x - 1, y + 1), (x, y - 1)] {
            if let Some(w) = find(t) {
                b.edge(v, w, None);
            }
        }
    }
    b.distinguished(find((0, 0)).expect("origin"));
    b.build()
}

fn astar_graph(spec: GraphSpec, name: &str, q: &dyn Fn(i64) -> f64) -> Result<Graph> {
    let n = spec.n as i64;
    let mut b = GraphBuilder::new(name, spec.n).spec(spec);
    let (count, first_loop) = if n % 2 == 1 {
        ((n - 1) / 2, 2)
    } else {
        (n / 2 - 1, 1)
    };
    let v: Vec<_> = (1..=count)
        .map(|i| {
            let phi = if n % 2 == 1 {
                q(2 * i - 1)
            } else {
                q(2 * i) / q(2)
            };
            b.vertex(i.to_string(), phi)
        })
        .collect();
    for i in 0..v.len().saturating_sub(1) {
        b.edge(v[i], v[i + 1], None);
        b.edge(v[i + 1], v[i], None);
    }
    for i in first_loop..=count {
        let vi = v[(i - 1) as usize];
        b.edge(vi, vi, None);
    }
    b.distinguished(v[0]);
    b.build()
}

fn dstar_graph(spec: GraphSpec, name: &str, q: &dyn Fn(i64) -> f64) -> Result<Graph> {
    let astar = astar_graph(
        GraphSpec {
            family: Family::AStar,
            n: spec.n,
        },
        "",
        q,
    )?;
    let mut b = GraphBuilder::new(name, spec.n).spec(spec);
    let colours = ["i", "j", "k"];
    let mut ids = Vec::new();
    for c in colours {
        let row: Vec<_> = astar
            .vertices()
            .iter()
            .map(|v| b.vertex(format!("{c}_{}", v.label), astar.phi(v.id)))
            .collect();
        ids.push(row);
    }
    for ci in 0..3 {
        for e in astar.edges() {
            b.edge(ids[ci][e.source.0], ids[(ci + 1) % 3][e.target.0], None);
        }
    }
    b.distinguished(ids[0][0]);
    b.build()
}

fn e8_graph(spec: GraphSpec, q: &dyn Fn(i64) -> f64) -> Result<Graph> {
    let mut b = GraphBuilder::new("E(8)", 8).spec(spec);
    let i: Vec<_> = (1..=6).map(|l| b.vertex(format!("i_{l}"), 1.0)).collect();
    let j: Vec<_> = (1..=6).map(|l| b.vertex(format!("j_{l}"), q(3))).collect();
    let at = |v: &Vec<_>, l: i64| v[(l - 1).rem_euclid(6) as usize];
    for l in 1..=6 {
        b.edge(at(&i, l), at(&j, l), None);
        b.edge(at(&j, l), at(&i, l + 1), None);
        b.edge(at(&j, l), at(&j, l - 1), None);
        b.edge(at(&j, l), at(&j, l + 2), None);
    }
    b.distinguished(i[0]);
    b.build()
}

fn e8star_graph(spec: GraphSpec, q: &dyn Fn(i64) -> f64) -> Result<Graph> {
    let mut b = GraphBuilder::new("E(8)*", 8).spec(spec);
    let v: Vec<_> = [1.0, q(3), q(3), 1.0]
        .into_iter()
        .enumerate()
        .map(|(k, phi)| b.vertex((k + 1).to_string(), phi))
        .collect();
    for (s, t) in [
        (1, 2),
        (2, 3),
        (3, 1),
        (2, 4),
        (4, 3),
        (3, 2),
        (2, 2),
        (3, 3),
    ] {
        b.edge(v[s - 1], v[t - 1], None);
    }
    b.distinguished(v[0]);
    b.build()
}

fn e2_graph(spec: GraphSpec, q: &dyn Fn(i64) -> f64) -> Result<Graph> {
    let mut b = GraphBuilder::new("E2(12)", 12).spec(spec);
    let i = b.vertex("i", 1.0);
    let j = b.vertex("j", q(3));
    let k = b.vertex("k", q(3));
    let (mut p, mut qv, mut r) = (Vec::new(), Vec::new(), Vec::new());
    for l in 1..=3 {
        p.push(b.vertex(format!("p_{l}"), q(2).powi(3) / q(4)));
        qv.push(b.vertex(format!("q_{l}"), q(2) * q(3) / q(4)));
        r.push(b.vertex(format!("r_{l}"), q(2) * q(3) / q(4)));
    }
    let at = |v: &Vec<_>, l: i64| v[(l - 1).rem_euclid(3) as usize];
    b.edge(i, j, None);
    b.edge(j, k, None);
    b.edge(k, i, None);
    for l in 1..=3 {
        b.edge(at(&p, l), j, None);
        b.edge(j, at(&r, l), None);
        b.edge(at(&r, l), at(&p, l), None);
        b.edge(at(&r, l + 1), at(&p, l), None);
        b.edge(k, at(&p, l), None);
        b.edge(at(&p, l), at(&qv, l), None);
        b.edge(at(&p, l), at(&qv, l - 1), None);
        b.edge(at(&qv, l), k, None);
        b.edge(at(&qv, l), at(&r, l + 1), None);
    }
    b.distinguished(i);
    b.build()
}

/// Builds a numbered graph whose edges are exactly those of the listed
/// triangles.
fn table_graph(
    spec: GraphSpec,
    weights: &[(&[u32], &str)],
    cells: &[((u32, u32, u32), &str)],
    distinguished: u32,
    ctx: &QContext,
) -> Result<Graph> {
    let count = weights.iter().map(|(vs, _)| vs.len()).sum::<usize>();
    let mut phi = vec![0.0; count];
    for (vs, e) in weights {
        let val = expr::eval(e, ctx, &[])?.re;
        for &v in *vs {
            phi[(v - 1) as usize] = val;
        }
    }
    let mut b = GraphBuilder::new(spec.to_string(), spec.n).spec(spec);
    let ids: Vec<_> = phi
        .iter()
        .enumerate()
        .map(|(k, &p)| b.vertex((k + 1).to_string(), p))
        .collect();
    let mut edges = BTreeSet::new();
    for &((a, bb, c), _) in cells {
        edges.extend([(a, bb), (bb, c), (c, a)]);
    }
    for (s, t) in edges {
        b.edge(ids[(s - 1) as usize], ids[(t - 1) as usize], None);
    }
    b.distinguished(ids[(distinguished - 1) as usize]);
    b.build()
}

pub(crate) const E5_WEIGHTS: &[(&[u32], &str)] = &[
    (&[1], "[3][6]/[2]"),
    (&[2, 3, 8, 14], "[3][4]/[2]"),
    (&[4, 5, 9, 15], "[3]"),
    (&[6, 12], "[2]^2"),
    (&[7, 13], "[2][4]"),
    (&[10, 16], "1"),
    (&[11, 17], "[4]/[2]"),
];

/// Cells of E5(12) by vertex triple.
pub(crate) const E5_CELLS: &[((u32, u32, u32), &str)] = &[
    ((1, 6, 12), "sqrt([2][3])"),
    ((4, 10, 15), "sqrt([2][3])"),
    ((5, 9, 16), "sqrt([2][3])"),
    ((1, 6, 13), "[2]sqrt([3][4])"),
    ((1, 7, 12), "[2]sqrt([3][4])"),
    ((1, 7, 13), "[4]sqrt([3])/sqrt([2])"),
    ((3, 7, 14), "[4]sqrt([3])/sqrt([2])"),
    ((3, 8, 13), "[4]sqrt([3])/sqrt([2])"),
    ((3, 8, 17), "[4]sqrt([3])/sqrt([2])"),
    ((3, 11, 14), "[4]sqrt([3])/sqrt([2])"),
    ((2, 7, 15), "[3]sqrt([4])"),
    ((2, 9, 13), "[3]sqrt([4])"),
    ((4, 7, 14), "[3]sqrt([4])"),
    ((5, 8, 13), "[3]sqrt([4])"),
    ((1, 8, 14), "[4]sqrt([3][6])/[2]"),
    ((1, 7, 14), "sqrt([3][4][6]/[2])"),
    ((1, 8, 13), "sqrt([3][4][6]/[2])"),
    ((2, 6, 12), "[4]sqrt([2])"),
    ((2, 6, 13), "[2]sqrt([4])"),
    ((2, 7, 12), "[2]sqrt([4])"),
    ((2, 7, 13), "-[4]sqrt([2])"),
    ((3, 7, 13), "-[4]sqrt([6])"),
    ((3, 8, 14), "[4]sqrt([6])/[2]"),
    ((4, 7, 15), "sqrt([3][4])"),
    ((5, 9, 13), "sqrt([3][4])"),
];

pub(crate) const E24_WEIGHTS: &[(&[u32], &str)] = &[
    (&[1, 8], "1"),
    (&[2, 7], "[2][4]"),
    (&[3, 6], "[4][5]/[2]"),
    (&[4, 5], "[4][7]/[2]"),
    (&[9, 16, 17, 24], "[3]"),
    (&[10, 15, 18, 23], "[3][4]/[2]"),
    (&[11, 14, 19, 22], "[3][5]"),
    (&[12, 13, 20, 21], "[9]"),
];

pub(crate) const E24_CELLS: &[((u32, u32, u32), &str)] = &[
    ((1, 9, 17), "sqrt([2][3])"),
    ((8, 16, 24), "sqrt([2][3])"),
    ((2, 9, 17), "sqrt([3][4])"),
    ((7, 16, 24), "sqrt([3][4])"),
    ((2, 9, 18), "[3]sqrt([4])"),
    ((2, 10, 17), "[3]sqrt([4])"),
    ((7, 15, 24), "[3]sqrt([4])"),
    ((7, 16, 23), "[3]sqrt([4])"),
    ((2, 10, 19), "sqrt([3][4][5])"),
    ((2, 11, 18), "sqrt([3][4][5])"),
    ((7, 14, 23), "sqrt([3][4][5])"),
    ((7, 15, 22), "sqrt([3][4][5])"),
    ((2, 11, 19), "[3]sqrt([4][5])"),
    ((7, 14, 22), "[3]sqrt([4][5])"),
    ((3, 10, 19), "[4]sqrt([3][5])/sqrt([2])"),
    ((3, 14, 23), "[4]sqrt([3][5])/sqrt([2])"),
    ((6, 11, 18), "[4]sqrt([3][5])/sqrt([2])"),
    ((6, 15, 22), "[4]sqrt([3][5])/sqrt([2])"),
    ((4, 11, 19), "sqrt([4][5][7])"),
    ((4, 14, 22), "sqrt([4][5][7])"),
    ((5, 11, 19), "sqrt([4][5][7])"),
    ((5, 14, 22), "sqrt([4][5][7])"),
    ((4, 12, 19), "[3]sqrt([5][9])/sqrt([2])"),
    ((4, 14, 21), "[3]sqrt([5][9])/sqrt([2])"),
    ((5, 11, 20), "[3]sqrt([5][9])/sqrt([2])"),
    ((5, 13, 22), "[3]sqrt([5][9])/sqrt([2])"),
    ((3, 12, 19), "sqrt([3][5][9])/sqrt([2])"),
    ((3, 14, 21), "sqrt([3][5][9])/sqrt([2])"),
    ((6, 11, 20), "sqrt([3][5][9])/sqrt([2])"),
    ((6, 13, 22), "sqrt([3][5][9])/sqrt([2])"),
    ((3, 14, 19), "[3][5]/sqrt([2])"),
    ((6, 11, 22), "[3][5]/sqrt([2])"),
    ((4, 14, 19), "[5]sqrt([7])/sqrt([2])"),
    ((5, 11, 22), "[5]sqrt([7])/sqrt([2])"),
    ((5, 14, 19), "sqrt([5][7][10])"),
    ((4, 11, 22), "-sqrt([5][7][10])"),
    ((3, 12, 21), "-[5]sqrt([9])/sqrt([2])"),
    ((6, 13, 20), "-[5]sqrt([9])/sqrt([2])"),
    ((4, 12, 21), "sqrt([7][9])/sqrt([2])"),
    ((5, 13, 20), "sqrt([7][9])/sqrt([2])"),
];
