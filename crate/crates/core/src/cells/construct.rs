//! Closed-form cell systems for every catalog graph.

use std::sync::Arc;

use num_complex::Complex64;

use super::{lift_cells, CellSystem, Variant};
use crate::error::{CellforgeError, Result};
use crate::expr;
use crate::graphs::{
    build_graph, d_orbifold, e1_orbifold, Family, Graph, GraphSpec, E24_CELLS, E5_CELLS,
};
use crate::qnum::QContext;

/// Constructs the cells of a catalog entry at double precision.
pub fn construct_cells(spec: GraphSpec, variant: Variant) -> Result<CellSystem> {
    let ctx = QContext::root_of_unity(spec.n)?;
    construct_cells_in(spec, variant, &ctx)
}

/// Constructs the cells with quantum integers evaluated in `ctx`, whose
/// Coxeter number must match the graph.
pub fn construct_cells_in(spec: GraphSpec, variant: Variant, ctx: &QContext) -> Result<CellSystem> {
    let spec = GraphSpec::new(spec.family, Some(spec.n))?;
    if spec.family == Family::E4 {
        return Err(CellforgeError::Unsupported(spec.to_string()));
    }
    if ctx.coxeter_n() != Some(spec.n) {
        return Err(CellforgeError::InvalidContext(format!(
            "context does not have n = {}",
            spec.n
        )));
    }
    let variant = variant.resolve(spec)?;
    let sign = if variant == Variant::Minus { -1.0 } else { 1.0 };
    match spec.family {
        Family::D => {
            let (a, orb) = d_orbifold(spec.n)?;
            let parent = a_cells(Arc::new(a), ctx)?;
            let cs = lift_cells(&orb, &parent)?;
            Ok(if variant == Variant::Conjugate {
                cs.conj()
            } else {
                cs
            })
        }
        Family::E1 => {
            let (e2, orb) = e1_orbifold()?;
            let parent = e2_cells(Arc::new(e2), -sign, ctx)?;
            let cs = lift_cells(&orb, &parent)?;
            CellSystem::new(cs.graph_arc(), cs.values().to_vec(), variant)
        }
        _ => {
            let g = Arc::new(build_graph(spec)?);
            let cs = match spec.family {
                Family::A => a_cells(g, ctx)?,
                Family::AStar => astar_cells(g, sign, ctx)?,
                Family::DStar => dstar_cells(g, sign, ctx)?,
                Family::E8 => e8_cells(g, ctx)?,
                Family::E8Star => e8star_cells(g, ctx)?,
                Family::E2 => e2_cells(g, sign, ctx)?,
                Family::E5 => table_cells(g, E5_CELLS, ctx)?,
                Family::E24 => table_cells(g, E24_CELLS, ctx)?,
                Family::D | Family::E1 | Family::E4 => unreachable!("handled above"),
            };
            CellSystem::new(cs.graph_arc(), cs.values().to_vec(), variant)
        }
    }
}

/// Collects values by vertex path and freezes them into a [`CellSystem`].
struct Filler {
    graph: Arc<Graph>,
    values: Vec<Option<Complex64>>,
}

impl Filler {
    fn new(graph: Arc<Graph>) -> Self {
        let n = graph.triangles().len();
        Self {
            graph,
            values: vec![None; n],
        }
    }

    /// Sets every triangle through `a -> b -> c -> a`.
    fn set(&mut self, a: &str, b: &str, c: &str, w: f64) -> Result<()> {
        self.set_complex(a, b, c, Complex64::new(w, 0.0))
    }

    fn set_complex(&mut self, a: &str, b: &str, c: &str, w: Complex64) -> Result<()> {
        let g = &self.graph;
        let ids = g.triangles_through(
            g.require_vertex(a)?,
            g.require_vertex(b)?,
            g.require_vertex(c)?,
        );
        if ids.is_empty() {
            return Err(CellforgeError::Document(format!(
                "{}: no triangle through {a}, {b}, {c}",
                g.name()
            )));
        }
        for t in ids {
            self.values[t] = Some(w);
        }
        Ok(())
    }

    fn finish(self) -> Result<CellSystem> {
        if let Some(t) = self.values.iter().position(Option::is_none) {
            let g = &self.graph;
            let vs = g
                .triangle_vertices(&g.triangles()[t])
                .map(|v| g.label(v).to_string());
            return Err(CellforgeError::Document(format!(
                "{}: triangle through {} has no cell",
                g.name(),
                vs.join(", ")
            )));
        }
        let values = self
            .values
            .into_iter()
            .map(|v| v.expect("checked"))
            .collect();
        CellSystem::new(self.graph, values, Variant::Default)
    }
}

fn a_cells(g: Arc<Graph>, ctx: &QContext) -> Result<CellSystem> {
    let q = |m: i64| ctx.qint(m);
    let n = g.coxeter_n() as i64;
    let mut f = Filler::new(Arc::clone(&g));
    let lab = |a: i64, b: i64| format!("({a},{b})");
    let exists = |a: i64, b: i64| a >= 0 && b >= 0 && a + b <= n - 3;
    for k in 0..=n - 3 {
        for m in 0..=n - 3 - k {
            let base = q(k + 1) * q(k + 2) * q(m + 1) * q(m + 2);
            if exists(k + 1, m) && exists(k, m + 1) {
                let w = (base * q(k + m + 2) * q(k + m + 3)).sqrt() / q(2);
                f.set(&lab(k, m), &lab(k + 1, m), &lab(k, m + 1), w)?;
            }
            if exists(k + 1, m + 1) {
                let w = (base * q(k + m + 3) * q(k + m + 4)).sqrt() / q(2);
                f.set(&lab(k + 1, m), &lab(k, m + 1), &lab(k + 1, m + 1), w)?;
            }
        }
    }
    f.finish()
}

fn astar_cells(g: Arc<Graph>, s: f64, ctx: &QContext) -> Result<CellSystem> {
    let q = |m: i64| ctx.qint(m);
    let n = g.coxeter_n() as i64;
    let mut f = Filler::new(Arc::clone(&g));
    let l = |i: i64| i.to_string();
    let sign = |k: i64| if k % 2 == 0 { 1.0 } else { -1.0 };
    if n % 2 == 1 {
        let top = (n - 1) / 2;
        for i in 2..=top {
            let w = (q(i) * q(2 * i - 3) * q(2 * i - 1) / q(i - 1)).sqrt();
            f.set(&l(i - 1), &l(i), &l(i), w)?;
            let w = sign(i + 1) * q(2 * i - 1) / (q(i - 1) * q(i)).sqrt();
            f.set(&l(i), &l(i), &l(i), w)?;
        }
        for i in 2..top {
            let w = (q(i - 1) * q(2 * i - 1) * q(2 * i + 1) / q(i)).sqrt();
            f.set(&l(i), &l(i), &l(i + 1), w)?;
        }
    } else {
        let top = n / 2 - 1;
        for i in 1..top {
            let pre = (q(2 * i) * q(2 * i + 2)).sqrt() / (q(2) * q(2 * i + 1).sqrt());
            f.set(&l(i), &l(i), &l(i + 1), pre * (q(2 * i) - s).sqrt())?;
            f.set(&l(i), &l(i + 1), &l(i + 1), pre * (q(2 * i + 2) + s).sqrt())?;
        }
        for i in 1..=top {
            let pre = sign(i + 1) * q(2 * i).sqrt() / (q(2) * (q(2 * i - 1) * q(2 * i + 1)).sqrt());
            let w = if n % 4 == 0 {
                let h = n / 4;
                if i < h {
                    pre * (q(2) * q(2 * i) + s * q(4 * i)).sqrt()
                } else if i == h {
                    sign(h + 1) * q(2 * h) / (q(2) * q(2 * h - 1) * q(2 * h + 1)).sqrt()
                } else {
                    pre * (q(2) * q(2 * i) - s * q(8 * h - 4 * i)).sqrt()
                }
            } else {
                let h = (n - 2) / 4;
                if i <= h {
                    pre * (q(2) * q(2 * i) + s * q(4 * i)).sqrt()
                } else {
                    pre * (q(2) * q(2 * i) - s * q(8 * h + 4 - 4 * i)).sqrt()
                }
            };
            f.set(&l(i), &l(i), &l(i), w)?;
        }
    }
    f.finish()
}

fn dstar_cells(g: Arc<Graph>, s: f64, ctx: &QContext) -> Result<CellSystem> {
    let spec = GraphSpec {
        family: Family::AStar,
        n: g.coxeter_n(),
    };
    let astar = astar_cells(Arc::new(build_graph(spec)?), s, ctx)?;
    let ag = astar.graph();
    let mut f = Filler::new(Arc::clone(&g));
    for (t, tri) in ag.triangles().iter().enumerate() {
        let [p, q, r] = ag.triangle_vertices(tri).map(|v| ag.label(v).to_string());
        let w = astar.value(t);
        for [x, y, z] in [[&p, &q, &r], [&q, &r, &p], [&r, &p, &q]] {
            f.set_complex(&format!("i_{x}"), &format!("j_{y}"), &format!("k_{z}"), w)?;
        }
    }
    f.finish()
}

fn e8_cells(g: Arc<Graph>, ctx: &QContext) -> Result<CellSystem> {
    let q = |m: i64| ctx.qint(m);
    let mut f = Filler::new(Arc::clone(&g));
    let i = |l: i64| format!("i_{}", (l - 1).rem_euclid(6) + 1);
    let j = |l: i64| format!("j_{}", (l - 1).rem_euclid(6) + 1);
    for l in 1..=6 {
        f.set(&i(l), &j(l), &j(l - 1), (q(2) * q(3)).sqrt())?;
        f.set(
            &j(l),
            &j(l - 1),
            &j(l - 2),
            q(2) * q(3).sqrt() / q(4).sqrt(),
        )?;
    }
    f.set(&j(1), &j(3), &j(5), q(2) * q(3) / q(4).sqrt())?;
    f.set(&j(2), &j(4), &j(6), -q(2) * q(3) / q(4).sqrt())?;
    f.finish()
}

fn e8star_cells(g: Arc<Graph>, ctx: &QContext) -> Result<CellSystem> {
    let q = |m: i64| ctx.qint(m);
    let mut f = Filler::new(Arc::clone(&g));
    f.set("1", "2", "3", (q(2) * q(3)).sqrt())?;
    f.set("2", "4", "3", (q(2) * q(3)).sqrt())?;
    f.set("2", "2", "3", q(3) / q(2).sqrt())?;
    f.set("2", "3", "3", q(3) / q(2).sqrt())?;
    f.set("2", "2", "2", (q(3).powi(3) / q(2)).sqrt())?;
    f.set("3", "3", "3", -(q(3).powi(3) / q(2)).sqrt())?;
    f.finish()
}

fn e2_cells(g: Arc<Graph>, s: f64, ctx: &QContext) -> Result<CellSystem> {
    let q = |m: i64| ctx.qint(m);
    let mut f = Filler::new(Arc::clone(&g));
    let at = |x: &str, l: i64| format!("{x}_{}", (l - 1).rem_euclid(3) + 1);
    let x = (q(2) * q(4)).sqrt();
    let c = q(2).powi(3).sqrt() / q(4);
    f.set("i", "j", "k", (q(2) * q(3)).sqrt())?;
    for l in 1..=3 {
        let (p, ql, qm, rl, rn) = (
            at("p", l),
            at("q", l),
            at("q", l - 1),
            at("r", l),
            at("r", l + 1),
        );
        f.set(&p, "j", "k", q(2) * q(3).sqrt() / q(4).sqrt())?;
        f.set(&p, &qm, &rl, c * (q(2) * q(2) + s * x).sqrt())?;
        f.set(&p, &ql, &rn, -c * (q(2) * q(2) - s * x).sqrt())?;
        f.set(&p, &ql, "k", c * (q(2) * q(4) + s * x).sqrt())?;
        f.set(&p, "j", &rn, c * (q(2) * q(4) + s * x).sqrt())?;
        f.set(&p, &qm, "k", c * (q(2) * q(4) - s * x).sqrt())?;
        f.set(&p, "j", &rl, c * (q(2) * q(4) - s * x).sqrt())?;
    }
    f.finish()
}

fn table_cells(
    g: Arc<Graph>,
    table: &[((u32, u32, u32), &str)],
    ctx: &QContext,
) -> Result<CellSystem> {
    let mut f = Filler::new(Arc::clone(&g));
    for &((a, b, c), e) in table {
        let w = expr::eval(e, ctx, &[])?;
        f.set_complex(&a.to_string(), &b.to_string(), &c.to_string(), w)?;
    }
    f.finish()
}
