//! `cellforge`: build the catalog graphs, construct and verify their cell
//! systems, print Hecke and connection data, run the solver and the
//! acceptance battery, and move graphs and cells through JSON documents.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context as _};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cellforge::error::CellforgeError;
use cellforge::hecke::{hecke_operator_by_label, hecke_operators};
use cellforge::io::format_hex;
use cellforge::qnum::precision_from_env;
use cellforge::suite::{self, CriterionReport};
use cellforge::{
    build_graph, cells_from_json, cells_to_json, check_unitarity, check_yang_baxter, connection,
    construct_cells_in, graph_from_json, graph_to_json, hecke_to_csv, solve_cells,
    solve_report_to_json, verify_type_i, verify_type_ii, CellSystem, Graph, GraphSpec,
    HeckeOperator, QContext, SolveOptions, Variant,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cellforge",
    version,
    about = "Ocneanu cell systems on SU(3) ADE graphs"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
struct Target {
    /// Graph selector, e.g. `A:6`, `Astar:8`, `D(9)`, `E8star`, `E1:12`.
    #[arg(long, short)]
    graph: String,
    /// Solution variant: plus, minus, conj or default.
    #[arg(long, short, default_value = "default")]
    variant: String,
}

#[derive(Debug, clap::Args)]
struct Output {
    #[arg(long, short, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// List the catalog.
    List {
        #[command(flatten)]
        output: Output,
    },
    /// Print vertices, edges and Perron-Frobenius weights.
    Show {
        #[arg(long, short)]
        graph: String,
        #[command(flatten)]
        output: Output,
    },
    /// Print the constructed cell table.
    Cells {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
    /// Print the largest type I and type II residuals; exit 1 above tolerance.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = suite::AXIOM_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Print every Hecke operator U^(x,y), or the one selected by --x and --y.
    Hecke {
        #[command(flatten)]
        target: Target,
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Print unitarity and Yang-Baxter residuals; exit 1 above tolerance.
    Connection {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = suite::YBE_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Solve the cell equations from random starts; exit 1 if no restart converges.
    Solve {
        #[arg(long, short)]
        graph: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = suite::SOLVER_RESTARTS)]
        restarts: usize,
        /// Objective a restart must reach to count as solved.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the acceptance battery; exit 1 if any criterion fails.
    Suite {
        /// Run only these criteria (1 to 10).
        #[arg(long, short, value_parser = clap::value_parser!(u8).range(1..=10))]
        criterion: Vec<u8>,
        #[command(flatten)]
        output: Output,
    },
    /// Write a graph document, or with --cells a cell document.
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        cells: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Read a graph or cell document, check it and write it back out.
    Import {
        path: PathBuf,
        /// Graph document the cells live on, for graphs outside the catalog.
        #[arg(long)]
        graph_file: Option<PathBuf>,
        #[arg(long, default_value_t = suite::AXIOM_TOL)]
        tol: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

/// An error together with the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<CellforgeError>() {
            Some(CellforgeError::Unsupported(_)) => EXIT_UNSUPPORTED,
            Some(
                CellforgeError::UnknownFamily(_)
                | CellforgeError::OutOfRange { .. }
                | CellforgeError::IllegalVariant { .. }
                | CellforgeError::UnknownVertex(_)
                | CellforgeError::NoPath { .. }
                | CellforgeError::InvalidContext(_),
            ) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Self { code, error }
    }
}

impl From<CellforgeError> for Failure {
    fn from(e: CellforgeError) -> Self {
        anyhow::Error::from(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            eprintln!("cellforge: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(verb: Verb) -> Outcome {
    match verb {
        Verb::List { output } => list(&output),
        Verb::Show { graph, output } => show(&graph, &output),
        Verb::Cells { target, output } => cells(&target, &output),
        Verb::Verify {
            target,
            tol,
            output,
        } => verify(&target, tol, &output),
        Verb::Hecke {
            target,
            x,
            y,
            output,
        } => hecke(&target, x.zip(y), &output),
        Verb::Connection {
            target,
            tol,
            output,
        } => connection_verb(&target, tol, &output),
        Verb::Solve {
            graph,
            seed,
            restarts,
            tol,
            output,
        } => solve(&graph, seed, restarts, tol, &output),
        Verb::Suite { criterion, output } => suite_verb(criterion, &output),
        Verb::Export { target, cells, out } => export(&target, cells, out),
        Verb::Import {
            path,
            graph_file,
            tol,
            out,
        } => import(&path, graph_file, tol, out),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::from),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json_text(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("a JSON value always serializes") + "\n"
}

fn hex(x: f64) -> Result<String, Failure> {
    Ok(format_hex(x)?)
}

fn unsupported_format(verb: &str, f: Format) -> Failure {
    Failure {
        code: EXIT_USAGE,
        error: anyhow!("`{verb}` has no {f:?} output").context("usage"),
    }
}

fn spec_of(selector: &str) -> Result<GraphSpec, Failure> {
    Ok(selector.parse::<GraphSpec>()?)
}

fn context_for(spec: GraphSpec) -> Result<QContext, Failure> {
    let ctx = QContext::root_of_unity(spec.n)?;
    Ok(match precision_from_env()? {
        Some(bits) => ctx.with_precision(bits)?,
        None => ctx,
    })
}

fn build(target: &Target) -> Result<CellSystem, Failure> {
    let spec = spec_of(&target.graph)?;
    let variant: Variant = target.variant.parse()?;
    let variant = variant.resolve(spec)?;
    Ok(construct_cells_in(spec, variant, &context_for(spec)?)?)
}

fn list(output: &Output) -> Outcome {
    let mut rows = Vec::new();
    for spec in GraphSpec::catalog() {
        let g = build_graph(spec)?;
        let variants: Vec<&str> = Variant::admissible(spec)
            .iter()
            .map(|v| v.as_str())
            .collect();
        rows.push((
            spec.to_string(),
            g.vertex_count(),
            g.edge_count(),
            g.triangles().len(),
            variants,
        ));
    }
    let text = match output.format {
        Format::Table => {
            let mut s = format!(
                "{:<10} {:>4} {:>5} {:>9}  variants\n",
                "graph", "|V|", "|E|", "triangles"
            );
            for (name, v, e, t, vars) in &rows {
                s.push_str(&format!(
                    "{name:<10} {v:>4} {e:>5} {t:>9}  {}\n",
                    vars.join(",")
                ));
            }
            s.push_str("E4(12)     cells not determined; unsupported\n");
            s
        }
        Format::Json => json_text(&json!(rows
            .iter()
            .map(|(name, v, e, t, vars)| json!({
                "name": name, "vertices": v, "edges": e, "triangles": t, "variants": vars
            }))
            .collect::<Vec<_>>())),
        Format::Csv => {
            let mut s = String::from("graph,vertices,edges,triangles,variants\n");
            for (name, v, e, t, vars) in &rows {
                s.push_str(&format!("{name},{v},{e},{t},{}\n", vars.join(" ")));
            }
            s
        }
    };
    emit(&output.out, &text)?;
    Ok(true)
}

fn show(selector: &str, output: &Output) -> Outcome {
    let g = build_graph(spec_of(selector)?)?;
    let text = match output.format {
        Format::Json => graph_to_json(&g)?,
        Format::Table => {
            let mut s = format!("{} (n = {})\nvertices:\n", g.name(), g.coxeter_n());
            for v in g.vertices() {
                s.push_str(&format!("  {:<8} phi = {}\n", v.label, g.phi(v.id)));
            }
            s.push_str("edges:\n");
            for e in g.edges() {
                s.push_str(&format!("  {}\n", g.edge_name(e.id)));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("vertex,phi\n");
            for v in g.vertices() {
                s.push_str(&format!("{},{}\n", csv_field(&v.label), g.phi(v.id)));
            }
            s
        }
    };
    emit(&output.out, &text)?;
    Ok(true)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `W_222` when every vertex label is one character and no edge is tagged,
/// otherwise the full triangle name.
fn short_name(cs: &CellSystem, t: usize) -> String {
    let g = cs.graph();
    let tri = &g.triangles()[t];
    let simple = tri.edges.iter().all(|&e| {
        let ed = g.edge(e);
        ed.tag.is_none() && g.label(ed.source).chars().count() == 1
    });
    if simple {
        let labels: String = tri
            .edges
            .iter()
            .map(|&e| g.label(g.edge(e).source))
            .collect();
        format!("W_{labels}")
    } else {
        cs.triangle_name(t)
    }
}

fn complex_text(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re:+}")
    } else {
        format!("{re:+} {im:+}i")
    }
}

fn cells(target: &Target, output: &Output) -> Outcome {
    let cs = build(target)?;
    let text = match output.format {
        Format::Json => cells_to_json(&cs)?,
        Format::Table => {
            let mut s = String::new();
            for (t, w) in cs.values().iter().enumerate() {
                s.push_str(&format!(
                    "{} = {}\n",
                    short_name(&cs, t),
                    complex_text(w.re, w.im)
                ));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("triangle,re,im\n");
            for (t, w) in cs.values().iter().enumerate() {
                s.push_str(&format!(
                    "{},{},{}\n",
                    csv_field(&cs.triangle_name(t)),
                    w.re,
                    w.im
                ));
            }
            s
        }
    };
    emit(&output.out, &text)?;
    Ok(true)
}

fn verify_system(cs: &CellSystem, tol: f64, format: Format) -> Result<(String, bool), Failure> {
    let t1 = verify_type_i(cs);
    let t2 = verify_type_ii(cs);
    let ok = t1.max <= tol && t2.max <= tol;
    let text = match format {
        Format::Table => format!("type I max {:.1e}, type II max {:.1e}\n", t1.max, t2.max),
        Format::Json => json_text(&json!({
            "graph": cs.graph().name(),
            "variant": cs.variant().as_str(),
            "type_i": {"max": hex(t1.max)?, "frames": t1.frames, "worst": t1.worst},
            "type_ii": {"max": hex(t2.max)?, "frames": t2.frames, "worst": t2.worst},
            "tol": hex(tol)?,
            "passed": ok,
        })),
        Format::Csv => format!(
            "graph,variant,type_i_max,type_ii_max,passed\n{},{},{},{},{}\n",
            csv_field(cs.graph().name()),
            cs.variant(),
            t1.max,
            t2.max,
            ok
        ),
    };
    Ok((text, ok))
}

fn verify(target: &Target, tol: f64, output: &Output) -> Outcome {
    let cs = build(target)?;
    let (text, ok) = verify_system(&cs, tol, output.format)?;
    emit(&output.out, &text)?;
    Ok(ok)
}

fn matrix_table(g: &Graph, u: &HeckeOperator) -> String {
    let labels = u.row_labels(g);
    let mut s = format!(
        "U^({},{})  rows: {}\n",
        g.label(u.x),
        g.label(u.y),
        labels.join(" ")
    );
    for r in 0..u.dim() {
        let row: Vec<String> = (0..u.dim())
            .map(|c| {
                let z = u.matrix[(r, c)];
                format!("{:>24}", complex_text(z.re, z.im))
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn hecke(target: &Target, select: Option<(String, String)>, output: &Output) -> Outcome {
    let cs = build(target)?;
    let g = cs.graph();
    let ops = match select {
        Some((x, y)) => vec![hecke_operator_by_label(&cs, &x, &y)?],
        None => hecke_operators(&cs),
    };
    let text = match output.format {
        Format::Csv => hecke_to_csv(g, &ops),
        Format::Table => ops
            .iter()
            .map(|u| matrix_table(g, u))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => {
            let mut docs = Vec::new();
            for u in &ops {
                let grid = |imag: bool| -> Result<Vec<Vec<String>>, Failure> {
                    (0..u.dim())
                        .map(|r| {
                            (0..u.dim())
                                .map(|c| {
                                    let z = u.matrix[(r, c)];
                                    hex(if imag { z.im } else { z.re })
                                })
                                .collect()
                        })
                        .collect()
                };
                docs.push(json!({
                    "x": g.label(u.x),
                    "y": g.label(u.y),
                    "paths": u.row_labels(g),
                    "re": grid(false)?,
                    "im": grid(true)?,
                }));
            }
            json_text(&serde_json::Value::Array(docs))
        }
    };
    emit(&output.out, &text)?;
    Ok(true)
}

fn connection_verb(target: &Target, tol: f64, output: &Output) -> Outcome {
    let cs = build(target)?;
    let conn = connection(&cs);
    let unitarity = check_unitarity(&conn);
    let ybe = check_yang_baxter(&conn);
    let ok = unitarity <= tol && ybe.residual <= tol;
    let text = match output.format {
        Format::Table => format!(
            "unitarity {:.1e}, Yang-Baxter {:.1e} ({} blocks, largest {})\n",
            unitarity, ybe.residual, ybe.blocks, ybe.max_dim
        ),
        Format::Json => json_text(&json!({
            "graph": cs.graph().name(),
            "variant": cs.variant().as_str(),
            "unitarity": hex(unitarity)?,
            "yang_baxter": hex(ybe.residual)?,
            "blocks": ybe.blocks,
            "max_block": ybe.max_dim,
            "tol": hex(tol)?,
            "passed": ok,
        })),
        Format::Csv => format!(
            "graph,variant,unitarity,yang_baxter,passed\n{},{},{},{},{}\n",
            csv_field(cs.graph().name()),
            cs.variant(),
            unitarity,
            ybe.residual,
            ok
        ),
    };
    emit(&output.out, &text)?;
    Ok(ok)
}

fn solve(selector: &str, seed: u64, restarts: usize, tol: Option<f64>, output: &Output) -> Outcome {
    let g = build_graph(spec_of(selector)?)?;
    let mut opts = SolveOptions {
        seed,
        restarts,
        ..SolveOptions::default()
    };
    if let Some(t) = tol {
        opts.residual_tol = t.sqrt();
    }
    let outcome = solve_cells(&g, &opts)?;
    let text = match output.format {
        Format::Json => solve_report_to_json(&outcome, true)?,
        Format::Table => {
            let mut s = format!(
                "status {:?}, objective {:.3e}, {} iterations, {} restarts\n",
                outcome.status,
                outcome.objective,
                outcome.iterations,
                outcome.restart_objectives.len()
            );
            if let Some(fp) = &outcome.fingerprint {
                for (k, v) in &fp.values {
                    s.push_str(&format!("  {k} = {v}\n"));
                }
            }
            s
        }
        Format::Csv => return Err(unsupported_format("solve", Format::Csv)),
    };
    emit(&output.out, &text)?;
    Ok(outcome.solved())
}

fn suite_verb(criteria: Vec<u8>, output: &Output) -> Outcome {
    let ids: Vec<u8> = if criteria.is_empty() {
        (1..=10).collect()
    } else {
        criteria
    };
    let reports = ids
        .into_iter()
        .map(suite::run_criterion)
        .collect::<Result<Vec<CriterionReport>, _>>()?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    let text = match output.format {
        Format::Table => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&format!("{r}\n"));
            }
            s.push_str(&format!("{passed}/{} criteria passed\n", reports.len()));
            s
        }
        Format::Json => json_text(&serde_json::to_value(&reports).map_err(CellforgeError::from)?),
        Format::Csv => {
            let mut s = String::from("criterion,title,passed,checks,failed,seconds\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.id,
                    csv_field(r.title),
                    r.passed(),
                    r.checks.len(),
                    r.failures().count(),
                    r.elapsed
                ));
            }
            s
        }
    };
    emit(&output.out, &text)?;
    Ok(passed == reports.len())
}

fn export(target: &Target, with_cells: bool, out: Option<PathBuf>) -> Outcome {
    let text = if with_cells {
        cells_to_json(&build(target)?)?
    } else {
        graph_to_json(&build_graph(spec_of(&target.graph)?)?)?
    };
    emit(&out, &text)?;
    Ok(true)
}

fn import(path: &PathBuf, graph_file: Option<PathBuf>, tol: f64, out: Option<PathBuf>) -> Outcome {
    let read =
        |p: &PathBuf| fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(CellforgeError::from)
        .with_context(|| format!("parsing {}", path.display()))?;
    if value.get("cells").is_some() {
        let graph = match &graph_file {
            Some(p) => Some(Arc::new(graph_from_json(&read(p)?)?)),
            None => None,
        };
        let cs = cells_from_json(&text, graph)?;
        let (report, ok) = verify_system(&cs, tol, Format::Table)?;
        eprint!("{}: {report}", cs.graph().name());
        emit(&out, &cells_to_json(&cs)?)?;
        Ok(ok)
    } else {
        let g = graph_from_json(&text)?;
        emit(&out, &graph_to_json(&g)?)?;
        Ok(true)
    }
}
