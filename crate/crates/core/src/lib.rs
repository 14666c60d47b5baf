//! Ocneanu cell systems on the SU(3) ADE graphs.
//!
//! The crate builds the graphs of the catalog, constructs their cell
//! systems, verifies the type I and type II frame equations, derives Hecke
//! operators and connections, checks unitarity and the Yang-Baxter
//! equation, and searches for cell systems numerically.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cells;
pub mod error;
pub mod expr;
pub mod graphs;
pub mod hecke;
pub mod io;
pub mod qnum;
pub mod solver;
pub mod suite;

pub use cells::{
    construct_cells, construct_cells_in, equivalent, fingerprint, gauge_transform,
    permute_vertices, random_gauge, verify_type_i, verify_type_ii, CellSystem, Equivalence,
    Fingerprint, FrameReport, GaugeFamily, Variant,
};
pub use error::{CellforgeError, Result};
pub use graphs::{
    build_graph, pf_data, triangles, type_i_frames, type_ii_frames, z3_orbifold, Edge, EdgeId,
    EdgeTag, Family, Graph, GraphBuilder, GraphSpec, PfData, Triangle, TypeIFrame, TypeIIFrame,
    Vertex, VertexId,
};
pub use hecke::{
    check_hecke, check_unitarity, check_yang_baxter, connection, fixture_check, hecke_operator,
    wenzl_weight, Connection, Direction, FixtureReport, HeckeOperator, HeckeReport, YbeReport,
};
pub use io::{
    cells_from_json, cells_to_json, graph_from_json, graph_to_json, hecke_to_csv,
    solve_report_to_json,
};
pub use qnum::{check_identities, qint, IdentityReport, QContext, QKind};
pub use solver::{classify_solutions, solve_cells, SolveOptions, SolveOutcome, SolveStatus};
