//! Error type shared by every module of the library.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CellforgeError>;

/// Failures reported by graph construction, cell construction, Hecke
/// evaluation, the solver and document I/O.
#[derive(Debug, Error)]
pub enum CellforgeError {
    #[error("invalid q context: {0}")]
    InvalidContext(String),

    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),

    #[error("{family}: n = {n} is out of range ({expected})")]
    OutOfRange {
        family: String,
        n: u32,
        expected: String,
    },

    #[error("{0} is unsupported: its cells are not determined")]
    Unsupported(String),

    #[error("variant `{variant}` is not available for {graph}")]
    IllegalVariant { graph: String, variant: String },

    #[error("invalid rotation: {0}")]
    InvalidRotation(String),

    #[error("vertex `{0}` does not exist in this graph")]
    UnknownVertex(String),

    #[error("no length-2 path from `{x}` to `{y}`")]
    NoPath { x: String, y: String },

    #[error("cell systems live on different graphs: `{0}` and `{1}`")]
    GraphMismatch(String, String),

    #[error(
        "gauge matrix on {source_label} -> {target_label} is not unitary (deviation {deviation:e})"
    )]
    NonUnitary {
        source_label: String,
        target_label: String,
        deviation: f64,
    },

    #[error("gauge family is missing the parallel class {0} -> {1}")]
    IncompleteGauge(String, String),

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("graph is not connected")]
    Disconnected,

    #[error("vertex `{0}` is not on the weight lattice of this graph")]
    OffLattice(String),

    #[error("expression error: {0}")]
    Expression(String),

    #[error("no reference matrices are stored for {0}")]
    MissingFixtures(String),

    #[error("invalid document: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
