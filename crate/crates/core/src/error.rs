use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("degenerate mapping: det(J1) = {det:e} at (xi, eta) = ({xi}, {eta})")]
    DegenerateJacobian { det: f64, xi: f64, eta: f64 },

    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("invalid resolution level {m}x{n}: both scaling parameters must be >= 1")]
    InvalidResolution { m: usize, n: usize },

    #[error("node ({r}, {s}) is outside the {m}x{n} node grid")]
    InvalidNode { r: usize, s: usize, m: usize, n: usize },

    #[error(
        "resolution mismatch on shared edge between element {first} ({first_nodes} nodes) \
         and element {second} ({second_nodes} nodes)"
    )]
    ResolutionMismatch {
        first: usize,
        first_nodes: usize,
        second: usize,
        second_nodes: usize,
    },

    #[error("ambiguous node coincidence near ({x}, {y}): matches several existing nodes")]
    AmbiguousNode { x: f64, y: f64 },

    #[error("no node matches selector {0}")]
    UnknownNode(String),

    #[error("conflicting constraints on global dof {dof}: {first} vs {second}")]
    ConflictingConstraint { dof: usize, first: f64, second: f64 },

    #[error(
        "singular system: pivot {pivot:e} at dof {dof} (insufficient constraints, \
         rigid modes are unconstrained)"
    )]
    SingularSystem { dof: usize, pivot: f64 },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid case: {0}")]
    InvalidCase(String),

    #[error("model file: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
