use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("gamma has a pole at {0}")]
    Pole(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("grid too short: need at least {needed} nodes, got {got}")]
    GridTooShort { needed: usize, got: usize },
    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
    #[error("argument {value} outside the supported range {limit}")]
    OutOfRange { value: f64, limit: f64 },
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("singular hessian (det = {det:e})")]
    SingularHessian { det: f64 },
    #[error("coordinate value {value} lies below its lower terminal {terminal}")]
    BelowTerminal { value: f64, terminal: f64 },
    #[error("non-finite lagrangian value at node {node} (t = {t})")]
    Evaluation { node: usize, t: f64 },
    #[error("at node {node} (t = {t}): {source}")]
    AtNode {
        node: usize,
        t: f64,
        source: Box<FracError>,
    },
    #[error("degenerate step: diagonal coefficient vanishes")]
    DegenerateStep,
    #[error("solution diverged at node {node}: |x| = {value:e}")]
    Divergence { node: usize, value: f64 },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("analytic partial {which} disagrees with finite differences ({analytic} vs {numeric})")]
    PartialsMismatch { which: String, analytic: f64, numeric: f64 },
}

pub type Result<T> = std::result::Result<T, FracError>;
