use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("exponent must be an integer literal, got `{0}`")]
    NonIntegerExponent(String),

    #[error("division by zero in `{subtree}` at t = {at}")]
    DivisionByZero { subtree: String, at: f64 },

    #[error("curve file line {line}: {message}")]
    CurveFile { line: usize, message: String },

    #[error("curve `{name}` is not closed: {what} differs by {defect:.3e} at the domain endpoints (tolerance 1e-9)")]
    NotClosed {
        name: String,
        what: String,
        defect: f64,
    },

    #[error("curve `{name}` violates regularity: |gamma'| = {speed:.3e} < 1e-8 at t = {t}")]
    Irregular { name: String, t: f64, speed: f64 },

    #[error("curve `{name}` does not lie on the unit sphere")]
    NotSpherical { name: String },

    #[error("curve `{name}` is not planar")]
    NotPlanar { name: String },

    #[error(
        "curve `{name}` fails the grid simplicity check: samples {i} and {j} are {distance:.3e} apart (threshold {threshold:.3e})"
    )]
    SelfIntersection {
        name: String,
        i: usize,
        j: usize,
        distance: f64,
        threshold: f64,
    },

    #[error("mode cutoff N = {cutoff} exceeds the anti-aliasing bound 2N <= M/2 for M = {samples}")]
    CutoffAliasing { cutoff: usize, samples: usize },

    #[error("eigenvalue iteration did not converge by N = {cutoff}: last change {residual:.3e}")]
    NoConvergence { cutoff: usize, residual: f64 },

    #[error("matrix is not Hermitian at entry ({i}, {j})")]
    NonHermitian { i: usize, j: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("lattice basis is singular (|det| = {det:.3e})")]
    SingularBasis { det: f64 },

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
