use num_complex::Complex64;
use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("the zero foliation has no extremal length or exhaustion value")]
    ZeroFoliation,

    #[error("foliations are not transverse: i(G,H) = 0")]
    NotTransverse,

    #[error("point must lie in the upper half-plane, got im = {im}")]
    NotInUpperHalfPlane { im: f64 },

    #[error("mapping class must have determinant 1, got {det}")]
    NotUnimodular { det: i64 },

    #[error(
        "quadrature did not converge: estimate {estimate}, \
         error estimate {error_estimate:e} > tol {tol:e} after {evaluations} evaluations"
    )]
    QuadratureNoConvergence {
        estimate: Complex64,
        error_estimate: f64,
        tol: f64,
        evaluations: usize,
    },

    #[error("invalid surface type (g = {g}, m = {m}): need 2g - 2 + m > 0")]
    InvalidSurface { g: u32, m: u32 },

    #[error("invalid train track: {0}")]
    InvalidTrack(String),

    #[error("track parse error at line {line}: {msg}")]
    TrackParse { line: usize, msg: String },

    #[error("transverse-measure cone is degenerate: {0}")]
    DegenerateCone(String),

    #[error(
        "rejection acceptance rate {rate:.3e} fell below floor {floor:.1e}; \
         the kernel-basis box is too loose for this cone"
    )]
    LowAcceptance { rate: f64, floor: f64 },

    #[error("test function `{0}` is not registered with an analytic {1}")]
    NotRegistered(&'static str, &'static str),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("empty scan: {0}")]
    EmptyScan(&'static str),
}
