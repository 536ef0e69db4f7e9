use std::path::PathBuf;

/// Errors produced by the analysis pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("density undefined (point mass at s = {at})")]
    PointMass { at: f64 },

    #[error("point-mass NNSD: the integral transform needs a pointwise density")]
    PointMassTransform,

    #[error("s = {s} lies outside the tabulated range [{lo}, {hi}]")]
    Extrapolation { s: f64, lo: f64, hi: f64 },

    #[error("invalid spacing table: {0}")]
    InvalidTable(String),

    #[error("cannot invert CDF: {0}")]
    CannotInvertCdf(String),

    #[error("no spacings: need at least 2 levels, got {0}")]
    NoSpacings(usize),

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {estimate:.3e})")]
    Convergence { subdivisions: usize, estimate: f64 },

    #[error("at r = {r}: {source}")]
    AtScale {
        r: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e})")]
    Bracketing { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("eigensolver failed to converge at index {index} after {iterations} iterations (|off-diagonal| = {residual:.3e})")]
    Eigensolver { index: usize, iterations: usize, residual: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("duplicate level {value} (lines {first_line} and {second_line})")]
    DuplicateLevel { value: String, first_line: usize, second_line: usize },

    #[error("{path}:{line}: cannot parse '{text}'")]
    Parse { path: String, line: usize, text: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of a numerical method rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Convergence { .. } | Error::Bracketing { .. } | Error::Eigensolver { .. } => {
                true
            }
            Error::AtScale { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn at_scale(self, r: f64) -> Error {
        Error::AtScale { r, source: Box::new(self) }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
