use thiserror::Error;

/// Errors produced by the numerical layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A series or iteration hit its term cap before reaching tolerance.
    #[error("{op} did not converge within {terms} terms (rel_tol {rel_tol:.3e})")]
    NonConvergence {
        op: &'static str,
        terms: usize,
        rel_tol: f64,
    },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature in {op} did not stabilise (requested abs tol {tol:.3e})")]
    Quadrature { op: &'static str, tol: f64 },

    /// A probability came out of an evaluator materially outside [0, 1].
    #[error("consistency error in {op}: value {value:.6e} outside [0, 1]")]
    Consistency { op: &'static str, value: f64 },

    /// Malformed catalog input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A frequency outside the validity window of the bundled catalog.
    #[error("frequency {f_hz:.4e} Hz outside supported window [{lo:.2e}, {hi:.2e}] Hz")]
    FrequencyRange { f_hz: f64, lo: f64, hi: f64 },

    /// An operation that needs catalog lines received none.
    #[error("empty line catalog")]
    EmptyCatalog,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }
}
