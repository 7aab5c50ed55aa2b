use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation was called with a distribution family it does not serve.
    #[error("usage error: {0}")]
    Usage(String),

    /// Invalid distribution parameters or an unparseable distribution string.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A series did not converge inside its term cap.
    #[error("evaluation error: {what} did not converge after {terms} terms (last residual {residual:e})")]
    Evaluation {
        what: &'static str,
        terms: usize,
        residual: f64,
    },

    /// Adaptive quadrature ran out of refinement depth.
    #[error("quadrature accuracy error: achieved {achieved:e}, requested {requested:e}")]
    Accuracy { achieved: f64, requested: f64 },

    /// The high-precision result moved when the working precision was raised.
    #[error("precision error: result changed by {rel_change:e} relative between {bits} and {escalated} bits")]
    Precision {
        bits: u32,
        escalated: u32,
        rel_change: f64,
    },

    #[error("no closed form for the {0} family; use the quadrature oracle or the estimator")]
    NoClosedForm(String),

    /// Minimum-error fit could not be formed.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}
