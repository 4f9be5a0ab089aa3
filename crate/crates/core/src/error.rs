use thiserror::Error;

/// Errors raised by the numeric kernels and the channel models.
///
/// Values are reported as `f64` regardless of the scalar type used for the
/// computation so the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {context}: {detail}")]
    Domain {
        context: &'static str,
        detail: String,
    },

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error bound {error_bound:e})")]
    QuadratureNonConvergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("non-finite integrand value at x = {at:e}")]
    NonFiniteIntegrand { at: f64 },

    #[error("failed to bracket target {target:e} after {expansions} expansions (last interval [{lo:e}, {hi:e}])")]
    Bracketing {
        target: f64,
        lo: f64,
        hi: f64,
        expansions: usize,
    },

    #[error("function is not monotone decreasing: f({x0:e}) = {f0:e}, f({x1:e}) = {f1:e}")]
    NonMonotone { x0: f64, f0: f64, x1: f64, f1: f64 },

    #[error("root refinement did not converge in {iterations} iterations (best x = {best:e}, residual {residual:e})")]
    RootNonConvergence {
        best: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("snr {snr:e} outside the validity range of the asymptotic form (bound {bound:e})")]
    Validity { snr: f64, bound: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{context}: value {value:e} underflows")]
    Underflow { context: &'static str, value: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(context: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        context,
        detail: detail.into(),
    }
}
