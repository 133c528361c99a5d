use thiserror::Error;

/// Errors reported by the library.
///
/// Construction errors (`NonFinite` through `SegmentAsymmetry`, `InvalidGrid`)
/// signal a rejected input; the remaining variants signal a numerical failure
/// while evaluating an otherwise valid request.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("delta strength kappa must be nonzero; the free case must be requested explicitly (zero-depth piecewise spec)")]
    ZeroKappa,

    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("qa = {qa} lies within {tol:e} of the bound-state threshold {threshold} = n*pi/2; threshold anomaly excluded")]
    ThresholdAnomaly { qa: f64, threshold: f64, tol: f64 },

    #[error("segments must tile [-a, a] contiguously: {reason}")]
    SegmentTiling { reason: String },

    #[error("segments must mirror about x = 0: {reason}")]
    SegmentAsymmetry { reason: String },

    #[error("wavevector k must be positive and finite, got {k}; negative k is covered by the N(k) = N(-k) symmetry")]
    InvalidWavevector { k: f64 },

    #[error("operation `{op}` does not support {kind} specs")]
    UnsupportedSpec { op: &'static str, kind: &'static str },

    #[error("evanescent factor exp({exponent:.1}) would overflow; rescale segment widths or depths")]
    EvanescentOverflow { exponent: f64 },

    #[error("numeric differentiation step underflows at k = {k:e}; evaluate at k >= {min_k:e} or use the analytic mode")]
    StepUnderflow { k: f64, min_k: f64 },

    #[error("point x = {x} lies inside the interaction region |x| <= {a}; the asymptotic form is invalid there")]
    InsideInteractionRegion { x: f64, a: f64 },

    #[error("quadrature did not converge: estimated error {error:e} exceeds tolerance {tol:e} after {intervals} intervals")]
    QuadratureNonConvergence { error: f64, tol: f64, intervals: usize },

    #[error("grid reaches only k = {k_max} but the tail fit needs k >= {required}")]
    InsufficientGridReach { k_max: f64, required: f64 },

    #[error("tail fit failed: {reason}")]
    TailFitFailure { reason: String },

    #[error("box length L = {l} too small; need L >= {required} to contain the interaction region comfortably")]
    BoxTooSmall { l: f64, required: f64 },

    #[error("{n} grid points cannot resolve wavevectors up to k = {k_max} in a box of length {l}; need at least {required} points")]
    GridTooCoarse { n: usize, k_max: f64, l: f64, required: usize },

    #[error("spectra come from different discretizations (box length or grid points differ)")]
    MismatchedDiscretization,

    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
