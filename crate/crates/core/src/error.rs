use thiserror::Error;

/// Errors raised by the numerical kernels.
///
/// Variants fall into two groups: precondition failures on the input
/// (`SingularInput`, `NotUnimodular`, `NotPositiveDefinite`, `InvalidTangent`,
/// `NotTraceless`, `DimensionMismatch`) and domain errors that depend on where
/// a point sits relative to the layer structure (`StratumAmbiguous`,
/// `OnDegeneracyLocus`, `SymmetryViolation`).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("determinant {det} is not within {tol:e} of 1")]
    NotUnimodular { det: String, tol: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("rank decision ambiguous: pivot magnitude {magnitude:e} at step {step} is too close to tolerance {tol:e}")]
    StratumAmbiguous { step: usize, magnitude: f64, tol: f64 },

    #[error("tangent representative violates i𝔭 invariants (residual {residual:e})")]
    InvalidTangent { residual: f64 },

    #[error("trace {trace:e} exceeds the traceless tolerance")]
    NotTraceless { trace: f64 },

    #[error("point lies on the degeneracy locus (|p| = {value:e})")]
    OnDegeneracyLocus { value: f64 },

    #[error("factor symmetry u₊ = θ(l*) violated (residual {residual:e})")]
    SymmetryViolation { residual: f64 },

    #[error("dimension {dim} exceeds the enumeration guard {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operation not supported for this presentation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
