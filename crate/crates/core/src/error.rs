//! Error type shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ClifError {
    #[error("signature mismatch: Cl({0},{1}) vs Cl({2},{3})")]
    SignatureMismatch(usize, usize, usize, usize),

    #[error("vector-space dimension {n} outside supported range 1..={max}")]
    UnsupportedDimension { n: usize, max: usize },

    #[error("grade {grade} out of range for n = {n}")]
    GradeOutOfRange { grade: usize, n: usize },

    #[error("invalid blade index {index} for n = {n}")]
    InvalidBladeIndex { index: usize, n: usize },

    #[error("duplicate index {0} in blade")]
    DuplicateBladeIndex(usize),

    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { got: usize, expected: usize },

    #[error("closed-form determinant is only available for n <= 6 (got n = {0})")]
    DeterminantUnsupported(usize),

    #[error("nonscalar residue {residue:.3e} of determinant expression exceeds {bound:.3e}")]
    DeterminantResidue { residue: f64, bound: f64 },

    #[error("singular multivector: |det| = {det:.3e} <= {tol:.3e}")]
    SingularMultivector { det: f64, tol: f64 },

    #[error("characteristic polynomial at sample {lambda} is {chi_abs:.3e}, too close to a root")]
    NearSingularResolvent { lambda: f64, chi_abs: f64 },

    #[error("root finding stalled after {iterations} iterations (worst residual {residual:.3e})")]
    RootFailure {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    #[error("characteristic roots are repeated or near-degenerate; use apply_function for fallback handling")]
    DefectiveOrDegenerate,

    #[error("{function} is undefined at eigenvalue {eigenvalue}")]
    Domain {
        function: String,
        eigenvalue: Complex64,
    },

    #[error("realification residual {residual:.3e} exceeds bound {bound:.3e}")]
    Realification { residual: f64, bound: f64 },

    #[error("regularization failed: {0}")]
    Regularization(String),

    #[error("no basis blade outside the algebra center splits the repeated roots")]
    PerturbationFailure,

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("regular representation capped at n <= {max} (got n = {n})")]
    RepresentationTooLarge { n: usize, max: usize },
}
