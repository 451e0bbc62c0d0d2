use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// One entry per violated lattice invariant.
    #[error("invalid lattice spec: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),

    #[error("expected a {expected} defect, found {found}")]
    DefectMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("QR iteration failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("eigenpair residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualExceeded { residual: f64, tolerance: f64 },

    #[error("ambiguous zero mode: eigenvalues {first} and {second} are indistinguishable")]
    AmbiguousZeroMode { first: String, second: String },

    #[error("no eigenvalue with |Re E| below {tolerance:e}")]
    NoZeroMode { tolerance: f64 },

    #[error("no exceptional point in [{lo}, {hi}]: best eigenvector overlap {best_overlap:.6}")]
    NoExceptionalPoint { lo: f64, hi: f64, best_overlap: f64 },

    #[error("recursion blew up at site {site} (|psi| = {magnitude:e})")]
    RecursionBlowup { site: usize, magnitude: f64 },

    #[error("step size {step:e} exceeds the stability bound {bound:e}")]
    StepSize { step: f64, bound: f64 },

    #[error("matrix is close to defective; eigen-expansion disabled")]
    NearDefective,

    #[error("site {site} out of range 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("at strength {strength}: {source}")]
    AtStrength {
        strength: f64,
        #[source]
        source: Box<Error>,
    },
}
