use thiserror::Error;

/// Errors surfaced by the matrix kernel, quantum layer and holonomy layer.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver failed to converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("spectral map undefined at eigenvalue {eigenvalue:.6e}")]
    DomainError { eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("columns are not orthonormal (max Gram deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is not an orthogonal projector (deviation {deviation:.3e})")]
    NotProjector { deviation: f64 },

    #[error("density matrix trace is {trace:.12e}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("trace magnitude {magnitude:.3e} below nodal tolerance; phase undefined at this point")]
    NodalPoint { magnitude: f64 },

    #[error("ordered exponential needs at least one step")]
    StepCountTooSmall,

    #[error("transport generator is not anti-Hermitian (deviation {deviation:.3e})")]
    NonAntiHermitianGenerator { deviation: f64 },

    #[error("family index {index} out of range for family of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("period undefined: C and J both zero")]
    DegenerateParameters,

    #[error("eigenspace family does not live on the supplied basis (max residual {deviation:.3e})")]
    BasisMismatch { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
