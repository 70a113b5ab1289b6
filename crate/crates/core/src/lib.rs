//! Geometric phases of degenerate mixed states under cyclic unitary
//! evolution: parallel-transport operators, noninterfering density-operator
//! families, diagonal and off-diagonal phase factors, and the hydrogen
//! hyperfine two-spin model they are evaluated on.
//!
//! The crate is organized in layers:
//!
//! - [`mat`] / [`spectral`]: dense complex matrices and Hermitian spectral
//!   computations (Jacobi eigensolver, spectral functions, PSD roots);
//! - [`quantum`]: density operators, Gibbs states, unitary evolution,
//!   mixedness, clustered spectral decompositions;
//! - [`holonomy`]: transport blocks, supplementary operators, permutation
//!   unitaries and the phase factors themselves;
//! - [`hydrogen`]: the hyperfine + Zeeman model, its canonical eigenbasis,
//!   cyclic period and closed-form mixedness;
//! - [`sweep`]: deterministic parameter sweeps over temperature and field,
//!   with CSV output and optional data-parallel evaluation (feature
//!   `parallel`, on by default).

pub mod error;
pub mod holonomy;
pub mod hydrogen;
pub mod mat;
pub mod quantum;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use mat::{C64, CMat, CVec};
