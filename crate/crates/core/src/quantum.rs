//! Density operators, Gibbs-state preparation, unitary evolution, mixedness
//! and clustered eigenspace decompositions.

use crate::error::{Error, Result};
use crate::mat::{self, C64, CMat};
use crate::spectral::{self, hermitian_eig, unitary_exp};

/// Validation tolerance for density operators: Hermiticity, unit trace and
/// positivity are all enforced at this level.
pub const DENSITY_TOL: f64 = 1e-10;

/// The three spin-1/2 operators, sigma/2.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub sx: CMat,
    pub sy: CMat,
    pub sz: CMat,
}

/// Spin-1/2 operators in the basis {|0>, |1>} with |0> the sz = +1/2 state.
pub fn spin_half() -> SpinOperators {
    let z = C64::new(0.0, 0.0);
    let h = C64::new(0.5, 0.0);
    SpinOperators {
        sx: ndarray::array![[z, h], [h, z]],
        sy: ndarray::array![[z, C64::new(0.0, -0.5)], [C64::new(0.0, 0.5), z]],
        sz: ndarray::array![[h, z], [z, -h]],
    }
}

/// A validated density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMat,
}

impl DensityOperator {
    /// Validate and wrap a candidate density matrix.
    pub fn new(matrix: CMat) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if !mat::all_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        if !mat::is_hermitian(&matrix, DENSITY_TOL) {
            return Err(Error::NotHermitian {
                deviation: mat::max_abs_diff(&matrix, &mat::dagger(&matrix)),
            });
        }
        let tr = mat::trace(&matrix);
        if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let dec = hermitian_eig(&matrix, spectral::default_cluster_tol(&[1.0]))?;
        if dec.eigenvalues[0] < -DENSITY_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: dec.eigenvalues[0],
            });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Clustered spectral decomposition of a density operator: mutually
/// orthogonal projectors with their weights and multiplicities.
#[derive(Debug, Clone)]
pub struct EigenspaceFamily {
    pub projectors: Vec<CMat>,
    pub weights: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

impl EigenspaceFamily {
    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors.first().map_or(0, |p| p.nrows())
    }

    /// Reassemble sum_k lambda_k P_k.
    pub fn reconstruct(&self) -> CMat {
        let mut m = mat::zeros(self.dim());
        for (p, &w) in self.projectors.iter().zip(&self.weights) {
            m = m + p.mapv(|z| z * w);
        }
        m
    }
}

/// Gibbs state exp(-beta H) / Tr exp(-beta H), computed spectrally with the
/// spectrum shifted by its minimum before exponentiation so large beta cannot
/// overflow.
pub fn thermal_state(h: &CMat, beta: f64) -> Result<DensityOperator> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidInput(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    let dec = hermitian_eig(h, spectral::default_cluster_tol(&[mat::max_abs(h)]))?;
    let lam_min = dec.eigenvalues[0];
    let boltzmann: Vec<f64> = dec
        .eigenvalues
        .iter()
        .map(|&e| (-beta * (e - lam_min)).exp())
        .collect();
    let z: f64 = boltzmann.iter().sum();
    let mut scaled = dec.eigenvectors.clone();
    for (i, &w) in boltzmann.iter().enumerate() {
        scaled
            .column_mut(i)
            .mapv_inplace(|v| v * C64::new(w / z, 0.0));
    }
    let rho = scaled.dot(&mat::dagger(&dec.eigenvectors));
    DensityOperator::new(rho)
}

/// Conjugate rho by the propagator of `h` over time `t`.
pub fn evolve(rho: &DensityOperator, h: &CMat, t: f64) -> Result<DensityOperator> {
    let u = unitary_exp(h, t)?;
    let evolved = u.dot(rho.matrix()).dot(&mat::dagger(&u));
    DensityOperator::new(evolved)
}

/// Mixedness 1 - Tr(rho^2); zero for pure states, 1 - 1/dim when maximally
/// mixed.
pub fn mixedness(rho: &DensityOperator) -> f64 {
    let m = rho.matrix();
    let purity: f64 = m.dot(m).diag().iter().map(|z| z.re).sum();
    1.0 - purity
}

/// Default clustering tolerance for density-operator spectra: absorbs
/// eigensolver roundoff without merging physically distinct thermal weights.
pub fn default_density_cluster_tol(eigenvalues: &[f64]) -> f64 {
    spectral::default_cluster_tol(eigenvalues)
}

/// Clustered spectral weights of a density operator, ascending in weight.
pub fn decompose_density(rho: &DensityOperator, cluster_tol: f64) -> Result<EigenspaceFamily> {
    let dec = hermitian_eig(rho.matrix(), cluster_tol)?;
    let mut projectors = Vec::with_capacity(dec.clusters.len());
    let mut weights = Vec::with_capacity(dec.clusters.len());
    let mut multiplicities = Vec::with_capacity(dec.clusters.len());
    for k in 0..dec.clusters.len() {
        projectors.push(dec.cluster_projector(k));
        weights.push(dec.cluster_eigenvalue(k).max(0.0));
        multiplicities.push(dec.multiplicity(k));
    }
    Ok(EigenspaceFamily {
        projectors,
        weights,
        multiplicities,
    })
}
