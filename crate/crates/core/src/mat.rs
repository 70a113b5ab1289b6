//! Dense complex-matrix helpers shared by every layer of the crate.
//!
//! Matrices are plain `ndarray` arrays; the quantum meaning (Hamiltonian,
//! unitary, projector, density operator) lives in the functions that produce
//! and consume them. Everything here is sized for small dense problems
//! (4x4 for the hydrogen model, generic up to a few dozen).

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type C64 = Complex64;
/// Dense square complex matrix.
pub type CMat = Array2<C64>;
/// Complex column vector.
pub type CVec = Array1<C64>;

pub fn identity(dim: usize) -> CMat {
    Array2::eye(dim)
}

pub fn zeros(dim: usize) -> CMat {
    Array2::zeros((dim, dim))
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.t().map(|z| z.conj())
}

pub fn trace(m: &CMat) -> C64 {
    m.diag().sum()
}

pub fn fro_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise |a - b|.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) - b.dot(a)
}

/// Kronecker product; the first factor is the slow (outer) index, so with the
/// nucleus-first ordering convention `kron(nuclear_op, electron_op)` acts on
/// the basis |00>, |01>, |10>, |11> with the first digit the nucleus.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    ndarray::linalg::kron(a, b)
}

/// Outer product |u><v|.
pub fn outer(u: &CVec, v: &CVec) -> CMat {
    let n = u.len();
    let m = v.len();
    Array2::from_shape_fn((n, m), |(i, j)| u[i] * v[j].conj())
}

pub fn all_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Hermiticity test: max |a_ij - conj(a_ji)| <= tol.
pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            if (m[[i, j]] - m[[j, i]].conj()).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Unitarity test: max entry of |U†U - I| <= tol.
pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    max_abs_diff(&dagger(m).dot(m), &identity(m.nrows())) <= tol
}

/// Orthogonal-projector test: Hermitian and idempotent within tol.
pub fn is_projector(m: &CMat, tol: f64) -> bool {
    is_hermitian(m, tol) && max_abs_diff(&m.dot(m), m) <= tol
}
