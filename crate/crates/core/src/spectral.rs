//! Hermitian spectral computations: eigendecomposition with degeneracy
//! clustering, spectral matrix functions, unitary propagators and PSD roots.
//!
//! The eigensolver is a cyclic Jacobi iteration with complex plane rotations.
//! At the dimensions this crate targets it converges in a handful of sweeps,
//! is accurate to machine precision and, with its fixed pair ordering, is
//! bitwise deterministic across runs.

use std::ops::Range;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::mat::{self, C64, CMat, CVec};

/// Hermiticity tolerance applied by every operation that requires a
/// Hermitian input.
pub const HERMITICITY_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix with degenerate eigenvalues
/// grouped into clusters.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors; column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: CMat,
    /// Contiguous index ranges of (near-)degenerate eigenvalues, obtained by
    /// transitive chaining at `cluster_tol`.
    pub clusters: Vec<Range<usize>>,
    /// Tolerance used for the chaining.
    pub cluster_tol: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn multiplicity(&self, k: usize) -> usize {
        self.clusters[k].len()
    }

    /// Representative eigenvalue of cluster `k` (mean over the cluster).
    pub fn cluster_eigenvalue(&self, k: usize) -> f64 {
        let r = self.clusters[k].clone();
        let m = r.len() as f64;
        self.eigenvalues[r].iter().sum::<f64>() / m
    }

    /// Orthogonal projector onto the eigenspace of cluster `k`.
    pub fn cluster_projector(&self, k: usize) -> CMat {
        let n = self.dim();
        let mut p = mat::zeros(n);
        for i in self.clusters[k].clone() {
            let col = self.eigenvectors.column(i).to_owned();
            p = p + mat::outer(&col, &col);
        }
        p
    }
}

/// Default degeneracy-clustering tolerance: 1e-9 * max(1, |lambda|_max).
pub fn default_cluster_tol(eigenvalues: &[f64]) -> f64 {
    let lmax = eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    1e-9 * lmax.max(1.0)
}

fn check_square(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    Ok(m.nrows())
}

fn check_hermitian(m: &CMat) -> Result<usize> {
    let n = check_square(m)?;
    if !mat::all_finite(m) {
        return Err(Error::NonFinite);
    }
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(n)
}

/// Sum of squared moduli of the off-diagonal entries.
fn off_diag_sq(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[[i, j]].norm_sqr();
            }
        }
    }
    s
}

/// Cyclic Jacobi for a Hermitian matrix. Returns unsorted eigenvalues and the
/// accumulated eigenvector columns.
fn jacobi_eigh(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut vecs = mat::identity(n);
    let scale = mat::fro_norm(m).max(1.0);
    let stop = 1e-14 * scale;

    let mut sweeps = 0;
    while off_diag_sq(&a).sqrt() > stop {
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: sweeps - 1,
                off_norm: off_diag_sq(&a).sqrt(),
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[[p, q]];
                let b = apq.norm();
                if b <= stop / (n * n) as f64 {
                    continue;
                }
                // Phase factor that makes the pivot real, then a real Jacobi
                // rotation that annihilates it.
                let phase = apq / b; // e^{i phi}
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // 2x2 rotation on the (p,q) plane:
                //   U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                let upp = C64::new(c, 0.0);
                let upq = C64::new(s, 0.0);
                let uqp = -s * phase.conj();
                let uqq = c * phase.conj();

                // A <- U† A U, touching only rows/columns p and q.
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = akp * upp + akq * uqp;
                    a[[k, q]] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = upp.conj() * apk + uqp.conj() * aqk;
                    a[[q, k]] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = C64::new(a[[q, q]].re, 0.0);
                a[[p, q]] = C64::new(0.0, 0.0);
                a[[q, p]] = C64::new(0.0, 0.0);

                for k in 0..n {
                    let vkp = vecs[[k, p]];
                    let vkq = vecs[[k, q]];
                    vecs[[k, p]] = vkp * upp + vkq * uqp;
                    vecs[[k, q]] = vkp * upq + vkq * uqq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[[i, i]].re).collect();
    Ok((vals, vecs))
}

/// Group ascending eigenvalues into transitively chained clusters:
/// consecutive values closer than `tol` land in the same cluster.
fn chain_clusters(vals: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..vals.len() {
        if vals[i] - vals[i - 1] > tol {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters.push(start..vals.len());
    clusters
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues,
/// orthonormal eigenvectors and degenerate eigenvalues clustered by
/// transitive chaining at `cluster_tol`.
pub fn hermitian_eig(m: &CMat, cluster_tol: f64) -> Result<SpectralDecomposition> {
    let n = check_hermitian(m)?;
    if cluster_tol.is_nan() || cluster_tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "cluster_tol must be positive, got {cluster_tol}"
        )));
    }
    let (vals, vecs) = jacobi_eigh(m)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.column_mut(dst).assign(&vecs.column(src));
    }

    let clusters = chain_clusters(&eigenvalues, cluster_tol);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        clusters,
        cluster_tol,
    })
}

/// Apply a scalar function to a Hermitian matrix through its spectrum:
/// sum_i f(lambda_i) |v_i><v_i|.
pub fn spectral_function<F>(m: &CMat, f: F, cluster_tol: f64) -> Result<CMat>
where
    F: Fn(f64) -> C64,
{
    let dec = hermitian_eig(m, cluster_tol)?;
    let n = dec.dim();
    let mut fvals = Vec::with_capacity(n);
    for &lam in &dec.eigenvalues {
        let y = f(lam);
        if !(y.re.is_finite() && y.im.is_finite()) {
            return Err(Error::DomainError { eigenvalue: lam });
        }
        fvals.push(y);
    }
    // V diag(f) V†
    let mut scaled = dec.eigenvectors.clone();
    for (i, &fv) in fvals.iter().enumerate() {
        scaled.column_mut(i).mapv_inplace(|z| z * fv);
    }
    Ok(scaled.dot(&mat::dagger(&dec.eigenvectors)))
}

/// Propagator exp(-i t H) of a Hermitian generator.
pub fn unitary_exp(h: &CMat, t: f64) -> Result<CMat> {
    let tol = default_cluster_tol(&[mat::max_abs(h)]);
    spectral_function(h, |lam| C64::from_polar(1.0, -t * lam), tol)
}

/// l-th root of a positive semidefinite matrix. Eigenvalues with
/// |lambda| <= clamp_tol are clamped to zero (fractional powers amplify
/// roundoff noise near zero); anything below -clamp_tol is rejected as
/// not PSD.
pub fn psd_root(m: &CMat, l: u32, clamp_tol: f64) -> Result<CMat> {
    if l == 0 {
        return Err(Error::InvalidInput("root order l must be >= 1".into()));
    }
    let dec = hermitian_eig(m, default_cluster_tol_of(m))?;
    if let Some(&min) = dec
        .eigenvalues
        .iter()
        .min_by(|a, b| a.partial_cmp(b).unwrap())
    {
        if min < -clamp_tol {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    let inv_l = 1.0 / f64::from(l);
    let mut scaled = dec.eigenvectors.clone();
    for (i, &lam) in dec.eigenvalues.iter().enumerate() {
        let root = if lam <= clamp_tol { 0.0 } else { lam.powf(inv_l) };
        scaled
            .column_mut(i)
            .mapv_inplace(|z| z * C64::new(root, 0.0));
    }
    Ok(scaled.dot(&mat::dagger(&dec.eigenvectors)))
}

fn default_cluster_tol_of(m: &CMat) -> f64 {
    1e-9 * mat::max_abs(m).max(1.0)
}

/// Orthogonal projector onto the span of orthonormal columns.
pub fn projector_from_columns(columns: &[CVec]) -> Result<CMat> {
    if columns.is_empty() {
        return Err(Error::InvalidInput("no columns given".into()));
    }
    let n = columns[0].len();
    let mut dev = 0.0f64;
    for (i, u) in columns.iter().enumerate() {
        if u.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.len(),
            });
        }
        for (j, v) in columns.iter().enumerate() {
            let g: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            let target = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            dev = dev.max((g - target).norm());
        }
    }
    if dev > 1e-8 {
        return Err(Error::NotOrthonormal { deviation: dev });
    }
    let mut p = mat::zeros(n);
    for v in columns {
        p = p + mat::outer(v, v);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_x() -> CMat {
        array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
    }

    fn pauli_z() -> CMat {
        array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
    }

    #[test]
    fn diagonal_input_sorts_ascending() {
        let m = array![[c(2.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        let dec = hermitian_eig(&m, 1e-9).unwrap();
        assert!((dec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] - 2.0).abs() < 1e-14);
        // standard basis vectors, permuted
        assert!((dec.eigenvectors[[1, 0]].norm() - 1.0).abs() < 1e-14);
        assert!((dec.eigenvectors[[0, 1]].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_x_spectrum() {
        let dec = hermitian_eig(&pauli_x(), 1e-9).unwrap();
        assert!((dec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] - 1.0).abs() < 1e-14);
        // eigenvectors (1, ∓1)/√2 up to phase: |<v|target>| = 1
        let v0 = dec.eigenvectors.column(0);
        let overlap0 = (v0[0] - v0[1]).norm() / 2f64.sqrt();
        assert!((overlap0 - 1.0).abs() < 1e-12);
        let v1 = dec.eigenvectors.column(1);
        let overlap1 = (v1[0] + v1[1]).norm() / 2f64.sqrt();
        assert!((overlap1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(2.0, 0.0), c(0.0, 0.0)]];
        assert!(matches!(
            hermitian_eig(&m, 1e-9),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_bad_cluster_tol() {
        assert!(hermitian_eig(&pauli_z(), 0.0).is_err());
        assert!(hermitian_eig(&pauli_z(), -1.0).is_err());
    }

    fn random_hermitian(n: usize, rng: &mut impl rand::Rng) -> CMat {
        let mut m = mat::zeros(n);
        for i in 0..n {
            m[[i, i]] = c(rng.random_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[[i, j]] = z;
                m[[j, i]] = z.conj();
            }
        }
        m
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 2..=8 {
            for _ in 0..10 {
                let m = random_hermitian(n, &mut rng);
                let dec = hermitian_eig(&m, default_cluster_tol(&[1.0])).unwrap();
                // reconstruction
                let mut rec = mat::zeros(n);
                for i in 0..n {
                    let v = dec.eigenvectors.column(i).to_owned();
                    rec = rec + mat::outer(&v, &v).mapv(|z| z * dec.eigenvalues[i]);
                }
                let err = mat::fro_norm(&(&rec - &m));
                assert!(
                    err <= 1e-10 * (1.0 + mat::fro_norm(&m)),
                    "reconstruction err {err} at n={n}"
                );
                // orthonormal eigenvectors
                let g = mat::dagger(&dec.eigenvectors).dot(&dec.eigenvectors);
                assert!(mat::max_abs_diff(&g, &mat::identity(n)) <= 1e-10);
                // ascending
                assert!(dec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn degenerate_clustering() {
        // diag(1, 1, 1, -3) up to a basis rotation has clusters {3, 1}
        let m = Array2::from_diag(&ndarray::arr1(&[
            c(0.25, 0.0),
            c(0.25, 0.0),
            c(0.25, 0.0),
            c(-0.75, 0.0),
        ]));
        let dec = hermitian_eig(&m, 1e-9).unwrap();
        let sizes: Vec<usize> = dec.clusters.iter().map(|r| r.len()).collect();
        assert_eq!(sizes, vec![1, 3]);
        assert!((dec.cluster_eigenvalue(0) + 0.75).abs() < 1e-14);
        assert!((dec.cluster_eigenvalue(1) - 0.25).abs() < 1e-14);
        let p = dec.cluster_projector(1);
        assert!(mat::is_projector(&p, 1e-12));
    }

    #[test]
    fn spectral_function_exp_of_zero_is_identity() {
        let m = mat::zeros(3);
        let e = spectral_function(&m, |x| C64::new(x.exp(), 0.0), 1e-9).unwrap();
        assert!(mat::max_abs_diff(&e, &mat::identity(3)) < 1e-14);
    }

    #[test]
    fn spectral_function_sqrt_of_diagonal() {
        let m = Array2::from_diag(&ndarray::arr1(&[c(4.0, 0.0), c(9.0, 0.0)]));
        let r = spectral_function(&m, |x| C64::new(x.sqrt(), 0.0), 1e-9).unwrap();
        let expect = Array2::from_diag(&ndarray::arr1(&[c(2.0, 0.0), c(3.0, 0.0)]));
        assert!(mat::max_abs_diff(&r, &expect) < 1e-14);
    }

    #[test]
    fn spectral_function_identity_map_returns_input() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let m = random_hermitian(5, &mut rng);
        let r = spectral_function(&m, |x| C64::new(x, 0.0), 1e-9).unwrap();
        assert!(mat::max_abs_diff(&r, &m) <= 1e-10);
    }

    #[test]
    fn spectral_function_domain_error() {
        let m = pauli_z(); // eigenvalue -1
        let err = spectral_function(&m, |x| C64::new(x.sqrt(), 0.0), 1e-9);
        assert!(matches!(err, Err(Error::DomainError { .. })));
    }

    #[test]
    fn unitary_exp_basics() {
        let h = pauli_z();
        let u0 = unitary_exp(&h, 0.0).unwrap();
        assert!(mat::max_abs_diff(&u0, &mat::identity(2)) < 1e-14);
        let upi = unitary_exp(&h, std::f64::consts::PI).unwrap();
        let minus_i = mat::identity(2).mapv(|z| -z);
        assert!(mat::max_abs_diff(&upi, &minus_i) < 1e-12);
        assert!(mat::is_unitary(&upi, 1e-12));
    }

    #[test]
    fn unitary_exp_group_law() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(4, &mut rng);
        let (s, t) = (0.37, 1.21);
        let us = unitary_exp(&h, s).unwrap();
        let ut = unitary_exp(&h, t).unwrap();
        let ust = unitary_exp(&h, s + t).unwrap();
        assert!(mat::fro_norm(&(us.dot(&ut) - ust)) <= 1e-9);
    }

    #[test]
    fn psd_root_scalar_matrix() {
        let m = mat::identity(4).mapv(|z| z * 0.25);
        let r = psd_root(&m, 2, 1e-12).unwrap();
        assert!(mat::max_abs_diff(&r, &mat::identity(4).mapv(|z| z * 0.5)) < 1e-14);
    }

    #[test]
    fn psd_root_projector_fixed_point() {
        let v = ndarray::arr1(&[c(0.6, 0.0), c(0.0, 0.8)]);
        let p = mat::outer(&v, &v);
        for l in [1u32, 2, 3, 5] {
            let r = psd_root(&p, l, 1e-12).unwrap();
            assert!(mat::max_abs_diff(&r, &p) < 1e-12, "l={l}");
        }
    }

    #[test]
    fn psd_root_reconstruction() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        // random PSD: A†A
        let a = random_hermitian(4, &mut rng);
        let m = mat::dagger(&a).dot(&a);
        for l in [2u32, 3] {
            let r = psd_root(&m, l, 1e-12).unwrap();
            let mut back = mat::identity(4);
            for _ in 0..l {
                back = back.dot(&r);
            }
            let tol = f64::from(l) * 1e-12 + 1e-9;
            assert!(mat::fro_norm(&(back - &m)) <= tol, "l={l}");
        }
    }

    #[test]
    fn psd_root_rejects_negative() {
        let err = psd_root(&pauli_z(), 2, 1e-12);
        assert!(matches!(err, Err(Error::NotPsd { .. })));
    }

    #[test]
    fn projector_from_columns_examples() {
        let dim = 4;
        let e = |i: usize| {
            let mut v = CVec::zeros(dim);
            v[i] = c(1.0, 0.0);
            v
        };
        let p1 = projector_from_columns(&[e(0)]).unwrap();
        let mut expect = mat::zeros(dim);
        expect[[0, 0]] = c(1.0, 0.0);
        assert!(mat::max_abs_diff(&p1, &expect) < 1e-15);

        let all = [e(0), e(1), e(2), e(3)];
        let pfull = projector_from_columns(&all).unwrap();
        assert!(mat::max_abs_diff(&pfull, &mat::identity(dim)) < 1e-15);

        let bad = projector_from_columns(&[e(0), e(0)]);
        assert!(matches!(bad, Err(Error::NotOrthonormal { .. })));
    }
}
