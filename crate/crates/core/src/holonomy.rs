//! Parallel-transport operators, noninterfering density-operator families,
//! and diagonal / off-diagonal mixed-state geometric phase factors.
//!
//! For a density operator rho = sum_k lambda_k P_k evolving under U(t), each
//! eigenspace carries a transport block
//!
//! ```text
//! alpha_k(t) = P_k T exp(-int_0^t P_k U†(t') dU/dt'(t') P_k dt') P_k
//! ```
//!
//! which for a time-independent Hamiltonian reduces to
//! `P_k exp(+i t P_k H P_k) P_k`. The supplementary operator V(t) is the sum
//! of the blocks; U(t) V(t) transports every eigenspace in parallel, removing
//! dynamical phase so that the trace functionals below pick up geometry only.
//! A cyclic permutation W of an ordered eigenbasis generates the family
//! rho_n = sum_k lambda_k W^{n-1} P_k W†^{n-1} of noninterfering states whose
//! pairwise phases the order-l functional measures.

use crate::error::{Error, Result};
use crate::mat::{self, C64, CMat, CVec};
use crate::quantum::{DensityOperator, EigenspaceFamily, decompose_density};
use crate::spectral::{psd_root, unitary_exp};

/// Tolerance below which a trace magnitude counts as a nodal point.
pub const DEFAULT_NODAL_TOL: f64 = 1e-12;

/// Eigenvalue clamp used when taking l-th roots of density operators.
pub const DEFAULT_CLAMP_TOL: f64 = 1e-12;

/// Clustering tolerance for density-operator spectra (weights lie in [0, 1]).
pub const DEFAULT_DENSITY_CLUSTER_TOL: f64 = 1e-9;

const PROJECTOR_TOL: f64 = 1e-8;
const ORTHONORMAL_TOL: f64 = 1e-8;
const ANTI_HERMITIAN_TOL: f64 = 1e-8;

/// A unit-modulus phase factor together with the argument and the
/// pre-normalization trace magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFactor {
    factor: C64,
    argument: f64,
    magnitude_raw: f64,
}

impl PhaseFactor {
    /// z / |z|.
    pub fn factor(&self) -> C64 {
        self.factor
    }

    /// arg(z) in (-pi, pi].
    pub fn argument(&self) -> f64 {
        self.argument
    }

    /// |z| before normalization; a visibility proxy.
    pub fn magnitude_raw(&self) -> f64 {
        self.magnitude_raw
    }
}

/// Normalize z to a phase factor, refusing magnitudes below `nodal_tol`
/// where the phase is undefined.
pub fn phase_of(z: C64, nodal_tol: f64) -> Result<PhaseFactor> {
    let magnitude_raw = z.norm();
    if !magnitude_raw.is_finite() {
        return Err(Error::NonFinite);
    }
    if magnitude_raw < nodal_tol {
        return Err(Error::NodalPoint {
            magnitude: magnitude_raw,
        });
    }
    let factor = z / magnitude_raw;
    let mut argument = factor.arg();
    if argument <= -std::f64::consts::PI {
        argument = std::f64::consts::PI;
    }
    Ok(PhaseFactor {
        factor,
        argument,
        magnitude_raw,
    })
}

/// How the transport blocks of a supplementary operator are generated.
pub enum TransportGenerator<'a> {
    /// Time-independent Hamiltonian; blocks use the closed form
    /// P exp(+i t P H P) P.
    Constant(&'a CMat),
    /// Anti-Hermitian generator samples t' -> U†(t') dU/dt'(t'); blocks use
    /// the midpoint-discretized ordered exponential with this many steps.
    Sampled(&'a dyn Fn(f64) -> CMat, usize),
}

/// Projector family, generator and duration for one supplementary operator.
pub struct TransportSpec<'a> {
    pub projectors: &'a [CMat],
    pub generator: TransportGenerator<'a>,
    pub duration: f64,
}

fn check_projector(p: &CMat) -> Result<()> {
    let dev = mat::max_abs_diff(&p.dot(p), p)
        .max(mat::max_abs_diff(p, &mat::dagger(p)));
    if dev > PROJECTOR_TOL {
        return Err(Error::NotProjector { deviation: dev });
    }
    Ok(())
}

/// Closed-form transport block P exp(+i t P H P) P for a time-independent
/// Hamiltonian. The result is a partial isometry: alpha† alpha = P.
pub fn transport_block_closed(p: &CMat, h: &CMat, t: f64) -> Result<CMat> {
    check_projector(p)?;
    let php = p.dot(h).dot(p);
    // exp(+i t X) = unitary_exp(X, -t)
    let e = unitary_exp(&php, -t)?;
    Ok(p.dot(&e).dot(p))
}

/// Ordered-exponential transport block: the product of midpoint-sampled
/// sub-interval exponentials exp(-dt P g(t_mid) P), later factors to the
/// left, sandwiched by P. Exact for constant generators; converges to the
/// time-ordered exponential as `steps` grows.
pub fn transport_block_ordered<F>(p: &CMat, generator: F, t: f64, steps: usize) -> Result<CMat>
where
    F: Fn(f64) -> CMat,
{
    if steps < 1 {
        return Err(Error::StepCountTooSmall);
    }
    check_projector(p)?;
    let n = p.nrows();
    let dt = t / steps as f64;
    let mut acc = mat::identity(n);
    for i in 0..steps {
        let t_mid = (i as f64 + 0.5) * dt;
        let g = generator(t_mid);
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.nrows(),
            });
        }
        let dev = mat::max_abs_diff(&g, &mat::dagger(&g).mapv(|z| -z));
        if dev > ANTI_HERMITIAN_TOL {
            return Err(Error::NonAntiHermitianGenerator { deviation: dev });
        }
        let pgp = p.dot(&g).dot(p);
        // -dt * pgp is anti-Hermitian; write it as -i K with K Hermitian,
        // then exp(-dt pgp) = exp(-i (-dt) K)... K = i * pgp.
        let k = pgp.mapv(|z| z * C64::new(0.0, 1.0));
        let factor = unitary_exp(&k, -dt)?;
        acc = factor.dot(&acc);
    }
    Ok(p.dot(&acc).dot(p))
}

/// Supplementary operator V(t) = sum_k alpha_k(t). Unitary whenever the
/// projector family is complete.
pub fn supplementary_operator(spec: &TransportSpec<'_>) -> Result<CMat> {
    if spec.projectors.is_empty() {
        return Err(Error::InvalidInput("no projectors in transport spec".into()));
    }
    if spec.duration < 0.0 {
        return Err(Error::InvalidInput(format!(
            "duration must be >= 0, got {}",
            spec.duration
        )));
    }
    let n = spec.projectors[0].nrows();
    for (i, p) in spec.projectors.iter().enumerate() {
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.nrows(),
            });
        }
        for q in spec.projectors.iter().skip(i + 1) {
            if mat::max_abs(&p.dot(q)) > PROJECTOR_TOL {
                return Err(Error::InvalidInput(
                    "transport projectors are not mutually orthogonal".into(),
                ));
            }
        }
    }
    let mut v = mat::zeros(n);
    for p in spec.projectors {
        let block = match spec.generator {
            TransportGenerator::Constant(h) => {
                transport_block_closed(p, h, spec.duration)?
            }
            TransportGenerator::Sampled(g, steps) => {
                transport_block_ordered(p, g, spec.duration, steps)?
            }
        };
        v = v + block;
    }
    Ok(v)
}

/// Cyclic-shift unitary of an ordered orthonormal basis:
/// W = |psi_2><psi_1| + ... + |psi_N><psi_{N-1}| + |psi_1><psi_N|,
/// so W maps psi_i to psi_{i+1} with wraparound and W^N = 1.
pub fn permutation_unitary(basis: &[CVec]) -> Result<CMat> {
    if basis.is_empty() {
        return Err(Error::InvalidInput("empty basis".into()));
    }
    let dim = basis[0].len();
    if basis.len() != dim {
        return Err(Error::InvalidInput(format!(
            "permutation unitary needs a complete basis: {} vectors in dimension {dim}",
            basis.len()
        )));
    }
    check_orthonormal(basis)?;
    let n = basis.len();
    let mut w = mat::zeros(dim);
    for i in 0..n {
        let next = (i + 1) % n;
        w = w + mat::outer(&basis[next], &basis[i]);
    }
    Ok(w)
}

fn check_orthonormal(vectors: &[CVec]) -> Result<()> {
    let mut dev = 0.0f64;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let g: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            let target = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            dev = dev.max((g - target).norm());
        }
    }
    if dev > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal { deviation: dev });
    }
    Ok(())
}

/// One member of a noninterfering family: the density operator together with
/// its (conjugated) eigenspace structure.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub rho: DensityOperator,
    pub eigenspaces: EigenspaceFamily,
}

/// Build the noninterfering family rho_1..rho_count from a base eigenspace
/// decomposition and an ordered basis: member n carries the base weights on
/// the projectors conjugated by W^{n-1}.
///
/// The base projectors must each span a subset of the supplied basis
/// (`rho_1` diagonal in it); every member then shares the spectrum of the
/// base state.
pub fn noninterfering_family(
    base: &EigenspaceFamily,
    basis: &[CVec],
    count: usize,
) -> Result<Vec<FamilyMember>> {
    if base.is_empty() {
        return Err(Error::InvalidInput("empty eigenspace family".into()));
    }
    let dim = base.dim();
    if count < 1 || count > basis.len() {
        return Err(Error::InvalidInput(format!(
            "family size {count} not in 1..={}",
            basis.len()
        )));
    }
    if basis.len() != dim {
        return Err(Error::InvalidInput(format!(
            "basis has {} vectors, state dimension is {dim}",
            basis.len()
        )));
    }
    // each basis vector must sit inside exactly one eigenspace
    let mut worst = 0.0f64;
    for psi in basis {
        let best = base
            .projectors
            .iter()
            .map(|p| {
                let r = p.dot(psi) - psi;
                r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    if worst > ORTHONORMAL_TOL {
        return Err(Error::BasisMismatch { deviation: worst });
    }

    let w = permutation_unitary(basis)?;
    let w_dag = mat::dagger(&w);

    let mut members = Vec::with_capacity(count);
    let mut projectors: Vec<CMat> = base.projectors.clone();
    for n in 0..count {
        if n > 0 {
            for p in projectors.iter_mut() {
                *p = w.dot(p).dot(&w_dag);
            }
        }
        let eigenspaces = EigenspaceFamily {
            projectors: projectors.clone(),
            weights: base.weights.clone(),
            multiplicities: base.multiplicities.clone(),
        };
        let rho = DensityOperator::new(eigenspaces.reconstruct())?;
        members.push(FamilyMember { rho, eigenspaces });
    }
    Ok(members)
}

/// Which reading of the order-l trace functional to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpForm {
    /// Product of the l factors inside the trace (the gauge-invariant
    /// construction; default).
    Product,
    /// Literal sum of the l factors inside the trace, kept for comparison.
    Sum,
}

impl std::str::FromStr for GpForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(GpForm::Product),
            "sum" => Ok(GpForm::Sum),
            other => Err(Error::InvalidInput(format!(
                "unknown form '{other}' (expected 'product' or 'sum')"
            ))),
        }
    }
}

/// Knobs shared by the phase-factor evaluations.
#[derive(Debug, Clone, Copy)]
pub struct GpOptions {
    /// Product (default) or literal-sum reading of the order-l functional.
    pub form: GpForm,
    /// When set, transport blocks use the ordered-exponential discretization
    /// with this many steps instead of the closed form.
    pub steps: Option<usize>,
    /// Degeneracy clustering tolerance for density spectra.
    pub cluster_tol: f64,
    /// Trace magnitudes below this are nodal points.
    pub nodal_tol: f64,
    /// Eigenvalue clamp for density-operator roots.
    pub clamp_tol: f64,
}

impl Default for GpOptions {
    fn default() -> Self {
        Self {
            form: GpForm::Product,
            steps: None,
            cluster_tol: DEFAULT_DENSITY_CLUSTER_TOL,
            nodal_tol: DEFAULT_NODAL_TOL,
            clamp_tol: DEFAULT_CLAMP_TOL,
        }
    }
}

fn supplementary_for(
    projectors: &[CMat],
    h: &CMat,
    tau: f64,
    steps: Option<usize>,
) -> Result<CMat> {
    match steps {
        None => supplementary_operator(&TransportSpec {
            projectors,
            generator: TransportGenerator::Constant(h),
            duration: tau,
        }),
        Some(steps) => {
            // constant Hamiltonian: U† dU/dt = -i H at every time
            let minus_i_h = h.mapv(|z| z * C64::new(0.0, -1.0));
            let gen = move |_t: f64| minus_i_h.clone();
            supplementary_operator(&TransportSpec {
                projectors,
                generator: TransportGenerator::Sampled(&gen, steps),
                duration: tau,
            })
        }
    }
}

/// Mixed-state geometric phase of one cyclic evolution:
/// Phi[ Tr( U(tau) V(tau) rho ) ] with V built from the eigenprojectors of
/// rho under the Hamiltonian h.
pub fn diagonal_gp(
    rho: &DensityOperator,
    h: &CMat,
    tau: f64,
    opts: &GpOptions,
) -> Result<PhaseFactor> {
    let family = decompose_density(rho, opts.cluster_tol)?;
    let v = supplementary_for(&family.projectors, h, tau, opts.steps)?;
    let u = unitary_exp(h, tau)?;
    let z = mat::trace(&u.dot(&v).dot(rho.matrix()));
    phase_of(z, opts.nodal_tol)
}

/// Order-l off-diagonal geometric phase of a noninterfering family:
/// Phi[ Tr( prod_a U(tau) V_{j_a}(tau) rho_{j_a}^{1/l} ) ] over the listed
/// member indices (zero-based), composed in ascending position order.
/// `GpForm::Sum` evaluates the summation reading instead. For l = 1 both
/// coincide with [`diagonal_gp`].
pub fn off_diagonal_gp(
    family: &[FamilyMember],
    indices: &[usize],
    h: &CMat,
    tau: f64,
    opts: &GpOptions,
) -> Result<PhaseFactor> {
    let l = indices.len();
    if l == 0 {
        return Err(Error::InvalidInput("need at least one family index".into()));
    }
    for (i, &a) in indices.iter().enumerate() {
        if a >= family.len() {
            return Err(Error::IndexOutOfRange {
                index: a,
                len: family.len(),
            });
        }
        if indices[..i].contains(&a) {
            return Err(Error::InvalidInput(format!(
                "family indices must be distinct, {a} repeats"
            )));
        }
    }

    let u = unitary_exp(h, tau)?;
    let dim = family[indices[0]].rho.dim();
    let mut product = mat::identity(dim);
    let mut sum = mat::zeros(dim);
    for &a in indices {
        let member = &family[a];
        let v = supplementary_for(&member.eigenspaces.projectors, h, tau, opts.steps)?;
        let root = if l == 1 {
            member.rho.matrix().clone()
        } else {
            psd_root(member.rho.matrix(), l as u32, opts.clamp_tol)?
        };
        let factor = u.dot(&v).dot(&root);
        match opts.form {
            GpForm::Product => product = product.dot(&factor),
            GpForm::Sum => sum = sum + factor,
        }
    }
    let z = match opts.form {
        GpForm::Product => mat::trace(&product),
        GpForm::Sum => mat::trace(&sum),
    };
    phase_of(z, opts.nodal_tol)
}
