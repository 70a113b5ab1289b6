//! The hydrogen hyperfine two-spin model: coupling Hamiltonian, Zeeman
//! interaction, canonical eigenbasis, cyclic evolution period and the
//! closed-form mixedness of its thermal state.
//!
//! Conventions: hbar = k_B = 1; tensor products put the nuclear spin first,
//! so the basis order is |00>, |01>, |10>, |11> with the first digit the
//! nucleus. The field couplings C (electron) and D (nucleus) are primitive
//! energy-scale inputs.

use crate::error::{Error, Result};
use crate::mat::{self, C64, CMat, CVec, kron};
use crate::quantum::spin_half;

/// Model parameters with hbar = k_B = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Hyperfine coupling energy, nonzero.
    pub j: f64,
    /// Electron Zeeman energy scale (g mu_B B).
    pub c: f64,
    /// Nuclear Zeeman energy scale; negligible for hydrogen, default 0.
    pub d: f64,
    /// Temperature, strictly positive.
    pub t: f64,
    /// Cycle index of the evolution period, >= 1.
    pub n: u32,
}

impl ModelParams {
    pub fn new(j: f64, c: f64, t: f64) -> Result<Self> {
        let p = Self {
            j,
            c,
            d: 0.0,
            t,
            n: 1,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j.is_finite() && self.c.is_finite() && self.d.is_finite()) {
            return Err(Error::InvalidInput("non-finite model parameter".into()));
        }
        if self.j == 0.0 {
            return Err(Error::InvalidInput("coupling J must be nonzero".into()));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "temperature must be positive and finite, got {}",
                self.t
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidInput("cycle index n must be >= 1".into()));
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.t
    }

    /// H0 + H_I for these parameters.
    pub fn total_hamiltonian(&self) -> CMat {
        hyperfine_hamiltonian(self.j) + zeeman_term(self.c, self.d)
    }
}

/// H0 = J (Ix ⊗ Sx + Iy ⊗ Sy + Iz ⊗ Sz), the spin-spin contact coupling.
///
/// In the computational basis this is J/4 on the diagonal (+,-,-,+) with a
/// J/2 coupling between |01> and |10>; its spectrum is {J/4 (x3), -3J/4}.
pub fn hyperfine_hamiltonian(j: f64) -> CMat {
    let s = spin_half();
    let h = kron(&s.sx, &s.sx) + kron(&s.sy, &s.sy) + kron(&s.sz, &s.sz);
    h.mapv(|z| z * j)
}

/// H_I = C (1 ⊗ Sz) + D (Iz ⊗ 1), the external-field interaction.
pub fn zeeman_term(c: f64, d: f64) -> CMat {
    let s = spin_half();
    let electron = kron(&mat::identity(2), &s.sz).mapv(|z| z * c);
    let nucleus = kron(&s.sz, &mat::identity(2)).mapv(|z| z * d);
    electron + nucleus
}

/// The ordered eigenbasis of H0: the three symmetric (triplet) states
/// followed by the antisymmetric singlet,
/// phi1 = |00>, phi2 = (|01>+|10>)/sqrt2, phi3 = |11>, phi4 = (|01>-|10>)/sqrt2.
pub fn canonical_eigenbasis() -> [CVec; 4] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [
        ndarray::arr1(&[one, z, z, z]),
        ndarray::arr1(&[z, r, r, z]),
        ndarray::arr1(&[z, z, z, one]),
        ndarray::arr1(&[z, r, -r, z]),
    ]
}

/// Cyclic period tau = 2 n pi / sqrt(C^2 + J^2) after which the thermal
/// state returns to itself under H0 + H_I.
pub fn period(params: &ModelParams) -> Result<f64> {
    let omega_sq = params.c * params.c + params.j * params.j;
    if omega_sq <= 0.0 {
        return Err(Error::DegenerateParameters);
    }
    Ok(2.0 * f64::from(params.n) * std::f64::consts::PI / omega_sq.sqrt())
}

/// Closed-form mixedness of the thermal state,
/// V = 6 (1 + e^{J/T}) / (3 + e^{J/T})^2, with an asymptotic guard for
/// J/T large enough that e^{J/T} would overflow.
pub fn mixedness_closed_form(j: f64, t: f64) -> f64 {
    debug_assert!(t > 0.0);
    let r = j / t;
    if r > 700.0 {
        return 6.0 * (-r).exp();
    }
    let x = r.exp();
    6.0 * (1.0 + x) / ((3.0 + x) * (3.0 + x))
}
