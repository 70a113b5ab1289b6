//! End-to-end checks of the hydrogen-model phase factors against closed
//! forms derived by hand from the model's block structure.
//!
//! In the ordered eigenbasis (triplet phi1..phi3, singlet phi4) the total
//! Hamiltonian is block diagonal with a single 2x2 block coupling phi2 and
//! phi4. Working out U(tau) and the transport blocks analytically for
//! tau = 2 pi / sqrt(C^2+J^2) gives, with theta = pi J / sqrt(C^2+J^2),
//! x = e^{J/T}, lam_t = 1/(3+x), lam_s = x/(3+x):
//!
//!   z1 = 2 lam_t - lam_t e^{i theta} - lam_s e^{-i theta}
//!   z2 = lam_t (1 - e^{i theta}) + sqrt(lam_t lam_s) (1 - e^{-i theta})
//!
//! for the order-1 phase of the base state and the order-2 phase of the
//! family pair (1, 2) in product form. These expressions never touch the
//! matrix pipeline, so agreement validates the whole chain: Gibbs state,
//! clustering, permutation family, transport blocks and trace functional.

use num_complex::Complex64 as C64;
use offgp_core::holonomy::{
    GpOptions, diagonal_gp, noninterfering_family, off_diagonal_gp,
};
use offgp_core::hydrogen::{
    ModelParams, canonical_eigenbasis, hyperfine_hamiltonian, period,
};
use offgp_core::quantum::{decompose_density, thermal_state};

struct ClosedForm {
    z1: C64,
    z2: C64,
}

fn closed_form(j: f64, c: f64, t: f64) -> ClosedForm {
    let omega = (c * c + j * j).sqrt();
    let theta = std::f64::consts::PI * j / omega;
    let x = (j / t).exp();
    let lam_t = 1.0 / (3.0 + x);
    let lam_s = x / (3.0 + x);
    let eip = C64::from_polar(1.0, theta);
    let eim = C64::from_polar(1.0, -theta);
    let one = C64::new(1.0, 0.0);
    let z1 = C64::new(2.0 * lam_t, 0.0) - lam_t * eip - lam_s * eim;
    let z2 = lam_t * (one - eip) + (lam_t * lam_s).sqrt() * (one - eim);
    ClosedForm { z1, z2 }
}

fn phases_via_library(j: f64, c: f64, t: f64) -> (C64, f64, C64, f64) {
    let params = ModelParams::new(j, c, t).unwrap();
    let h = params.total_hamiltonian();
    let tau = period(&params).unwrap();
    let rho0 = thermal_state(&hyperfine_hamiltonian(j), params.beta()).unwrap();
    let opts = GpOptions::default();

    let gp1 = diagonal_gp(&rho0, &h, tau, &opts).unwrap();

    let base = decompose_density(&rho0, opts.cluster_tol).unwrap();
    let basis = canonical_eigenbasis();
    let family = noninterfering_family(&base, &basis, 4).unwrap();
    let gp2 = off_diagonal_gp(&family, &[0, 1], &h, tau, &opts).unwrap();

    (
        gp1.factor(),
        gp1.magnitude_raw(),
        gp2.factor(),
        gp2.magnitude_raw(),
    )
}

#[test]
fn library_matches_closed_form_over_parameter_grid() {
    for j in [0.5, 1.0, 2.0] {
        for c in [0.3, 1.0, 2.0, 3.0] {
            for t in [0.4, 1.0, 2.0, 5.0] {
                let cf = closed_form(j, c, t);
                let (f1, m1, f2, m2) = phases_via_library(j, c, t);
                let e1 = (f1 - cf.z1 / cf.z1.norm()).norm();
                let e2 = (f2 - cf.z2 / cf.z2.norm()).norm();
                assert!(e1 <= 1e-10, "order 1 J={j} C={c} T={t}: {e1}");
                assert!(e2 <= 1e-10, "order 2 J={j} C={c} T={t}: {e2}");
                assert!((m1 - cf.z1.norm()).abs() <= 1e-10);
                assert!((m2 - cf.z2.norm()).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn frozen_reference_values() {
    // closed form evaluated at J=1, C=1: theta = pi/sqrt2
    let (f1, _, f2, _) = phases_via_library(1.0, 1.0, 0.5);
    assert!((f1.arg() - 0.622647867133).abs() < 1e-9);
    assert!((f2.arg() - 0.225117364194).abs() < 1e-9);
    let (f1, _, f2, _) = phases_via_library(1.0, 1.0, 5.0);
    assert!((f1.arg() - 0.052609753565).abs() < 1e-9);
    assert!((f2.arg() - 0.024751463254).abs() < 1e-9);
}

#[test]
fn increasing_temperature_suppresses_both_orders() {
    for c in [1.0, 2.0, 3.0] {
        let (f1_cold, _, f2_cold, _) = phases_via_library(1.0, c, 0.5);
        let (f1_hot, _, f2_hot, _) = phases_via_library(1.0, c, 5.0);
        assert!(
            f1_hot.arg().abs() < f1_cold.arg().abs(),
            "order 1 not suppressed at C={c}"
        );
        assert!(
            f2_hot.arg().abs() < f2_cold.arg().abs(),
            "order 2 not suppressed at C={c}"
        );
    }
}
