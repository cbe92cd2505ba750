//! Cross-module checks through the public API.

use gsschannel::fock_stats::photon_number_distribution;
use gsschannel::oracle::{self, IntegratorConfig, Method};
use gsschannel::phase_space::{auto_grid, covariance_from_grid, WignerForm};
use gsschannel::{evolve, ChannelParams, Complex64, Execution, GaussianParams};

fn state(re: f64, im: f64, r: f64, phi: f64, nu: f64) -> GaussianParams {
    GaussianParams::new(Complex64::new(re, im), r, phi, nu).unwrap()
}

#[test]
fn exact_propagator_tracks_closed_form() {
    let s0 = state(0.7, -0.4, 0.5, 2.2, 0.3);
    let ch = ChannelParams::new(1.3, 0.2, 0.4).unwrap();
    let rho0 = oracle::build_initial(&s0, 80).unwrap();
    let mut cfg = IntegratorConfig::new(&ch, 6.0);
    cfg.method = Method::LiouvillianExpm;
    let times = [1.0, 2.5, 6.0];
    for (t, rho) in times
        .iter()
        .zip(oracle::evolve_numeric_sampled(&rho0, &ch, &cfg, &times).unwrap())
    {
        let want = evolve(&s0, &ch, *t).unwrap().params;
        let got = rho.moments().reconstruct();
        assert!((got.alpha - want.alpha()).norm() < 1e-9);
        assert!((got.nu - want.nu()).abs() < 1e-9);
        assert!((got.r - want.r()).abs() < 1e-9);
        // φ(t) = φ0 − 2ωt, compared modulo 2π
        let dphi = (got.phi - want.phi()).rem_euclid(std::f64::consts::TAU);
        assert!(dphi.min(std::f64::consts::TAU - dphi) < 1e-8);
        assert!((rho.entropy().unwrap() - want.entropy()).abs() < 1e-8);
        let p = photon_number_distribution(&want, 40);
        for (n, q) in rho.populations().iter().take(41).enumerate() {
            assert!((p.probs[n] - q).abs() < 1e-10);
        }
    }
}

#[test]
fn wigner_grid_follows_evolution() {
    let s0 = state(1.0, 0.5, 0.8, 0.0, 0.2);
    let ch = ChannelParams::new(1.0, 0.05, 0.3).unwrap();
    for t in [0.0, 1.0, 4.0] {
        let s = evolve(&s0, &ch, t).unwrap().params;
        let want = s.covariance();
        let got = covariance_from_grid(&auto_grid(&s, WignerForm::Gaussian, Execution::Parallel).unwrap());
        assert!((got.sigma_qp - want.sigma_qp).abs() < 1e-6);
        assert!((got.x0 - want.x0).abs() < 1e-6 && (got.p0 - want.p0).abs() < 1e-6);
    }
}

#[test]
fn execution_modes_agree_bitwise() {
    let s = state(0.3, 0.3, 1.1, 0.4, 0.6);
    let a = auto_grid(&s, WignerForm::Gaussian, Execution::Sequential).unwrap();
    let b = auto_grid(&s, WignerForm::Gaussian, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}
