//! Photon-number distribution of a displaced squeezed thermal state.
//!
//! `P_n = πQ(0) (−1)^n 2^{−2n} (Ã+|B̃|)^n Σ_k [(Ã−|B̃|)/(Ã+|B̃|)]^k / (k!(n−k)!)
//!        · H_{2k}[i Im(C̃ e^{−iφ/2})/√(Ã−|B̃|)] · H_{2n−2k}[i Re(C̃ e^{−iφ/2})/√(Ã+|B̃|)]`
//!
//! Each summand is regrouped as `f_k(Ã−|B̃|) f_{n−k}(Ã+|B̃|)` with the
//! normalized polynomials of [`scaled_even_hermite`], so pure states (where
//! `Ã−|B̃|` or `Ã+|B̃|` vanish) need no special casing and factorials never
//! overflow.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianParams;
use crate::special::scaled_even_hermite;
pub use crate::special::{hermite_complex, laguerre};

/// Values below this (before clamping) indicate a numerical problem.
pub const NEGATIVE_TOL: f64 = 1e-12;

/// Tail mass at which [`photon_number_distribution_adaptive`] stops growing.
pub const ADAPTIVE_TAIL_TOL: f64 = 1e-10;

/// Truncation at which the adaptive distribution gives up.
pub const ADAPTIVE_MAX_N: usize = 8192;

/// Exponent applied to `(1+A)² − |B|²` in `πQ(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QZeroExponent {
    /// `+½` as typeset. Kept only to demonstrate that it breaks normalization.
    Printed,
    /// `−½`, which makes the thermal limit geometric.
    #[default]
    Repaired,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PndCoefficients {
    pub a: f64,
    pub b: Complex64,
    pub c: Complex64,
    pub a_tilde: f64,
    pub b_tilde: Complex64,
    pub c_tilde: Complex64,
    /// `πQ(0)`, the vacuum overlap `⟨0|ρ|0⟩`.
    pub q0: f64,
}

/// Coefficients with the repaired `πQ(0)` exponent.
pub fn pnd_coefficients(s: &GaussianParams) -> PndCoefficients {
    pnd_coefficients_with(s, QZeroExponent::Repaired)
}

/// `A = ν + (2ν+1) sinh² r`, `B = −(2ν+1) e^{iφ} sinh r cosh r`, `C = α`,
/// the tilde triple over `ν² + (ν+½)(1 + cosh 2r)` (with `(ν+½)` in the
/// numerator of `B̃`) and `πQ(0)`.
pub fn pnd_coefficients_with(s: &GaussianParams, exponent: QZeroExponent) -> PndCoefficients {
    let nu = s.nu();
    let (sh, ch) = (s.r().sinh(), s.r().cosh());
    let (sh2, ch2) = ((2.0 * s.r()).sinh(), (2.0 * s.r()).cosh());
    let e_phi = Complex64::from_polar(1.0, s.phi());
    let c = s.alpha();

    let a = nu + (2.0 * nu + 1.0) * sh * sh;
    let b = -(2.0 * nu + 1.0) * e_phi * sh * ch;
    let den = nu * nu + (nu + 0.5) * (1.0 + ch2);
    let a_tilde = nu * (nu + 1.0) / den;
    let b_tilde = -e_phi * (nu + 0.5) * sh2 / den;
    let c_tilde = (c * (0.5 + (nu + 0.5) * ch2) - c.conj() * e_phi * (nu + 0.5) * sh2) / den;

    let gram = (1.0 + a) * (1.0 + a) - b.norm_sqr();
    let exponent = match exponent {
        QZeroExponent::Printed => 0.5,
        QZeroExponent::Repaired => -0.5,
    };
    let quad = ((1.0 + a) * c.norm_sqr() + 0.5 * (b * c.conj() * c.conj() + b.conj() * c * c).re) / gram;
    let q0 = gram.powf(exponent) * (-quad).exp();

    PndCoefficients {
        a,
        b,
        c,
        a_tilde,
        b_tilde,
        c_tilde,
        q0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDistribution {
    /// `P_0 ..= P_{n_max}`, clamped to `[0, 1]`.
    pub probs: Vec<f64>,
    pub n_max: usize,
    /// `1 − Σ probs`.
    pub tail_mass: f64,
    /// Smallest value before clamping.
    pub min_unclamped: f64,
    /// Largest imaginary part discarded from the complex evaluation.
    pub imag_residue: f64,
}

impl PhotonDistribution {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }
}

/// Raw `P_n` values (real part, unclamped) and the largest imaginary
/// residue.
pub fn photon_number_raw(s: &GaussianParams, n_max: usize, exponent: QZeroExponent) -> (Vec<f64>, f64) {
    let co = pnd_coefficients_with(s, exponent);
    let b_abs = co.b_tilde.norm();
    let (plus, minus) = (co.a_tilde + b_abs, co.a_tilde - b_abs);
    let w = co.c_tilde * Complex64::from_polar(1.0, -0.5 * s.phi());
    let fy = scaled_even_hermite(Complex64::new(0.0, w.im), minus, n_max);
    let fx = scaled_even_hermite(Complex64::new(0.0, w.re), plus, n_max);

    let mut imag = 0.0f64;
    let probs = (0..=n_max)
        .map(|n| {
            // summands k and n − k are added first so parity cancellations are exact
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..=n / 2 {
                let j = n - k;
                sum += if k == j {
                    fy[k] * fx[j]
                } else {
                    fy[k] * fx[j] + fy[j] * fx[k]
                };
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let p = co.q0 * sign * sum;
            imag = imag.max(p.im.abs());
            p.re
        })
        .collect();
    (probs, imag)
}

/// `P_0 ..= P_{n_max}`.
pub fn photon_number_distribution(s: &GaussianParams, n_max: usize) -> PhotonDistribution {
    let (raw, imag_residue) = photon_number_raw(s, n_max, QZeroExponent::Repaired);
    let min_unclamped = raw.iter().copied().fold(f64::INFINITY, f64::min);
    // `+ 0.0` turns the −0 of exact odd-n zeros into +0
    let probs: Vec<f64> = raw.into_iter().map(|p| p.clamp(0.0, 1.0) + 0.0).collect();
    let tail_mass = 1.0 - probs.iter().sum::<f64>();
    PhotonDistribution {
        probs,
        n_max,
        tail_mass,
        min_unclamped,
        imag_residue,
    }
}

/// Signed-integer entry point for callers that take `n_max` from user input.
pub fn photon_number_distribution_checked(s: &GaussianParams, n_max: i64) -> Result<PhotonDistribution> {
    if n_max < 0 {
        return Err(Error::Domain {
            name: "n_max",
            value: n_max as f64,
            expected: ">= 0",
        });
    }
    Ok(photon_number_distribution(s, n_max as usize))
}

/// Doubles the truncation until the tail mass drops below
/// [`ADAPTIVE_TAIL_TOL`] (or [`ADAPTIVE_MAX_N`] is reached).
pub fn photon_number_distribution_adaptive(s: &GaussianParams) -> PhotonDistribution {
    let mean = s.mean_photon_number();
    let mut n_max = ((4.0 * mean).ceil() as usize + 32)
        .next_power_of_two()
        .min(ADAPTIVE_MAX_N);
    loop {
        let d = photon_number_distribution(s, n_max);
        if d.tail_mass < ADAPTIVE_TAIL_TOL || n_max >= ADAPTIVE_MAX_N {
            return d;
        }
        n_max = (2 * n_max).min(ADAPTIVE_MAX_N);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationScore {
    /// Strict interior local minima of `P_n` below the 0.999 mass index.
    pub count: usize,
    /// Largest relative dip `(lower neighbouring peak − valley) / lower
    /// neighbouring peak`; 1 for exact zeros, 0 when there are no minima.
    pub depth: f64,
}

/// Counts the valleys of a photon-number distribution.
pub fn oscillation_score(d: &PhotonDistribution) -> OscillationScore {
    let p = &d.probs;
    let mut cum = 0.0;
    let n_eff = p
        .iter()
        .position(|&x| {
            cum += x;
            cum >= 0.999
        })
        .unwrap_or(p.len().saturating_sub(1));
    let mut count = 0;
    let mut depth = 0.0f64;
    for n in 1..n_eff {
        if !(p[n] < p[n - 1] && p[n] < p[n + 1]) {
            continue;
        }
        count += 1;
        let mut left = n - 1;
        while left > 0 && p[left - 1] > p[left] {
            left -= 1;
        }
        let mut right = n + 1;
        while right + 1 < p.len() && p[right + 1] > p[right] {
            right += 1;
        }
        let peak = p[left].min(p[right]);
        depth = depth.max((peak - p[n]) / peak);
    }
    OscillationScore { count, depth }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{characteristic_time_closed, evolve, ChannelParams};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn state(re: f64, im: f64, r: f64, phi: f64, nu: f64) -> GaussianParams {
        GaussianParams::new(Complex64::new(re, im), r, phi, nu).unwrap()
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    #[test]
    fn thermal_coefficients() {
        let co = pnd_coefficients(&GaussianParams::thermal(1.7).unwrap());
        assert_relative_eq!(co.a, 1.7);
        assert_eq!(co.b, Complex64::new(0.0, 0.0));
        assert_relative_eq!(co.a_tilde, 1.7 / 2.7, max_relative = 1e-15);
        assert_eq!(co.b_tilde.norm(), 0.0);
        assert_eq!(co.c_tilde.norm(), 0.0);
        assert_relative_eq!(co.q0, 1.0 / 2.7, max_relative = 1e-15);
    }

    #[test]
    fn squeezed_vacuum_coefficients() {
        let co = pnd_coefficients(&state(0.0, 0.0, 0.8, 1.1, 0.0));
        assert_eq!(co.a_tilde, 0.0);
        assert_relative_eq!(co.b_tilde.norm(), 0.8f64.tanh(), max_relative = 1e-15);
    }

    #[test]
    fn coherent_coefficients() {
        let alpha = Complex64::new(1.2, -0.4);
        let co = pnd_coefficients(&GaussianParams::coherent(alpha).unwrap());
        assert_eq!((co.a, co.a_tilde, co.b_tilde.norm()), (0.0, 0.0, 0.0));
        assert!((co.c_tilde - alpha).norm() < 1e-15);
        assert_relative_eq!(co.q0, (-alpha.norm_sqr()).exp(), max_relative = 1e-15);
    }

    #[test]
    fn thermal_is_geometric() {
        let d = photon_number_distribution(&GaussianParams::thermal(1.0).unwrap(), 60);
        for (n, p) in d.probs.iter().enumerate() {
            assert!((p - 0.5f64.powi(n as i32 + 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn coherent_is_poisson() {
        let d = photon_number_distribution(&GaussianParams::coherent(Complex64::new(2.0, 0.0)).unwrap(), 60);
        for (n, p) in d.probs.iter().enumerate() {
            let poisson = (-4.0f64).exp() * 4f64.powi(n as i32) / factorial(n);
            assert!((p - poisson).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn squeezed_vacuum_parity() {
        let d = photon_number_distribution(&state(0.0, 0.0, 1.0, 0.3, 0.0), 80);
        for n in (1..80).step_by(2) {
            assert_eq!(d.probs[n], 0.0);
        }
        // P_{2m} = tanh^{2m} r (2m)! / (4^m m!² cosh r)
        for m in 0..20 {
            let expected = 1f64.tanh().powi(2 * m as i32) * factorial(2 * m)
                / (4f64.powi(m as i32) * factorial(m).powi(2) * 1f64.cosh());
            assert!((d.probs[2 * m] - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn printed_q0_exponent_breaks_normalization() {
        let th = GaussianParams::thermal(1.0).unwrap();
        let (printed, _) = photon_number_raw(&th, 40, QZeroExponent::Printed);
        let (repaired, _) = photon_number_raw(&th, 40, QZeroExponent::Repaired);
        let sp: f64 = printed.iter().sum();
        let sr: f64 = repaired.iter().sum();
        assert!((sr - 1.0).abs() < 1e-10);
        // P_n = ν^n/(ν+1)^{n−1} sums to (1+ν)² = 4
        assert!((sp - 4.0).abs() < 1e-10);
    }

    #[test]
    fn negative_n_max_rejected() {
        assert!(photon_number_distribution_checked(&GaussianParams::vacuum(), -1).is_err());
        assert_eq!(
            photon_number_distribution_checked(&GaussianParams::vacuum(), 0)
                .unwrap()
                .probs,
            vec![1.0]
        );
    }

    #[test]
    fn oscillation_scores() {
        let thermal = photon_number_distribution_adaptive(&GaussianParams::thermal(3.0).unwrap());
        assert_eq!(oscillation_score(&thermal), OscillationScore { count: 0, depth: 0.0 });

        let sq = photon_number_distribution_adaptive(&state(0.0, 0.0, 1.0, 0.0, 0.0));
        let score = oscillation_score(&sq);
        assert!(score.count >= 5);
        assert_eq!(score.depth, 1.0);
    }

    #[test]
    fn oscillations_gone_after_twice_tc() {
        let s0 = state(0.0, 0.0, 1.0, 0.0, 0.0);
        let ch = ChannelParams::new(0.0, 0.1, 0.0).unwrap();
        let tc = characteristic_time_closed(&s0, &ch).unwrap();
        let st = evolve(&s0, &ch, 2.0 * tc).unwrap().params;
        let score = oscillation_score(&photon_number_distribution_adaptive(&st));
        assert_eq!(score.count, 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn normalized_and_consistent(
            r in 0.0..1.5f64, phi in -3.1..3.1f64, nu in 0.0..5.0f64,
            re in -2.5..2.5f64, im in -2.5..2.5f64,
        ) {
            prop_assume!(re * re + im * im <= 6.25);
            let s = state(re, im, r, phi, nu);
            let d = photon_number_distribution_adaptive(&s);
            prop_assert!((d.total() - 1.0).abs() < 1e-8, "total {}", d.total());
            prop_assert!(d.min_unclamped >= -1e-10);
            prop_assert!(d.imag_residue < 1e-10);
            prop_assert!((d.mean() - s.mean_photon_number()).abs() < 1e-6);
        }
    }
}
