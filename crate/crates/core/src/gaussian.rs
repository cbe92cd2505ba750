//! State model for single-mode Gaussian states: parameters, covariance,
//! entropy.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance below 1/4 accepted by [`nu_from_determinant`].
pub const UNCERTAINTY_TOL: f64 = 1e-9;

/// A displaced squeezed thermal state `D(α) S(r, φ) ρ_ν S†(r, φ) D†(α)`.
///
/// `S(r, φ) = exp(½ r e^{iφ} a†² − ½ r e^{−iφ} a²)` and `ρ_ν` is the thermal
/// state with mean occupation `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    alpha: Complex64,
    r: f64,
    phi: f64,
    nu: f64,
}

impl GaussianParams {
    /// Validates the parameters and reduces `phi` to `(−π, π]`.
    pub fn new(alpha: Complex64, r: f64, phi: f64, nu: f64) -> Result<Self> {
        Ok(Self::new_unreduced(alpha, r, phi, nu)?.canonical())
    }

    /// Same checks as [`GaussianParams::new`] but keeps `phi` as given.
    pub fn new_unreduced(alpha: Complex64, r: f64, phi: f64, nu: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha.norm(),
                expected: "finite",
            });
        }
        check_nonneg("r", r)?;
        check_nonneg("nu", nu)?;
        if !phi.is_finite() {
            return Err(Error::Domain {
                name: "phi",
                value: phi,
                expected: "finite",
            });
        }
        Ok(Self { alpha, r, phi, nu })
    }

    pub fn vacuum() -> Self {
        Self {
            alpha: Complex64::new(0.0, 0.0),
            r: 0.0,
            phi: 0.0,
            nu: 0.0,
        }
    }

    pub fn thermal(nu: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), 0.0, 0.0, nu)
    }

    pub fn coherent(alpha: Complex64) -> Result<Self> {
        Self::new(alpha, 0.0, 0.0, 0.0)
    }

    pub fn squeezed_vacuum(r: f64, phi: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), r, phi, 0.0)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn is_pure(&self) -> bool {
        self.nu == 0.0
    }

    /// Copy with `phi` reduced to `(−π, π]`.
    pub fn canonical(&self) -> Self {
        Self {
            phi: reduce_phase(self.phi),
            ..*self
        }
    }

    pub fn with_alpha(&self, alpha: Complex64) -> Self {
        Self { alpha, ..*self }
    }

    /// Quadrature covariance matrix and means.
    pub fn covariance(&self) -> CovarianceMatrix {
        let half = self.nu + 0.5;
        let (sh2, ch2) = ((2.0 * self.r).sinh(), (2.0 * self.r).cosh());
        let (sphi, cphi) = self.phi.sin_cos();
        CovarianceMatrix {
            sigma_qq: half * (ch2 + sh2 * cphi),
            sigma_pp: half * (ch2 - sh2 * cphi),
            sigma_qp: half * sphi * sh2,
            x0: SQRT_2 * self.alpha.re,
            p0: SQRT_2 * self.alpha.im,
        }
    }

    /// `⟨a†a⟩ = ν + (2ν + 1) sinh² r + |α|²`.
    pub fn mean_photon_number(&self) -> f64 {
        let sh = self.r.sinh();
        self.nu + (2.0 * self.nu + 1.0) * sh * sh + self.alpha.norm_sqr()
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> f64 {
        entropy_unchecked(self.nu)
    }
}

fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: "finite and >= 0",
        })
    }
}

/// Maps an angle to `(−π, π]`.
pub fn reduce_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Second moments `σ_xy = ½⟨{x, y}⟩ − ⟨x⟩⟨y⟩` and first moments of the
/// quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_qp: f64,
    pub x0: f64,
    pub p0: f64,
}

impl CovarianceMatrix {
    pub fn determinant(&self) -> f64 {
        self.sigma_qq * self.sigma_pp - self.sigma_qp * self.sigma_qp
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.sigma_qq + self.sigma_pp);
        let half_diff = 0.5 * (self.sigma_qq - self.sigma_pp);
        let radius = half_diff.hypot(self.sigma_qp);
        (mean - radius, mean + radius)
    }

    /// Angle of the major axis, measured from the x axis, in `(−π/2, π/2]`.
    pub fn major_axis_angle(&self) -> f64 {
        0.5 * (2.0 * self.sigma_qp).atan2(self.sigma_qq - self.sigma_pp)
    }
}

/// `(ν + 1) ln(ν + 1) − ν ln ν`, with the pure-state value 0 at `ν = 0`.
pub fn entropy(nu: f64) -> Result<f64> {
    check_nonneg("nu", nu)?;
    Ok(entropy_unchecked(nu))
}

fn entropy_unchecked(nu: f64) -> f64 {
    if nu == 0.0 {
        0.0
    } else {
        (nu + 1.0) * nu.ln_1p() - nu * nu.ln()
    }
}

/// Inverts `D = (ν + ½)²`. Determinants slightly below `1/4` (within
/// [`UNCERTAINTY_TOL`]) map to `ν = 0`.
pub fn nu_from_determinant(det: f64) -> Result<f64> {
    if !det.is_finite() || det < 0.25 - UNCERTAINTY_TOL {
        return Err(Error::UncertaintyViolation { det });
    }
    Ok((det.max(0.0).sqrt() - 0.5).max(0.0))
}
