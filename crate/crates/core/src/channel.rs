//! Closed-form evolution through the dissipative channel, the
//! characteristic time at which the covariance determinant peaks, and the
//! visibility bounds.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianParams;
use crate::par::{self, Execution};

/// Radicand of ν(t) tolerated below zero before it is treated as a bug.
pub const RADICAND_TOL: f64 = 1e-12;

/// Number of samples in [`default_time_grid`].
pub const DEFAULT_GRID_SAMPLES: usize = 512;

/// Field frequency `omega`, damping constant `k` and bath occupation
/// `n_bath` of the master equation
///
/// `ρ̇ = −iω[a†a, ρ] + k(n̄+1)(2aρa† − a†aρ − ρa†a) + k n̄(2a†ρa − aa†ρ − ρaa†)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    omega: f64,
    k: f64,
    n_bath: f64,
}

impl ChannelParams {
    pub fn new(omega: f64, k: f64, n_bath: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::Domain {
                name: "omega",
                value: omega,
                expected: "finite",
            });
        }
        for (name, value) in [("k", k), ("n_bath", n_bath)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::Domain {
                    name,
                    value,
                    expected: "finite and >= 0",
                });
            }
        }
        Ok(Self { omega, k, n_bath })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n_bath(&self) -> f64 {
        self.n_bath
    }

    /// Horizon used by the numeric maximizer: `50/k`.
    pub fn horizon(&self) -> Result<f64> {
        if self.k > 0.0 {
            Ok(50.0 / self.k)
        } else {
            Err(Error::UndefinedTime)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionResult {
    /// State at time `t`; `phi` is left unreduced (`φ0 − 2ωt`).
    pub params: GaussianParams,
    /// `x(t) = (ν0+½) cosh(2r0) e^{−2kt} + (n̄+½)(1 − e^{−2kt})`.
    pub x_aux: f64,
    pub t: f64,
}

/// Principal covariance variances `(ν+½)e^{±2r}` at time `t`, divided by
/// nothing: `λ± = (ν0+½) e^{±2r0} e^{−2kt} + (n̄+½)(1 − e^{−2kt})`.
fn principal_variances(s0: &GaussianParams, ch: &ChannelParams, t: f64) -> (f64, f64) {
    let decay = (-2.0 * ch.k * t).exp();
    let bath = (ch.n_bath + 0.5) * -(-2.0 * ch.k * t).exp_m1();
    let v0 = (s0.nu() + 0.5) * decay;
    (v0 * (-2.0 * s0.r()).exp() + bath, v0 * (2.0 * s0.r()).exp() + bath)
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "t",
            value: t,
            expected: "finite and >= 0",
        })
    }
}

/// Evolves `s0` for a time `t`.
///
/// `α(t) = α0 e^{−(iω+k)t}`, `φ(t) = φ0 − 2ωt`,
/// `ν(t) = √(x² − ((ν0+½) sinh 2r0 e^{−2kt})²) − ½` and
/// `r(t) = ¼ ln(λ+/λ−)`. The radicand is evaluated in the factored form
/// `(x − y)(x + y) = λ− λ+`, which is free of cancellation.
pub fn evolve(s0: &GaussianParams, ch: &ChannelParams, t: f64) -> Result<EvolutionResult> {
    check_time(t)?;
    let (lam_minus, lam_plus) = principal_variances(s0, ch, t);
    let x_aux = 0.5 * (lam_plus + lam_minus);
    if t == 0.0 {
        return Ok(EvolutionResult { params: *s0, x_aux, t });
    }
    let mut radicand = lam_minus * lam_plus;
    if radicand < 0.0 {
        if radicand < -RADICAND_TOL {
            return Err(Error::InternalConsistency { t, radicand });
        }
        radicand = 0.0;
    }
    let nu = (radicand.sqrt() - 0.5).max(0.0);
    let r = 0.25 * ((lam_plus - lam_minus) / lam_minus).ln_1p();
    let alpha = s0.alpha() * Complex64::from_polar((-ch.k * t).exp(), -ch.omega * t);
    let phi = s0.phi() - 2.0 * ch.omega * t;
    let params = GaussianParams::new_unreduced(alpha, r, phi, nu)?;
    Ok(EvolutionResult { params, x_aux, t })
}

/// Evolves `s0` to every time in `times`.
pub fn trajectory(
    s0: &GaussianParams,
    ch: &ChannelParams,
    times: &[f64],
    exec: Execution,
) -> Result<Vec<EvolutionResult>> {
    par::try_map_indexed(exec, times.len(), |i| evolve(s0, ch, times[i]))
}

/// `samples` uniform points on `[t_start, t_end]`.
pub fn uniform_grid(t_start: f64, t_end: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![t_start],
        n => {
            let step = (t_end - t_start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { t_end } else { t_start + step * i as f64 })
                .collect()
        }
    }
}

/// 512 uniform samples on `[0, 10/k]`.
pub fn default_time_grid(ch: &ChannelParams) -> Result<Vec<f64>> {
    let horizon = ch.horizon()? / 5.0;
    Ok(uniform_grid(0.0, horizon, DEFAULT_GRID_SAMPLES))
}

/// Covariance determinant `D(t)` computed from the evolved covariance matrix.
pub fn determinant_trajectory(s0: &GaussianParams, ch: &ChannelParams, t: f64) -> Result<f64> {
    Ok(evolve(s0, ch, t)?.params.covariance().determinant())
}

/// Closed-form time at which `D(t)` is maximal,
///
/// `t_c = (2k)⁻¹ {ln 2 − ln[(2n̄+1)/d · (2ν0 cosh 2r0 + cosh 2r0 − 2n̄ − 1)]}`
///
/// with `d = 2 cosh(2r0)[n̄(ν0+1) + ν0(n̄+1) + ½] − 2(n̄+½)² − 2(ν0+½)²`.
/// Negative times and a non-positive logarithm argument both mean there is
/// no interior maximum; the result is then 0.
pub fn characteristic_time_closed(s0: &GaussianParams, ch: &ChannelParams) -> Result<f64> {
    let k = ch.k;
    if k <= 0.0 {
        return Err(Error::UndefinedTime);
    }
    let nu0 = s0.nu();
    let nb = ch.n_bath;
    let c2 = (2.0 * s0.r()).cosh();
    let d =
        2.0 * c2 * (nb * (nu0 + 1.0) + nu0 * (nb + 1.0) + 0.5) - 2.0 * (nb + 0.5).powi(2) - 2.0 * (nu0 + 0.5).powi(2);
    let arg = (2.0 * nb + 1.0) / d * (2.0 * nu0 * c2 + c2 - 2.0 * nb - 1.0);
    if !(arg.is_finite() && arg > 0.0) {
        return Ok(0.0);
    }
    let t_c = (std::f64::consts::LN_2 - arg.ln()) / (2.0 * k);
    Ok(t_c.max(0.0))
}

/// Outcome of the numeric search for the maximum of `D(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericTc {
    /// Location of the interior maximum, or 0 when there is none.
    pub t_c: f64,
    /// False when `D` is non-increasing from `t = 0` or keeps growing up to
    /// the horizon.
    pub interior_maximum: bool,
}

/// `dD/du` with `u = e^{−2kt}`; `dD/dt = −2k u · dD/du`. `D` is quadratic in
/// `u`, so this is linear in `u` and changes sign at most once.
fn mixedness_slope(s0: &GaussianParams, ch: &ChannelParams, t: f64) -> f64 {
    let (lam_minus, lam_plus) = principal_variances(s0, ch, t);
    let v = s0.nu() + 0.5;
    let n = ch.n_bath + 0.5;
    let e = (2.0 * s0.r()).exp();
    (v * e - n) * lam_minus + (v / e - n) * lam_plus
}

/// Locates the maximizer of the closed-form `D(t)` on `[0, 50/k]` by
/// bisecting on the sign of its time derivative. Comparing `D` values
/// directly cannot resolve a flat maximum beyond `√ε` and mistakes the
/// rounding noise of a saturated `D` for a peak.
pub fn characteristic_time_numeric(s0: &GaussianParams, ch: &ChannelParams) -> Result<NumericTc> {
    let horizon = ch.horizon()?;
    // D rises while the slope in u is negative
    let rising = |t: f64| mixedness_slope(s0, ch, t) < 0.0;
    if !rising(0.0) || rising(horizon) {
        return Ok(NumericTc {
            t_c: 0.0,
            interior_maximum: false,
        });
    }
    let (mut lo, mut hi) = (0.0f64, horizon);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rising(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(NumericTc {
        t_c: 0.5 * (lo + hi),
        interior_maximum: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityVerdict {
    /// `ν0 < cosh(2r0)(n̄+½) − ½`.
    pub visible: bool,
    /// Largest initial occupation for which `D(t)` can grow at `t = 0`.
    pub nu_bound: f64,
    /// `cosh(2r0)(ν0+½) − ½`: bath occupation below which `D(t)` turns over
    /// and relaxes from above.
    pub nbath_bound: f64,
    /// Characteristic time when `D(t)` has an interior maximum.
    pub t_c: Option<f64>,
}

/// Evaluates the visibility inequality and its temperature counterpart.
pub fn visibility(s0: &GaussianParams, ch: &ChannelParams) -> VisibilityVerdict {
    let c2 = (2.0 * s0.r()).cosh();
    let nu_bound = c2 * (ch.n_bath + 0.5) - 0.5;
    let nbath_bound = c2 * (s0.nu() + 0.5) - 0.5;
    let t_c = characteristic_time_closed(s0, ch).ok().filter(|&t| t > 0.0);
    VisibilityVerdict {
        visible: s0.nu() < nu_bound,
        nu_bound,
        nbath_bound,
        t_c,
    }
}
