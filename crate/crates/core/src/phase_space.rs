//! Wigner functions of Gaussian states: the closed Gaussian form, the
//! Laguerre series over thermal Fock components, and sampled grids with
//! quadrature-based moments.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, GaussianParams};
use crate::par::{self, Execution};
use crate::special::laguerre_iter;

/// Largest number of samples accepted by [`wigner_grid`].
pub const MAX_GRID_POINTS: usize = 16_000_000;

/// Order at which the adaptive Laguerre series gives up.
pub const SERIES_MAX_ORDER: usize = 500;

/// Tail bound below which the adaptive series stops.
pub const SERIES_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }
}

/// Closed Gaussian Wigner function, centred on `(x0, p0)`:
///
/// `W = 1/(2π(ν+½)) exp{−cosh 2r/(2ν+1) [(1 − tanh 2r cos φ) X² + (1 + tanh 2r cos φ) P²]
///       + sin φ sinh 2r/(ν+½) X P}`.
pub fn wigner_gaussian(s: &GaussianParams, pt: PhasePoint) -> f64 {
    let c = s.covariance();
    let (dx, dp) = (pt.x - c.x0, pt.p - c.p0);
    let half = s.nu() + 0.5;
    let (sh2, ch2) = ((2.0 * s.r()).sinh(), (2.0 * s.r()).cosh());
    let (sphi, cphi) = s.phi().sin_cos();
    let quad = ((ch2 - sh2 * cphi) * dx * dx + (ch2 + sh2 * cphi) * dp * dp) / (2.0 * half);
    let cross = sphi * sh2 / half * dx * dp;
    (cross - quad).exp() / (2.0 * PI * half)
}

/// Which reading of the series coefficients to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVariant {
    /// `F2`, `F3`, `F5` exactly as typeset, including `2(p + p0)` and the
    /// `sin φ sinh r` factors in `F3`.
    AsPrinted,
    /// `F3` with `sinh r`, the conjugate of `F2` in the cross term and
    /// `2(p − p0)`.
    Corrected,
}

/// The `F1..F4` coefficients; `F5` depends on the phase point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficients {
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
    pub f4: f64,
}

impl SeriesCoefficients {
    pub fn new(r: f64, phi: f64, variant: SeriesVariant) -> Self {
        let (ch, sh) = (r.cosh(), r.sinh());
        let (sphi, cphi) = phi.sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        let f1 = ch + e * sh;
        let f2 = (1.0 - Complex64::i() * sphi * sh * f1) / ((ch + cphi * sh) * f1);
        let f3_factor = match variant {
            SeriesVariant::AsPrinted => sphi * sh,
            SeriesVariant::Corrected => sh,
        };
        let f3 = (ch + e.conj() * f3_factor) / (ch + e * f3_factor);
        let f4 = (ch * ch + sh * sh + 2.0 * cphi * ch * sh).sqrt();
        let f2 = match variant {
            SeriesVariant::AsPrinted => f2,
            SeriesVariant::Corrected => f2.conj(),
        };
        Self { f1, f2, f3, f4 }
    }
}

/// Laguerre argument `2u` and the Gaussian envelope `(F4/|F1|) e^{−u}` at a
/// phase point.
fn series_kernel(s: &GaussianParams, pt: PhasePoint, co: &SeriesCoefficients, variant: SeriesVariant) -> (f64, f64) {
    let c = s.covariance();
    let dx = pt.x - c.x0;
    let p_shift = match variant {
        SeriesVariant::AsPrinted => pt.p + c.p0,
        SeriesVariant::Corrected => pt.p - c.p0,
    };
    let f5 = 2.0 * p_shift - Complex64::i() * dx * (co.f2.conj() - co.f2);
    let f4f5 = co.f4 * f5;
    let half_sq = (f4f5 * f4f5 / 4.0).re;
    let u = dx * dx / (co.f4 * co.f4) + half_sq;
    (2.0 * u, co.f4 / co.f1.norm() * (-u).exp())
}

/// Partial sum `l = 0..=l_max` of
///
/// `W = Σ_l (1/π) ν^l/(ν+1)^{l+1} (−|F3|)^l L_l[2(X²/F4² + (F4 F5)²/4)] (F4/|F1|) e^{−X²/F4²} e^{−(F4F5)²/4}`.
pub fn wigner_series(s: &GaussianParams, pt: PhasePoint, l_max: usize, variant: SeriesVariant) -> f64 {
    let co = SeriesCoefficients::new(s.r(), s.phi(), variant);
    let (arg, envelope) = series_kernel(s, pt, &co, variant);
    let ratio = -co.f3.norm() * s.nu() / (s.nu() + 1.0);
    let mut weight = 1.0 / (PI * (s.nu() + 1.0));
    let mut sum = 0.0;
    for lag in laguerre_iter(arg).take(l_max + 1) {
        sum += weight * lag;
        weight *= ratio;
    }
    sum * envelope
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// False when [`SERIES_MAX_ORDER`] was reached first.
    pub converged: bool,
}

/// Sums the series until the remaining tail is provably below
/// [`SERIES_TOL`]. Uses `|L_l(y)| e^{−y/2} ≤ 1`, so the tail after order `l`
/// is bounded by `q^{l+1}/π` with `q = ν/(ν+1)`.
pub fn wigner_series_adaptive(s: &GaussianParams, pt: PhasePoint, variant: SeriesVariant) -> SeriesValue {
    let q = s.nu() / (s.nu() + 1.0);
    let mut l = 0;
    let mut tail = q / PI;
    while tail >= SERIES_TOL && l < SERIES_MAX_ORDER {
        l += 1;
        tail *= q;
    }
    SeriesValue {
        value: wigner_series(s, pt, l, variant),
        terms: l + 1,
        converged: tail < SERIES_TOL,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl GridBounds {
    pub fn square(half_width: f64) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            p_min: -half_width,
            p_max: half_width,
        }
    }

    /// Box of `±n_sigma` standard deviations per axis around the state's
    /// centre.
    pub fn around(c: &CovarianceMatrix, n_sigma: f64) -> Self {
        let (hx, hp) = (n_sigma * c.sigma_qq.sqrt(), n_sigma * c.sigma_pp.sqrt());
        Self {
            x_min: c.x0 - hx,
            x_max: c.x0 + hx,
            p_min: c.p0 - hp,
            p_max: c.p0 + hp,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, lo, hi) in [
            ("x bounds", self.x_min, self.x_max),
            ("p bounds", self.p_min, self.p_max),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Domain {
                    name,
                    value: hi - lo,
                    expected: "finite with min < max",
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WignerForm {
    Gaussian,
    Series(SeriesVariant),
}

/// Sampled Wigner function. `values[ix * np + ip]` holds `W(x_ix, p_ip)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub bounds: GridBounds,
    pub nx: usize,
    pub np: usize,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn x(&self, ix: usize) -> f64 {
        axis(self.bounds.x_min, self.bounds.x_max, self.nx, ix)
    }

    pub fn p(&self, ip: usize) -> f64 {
        axis(self.bounds.p_min, self.bounds.p_max, self.np, ip)
    }

    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.np + ip]
    }

    /// Sample with the largest value and its coordinates.
    pub fn max(&self) -> (PhasePoint, f64) {
        let (i, &w) =
            self.values.iter().enumerate().fold(
                (0, &f64::NEG_INFINITY),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        (PhasePoint::new(self.x(i / self.np), self.p(i % self.np)), w)
    }

    /// Whether the box spans at least `n_sigma` standard deviations of `c`
    /// on each side of its centre.
    pub fn covers(&self, c: &CovarianceMatrix, n_sigma: f64) -> bool {
        let (hx, hp) = (n_sigma * c.sigma_qq.sqrt(), n_sigma * c.sigma_pp.sqrt());
        self.bounds.x_min <= c.x0 - hx
            && self.bounds.x_max >= c.x0 + hx
            && self.bounds.p_min <= c.p0 - hp
            && self.bounds.p_max >= c.p0 + hp
    }

    fn trapezoid<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let hx = (self.bounds.x_max - self.bounds.x_min) / (self.nx - 1) as f64;
        let hp = (self.bounds.p_max - self.bounds.p_min) / (self.np - 1) as f64;
        let edge = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for ix in 0..self.nx {
            let x = self.x(ix);
            let mut row = 0.0;
            for ip in 0..self.np {
                row += edge(ip, self.np) * self.value(ix, ip) * f(x, self.p(ip));
            }
            total += edge(ix, self.nx) * row;
        }
        total * hx * hp
    }
}

fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Samples the chosen form on an `nx × np` grid.
pub fn wigner_grid(
    s: &GaussianParams,
    bounds: GridBounds,
    nx: usize,
    np: usize,
    form: WignerForm,
    exec: Execution,
) -> Result<WignerGrid> {
    bounds.validate()?;
    if nx < 2 || np < 2 {
        return Err(Error::Domain {
            name: "grid size",
            value: nx.min(np) as f64,
            expected: ">= 2 per axis",
        });
    }
    let total = nx.saturating_mul(np);
    if total > MAX_GRID_POINTS {
        return Err(Error::ResourceLimit {
            what: "Wigner grid points",
            requested: total,
            limit: MAX_GRID_POINTS,
        });
    }
    let mut grid = WignerGrid {
        bounds,
        nx,
        np,
        values: Vec::new(),
    };
    let rows = par::map_indexed(exec, nx, |ix| {
        let x = grid.x(ix);
        (0..np)
            .map(|ip| {
                let pt = PhasePoint::new(x, grid.p(ip));
                match form {
                    WignerForm::Gaussian => wigner_gaussian(s, pt),
                    WignerForm::Series(v) => wigner_series_adaptive(s, pt, v).value,
                }
            })
            .collect::<Vec<f64>>()
    });
    grid.values = rows.concat();
    Ok(grid)
}

/// Box of ±6 standard deviations with a spacing of half the narrowest
/// conditional width, which keeps the trapezoidal rule spectrally accurate.
pub fn auto_grid(s: &GaussianParams, form: WignerForm, exec: Execution) -> Result<WignerGrid> {
    let c = s.covariance();
    let bounds = GridBounds::around(&c, 6.0);
    let half = s.nu() + 0.5;
    // conditional standard deviations of x given p and of p given x
    let (sx, sp) = (half / c.sigma_pp.sqrt(), half / c.sigma_qq.sqrt());
    let nx = (((bounds.x_max - bounds.x_min) / (0.5 * sx)).ceil() as usize + 1).max(65);
    let np = (((bounds.p_max - bounds.p_min) / (0.5 * sp)).ceil() as usize + 1).max(65);
    wigner_grid(s, bounds, nx, np, form, exec)
}

/// `∫∫ W dx dp` by the 2-D trapezoidal rule.
pub fn normalization(g: &WignerGrid) -> f64 {
    g.trapezoid(|_, _| 1.0)
}

/// First and second moments of the sampled distribution, normalized by its
/// quadrature mass.
pub fn covariance_from_grid(g: &WignerGrid) -> CovarianceMatrix {
    let mass = normalization(g);
    let x0 = g.trapezoid(|x, _| x) / mass;
    let p0 = g.trapezoid(|_, p| p) / mass;
    CovarianceMatrix {
        sigma_qq: g.trapezoid(|x, _| (x - x0) * (x - x0)) / mass,
        sigma_pp: g.trapezoid(|_, p| (p - p0) * (p - p0)) / mass,
        sigma_qp: g.trapezoid(|x, p| (x - x0) * (p - p0)) / mass,
        x0,
        p0,
    }
}
