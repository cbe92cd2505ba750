//! Brute-force reference: Gaussian states as truncated Fock-basis density
//! matrices, evolved by integrating the master equation directly.
//!
//! Nothing here uses the closed-form solutions; the module exists to check
//! them.

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::gaussian::GaussianParams;

/// Largest truncation the oracle accepts.
pub const MAX_DIM: usize = 200;

pub const DEFAULT_DIM: usize = 60;

/// Default bound on the occupation of the top Fock level.
pub const DEFAULT_TRUNC_GUARD: f64 = 1e-8;

/// Largest trace renormalization accepted when building a state.
pub const RENORMALIZATION_TOL: f64 = 1e-8;

/// Largest trace drift accepted during integration.
pub const TRACE_DRIFT_TOL: f64 = 1e-8;

/// Matrix entries below this are zeroed before diagonalization.
const FLUSH: f64 = 1e-30;

/// Eigenvalues below this are a positivity violation.
pub const PSD_TOL: f64 = 1e-9;

/// Density matrix in the Fock basis `|0⟩ .. |dim−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    matrix: DMatrix<Complex64>,
}

/// Deviations of a [`FockState`] from a physical density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub hermiticity: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub top_occupation: f64,
}

impl FockState {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Domain {
                name: "density matrix",
                value: matrix.nrows() as f64,
                expected: "non-empty and square",
            });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Fock-state projector `|n⟩⟨n|`.
    pub fn number_state(n: usize, dim: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(n, n)] = Complex64::new(1.0, 0.0);
        Self { matrix: m }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn top_occupation(&self) -> f64 {
        self.matrix[(self.dim() - 1, self.dim() - 1)].re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        // the QR iteration breaks down (NaN) on subnormal entries; dropping
        // entries below FLUSH moves the spectrum by at most dim·FLUSH
        for z in herm.iter_mut() {
            if z.norm() < FLUSH {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        let hermiticity = (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        StateDiagnostics {
            hermiticity,
            trace: self.trace(),
            min_eigenvalue: self.eigenvalues().first().copied().unwrap_or(0.0),
            top_occupation: self.top_occupation(),
        }
    }

    /// `(tr[aρ], tr[a†aρ], tr[a²ρ])`.
    pub fn moments(&self) -> Moments {
        let rho = &self.matrix;
        let dim = self.dim();
        let mut mean_a = Complex64::new(0.0, 0.0);
        let mut mean_aa = Complex64::new(0.0, 0.0);
        let mut mean_n = 0.0;
        for m in 0..dim {
            mean_n += m as f64 * rho[(m, m)].re;
            if m + 1 < dim {
                mean_a += ((m + 1) as f64).sqrt() * rho[(m + 1, m)];
            }
            if m + 2 < dim {
                mean_aa += (((m + 1) * (m + 2)) as f64).sqrt() * rho[(m + 2, m)];
            }
        }
        Moments {
            mean_a,
            mean_n,
            mean_aa,
        }
    }

    /// `−Σ λ ln λ` over eigenvalues above `1e−14`.
    pub fn entropy(&self) -> Result<f64> {
        let ev = self.eigenvalues();
        if ev.iter().any(|l| !l.is_finite()) {
            return Err(Error::NotPositive { eigenvalue: f64::NAN });
        }
        if let Some(&low) = ev.first() {
            if low < -PSD_TOL {
                return Err(Error::NotPositive { eigenvalue: low });
            }
        }
        Ok(ev.iter().filter(|&&l| l > 1e-14).map(|&l| -l * l.ln()).sum())
    }
}

/// First and second moments of the ladder operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_a: Complex64,
    pub mean_n: f64,
    pub mean_aa: Complex64,
}

/// Gaussian parameters recovered from oracle moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstructed {
    pub alpha: Complex64,
    pub r: f64,
    /// Squeezing phase; meaningless when `r` is 0.
    pub phi: f64,
    pub nu: f64,
}

impl Moments {
    /// Inverts `⟨a⟩ = α`, `⟨a†a⟩ − |α|² = (ν+½) cosh 2r − ½` and
    /// `⟨a²⟩ − α² = (ν+½) e^{iφ} sinh 2r`.
    pub fn reconstruct(&self) -> Reconstructed {
        let alpha = self.mean_a;
        let centred_n = self.mean_n - alpha.norm_sqr();
        let centred_aa = self.mean_aa - alpha * alpha;
        let (major, minor) = (centred_n + 0.5 + centred_aa.norm(), centred_n + 0.5 - centred_aa.norm());
        let nu = ((major * minor).max(0.0).sqrt() - 0.5).max(0.0);
        let r = if minor > 0.0 {
            0.25 * (major / minor).ln()
        } else {
            f64::INFINITY
        };
        Reconstructed {
            alpha,
            r,
            phi: centred_aa.arg(),
            nu,
        }
    }
}

/// Truncated annihilation operator.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::Domain {
            name: "dim",
            value: dim as f64,
            expected: ">= 2",
        });
    }
    if dim > MAX_DIM {
        return Err(Error::ResourceLimit {
            what: "Fock truncation",
            requested: dim,
            limit: MAX_DIM,
        });
    }
    Ok(())
}

/// `D(α) S(r, φ) ρ_ν S† D†` with the default truncation guard.
pub fn build_initial(s0: &GaussianParams, dim: usize) -> Result<FockState> {
    build_initial_with(s0, dim, DEFAULT_TRUNC_GUARD)
}

/// Builds the state in a padded space from matrix exponentials of the
/// truncated generators, crops it to `dim` levels and renormalizes.
/// Fails when the cropped mass deficit exceeds [`RENORMALIZATION_TOL`] or
/// the top level holds more than `trunc_guard`.
pub fn build_initial_with(s0: &GaussianParams, dim: usize, trunc_guard: f64) -> Result<FockState> {
    check_dim(dim)?;
    let work = dim + (dim / 2).max(40);
    let a = annihilation(work);
    let ad = a.adjoint();

    let alpha = s0.alpha();
    let displacement = (&ad * alpha - &a * alpha.conj()).exp();
    let half_r = 0.5 * s0.r();
    let squeeze = (&ad * &ad * Complex64::from_polar(half_r, s0.phi())
        - &a * &a * Complex64::from_polar(half_r, -s0.phi()))
    .exp();

    let nu = s0.nu();
    let thermal = DMatrix::from_fn(work, work, |m, n| {
        if m != n {
            Complex64::new(0.0, 0.0)
        } else if nu == 0.0 {
            Complex64::new(if m == 0 { 1.0 } else { 0.0 }, 0.0)
        } else {
            Complex64::new((m as f64 * (nu / (nu + 1.0)).ln()).exp() / (1.0 + nu), 0.0)
        }
    });

    let u = displacement * squeeze;
    let full = &u * thermal * u.adjoint();
    let mut rho = full.view((0, 0), (dim, dim)).into_owned();
    let trace: f64 = rho.diagonal().iter().map(|z| z.re).sum();
    let deficit = (1.0 - trace).abs();
    if deficit > RENORMALIZATION_TOL {
        return Err(Error::DimensionTooSmall {
            dim,
            detail: format!("truncation discards {deficit:.3e} of the trace"),
        });
    }
    rho /= Complex64::new(trace, 0.0);
    let state = FockState { matrix: rho };
    if state.top_occupation() > trunc_guard {
        return Err(Error::DimensionTooSmall {
            dim,
            detail: format!("top level holds {:.3e} > {trunc_guard:e}", state.top_occupation()),
        });
    }
    Ok(state)
}

/// Lindblad generator applied to `rho`:
///
/// `−iω[a†a, ρ] + k(n̄+1)(2aρa† − a†aρ − ρa†a) + k n̄(2a†ρa − aa†ρ − ρaa†)`
///
/// with truncated `a`, so `aa†` vanishes on the top level and the trace of
/// the result is exactly zero. `rotate = false` drops the commutator.
pub fn lindblad_rhs(rho: &DMatrix<Complex64>, ch: &ChannelParams, rotate: bool) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
    lindblad_rhs_into(rho, ch, rotate, &mut out);
    out
}

fn lindblad_rhs_into(rho: &DMatrix<Complex64>, ch: &ChannelParams, rotate: bool, out: &mut DMatrix<Complex64>) {
    let dim = rho.nrows();
    let loss = ch.k() * (ch.n_bath() + 1.0);
    let gain = ch.k() * ch.n_bath();
    let omega = if rotate { ch.omega() } else { 0.0 };
    let aad = |m: usize| if m + 1 < dim { (m + 1) as f64 } else { 0.0 };
    for n in 0..dim {
        for m in 0..dim {
            let x = rho[(m, n)];
            let (mf, nf) = (m as f64, n as f64);
            let mut d = Complex64::new(0.0, -omega * (mf - nf)) * x;
            let mut lo = -(mf + nf) * x;
            if m + 1 < dim && n + 1 < dim {
                lo += 2.0 * ((mf + 1.0) * (nf + 1.0)).sqrt() * rho[(m + 1, n + 1)];
            }
            d += loss * lo;
            if gain != 0.0 {
                let mut hi = -(aad(m) + aad(n)) * x;
                if m > 0 && n > 0 {
                    hi += 2.0 * (mf * nf).sqrt() * rho[(m - 1, n - 1)];
                }
                d += gain * hi;
            }
            out[(m, n)] = d;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Fixed-step classical Runge–Kutta.
    #[default]
    Rk4,
    /// Exact propagator. The generator only couples `ρ_{m,n}` to
    /// `ρ_{m±1,n±1}`, so it is exponentiated one diagonal `m − n = d` at a
    /// time.
    LiouvillianExpm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub method: Method,
    pub t_final: f64,
    pub trunc_guard: f64,
    /// Integrate without the `−iω[a†a, ·]` term and apply the (exact)
    /// free rotation afterwards.
    pub interaction_picture: bool,
}

impl IntegratorConfig {
    /// RK4 with `dt = 10⁻³/k` (or `10⁻³` without damping).
    pub fn new(ch: &ChannelParams, t_final: f64) -> Self {
        let dt = if ch.k() > 0.0 { 1e-3 / ch.k() } else { 1e-3 };
        Self {
            dt,
            method: Method::Rk4,
            t_final,
            trunc_guard: DEFAULT_TRUNC_GUARD,
            interaction_picture: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Domain {
                name: "dt",
                value: self.dt,
                expected: "> 0",
            });
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::Domain {
                name: "t_final",
                value: self.t_final,
                expected: "finite and >= 0",
            });
        }
        if !(self.trunc_guard > 0.0 && self.trunc_guard < 1.0) {
            return Err(Error::Domain {
                name: "trunc_guard",
                value: self.trunc_guard,
                expected: "in (0, 1)",
            });
        }
        Ok(())
    }
}

/// Evolves `rho0` to `cfg.t_final`.
pub fn evolve_numeric(rho0: &FockState, ch: &ChannelParams, cfg: &IntegratorConfig) -> Result<FockState> {
    let mut out = evolve_numeric_sampled(rho0, ch, cfg, &[cfg.t_final])?;
    Ok(out.pop().expect("one sample requested"))
}

/// Evolves `rho0` and returns snapshots at each of `times` (ascending, each
/// at most `cfg.t_final`).
pub fn evolve_numeric_sampled(
    rho0: &FockState,
    ch: &ChannelParams,
    cfg: &IntegratorConfig,
    times: &[f64],
) -> Result<Vec<FockState>> {
    cfg.validate()?;
    check_dim(rho0.dim())?;
    if times.windows(2).any(|w| w[1] < w[0]) || times.iter().any(|&t| !(0.0..=cfg.t_final).contains(&t)) {
        return Err(Error::Domain {
            name: "sample times",
            value: times.last().copied().unwrap_or(0.0),
            expected: "ascending within [0, t_final]",
        });
    }
    match cfg.method {
        Method::Rk4 => rk4_sampled(rho0, ch, cfg, times),
        Method::LiouvillianExpm => times
            .iter()
            .map(|&t| {
                let rho = propagate_exact(rho0.matrix(), ch, t, !cfg.interaction_picture);
                let rho = if cfg.interaction_picture {
                    rotate(&rho, ch.omega(), t)
                } else {
                    rho
                };
                let state = FockState { matrix: rho };
                check_guards(&state, cfg, t)?;
                Ok(state)
            })
            .collect(),
    }
}

fn check_guards(state: &FockState, cfg: &IntegratorConfig, t: f64) -> Result<()> {
    let drift = (state.trace() - 1.0).abs();
    if drift > TRACE_DRIFT_TOL {
        return Err(Error::IntegrationFailure {
            t,
            reason: format!("trace drifted by {drift:.3e}"),
        });
    }
    if state.top_occupation() > cfg.trunc_guard {
        return Err(Error::IntegrationFailure {
            t,
            reason: format!("top level holds {:.3e} > {:e}", state.top_occupation(), cfg.trunc_guard),
        });
    }
    Ok(())
}

/// `ρ_{mn} e^{−iω(m−n)t}`.
fn rotate(rho: &DMatrix<Complex64>, omega: f64, t: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(rho.nrows(), rho.ncols(), |m, n| {
        rho[(m, n)] * Complex64::from_polar(1.0, -omega * (m as f64 - n as f64) * t)
    })
}

fn rk4_sampled(rho0: &FockState, ch: &ChannelParams, cfg: &IntegratorConfig, times: &[f64]) -> Result<Vec<FockState>> {
    let dim = rho0.dim();
    let rot = !cfg.interaction_picture;
    let mut rho = rho0.matrix.clone();
    let mut t = 0.0;
    let (mut k1, mut k2, mut k3, mut k4) = (
        DMatrix::zeros(dim, dim),
        DMatrix::zeros(dim, dim),
        DMatrix::zeros(dim, dim),
        DMatrix::zeros(dim, dim),
    );
    let mut stage = DMatrix::zeros(dim, dim);
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let h = (target - t).min(cfg.dt);
            // finish exactly on the target when the remainder is a rounding sliver
            let h = if target - (t + h) < 1e-12 * cfg.dt {
                target - t
            } else {
                h
            };
            let hc = Complex64::new(h, 0.0);
            lindblad_rhs_into(&rho, ch, rot, &mut k1);
            stage.copy_from(&rho);
            add_scaled(&mut stage, hc * 0.5, &k1);
            lindblad_rhs_into(&stage, ch, rot, &mut k2);
            stage.copy_from(&rho);
            add_scaled(&mut stage, hc * 0.5, &k2);
            lindblad_rhs_into(&stage, ch, rot, &mut k3);
            stage.copy_from(&rho);
            add_scaled(&mut stage, hc, &k3);
            lindblad_rhs_into(&stage, ch, rot, &mut k4);
            let sixth = hc / 6.0;
            add_scaled(&mut rho, sixth, &k1);
            add_scaled(&mut rho, sixth * 2.0, &k2);
            add_scaled(&mut rho, sixth * 2.0, &k3);
            add_scaled(&mut rho, sixth, &k4);
            t = if h == target - t { target } else { t + h };
            let drift = (rho.diagonal().iter().map(|z| z.re).sum::<f64>() - 1.0).abs();
            if drift > TRACE_DRIFT_TOL || !drift.is_finite() {
                return Err(Error::IntegrationFailure {
                    t,
                    reason: format!("trace drifted by {drift:.3e}"),
                });
            }
            let top = rho[(dim - 1, dim - 1)].re;
            if top > cfg.trunc_guard {
                return Err(Error::IntegrationFailure {
                    t,
                    reason: format!("top level holds {top:.3e} > {:e}", cfg.trunc_guard),
                });
            }
        }
        let snapshot = if cfg.interaction_picture {
            rotate(&rho, ch.omega(), target)
        } else {
            rho.clone()
        };
        let state = FockState { matrix: snapshot };
        check_guards(&state, cfg, target)?;
        out.push(state);
    }
    Ok(out)
}

/// `dst += h·src`.
fn add_scaled(dst: &mut DMatrix<Complex64>, h: Complex64, src: &DMatrix<Complex64>) {
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d += h * s;
    }
}

/// Exact `e^{Lt} ρ`, one diagonal at a time. Entries `x_j = ρ_{j+d, j}`
/// obey a tridiagonal linear system; the `d < 0` half follows by
/// Hermiticity.
fn propagate_exact(rho: &DMatrix<Complex64>, ch: &ChannelParams, t: f64, rotate: bool) -> DMatrix<Complex64> {
    let dim = rho.nrows();
    let loss = ch.k() * (ch.n_bath() + 1.0);
    let gain = ch.k() * ch.n_bath();
    let omega = if rotate { ch.omega() } else { 0.0 };
    let aad = |m: usize| if m + 1 < dim { (m + 1) as f64 } else { 0.0 };
    let mut out = DMatrix::zeros(dim, dim);
    for d in 0..dim {
        let len = dim - d;
        let mut gen = DMatrix::<Complex64>::zeros(len, len);
        for j in 0..len {
            let (m, n) = (j + d, j);
            let (mf, nf) = (m as f64, n as f64);
            gen[(j, j)] = Complex64::new(-loss * (mf + nf) - gain * (aad(m) + aad(n)), -omega * d as f64);
            if j + 1 < len {
                gen[(j, j + 1)] = Complex64::new(2.0 * loss * ((mf + 1.0) * (nf + 1.0)).sqrt(), 0.0);
            }
            if j > 0 {
                gen[(j, j - 1)] = Complex64::new(2.0 * gain * (mf * nf).sqrt(), 0.0);
            }
        }
        let prop = (gen * Complex64::new(t, 0.0)).exp();
        let x0 = DVector::from_fn(len, |j, _| rho[(j + d, j)]);
        let x = prop * x0;
        for j in 0..len {
            out[(j + d, j)] = x[j];
            if d > 0 {
                out[(j, j + d)] = x[j].conj();
            }
        }
    }
    out
}

/// Writes `rho` as: magic `FOCKRHO1`, `u32` dim, `u32` reserved (0), then
/// `dim²` row-major `(re, im)` pairs, all little-endian.
pub fn write_snapshot<W: Write>(state: &FockState, mut w: W) -> std::io::Result<()> {
    let dim = state.dim();
    w.write_all(b"FOCKRHO1")?;
    w.write_all(&(dim as u32).to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    for m in 0..dim {
        for n in 0..dim {
            let z = state.matrix[(m, n)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<FockState> {
    let io = |e: std::io::Error| Error::Snapshot(e.to_string());
    let mut header = [0u8; 16];
    r.read_exact(&mut header).map_err(io)?;
    if &header[..8] != b"FOCKRHO1" {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let dim = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes")) as usize;
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::Snapshot(format!("dimension {dim} out of range")));
    }
    let mut buf = vec![0u8; dim * dim * 16];
    r.read_exact(&mut buf).map_err(io)?;
    let value = |i: usize| f64::from_le_bytes(buf[8 * i..8 * i + 8].try_into().expect("8 bytes"));
    let matrix = DMatrix::from_fn(dim, dim, |m, n| {
        let i = 2 * (m * dim + n);
        Complex64::new(value(i), value(i + 1))
    });
    Ok(FockState { matrix })
}
