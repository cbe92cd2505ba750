//! Randomized closed-form vs Fock-oracle comparison.

use std::f64::consts::PI;
use std::fmt;

use gsschannel::oracle::{self, IntegratorConfig};
use gsschannel::par::{self, Execution};
use gsschannel::{evolve, ChannelParams, Complex64, GaussianParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative tolerance on `ν`, `r`, `|α|`, scaled by `max(|expected|, 1)`.
pub const MOMENT_TOL: f64 = 1e-4;
/// Absolute tolerance on the entropy in nats.
pub const ENTROPY_TOL: f64 = 1e-3;

/// Sampling box for the initial states.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub max_r0: f64,
    pub max_nu0: f64,
    pub max_alpha: f64,
    pub n_baths: Vec<f64>,
}

impl Default for Envelope {
    fn default() -> Self {
        Self {
            max_r0: 1.5,
            max_nu0: 5.0,
            max_alpha: 2.0,
            n_baths: vec![0.0, 0.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub dim: usize,
    pub n_states: usize,
    pub envelope: Envelope,
    pub omega: f64,
    pub k: f64,
    pub times: Vec<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            dim: oracle::DEFAULT_DIM,
            n_states: 20,
            envelope: Envelope::default(),
            omega: 1.0,
            k: 0.1,
            times: vec![0.0, 7.5, 15.0, 22.5, 30.0],
        }
    }
}

/// Worst scaled deviations over the sample times.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Deviations {
    pub nu: f64,
    pub r: f64,
    pub alpha: f64,
    pub entropy: f64,
}

impl Deviations {
    fn merge(self, o: Self) -> Self {
        Self {
            nu: self.nu.max(o.nu),
            r: self.r.max(o.r),
            alpha: self.alpha.max(o.alpha),
            entropy: self.entropy.max(o.entropy),
        }
    }

    pub fn within_tolerance(&self) -> bool {
        self.nu <= MOMENT_TOL && self.r <= MOMENT_TOL && self.alpha <= MOMENT_TOL && self.entropy <= ENTROPY_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateReport {
    pub index: usize,
    pub s0: GaussianParams,
    pub channel: ChannelParams,
    pub outcome: Result<Deviations, String>,
}

impl StateReport {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(d) if d.within_tolerance())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub states: Vec<StateReport>,
}

impl SuiteReport {
    pub fn worst(&self) -> Deviations {
        self.states
            .iter()
            .filter_map(|s| s.outcome.as_ref().ok())
            .fold(Deviations::default(), |acc, d| acc.merge(*d))
    }

    pub fn errors(&self) -> usize {
        self.states.iter().filter(|s| s.outcome.is_err()).count()
    }

    /// True when every state was simulated and stayed within tolerance
    /// (vacuously true for zero states).
    pub fn passed(&self) -> bool {
        self.states.iter().all(StateReport::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "seed = {}, dim = {}, states = {}, k = {}, omega = {}",
            c.seed, c.dim, c.n_states, c.k, c.omega
        )?;
        for s in &self.states {
            let a = s.s0.alpha();
            write!(
                f,
                "state {:>3}: r0={:.4} phi0={:.4} nu0={:.4} alpha=({:.4},{:.4}) nbath={}: ",
                s.index,
                s.s0.r(),
                s.s0.phi(),
                s.s0.nu(),
                a.re,
                a.im,
                s.channel.n_bath()
            )?;
            match &s.outcome {
                Ok(d) => writeln!(
                    f,
                    "{} nu={:.3e} r={:.3e} |alpha|={:.3e} entropy={:.3e}",
                    if d.within_tolerance() { "ok" } else { "BREACH" },
                    d.nu,
                    d.r,
                    d.alpha,
                    d.entropy
                )?,
                Err(e) => writeln!(f, "ERROR {e}")?,
            }
        }
        let w = self.worst();
        writeln!(
            f,
            "max deviation: nu={:.3e} r={:.3e} |alpha|={:.3e} (tol {MOMENT_TOL:e}) entropy={:.3e} (tol {ENTROPY_TOL:e})",
            w.nu, w.r, w.alpha, w.entropy
        )?;
        write!(
            f,
            "result: {} ({} errors, {} breaches)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.errors(),
            self.states
                .iter()
                .filter(|s| matches!(&s.outcome, Ok(d) if !d.within_tolerance()))
                .count()
        )
    }
}

/// Deterministic sample of `n_states` initial states for `seed`.
pub fn random_states(cfg: &SuiteConfig) -> Vec<(GaussianParams, ChannelParams)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let env = &cfg.envelope;
    (0..cfg.n_states)
        .map(|_| {
            let r0 = rng.random::<f64>() * env.max_r0;
            let phi0 = PI * (2.0 * rng.random::<f64>() - 1.0);
            let nu0 = rng.random::<f64>() * env.max_nu0;
            let amp = rng.random::<f64>() * env.max_alpha;
            let arg = PI * (2.0 * rng.random::<f64>() - 1.0);
            let nb = env.n_baths[rng.random_range(0..env.n_baths.len())];
            (
                GaussianParams::new(Complex64::from_polar(amp, arg), r0, phi0, nu0).expect("inside envelope"),
                ChannelParams::new(cfg.omega, cfg.k, nb).expect("valid channel"),
            )
        })
        .collect()
}

fn scaled(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Runs the oracle for one state and compares at every sample time.
pub fn check_state(
    s0: &GaussianParams,
    ch: &ChannelParams,
    dim: usize,
    times: &[f64],
) -> gsschannel::Result<Deviations> {
    let rho0 = oracle::build_initial(s0, dim)?;
    let t_final = times.iter().copied().fold(0.0, f64::max);
    let snapshots = oracle::evolve_numeric_sampled(&rho0, ch, &IntegratorConfig::new(ch, t_final), times)?;
    let mut dev = Deviations::default();
    for (&t, rho) in times.iter().zip(&snapshots) {
        let want = evolve(s0, ch, t)?.params;
        let got = rho.moments().reconstruct();
        dev = dev.merge(Deviations {
            nu: scaled(got.nu, want.nu()),
            r: scaled(got.r, want.r()),
            alpha: scaled(got.alpha.norm(), want.alpha().norm()),
            entropy: (rho.entropy()? - want.entropy()).abs(),
        });
    }
    Ok(dev)
}

pub fn run_suite(cfg: &SuiteConfig, exec: Execution) -> gsschannel::Result<SuiteReport> {
    if cfg.dim > oracle::MAX_DIM {
        return Err(gsschannel::Error::ResourceLimit {
            what: "Fock truncation",
            requested: cfg.dim,
            limit: oracle::MAX_DIM,
        });
    }
    let states = random_states(cfg);
    let reports = par::map_indexed(exec, states.len(), |i| {
        let (s0, ch) = states[i];
        StateReport {
            index: i,
            s0,
            channel: ch,
            outcome: check_state(&s0, &ch, cfg.dim, &cfg.times).map_err(|e| e.to_string()),
        }
    });
    Ok(SuiteReport {
        config: cfg.clone(),
        states: reports,
    })
}
