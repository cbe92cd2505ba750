//! `gsschannel` command line: trajectories, photon statistics, Wigner grids,
//! characteristic-time reports and the oracle validation suite.

pub mod config;
pub mod validate;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsschannel::channel::trajectory;
use gsschannel::export::{self, float};
use gsschannel::fock_stats::{photon_number_distribution_adaptive, photon_number_distribution_checked};
use gsschannel::phase_space::{self, GridBounds, SeriesVariant, WignerForm};
use gsschannel::{characteristic_time_closed, characteristic_time_numeric, evolve, visibility, Execution};
use thiserror::Error;

pub use config::{Overrides, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("tolerance breach: {0}")]
    Tolerance(String),

    #[error(transparent)]
    Core(gsschannel::Error),
}

impl From<gsschannel::Error> for CliError {
    fn from(e: gsschannel::Error) -> Self {
        match e {
            gsschannel::Error::Domain { name, .. } => CliError::Validation {
                field: name.to_string(),
                message: e.to_string(),
            },
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Tolerance(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gsschannel",
    version,
    about = "Gaussian states in a dissipative thermal channel"
)]
pub struct Cli {
    /// Run every computation on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form trajectory: t,nu,r,phi,alpha_re,alpha_im,D,entropy.
    Evolve(CommonArgs),
    /// Photon-number distribution at one time: n,p_n.
    Pnd(PndArgs),
    /// Wigner function on a grid at one time: x,p,w.
    Wigner(WignerArgs),
    /// Characteristic time and visibility bounds.
    Tc(CommonArgs),
    /// Randomized closed-form vs Fock-oracle comparison.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// `key = value` file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub r0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nbath: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let o = Overrides {
            alpha_re: self.alpha_re,
            alpha_im: self.alpha_im,
            r0: self.r0,
            phi0: self.phi0,
            nu0: self.nu0,
            omega: self.omega,
            k: self.k,
            n_bath: self.nbath,
            t_start: self.t_start,
            t_end: self.t_end,
            samples: self.samples,
            output_path: self.out.clone(),
            seed: self.seed,
        };
        RunConfig::resolve(self.config.as_deref(), &o)
    }
}

#[derive(Debug, Clone, Args)]
pub struct PndArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Evolution time.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    /// Largest photon number; chosen adaptively (tail below 1e-10) if omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub n_max: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Gaussian,
    Series,
    SeriesAsPrinted,
}

impl From<FormArg> for WignerForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Gaussian => WignerForm::Gaussian,
            FormArg::Series => WignerForm::Series(SeriesVariant::Corrected),
            FormArg::SeriesAsPrinted => WignerForm::Series(SeriesVariant::AsPrinted),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct WignerArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = 201)]
    pub nx: usize,
    #[arg(long, default_value_t = 201)]
    pub np: usize,
    /// `x_min,x_max,p_min,p_max`; defaults to ±6 standard deviations around
    /// the mean.
    #[arg(long, allow_hyphen_values = true)]
    pub bounds: Option<String>,
    #[arg(long, value_enum, default_value_t = FormArg::Gaussian)]
    pub form: FormArg,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = gsschannel::oracle::DEFAULT_DIM)]
    pub dim: usize,
    #[arg(long, default_value_t = 20)]
    pub n_states: usize,
    #[arg(long, default_value_t = 1.5)]
    pub max_r0: f64,
    #[arg(long, default_value_t = 5.0)]
    pub max_nu0: f64,
    #[arg(long, default_value_t = 2.0)]
    pub max_alpha: f64,
    /// Report file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => {
            let f = File::create(p).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn io_error(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    }
}

pub fn cmd_evolve(cfg: &RunConfig, exec: Execution) -> Result<(), CliError> {
    let rows = trajectory(&cfg.state()?, &cfg.channel()?, &cfg.times(), exec)?;
    let path = cfg.output_path.as_deref();
    export::write_trajectory(open_output(path)?, &rows).map_err(io_error(path))
}

pub fn cmd_pnd(cfg: &RunConfig, t: f64, n_max: Option<i64>) -> Result<(), CliError> {
    let s = evolve(&cfg.state()?, &cfg.channel()?, t)?.params;
    let d = match n_max {
        Some(n) => photon_number_distribution_checked(&s, n)?,
        None => photon_number_distribution_adaptive(&s),
    };
    let path = cfg.output_path.as_deref();
    export::write_distribution(open_output(path)?, &d).map_err(io_error(path))
}

fn parse_bounds(text: &str) -> Result<GridBounds, CliError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Validation {
            field: "bounds".into(),
            message: format!("cannot parse `{text}`"),
        })?;
    let [x_min, x_max, p_min, p_max] = v[..] else {
        return Err(CliError::Validation {
            field: "bounds".into(),
            message: "expected x_min,x_max,p_min,p_max".into(),
        });
    };
    Ok(GridBounds {
        x_min,
        x_max,
        p_min,
        p_max,
    })
}

pub fn cmd_wigner(cfg: &RunConfig, args: &WignerArgs, exec: Execution) -> Result<(), CliError> {
    let s = evolve(&cfg.state()?, &cfg.channel()?, args.t)?.params;
    let bounds = match &args.bounds {
        Some(b) => parse_bounds(b)?,
        None => GridBounds::around(&s.covariance(), 6.0),
    };
    let grid = phase_space::wigner_grid(&s, bounds, args.nx, args.np, args.form.into(), exec)?;
    let path = cfg.output_path.as_deref();
    export::write_wigner(open_output(path)?, &grid).map_err(io_error(path))
}

/// `key = value` report of the characteristic time and visibility bounds.
pub fn tc_report(cfg: &RunConfig) -> Result<String, CliError> {
    let (s0, ch) = (cfg.state()?, cfg.channel()?);
    let v = visibility(&s0, &ch);
    let (closed, numeric, interior) = match characteristic_time_closed(&s0, &ch) {
        Ok(tc) => {
            let n = characteristic_time_numeric(&s0, &ch)?;
            (float(tc), float(n.t_c), n.interior_maximum.to_string())
        }
        Err(gsschannel::Error::UndefinedTime) => ("undefined".into(), "undefined".into(), "false".into()),
        Err(e) => return Err(e.into()),
    };
    Ok(format!(
        "t_c_closed = {closed}\nt_c_numeric = {numeric}\ninterior_maximum = {interior}\nvisible = {}\nnu_bound = {}\nnbath_bound = {}\n",
        v.visible,
        float(v.nu_bound),
        float(v.nbath_bound)
    ))
}

pub fn cmd_tc(cfg: &RunConfig) -> Result<(), CliError> {
    let text = tc_report(cfg)?;
    let path = cfg.output_path.as_deref();
    let mut out = open_output(path)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(io_error(path))
}

pub fn cmd_validate(args: &ValidateArgs, exec: Execution) -> Result<(), CliError> {
    for (field, v, cap) in [
        ("max_r0", args.max_r0, 1.5),
        ("max_nu0", args.max_nu0, 5.0),
        ("max_alpha", args.max_alpha, 2.0),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(CliError::Validation {
                field: field.into(),
                message: format!("{v} must be finite and >= 0 (default {cap})"),
            });
        }
    }
    if args.n_states == 0 {
        eprintln!("warning: no states requested, nothing to validate");
    }
    let cfg = validate::SuiteConfig {
        seed: args.seed,
        dim: args.dim,
        n_states: args.n_states,
        envelope: validate::Envelope {
            max_r0: args.max_r0,
            max_nu0: args.max_nu0,
            max_alpha: args.max_alpha,
            ..Default::default()
        },
        ..Default::default()
    };
    let report = validate::run_suite(&cfg, exec)?;
    let path = args.out.as_deref();
    let mut out = open_output(path)?;
    writeln!(out, "{report}")
        .and_then(|_| out.flush())
        .map_err(io_error(path))?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!(
            "{} of {} states failed (see report)",
            report.states.iter().filter(|s| !s.passed()).count(),
            report.states.len()
        )))
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Evolve(c) => cmd_evolve(&c.resolve()?, exec),
        Command::Pnd(a) => cmd_pnd(&a.common.resolve()?, a.t, a.n_max),
        Command::Wigner(a) => cmd_wigner(&a.common.resolve()?, a, exec),
        Command::Tc(c) => cmd_tc(&c.resolve()?),
        Command::Validate(a) => cmd_validate(a, exec),
    }
}
