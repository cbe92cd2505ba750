//! Run configuration: defaults, `key = value` files and flag overrides.

use std::path::{Path, PathBuf};

use gsschannel::channel::uniform_grid;
use gsschannel::{ChannelParams, Complex64, GaussianParams};

use crate::CliError;

/// Keys accepted in a config file (`-` and `_` are interchangeable).
pub const KEYS: [&str; 13] = [
    "r0", "phi0", "nu0", "alpha_re", "alpha_im", "omega", "k", "nbath", "t_start", "t_end", "samples", "out", "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub r0: f64,
    pub phi0: f64,
    pub nu0: f64,
    pub omega: f64,
    pub k: f64,
    pub n_bath: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha_re: 0.0,
            alpha_im: 0.0,
            r0: 0.0,
            phi0: 0.0,
            nu0: 0.0,
            omega: 1.0,
            k: 0.1,
            n_bath: 0.0,
            t_start: 0.0,
            t_end: 30.0,
            samples: 512,
            output_path: None,
            seed: 0,
        }
    }
}

/// Values given on the command line; unset ones keep the file/default value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub r0: Option<f64>,
    pub phi0: Option<f64>,
    pub nu0: Option<f64>,
    pub omega: Option<f64>,
    pub k: Option<f64>,
    pub n_bath: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub samples: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| invalid(key, format!("cannot parse `{value}`")))
}

impl RunConfig {
    /// Applies `key = value` lines on top of `self`. Blank lines and `#`
    /// comments are ignored; unknown or repeated keys are errors.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(invalid(
                    "config",
                    format!("line {}: expected `key = value`", lineno + 1),
                ));
            };
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            if !KEYS.contains(&key.as_str()) {
                return Err(invalid("config", format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if seen.contains(&key) {
                return Err(invalid("config", format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            match key.as_str() {
                "r0" => self.r0 = number(&key, value)?,
                "phi0" => self.phi0 = number(&key, value)?,
                "nu0" => self.nu0 = number(&key, value)?,
                "alpha_re" => self.alpha_re = number(&key, value)?,
                "alpha_im" => self.alpha_im = number(&key, value)?,
                "omega" => self.omega = number(&key, value)?,
                "k" => self.k = number(&key, value)?,
                "nbath" => self.n_bath = number(&key, value)?,
                "t_start" => self.t_start = number(&key, value)?,
                "t_end" => self.t_end = number(&key, value)?,
                "samples" => self.samples = number(&key, value)?,
                "seed" => self.seed = number(&key, value)?,
                "out" => self.output_path = Some(PathBuf::from(value)),
                _ => unreachable!("key list checked above"),
            }
            seen.push(key);
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_file_text(&text)
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f.clone() { self.$f = v.into(); } )* };
        }
        take!(alpha_re, alpha_im, r0, phi0, nu0, omega, k, n_bath, t_start, t_end, samples, seed);
        if let Some(p) = &o.output_path {
            self.output_path = Some(p.clone());
        }
    }

    /// Defaults, then the optional file, then the flags.
    pub fn resolve(file: Option<&Path>, o: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = file {
            cfg.apply_file(path)?;
        }
        cfg.apply_overrides(o);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let reals = [
            ("alpha_re", self.alpha_re),
            ("alpha_im", self.alpha_im),
            ("r0", self.r0),
            ("phi0", self.phi0),
            ("nu0", self.nu0),
            ("omega", self.omega),
            ("k", self.k),
            ("nbath", self.n_bath),
            ("t_start", self.t_start),
            ("t_end", self.t_end),
        ];
        for (name, v) in reals {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if self.samples < 2 {
            return Err(invalid("samples", "must be >= 2"));
        }
        if self.t_start < 0.0 {
            return Err(invalid("t_start", "must be >= 0"));
        }
        if self.t_start > self.t_end {
            return Err(invalid("t_end", "must be >= t_start"));
        }
        self.state()?;
        self.channel()?;
        Ok(())
    }

    pub fn state(&self) -> Result<GaussianParams, CliError> {
        Ok(GaussianParams::new(
            Complex64::new(self.alpha_re, self.alpha_im),
            self.r0,
            self.phi0,
            self.nu0,
        )?)
    }

    pub fn channel(&self) -> Result<ChannelParams, CliError> {
        Ok(ChannelParams::new(self.omega, self.k, self.n_bath)?)
    }

    pub fn times(&self) -> Vec<f64> {
        uniform_grid(self.t_start, self.t_end, self.samples)
    }
}
