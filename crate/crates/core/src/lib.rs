//! Single-mode Gaussian bosonic states propagating through a dissipative
//! thermal channel.
//!
//! The crate evaluates the closed-form solution of the damped-oscillator
//! master equation for displaced squeezed thermal states and the observables
//! built on it: covariance and entropy, the characteristic (decoherence) time
//! and visibility bounds, Wigner functions and the photon-number
//! distribution. [`oracle`] integrates the same master equation in a
//! truncated Fock basis so every closed form can be checked against brute
//! force.
//!
//! Conventions: `ħ = 1`, `a = (x + i p)/√2`, vacuum quadrature variances are
//! `1/2`, entropies are in nats.

pub mod channel;
pub mod error;
pub mod export;
pub mod fock_stats;
pub mod gaussian;
pub mod oracle;
pub mod par;
pub mod phase_space;
pub mod special;

pub use channel::{
    characteristic_time_closed, characteristic_time_numeric, determinant_trajectory, evolve, visibility, ChannelParams,
    EvolutionResult, NumericTc, VisibilityVerdict,
};
pub use error::{Error, Result};

pub use fock_stats::{photon_number_distribution, pnd_coefficients, PhotonDistribution};
pub use gaussian::{entropy, nu_from_determinant, CovarianceMatrix, GaussianParams};
pub use par::Execution;
pub use phase_space::{wigner_gaussian, wigner_series, PhasePoint, SeriesVariant, WignerGrid};

pub use num_complex::Complex64;
