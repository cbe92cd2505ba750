//! CSV writers. Every file has a header row, LF line endings and floats in
//! `{:.16e}` (17 significant digits, enough to round-trip an `f64`).

use std::io::{self, Write};

use crate::channel::EvolutionResult;
use crate::fock_stats::PhotonDistribution;
use crate::phase_space::WignerGrid;

pub const TRAJECTORY_HEADER: &str = "t,nu,r,phi,alpha_re,alpha_im,D,entropy";
pub const DISTRIBUTION_HEADER: &str = "n,p_n";
pub const WIGNER_HEADER: &str = "x,p,w";

/// Formats `x` with 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn row<W: Write>(w: &mut W, cells: &[f64]) -> io::Result<()> {
    for (i, &c) in cells.iter().enumerate() {
        if i > 0 {
            w.write_all(b",")?;
        }
        write!(w, "{c:.16e}")?;
    }
    w.write_all(b"\n")
}

/// One row per sample: `t,nu,r,phi,alpha_re,alpha_im,D,entropy`, where `D`
/// is the determinant of the covariance matrix.
pub fn write_trajectory<W: Write>(mut w: W, rows: &[EvolutionResult]) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for e in rows {
        let s = &e.params;
        row(
            &mut w,
            &[
                e.t,
                s.nu(),
                s.r(),
                s.phi(),
                s.alpha().re,
                s.alpha().im,
                s.covariance().determinant(),
                s.entropy(),
            ],
        )?;
    }
    w.flush()
}

pub fn write_distribution<W: Write>(mut w: W, d: &PhotonDistribution) -> io::Result<()> {
    writeln!(w, "{DISTRIBUTION_HEADER}")?;
    for (n, p) in d.probs.iter().enumerate() {
        writeln!(w, "{n},{p:.16e}")?;
    }
    w.flush()
}

/// Row-major: `x` outer, `p` inner.
pub fn write_wigner<W: Write>(mut w: W, g: &WignerGrid) -> io::Result<()> {
    writeln!(w, "{WIGNER_HEADER}")?;
    for ix in 0..g.nx {
        let x = g.x(ix);
        for ip in 0..g.np {
            row(&mut w, &[x, g.p(ip), g.value(ix, ip)])?;
        }
    }
    w.flush()
}
