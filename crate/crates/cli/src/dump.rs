//! Mechanical-subsystem trajectory dump.

use std::io::Write;

use optoqfi::mechanics::solve_mechanics;
use optoqfi::FCoefficients;
use serde::Serialize;

use crate::config::Config;
use crate::sweep::SweepRequest;
use crate::CliError;

const TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct DumpRow {
    pub tau: f64,
    pub xi_re: f64,
    pub xi_im: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub beta_re: f64,
    pub beta_im: f64,
    pub j_plus: f64,
    pub j_minus: f64,
    pub j_b: f64,
    pub f_na: f64,
    pub f_na2: f64,
    pub f_bp: f64,
    pub f_bm: f64,
    pub f_nabp: f64,
    pub f_nabm: f64,
}

/// Samples the mechanics solution on the `[sweep]` grid (read as times).
pub fn mechanics_dump(cfg: &Config) -> Result<Vec<DumpRow>, CliError> {
    let s = cfg.sweep()?;
    let grid = SweepRequest {
        axis: crate::config::Axis::Time,
        ..SweepRequest::from_config(cfg)?
    };
    if s.count < 2 || !(s.start < s.stop) || s.start < 0.0 {
        return Err(CliError::Validation("dump needs 0 <= start < stop and count >= 2".into()));
    }
    let spec = cfg.spec()?;
    let sol = solve_mechanics(&spec, s.stop, TOL)?;
    grid.axis_values()
        .into_iter()
        .map(|tau| {
            let y = sol.state_at(tau)?;
            let (xi, alpha, beta) = optoqfi::mechanics::bogoliubov_from_state(&y);
            let j = sol.j_at(tau)?;
            let f = FCoefficients::from_state(&y);
            Ok(DumpRow {
                tau,
                xi_re: xi.re,
                xi_im: xi.im,
                alpha_re: alpha.re,
                alpha_im: alpha.im,
                beta_re: beta.re,
                beta_im: beta.im,
                j_plus: j.j_plus,
                j_minus: j.j_minus,
                j_b: j.j_b,
                f_na: f.f_na,
                f_na2: f.f_na2,
                f_bp: f.f_bp,
                f_bm: f.f_bm,
                f_nabp: f.f_nabp,
                f_nabm: f.f_nabm,
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[DumpRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
