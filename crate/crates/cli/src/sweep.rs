//! Time and frequency sweeps of the closed-form QFI, written as CSV.

use std::io::Write;
use std::path::PathBuf;

use optoqfi::qfi::QfiBreakdown;
use optoqfi::{qfi_for_spec, CouplingForm, CouplingSpec, DerivativeMethod, DriveForm, ProbeState, QfiResult, ThetaTag};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Axis, Config, Scenario};
use crate::CliError;

pub const HEADER: [&str; 8] = [
    "axis_value",
    "qfi",
    "term_A",
    "term_AB",
    "term_B",
    "term_C",
    "term_FG",
    "branch",
];

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub scenario: Scenario,
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// Evolution time held fixed along a frequency axis.
    pub tau: Option<f64>,
    pub spec: CouplingSpec,
    pub probe: ProbeState,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub qfi: f64,
    #[serde(rename = "term_A")]
    pub term_a: f64,
    #[serde(rename = "term_AB")]
    pub term_ab: f64,
    #[serde(rename = "term_B")]
    pub term_b: f64,
    #[serde(rename = "term_C")]
    pub term_c: f64,
    #[serde(rename = "term_FG")]
    pub term_fg: f64,
    pub branch: &'static str,
}

impl SweepRow {
    fn new(axis_value: f64, r: &QfiResult) -> Self {
        let QfiBreakdown {
            term_a,
            term_ab,
            term_b,
            term_c,
            term_fg,
        } = r.breakdown;
        Self {
            axis_value,
            qfi: r.value,
            term_a,
            term_ab,
            term_b,
            term_c,
            term_fg,
            branch: r.branch.name(),
        }
    }
}

impl SweepRequest {
    pub fn from_config(cfg: &Config) -> Result<Self, CliError> {
        let s = cfg.sweep()?;
        Ok(Self {
            scenario: s.scenario,
            axis: s.axis,
            start: s.start,
            stop: s.stop,
            count: s.count,
            tau: s.tau,
            spec: cfg.spec()?,
            probe: cfg.probe()?,
            output: s.output.clone(),
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Validation(m.into()));
        if self.count < 2 {
            return bad("sweep count must be >= 2");
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return bad("sweep needs finite start < stop");
        }
        if self.start < 0.0 {
            return bad("sweep start must be >= 0");
        }
        let tag = self.spec.theta;
        let (want, name) = match self.scenario {
            Scenario::G0 => (ThetaTag::G0, "g0"),
            Scenario::D1 => (ThetaTag::D1, "d1"),
            Scenario::D2Const | Scenario::D2Res => (ThetaTag::D2, "d2"),
        };
        if tag != want {
            return Err(CliError::Validation(format!(
                "scenario {:?} estimates {name}, config has theta = {}",
                self.scenario,
                tag.name()
            )));
        }
        match (self.scenario, self.spec.d2_form) {
            (Scenario::D2Const, DriveForm::Constant { .. }) => {}
            (Scenario::D2Res, DriveForm::CosModulated { omega, .. }) if omega == 2.0 => {}
            (Scenario::D2Const, _) => return bad("d2-const needs a constant d2 drive"),
            (Scenario::D2Res, _) => return bad("d2-res needs a cos d2 drive at omega = 2"),
            _ => {}
        }
        if self.axis == Axis::Frequency {
            match self.scenario {
                Scenario::G0 if !matches!(self.spec.g_form, CouplingForm::SineModulated { .. }) => {
                    return bad("frequency sweep of g0 needs a sine-modulated coupling")
                }
                Scenario::D2Const | Scenario::D2Res => {
                    return bad("squeezing scenarios only support the time axis")
                }
                _ => {}
            }
            match self.tau {
                Some(t) if t > 0.0 && t.is_finite() => {}
                _ => return bad("frequency sweep needs tau > 0"),
            }
        }
        Ok(())
    }

    pub fn axis_values(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / n as f64
                }
            })
            .collect()
    }

    fn point(&self, x: f64) -> Result<SweepRow, CliError> {
        let (spec, tau) = match self.axis {
            Axis::Time => (self.spec, x),
            Axis::Frequency => (with_frequency(&self.spec, self.scenario, x), self.tau.unwrap_or(0.0)),
        };
        let r = qfi_for_spec(&spec, &self.probe, tau, DerivativeMethod::ClosedForm)?;
        Ok(SweepRow::new(x, &r))
    }
}

fn with_frequency(spec: &CouplingSpec, scenario: Scenario, omega: f64) -> CouplingSpec {
    let mut s = *spec;
    match scenario {
        Scenario::G0 => {
            if let CouplingForm::SineModulated { g0, epsilon, .. } = s.g_form {
                s.g_form = CouplingForm::SineModulated { g0, epsilon, omega };
            }
        }
        Scenario::D1 => {
            s.d1_form = DriveForm::CosModulated {
                amp: s.d1_form.amp(),
                omega,
            };
        }
        Scenario::D2Const | Scenario::D2Res => {}
    }
    s
}

/// Evaluates every grid point; rows come back in axis order.
pub fn evaluate(req: &SweepRequest) -> Result<Vec<SweepRow>, CliError> {
    req.validate()?;
    req.axis_values().into_par_iter().map(|x| req.point(x)).collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record(HEADER).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Runs the sweep and writes it to the requested output (stdout by default).
pub fn run_sweep(req: &SweepRequest) -> Result<Vec<SweepRow>, CliError> {
    let rows = evaluate(req)?;
    match &req.output {
        Some(path) => {
            let f = std::fs::File::create(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write_csv(&rows, f)?;
        }
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(rows)
}
