//! Oracle-versus-closed-form comparisons.

use std::io::Write;

use optoqfi::oracle::{control_case, default_suite, run_case, OracleCase, OracleConfig, OracleOutcome};
use serde::Serialize;

use crate::CliError;

pub const MAX_REL_ERR: f64 = 1e-3;

pub fn preset(name: &str) -> Result<Vec<OracleCase>, CliError> {
    match name {
        "default" => Ok(default_suite()),
        "control" => Ok(vec![control_case()]),
        "all" => {
            let mut v = default_suite();
            v.push(control_case());
            Ok(v)
        }
        other => Err(CliError::Validation(format!(
            "unknown preset '{other}' (expected default, control or all)"
        ))),
    }
}

/// Oracle settings; a step override disables step halving beyond one check.
pub fn config(dt: Option<f64>) -> OracleConfig {
    match dt {
        Some(dt) => OracleConfig {
            dt,
            max_halvings: 1,
            ..OracleConfig::default()
        },
        None => OracleConfig::default(),
    }
}

#[derive(Debug, Clone, Serialize)]
struct Row<'a> {
    name: &'a str,
    analytic: f64,
    oracle: f64,
    rel_err: f64,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub outcomes: Vec<OracleOutcome>,
}

impl CheckReport {
    pub fn max_rel_err(&self) -> f64 {
        self.outcomes.iter().map(|o| o.rel_err).fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.max_rel_err() <= MAX_REL_ERR
    }
}

pub fn oracle_check(cases: &[OracleCase], cfg: &OracleConfig) -> Result<CheckReport, CliError> {
    let outcomes = cases
        .iter()
        .map(|c| run_case(c, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CheckReport { outcomes })
}

pub fn write_csv<W: Write>(report: &CheckReport, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for o in &report.outcomes {
        w.serialize(Row {
            name: &o.name,
            analytic: o.analytic,
            oracle: o.oracle,
            rel_err: o.rel_err,
        })
        .map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
