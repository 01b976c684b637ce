//! Reproduction of the single-shot QFI table and the derived sensitivities.

use std::f64::consts::PI;
use std::io::Write;

use optoqfi::qfi::{qfi_d1_res, qfi_d2_const_app, qfi_d2_res_app, qfi_g0_res};
use optoqfi::{cramer_rao, dimensionful_rescale, r_t_from_temperature, ProbeState};
use serde::Serialize;

use crate::CliError;

pub const TAU: f64 = 2.0 * PI;
pub const G0: f64 = 100.0;
pub const MU_SQ: f64 = 1e6;
pub const EPSILON: f64 = 0.5;
pub const OMEGA_M: f64 = 2.0 * PI * 100.0;
pub const TEMPERATURE: f64 = 200e-9;

#[derive(Debug, Clone, Copy, Default)]
pub struct Table1Options {
    pub sensitivity: bool,
    /// Replaces `|μ_c|²`; the comparison with the reference values is then informational only.
    pub mu_sq: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub quantity: &'static str,
    pub computed: f64,
    pub reference: f64,
    pub rel_dev: f64,
    /// `1/√I`, in the row's own units.
    pub delta: Option<f64>,
    pub delta_reference: Option<f64>,
    #[serde(skip)]
    pub tolerance: f64,
}

impl Table1Row {
    fn new(quantity: &'static str, computed: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            quantity,
            computed,
            reference,
            rel_dev: (computed - reference).abs() / reference.abs(),
            delta: None,
            delta_reference: None,
            tolerance,
        }
    }

    fn with_delta(mut self, reference: f64) -> Self {
        self.delta = cramer_rao(self.computed, 1).ok();
        self.delta_reference = Some(reference);
        self
    }

    pub fn passes(&self) -> bool {
        self.rel_dev <= self.tolerance
            && match (self.delta, self.delta_reference) {
                (Some(d), Some(p)) => (d - p).abs() <= 0.02 * p,
                (None, Some(_)) => false,
                _ => true,
            }
    }
}

#[derive(Debug, Clone)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
    /// False when an override makes the reference values inapplicable.
    pub comparable: bool,
}

impl Table1 {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(Table1Row::passes)
    }

    pub fn row(&self, quantity: &str) -> Option<&Table1Row> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

pub fn table1(opts: Table1Options) -> Result<Table1, CliError> {
    let r_t = r_t_from_temperature(TEMPERATURE, OMEGA_M)?;
    let mu_sq = opts.mu_sq.unwrap_or(MU_SQ);
    if !(mu_sq >= 0.0) || !mu_sq.is_finite() {
        return Err(CliError::Validation("|mu|^2 must be finite and >= 0".into()));
    }
    let probe = ProbeState::real(mu_sq.sqrt(), r_t)?;
    let i_g0 = qfi_g0_res(G0, EPSILON, TAU, &probe)?.value;
    let i_d1 = qfi_d1_res(G0, TAU, &probe)?.value;
    let i_d2 = qfi_d2_res_app(G0, TAU, &probe)?.value;

    let mut rows = vec![
        Table1Row {
            rel_dev: (r_t - 2.56).abs() / 2.56,
            tolerance: 0.01 / 2.56,
            ..Table1Row::new("r_T", r_t, 2.56, 0.0)
        },
        Table1Row::new("qfi_g0_res", i_g0, 3.02e25, 0.01),
        Table1Row::new("qfi_d1_res", i_d1, 1.58e12, 0.01),
        Table1Row::new("qfi_d2_res_app", i_d2, 6.32e28, 0.01),
    ];
    if opts.sensitivity {
        rows[1] = rows[1].clone().with_delta(1.82e-13);
        rows[2] = rows[2].clone().with_delta(7.96e-7);
        let i_d2c = qfi_d2_const_app(G0, TAU, &probe)?.value;
        // d̃₂ = δω_m / ω_m
        let per_rad = 1.0 / OMEGA_M;
        rows.push(
            Table1Row::new("qfi_dw_const", dimensionful_rescale(i_d2c, per_rad), 1.93e11, 0.02)
                .with_delta(2.27e-6),
        );
        rows.push(
            Table1Row::new("qfi_dw_res", dimensionful_rescale(i_d2, per_rad), 1.60e23, 0.02)
                .with_delta(2.50e-12),
        );
    }
    Ok(Table1 {
        rows,
        comparable: opts.mu_sq.is_none(),
    })
}

pub fn write_csv<W: Write>(t: &Table1, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for row in &t.rows {
        w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
