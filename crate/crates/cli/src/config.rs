//! TOML run configuration: `[couplings]`, `[probe]`, `[units]`, `[sweep]`.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use optoqfi::{CouplingForm, CouplingSpec, DriveForm, PhysicalUnits, ProbeState, ThetaTag};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub couplings: Couplings,
    pub probe: Probe,
    pub units: Option<Units>,
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Couplings {
    /// Name of the estimated parameter, e.g. `"g0"` or `"d1"`.
    pub theta: String,
    #[serde(default)]
    pub omega_c: f64,
    pub g: GForm,
    #[serde(default)]
    pub d1: DForm,
    #[serde(default)]
    pub d2: DForm,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GForm {
    Constant {
        g0: f64,
    },
    Sine {
        g0: f64,
        epsilon: f64,
        omega: f64,
    },
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DForm {
    #[default]
    Zero,
    Constant {
        amp: f64,
    },
    Cos {
        amp: f64,
        omega: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Probe {
    /// Coherent amplitude `|μ_c|`.
    pub mu: f64,
    #[serde(default)]
    pub mu_phase: f64,
    /// Thermal parameter; taken from `[units].temperature` when absent.
    pub r_t: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    /// Mechanical angular frequency, rad/s.
    pub omega_m: f64,
    pub mass: Option<f64>,
    /// Kelvin.
    pub temperature: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    G0,
    D1,
    D2Const,
    D2Res,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Time,
    Frequency,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub scenario: Scenario,
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// Evolution time for frequency sweeps.
    pub tau: Option<f64>,
    /// CSV destination; standard output when absent.
    pub output: Option<PathBuf>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn spec(&self) -> Result<CouplingSpec, CliError> {
        let c = &self.couplings;
        let theta = ThetaTag::parse(&c.theta)
            .ok_or_else(|| CliError::Validation(format!("unknown theta '{}'", c.theta)))?;
        let g_form = match c.g {
            GForm::Constant { g0 } => CouplingForm::Constant { g0 },
            GForm::Sine { g0, epsilon, omega } => CouplingForm::SineModulated { g0, epsilon, omega },
        };
        let mut spec = CouplingSpec::new(g_form, drive(c.d1), drive(c.d2), theta);
        spec.omega_c = c.omega_c;
        spec.validate()?;
        Ok(spec)
    }

    pub fn units(&self) -> Result<Option<PhysicalUnits>, CliError> {
        self.units
            .map(|u| PhysicalUnits::new(u.omega_m, u.mass, u.temperature))
            .transpose()
            .map_err(CliError::from)
    }

    pub fn probe(&self) -> Result<ProbeState, CliError> {
        let r_t = match (self.probe.r_t, self.units()?) {
            (Some(r), _) => r,
            (None, Some(u)) => u.r_t()?,
            (None, None) => 0.0,
        };
        let mu = Complex64::from_polar(self.probe.mu, self.probe.mu_phase);
        Ok(ProbeState::new(mu, r_t)?)
    }

    pub fn sweep(&self) -> Result<&Sweep, CliError> {
        self.sweep
            .as_ref()
            .ok_or_else(|| CliError::Validation("missing [sweep] section".into()))
    }
}

fn drive(d: DForm) -> DriveForm {
    match d {
        DForm::Zero => DriveForm::Zero,
        DForm::Constant { amp } => DriveForm::Constant { amp },
        DForm::Cos { amp, omega } => DriveForm::CosModulated { amp, omega },
    }
}
