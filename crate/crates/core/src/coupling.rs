//! Time-dependent Hamiltonian coefficients, the estimation-parameter binding
//! and conversions between physical and dimensionless units.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Optomechanical coupling `G(τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingForm<T = f64> {
    Constant { g0: T },
    /// `g0 (1 + ε sin(Ω_g τ))`
    SineModulated { g0: T, epsilon: T, omega: T },
}

/// Mechanical displacement drive `D1(τ)` or squeezing drive `D2(τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveForm<T = f64> {
    Zero,
    Constant { amp: T },
    /// `amp cos(Ω τ)`
    CosModulated { amp: T, omega: T },
}

/// Which scalar of the specification is the estimation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThetaTag {
    G0,
    Epsilon,
    OmegaG,
    D1,
    OmegaD1,
    D2,
    OmegaD2,
}

impl ThetaTag {
    pub const ALL: [ThetaTag; 7] = [
        ThetaTag::G0,
        ThetaTag::Epsilon,
        ThetaTag::OmegaG,
        ThetaTag::D1,
        ThetaTag::OmegaD1,
        ThetaTag::D2,
        ThetaTag::OmegaD2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ThetaTag::G0 => "g0",
            ThetaTag::Epsilon => "epsilon",
            ThetaTag::OmegaG => "omega_g",
            ThetaTag::D1 => "d1",
            ThetaTag::OmegaD1 => "omega_d1",
            ThetaTag::D2 => "d2",
            ThetaTag::OmegaD2 => "omega_d2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl<T: Real> CouplingForm<T> {
    pub fn eval(&self, tau: T) -> T {
        match *self {
            CouplingForm::Constant { g0 } => g0,
            CouplingForm::SineModulated { g0, epsilon, omega } => {
                g0 * (T::one() + epsilon * (omega * tau).sin())
            }
        }
    }

    pub fn g0(&self) -> T {
        match *self {
            CouplingForm::Constant { g0 } | CouplingForm::SineModulated { g0, .. } => g0,
        }
    }

    fn frequency(&self) -> T {
        match *self {
            CouplingForm::Constant { .. } => T::zero(),
            CouplingForm::SineModulated { omega, .. } => omega,
        }
    }
}

impl<T: Real> DriveForm<T> {
    pub fn eval(&self, tau: T) -> T {
        match *self {
            DriveForm::Zero => T::zero(),
            DriveForm::Constant { amp } => amp,
            DriveForm::CosModulated { amp, omega } => amp * (omega * tau).cos(),
        }
    }

    pub fn amp(&self) -> T {
        match *self {
            DriveForm::Zero => T::zero(),
            DriveForm::Constant { amp } | DriveForm::CosModulated { amp, .. } => amp,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            DriveForm::Zero => true,
            DriveForm::Constant { amp } | DriveForm::CosModulated { amp, .. } => amp == T::zero(),
        }
    }

    fn frequency(&self) -> T {
        match *self {
            DriveForm::CosModulated { omega, .. } => omega,
            _ => T::zero(),
        }
    }

    fn with_amp(self, x: T) -> Self {
        match self {
            DriveForm::Zero | DriveForm::Constant { .. } => DriveForm::Constant { amp: x },
            DriveForm::CosModulated { omega, .. } => DriveForm::CosModulated { amp: x, omega },
        }
    }

    fn with_omega(self, x: T) -> Self {
        match self {
            DriveForm::CosModulated { amp, .. } => DriveForm::CosModulated { amp, omega: x },
            other => other,
        }
    }
}

/// Functional forms of `G`, `D1`, `D2` together with the estimation parameter.
///
/// `omega_c` is the dimensionless cavity frequency. It only produces a
/// cavity-number phase and is never differentiated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec<T = f64> {
    pub g_form: CouplingForm<T>,
    pub d1_form: DriveForm<T>,
    pub d2_form: DriveForm<T>,
    pub theta: ThetaTag,
    pub omega_c: T,
}

impl<T: Real> CouplingSpec<T> {
    pub fn new(
        g_form: CouplingForm<T>,
        d1_form: DriveForm<T>,
        d2_form: DriveForm<T>,
        theta: ThetaTag,
    ) -> Self {
        Self {
            g_form,
            d1_form,
            d2_form,
            theta,
            omega_c: T::zero(),
        }
    }

    /// Checks the invariants: non-negative frequencies and finite amplitudes.
    pub fn validate(&self) -> Result<()> {
        let finite = |x: T, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} must be finite")))
            }
        };
        let freq = |x: T, what: &str| {
            finite(x, what)?;
            if x < T::zero() {
                Err(Error::InvalidParameter(format!("{what} must be >= 0")))
            } else {
                Ok(())
            }
        };
        match self.g_form {
            CouplingForm::Constant { g0 } => finite(g0, "g0")?,
            CouplingForm::SineModulated { g0, epsilon, omega } => {
                finite(g0, "g0")?;
                finite(epsilon, "epsilon")?;
                freq(omega, "omega_g")?;
            }
        }
        for (form, a, w) in [
            (self.d1_form, "d1", "omega_d1"),
            (self.d2_form, "d2", "omega_d2"),
        ] {
            finite(form.amp(), a)?;
            freq(form.frequency(), w)?;
        }
        finite(self.omega_c, "omega_c")
    }

    pub fn eval_g(&self, tau: T) -> T {
        self.g_form.eval(tau)
    }

    pub fn eval_d1(&self, tau: T) -> T {
        self.d1_form.eval(tau)
    }

    pub fn eval_d2(&self, tau: T) -> T {
        self.d2_form.eval(tau)
    }

    /// Largest modulation frequency among the three forms.
    pub fn max_frequency(&self) -> T {
        self.g_form
            .frequency()
            .max(self.d1_form.frequency())
            .max(self.d2_form.frequency())
    }

    /// Current value of the tagged parameter.
    ///
    /// Tags naming a parameter absent from the active form (for example
    /// `OmegaG` on a constant coupling) read as zero; such a θ does not enter
    /// the dynamics.
    pub fn theta_value(&self) -> T {
        match self.theta {
            ThetaTag::G0 => self.g_form.g0(),
            ThetaTag::Epsilon => match self.g_form {
                CouplingForm::SineModulated { epsilon, .. } => epsilon,
                _ => T::zero(),
            },
            ThetaTag::OmegaG => self.g_form.frequency(),
            ThetaTag::D1 => self.d1_form.amp(),
            ThetaTag::OmegaD1 => self.d1_form.frequency(),
            ThetaTag::D2 => self.d2_form.amp(),
            ThetaTag::OmegaD2 => self.d2_form.frequency(),
        }
    }

    /// Copy of the spec with the tagged parameter replaced by `x`.
    ///
    /// Amplitude tags on a `Zero` drive promote it to `Constant`; tags naming
    /// an absent frequency or modulation depth leave the spec unchanged.
    pub fn with_theta(&self, x: T) -> Self {
        let mut s = *self;
        match self.theta {
            ThetaTag::G0 => {
                s.g_form = match self.g_form {
                    CouplingForm::Constant { .. } => CouplingForm::Constant { g0: x },
                    CouplingForm::SineModulated { epsilon, omega, .. } => {
                        CouplingForm::SineModulated {
                            g0: x,
                            epsilon,
                            omega,
                        }
                    }
                }
            }
            ThetaTag::Epsilon => {
                if let CouplingForm::SineModulated { g0, omega, .. } = self.g_form {
                    s.g_form = CouplingForm::SineModulated {
                        g0,
                        epsilon: x,
                        omega,
                    };
                }
            }
            ThetaTag::OmegaG => {
                if let CouplingForm::SineModulated { g0, epsilon, .. } = self.g_form {
                    s.g_form = CouplingForm::SineModulated {
                        g0,
                        epsilon,
                        omega: x,
                    };
                }
            }
            ThetaTag::D1 => s.d1_form = self.d1_form.with_amp(x),
            ThetaTag::OmegaD1 => s.d1_form = self.d1_form.with_omega(x),
            ThetaTag::D2 => s.d2_form = self.d2_form.with_amp(x),
            ThetaTag::OmegaD2 => s.d2_form = self.d2_form.with_omega(x),
        }
        s
    }

    /// Same spec with a different estimation parameter.
    pub fn with_tag(&self, theta: ThetaTag) -> Self {
        Self { theta, ..*self }
    }

    /// True when the tagged parameter cannot influence the evolution.
    pub fn theta_is_inert(&self) -> bool {
        match self.theta {
            ThetaTag::Epsilon | ThetaTag::OmegaG => {
                !matches!(self.g_form, CouplingForm::SineModulated { .. })
            }
            ThetaTag::OmegaD1 => !matches!(self.d1_form, DriveForm::CosModulated { .. }),
            ThetaTag::OmegaD2 => !matches!(self.d2_form, DriveForm::CosModulated { .. }),
            _ => false,
        }
    }
}

/// Initial state: coherent cavity amplitude and thermal mechanical parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeState<T = f64> {
    pub mu_c: Complex<T>,
    pub r_t: T,
}

impl<T: Real> ProbeState<T> {
    pub fn new(mu_c: Complex<T>, r_t: T) -> Result<Self> {
        if !(r_t >= T::zero()) || !r_t.is_finite() {
            return Err(Error::InvalidParameter("r_T must be finite and >= 0".into()));
        }
        if !mu_c.re.is_finite() || !mu_c.im.is_finite() {
            return Err(Error::InvalidParameter("mu_c must be finite".into()));
        }
        Ok(Self { mu_c, r_t })
    }

    /// Probe with real coherent amplitude `|μ|`.
    pub fn real(mu_abs: T, r_t: T) -> Result<Self> {
        Self::new(Complex::new(mu_abs, T::zero()), r_t)
    }

    pub fn mu_sq(&self) -> T {
        self.mu_c.norm_sqr()
    }

    pub fn cosh_2r(&self) -> T {
        (self.r_t + self.r_t).cosh()
    }
}

/// Physical scales used to restore dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalUnits {
    /// Mechanical angular frequency, rad/s.
    pub omega_m: f64,
    /// Oscillator mass, kg.
    pub mass: Option<f64>,
    /// Temperature, K.
    pub temperature: Option<f64>,
}

impl PhysicalUnits {
    pub fn new(omega_m: f64, mass: Option<f64>, temperature: Option<f64>) -> Result<Self> {
        if !(omega_m > 0.0) || !omega_m.is_finite() {
            return Err(Error::InvalidParameter("omega_m must be > 0".into()));
        }
        if let Some(m) = mass {
            if !(m > 0.0) {
                return Err(Error::InvalidParameter("mass must be > 0".into()));
            }
        }
        if let Some(t) = temperature {
            if !(t >= 0.0) {
                return Err(Error::InvalidParameter("temperature must be >= 0".into()));
            }
        }
        Ok(Self {
            omega_m,
            mass,
            temperature,
        })
    }

    /// Thermal parameter implied by the stored temperature (vacuum if absent).
    pub fn r_t(&self) -> Result<f64> {
        match self.temperature {
            Some(t) => r_t_from_temperature(t, self.omega_m),
            None => Ok(0.0),
        }
    }
}

/// `atanh(exp(-ħω/(2 k_B T)))`; `T = 0` is the vacuum limit and returns 0.
pub fn r_t_from_temperature(temperature: f64, omega_m: f64) -> Result<f64> {
    if !(temperature >= 0.0) || !(omega_m > 0.0) {
        return Err(Error::InvalidParameter(
            "temperature must be >= 0 and omega_m > 0".into(),
        ));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega_m / (2.0 * K_B * temperature);
    // atanh(e^{-x}) = ln((1 + e^{-x}) / (1 - e^{-x})) / 2, stable for small x.
    let e = (-x).exp();
    Ok(0.5 * ((1.0 + e) / -(-x).exp_m1()).ln())
}

/// Chain rule for a dimensionless QFI: `(dθ̃/dθ_phys)² · I`.
pub fn dimensionful_rescale<T: Real>(qfi_dimensionless: T, dtheta_dphys: T) -> T {
    dtheta_dphys * dtheta_dphys * qfi_dimensionless
}

/// Convenience constructor for the modulated-coupling scenario.
pub fn sine_coupling<T: Real>(g0: f64, epsilon: f64, omega: f64) -> CouplingForm<T> {
    CouplingForm::SineModulated {
        g0: lit(g0),
        epsilon: lit(epsilon),
        omega: lit(omega),
    }
}
