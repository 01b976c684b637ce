use crate::coupling::{CouplingForm, CouplingSpec, DriveForm, ThetaTag};
use crate::error::{Error, Result};
use crate::mechanics::JTriple;
use crate::scalar::{lit, sinc, Real};

use super::{FCoefficients, FDerivatives};

/// Within this distance of a resonance the resonance expressions are used.
pub const RESONANCE_SWITCH: f64 = 1e-6;
/// Squeezing amplitudes at or above this are rejected by the approximate forms.
pub const D2_MAX: f64 = 0.2;
/// Squeezing amplitudes above this are flagged as outside the validity regime.
pub const D2_WARN: f64 = 0.05;

/// Which expression produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// General-frequency closed form.
    General,
    /// Exactly resonant closed form.
    Resonant,
    /// Near resonance: the resonance expression stands in for the general one.
    ResonanceLimit,
    /// Perturbative (small squeezing) expressions.
    Approximate,
    /// Quadrature and finite differences.
    Numeric,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::General => "general",
            Branch::Resonant => "resonant",
            Branch::ResonanceLimit => "resonance-limit",
            Branch::Approximate => "approximate",
            Branch::Numeric => "numeric",
        }
    }
}

/// Closed-form values with the branch that produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedF<T = f64> {
    pub f: FCoefficients<T>,
    pub j: JTriple<T>,
    pub branch: Branch,
    /// Set when a perturbative expression is used outside its comfortable range.
    pub warning: Option<&'static str>,
}

fn resonance_branch<T: Real>(omega: T, res: T) -> Option<Branch> {
    let d = (omega - res).abs();
    if d == T::zero() {
        Some(Branch::Resonant)
    } else if d < lit(RESONANCE_SWITCH) {
        Some(Branch::ResonanceLimit)
    } else {
        None
    }
}

fn free_j<T: Real>(tau: T) -> JTriple<T> {
    JTriple {
        j_plus: T::zero(),
        j_minus: T::zero(),
        j_b: tau,
    }
}

/// Modulated-coupling functions at unit `g0`, split by powers of `ε`:
/// `F_Na² = g0² (na2[0] + ε na2[1] + ε² na2[2])`,
/// `F_NaB± = g0 (nab±[0] + ε nab±[1])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsOrders<T = f64> {
    pub na2: [T; 3],
    pub nabp: [T; 2],
    pub nabm: [T; 2],
    pub branch: Branch,
}

impl<T: Real> EpsOrders<T> {
    fn eval(&self, g0: T, eps: T) -> FCoefficients<T> {
        let z = T::zero();
        FCoefficients {
            f_na: z,
            f_na2: g0 * g0 * (self.na2[0] + eps * (self.na2[1] + eps * self.na2[2])),
            f_bp: z,
            f_bm: z,
            f_nabp: g0 * (self.nabp[0] + eps * self.nabp[1]),
            f_nabm: g0 * (self.nabm[0] + eps * self.nabm[1]),
        }
    }

    fn d_g0(&self, g0: T, eps: T) -> FCoefficients<T> {
        let unit = self.eval(T::one(), eps);
        FCoefficients {
            f_na2: lit::<T>(2.0) * g0 * unit.f_na2,
            ..unit
        }
    }

    fn d_eps(&self, g0: T, eps: T) -> FCoefficients<T> {
        let z = T::zero();
        FCoefficients {
            f_na: z,
            f_na2: g0 * g0 * (self.na2[1] + lit::<T>(2.0) * eps * self.na2[2]),
            f_bp: z,
            f_bm: z,
            f_nabp: g0 * self.nabp[1],
            f_nabm: g0 * self.nabm[1],
        }
    }
}

/// Orders in `ε` of the modulated-coupling closed forms at frequency `omega`.
pub fn example_i_eps_orders<T: Real>(omega: T, tau: T) -> Result<EpsOrders<T>> {
    let one = T::one();
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let (st, ct) = tau.sin_cos();
    let s2t = (two * tau).sin();
    let half_sq = (tau / two).sin().powi(2);
    let na2_0 = -(tau - st * ct);
    let nabp_0 = -st;
    let nabm_0 = -two * half_sq;

    if let Some(branch) = resonance_branch(omega, one) {
        let c2t = (two * tau).cos();
        let na2_1 = -(lit::<T>(32.0) - lit::<T>(36.0) * ct + four * (lit::<T>(3.0) * tau).cos())
            / lit(16.0);
        let na2_2 = -(lit::<T>(6.0) * tau - four * s2t + s2t * c2t) / lit(16.0);
        return Ok(EpsOrders {
            na2: [na2_0, na2_1, na2_2],
            nabp: [nabp_0, -st * st / two],
            nabm: [nabm_0, (s2t - two * tau) / four],
            branch,
        });
    }
    if !(omega > lit(RESONANCE_SWITCH)) {
        return Err(Error::InvalidParameter(
            "modulation frequency omega_g must be > 0 for the closed form".into(),
        ));
    }

    let w = omega;
    let (sw, cw) = (w * tau).sin_cos();
    let s2w = (two * w * tau).sin();
    let c2w = (two * w * tau).cos();
    let c2t = (two * tau).cos();
    let om2 = one - w * w;
    let diff_sq = ((one - w) * tau / two).sin().powi(2);

    let t2 = two / w * (st * st * cw - two * half_sq);
    let t3 = -(s2t * sw) / (w * (one + w));
    let t4 = -four / (w * om2) * ct * diff_sq;
    let bracket = st * cw * (ct * cw - two);
    let t5 = (two * tau - four * bracket) / (four * w * (one + w));
    let t6 = (four * bracket + lit::<T>(8.0) * ct * sw + (one - two * c2t) * s2w - two * tau)
        / (four * w * om2);
    let t7 = (four * w * st * cw - w * s2t * c2w - four * ct * sw + c2t * s2w)
        / (two * w * om2 * om2);

    Ok(EpsOrders {
        na2: [na2_0, t2 + t3 + t4, t5 + t6 + t7],
        nabp: [nabp_0, -st * sw / (one + w) + two * w / om2 * diff_sq],
        nabm: [nabm_0, -st * cw / (one - w) + ((one + w) * tau).sin() / om2],
        branch: Branch::General,
    })
}

/// Closed forms for `G = g0 (1 + ε sin Ω_g τ)` with no drives.
///
/// `Ω_g = 1` (or within [`RESONANCE_SWITCH`]) uses the resonance expressions.
/// With `ε = 0` the frequency is irrelevant and any value is accepted.
pub fn closed_form_f_example_i<T: Real>(g0: T, eps: T, omega: T, tau: T) -> Result<ClosedF<T>> {
    let orders = if eps == T::zero() && !(omega > lit(RESONANCE_SWITCH)) {
        unmodulated_orders(tau)
    } else {
        example_i_eps_orders(omega, tau)?
    };
    Ok(ClosedF {
        f: orders.eval(g0, eps),
        j: free_j(tau),
        branch: orders.branch,
        warning: None,
    })
}

fn unmodulated_orders<T: Real>(tau: T) -> EpsOrders<T> {
    let two = lit::<T>(2.0);
    let (st, ct) = tau.sin_cos();
    let z = T::zero();
    EpsOrders {
        na2: [-(tau - st * ct), z, z],
        nabp: [-st, z],
        nabm: [-two * (tau / two).sin().powi(2), z],
        branch: Branch::General,
    }
}

/// Unit-amplitude `(F_Na/(g0 d1), F_B+/d1, F_B−/d1)` for `D1 = d1 cos Ω τ`.
fn example_ii_units<T: Real>(omega: T, tau: T) -> (T, T, T, Branch) {
    let one = T::one();
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let (st, ct) = tau.sin_cos();
    if let Some(branch) = resonance_branch(omega, one) {
        let na = -(lit::<T>(3.0) * tau).sin() + lit::<T>(7.0) * st - four * tau * ct;
        return (
            na / four,
            (tau + st * ct) / two,
            st * st / two,
            branch,
        );
    }
    let w = omega;
    let (sw, cw) = (w * tau).sin_cos();
    // sin(Ωτ)/Ω written as τ·sinc(Ωτ) keeps Ω = 0 regular.
    let s1 = tau * sinc(w * tau);
    let w2 = w * w;
    let num = two * w2 * ct * ct * s1 + s1 * (w2 * (two * tau).cos() - lit::<T>(3.0) * w2 + four)
        - four * st * ct * cw;
    let na = -num / (two * (w2 - one));
    let bp = -(w * ct * sw - st * cw) / (one - w2);
    let bm = -(w * st * sw + ct * cw - one) / (one - w2);
    (na, bp, bm, Branch::General)
}

/// Closed forms for constant `G = g0` and `D1 = d1 cos(Ω_d1 τ)`.
///
/// `Ω_d1 = 0` is the constant drive and is covered by the general branch.
pub fn closed_form_f_example_ii<T: Real>(g0: T, d1: T, omega: T, tau: T) -> Result<ClosedF<T>> {
    if !(omega >= T::zero()) {
        return Err(Error::InvalidParameter("omega_d1 must be >= 0".into()));
    }
    let (na, bp, bm, branch) = example_ii_units(omega, tau);
    let base = unmodulated_orders(tau).eval(g0, T::zero());
    Ok(ClosedF {
        f: FCoefficients {
            f_na: g0 * d1 * na,
            f_bp: d1 * bp,
            f_bm: d1 * bm,
            ..base
        },
        j: free_j(tau),
        branch,
        warning: None,
    })
}

/// Squeezing drive scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SqueezeMode<T = f64> {
    /// `D2 = d2` constant.
    Constant,
    /// `D2 = d2 cos(Ω τ)`; only the parametric resonance `Ω = 2` is covered.
    Resonant { omega: T },
}

fn check_d2<T: Real>(d2: T) -> Result<Option<&'static str>> {
    if !(d2 >= T::zero()) || !(d2 < lit(D2_MAX)) {
        return Err(Error::InvalidParameter(format!(
            "approximate squeezing expressions need 0 <= d2 < {D2_MAX}"
        )));
    }
    Ok((d2 > lit(D2_WARN)).then_some("d2 above 0.05: perturbative expressions may be inaccurate"))
}

/// Perturbative closed forms for constant `G = g0` and a squeezing drive.
pub fn closed_form_f_example_iii<T: Real>(
    g0: T,
    d2: T,
    mode: SqueezeMode<T>,
    tau: T,
) -> Result<ClosedF<T>> {
    let warning = check_d2(d2)?;
    let one = T::one();
    let two = lit::<T>(2.0);
    let z = T::zero();
    let (f, j) = match mode {
        SqueezeMode::Constant => {
            let x = one + two * d2;
            let (sx, cx) = (x * tau).sin_cos();
            (
                FCoefficients {
                    f_na: z,
                    f_na2: -g0 * g0 * (two * x * tau - (two * x * tau).sin()) / two,
                    f_bp: z,
                    f_bm: z,
                    f_nabp: -g0 * sx,
                    f_nabm: -g0 * (one - cx),
                },
                JTriple {
                    j_plus: z,
                    j_minus: z,
                    j_b: x * tau,
                },
            )
        }
        SqueezeMode::Resonant { omega } => {
            if resonance_branch(omega, two).is_none() {
                return Err(Error::Misuse(
                    "resonant squeezing expressions require omega_d2 = 2".into(),
                ));
            }
            let (st, ct) = tau.sin_cos();
            let (ch, sh) = ((d2 * tau).cosh(), (d2 * tau).sinh());
            let (ch2, sh2) = ((two * d2 * tau).cosh(), (two * d2 * tau).sinh());
            (
                FCoefficients {
                    f_na: z,
                    f_na2: g0 * g0 * (ch2 * (two * tau).sin() + sh2 - two * tau) / two,
                    f_bp: z,
                    f_bm: z,
                    f_nabp: -g0 * (ch * st + sh * ct),
                    f_nabm: g0 * (ch * ct + sh * st - one),
                },
                JTriple {
                    j_plus: d2 * tau / two,
                    j_minus: z,
                    j_b: tau,
                },
            )
        }
    };
    Ok(ClosedF {
        f,
        j,
        branch: Branch::Approximate,
        warning,
    })
}

/// Scenario recognised from a specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario<T = f64> {
    /// Modulated (or constant) coupling, no drives.
    ModulatedCoupling { g0: T, eps: T, omega: T },
    /// Constant coupling and a displacement drive.
    Displacement { g0: T, d1: T, omega: T },
    /// Constant coupling and a squeezing drive.
    Squeezing { g0: T, d2: T, mode: SqueezeMode<T> },
}

/// Maps a specification onto one of the closed-form scenarios.
pub fn classify<T: Real>(spec: &CouplingSpec<T>) -> Result<Scenario<T>> {
    let unsupported = || {
        Error::UnsupportedClosedForm(
            "specification does not match a closed-form scenario".into(),
        )
    };
    let d1_zero = matches!(spec.d1_form, DriveForm::Zero);
    let d2_zero = matches!(spec.d2_form, DriveForm::Zero);
    match spec.g_form {
        CouplingForm::SineModulated { g0, epsilon, omega } => {
            if d1_zero && d2_zero {
                Ok(Scenario::ModulatedCoupling {
                    g0,
                    eps: epsilon,
                    omega,
                })
            } else {
                Err(unsupported())
            }
        }
        CouplingForm::Constant { g0 } => match (spec.d1_form, spec.d2_form) {
            (DriveForm::Zero, DriveForm::Zero) => Ok(Scenario::ModulatedCoupling {
                g0,
                eps: T::zero(),
                omega: T::zero(),
            }),
            (DriveForm::Constant { amp }, DriveForm::Zero) => Ok(Scenario::Displacement {
                g0,
                d1: amp,
                omega: T::zero(),
            }),
            (DriveForm::CosModulated { amp, omega }, DriveForm::Zero) => {
                Ok(Scenario::Displacement { g0, d1: amp, omega })
            }
            (DriveForm::Zero, DriveForm::Constant { amp }) => Ok(Scenario::Squeezing {
                g0,
                d2: amp,
                mode: SqueezeMode::Constant,
            }),
            (DriveForm::Zero, DriveForm::CosModulated { amp, omega }) => {
                Ok(Scenario::Squeezing {
                    g0,
                    d2: amp,
                    mode: SqueezeMode::Resonant { omega },
                })
            }
            _ => Err(unsupported()),
        },
    }
}

/// Closed-form values for whichever scenario the specification describes.
pub fn closed_form_f<T: Real>(spec: &CouplingSpec<T>, tau: T) -> Result<ClosedF<T>> {
    match classify(spec)? {
        Scenario::ModulatedCoupling { g0, eps, omega } => {
            closed_form_f_example_i(g0, eps, omega, tau)
        }
        Scenario::Displacement { g0, d1, omega } => closed_form_f_example_ii(g0, d1, omega, tau),
        Scenario::Squeezing { g0, d2, mode } => closed_form_f_example_iii(g0, d2, mode, tau),
    }
}

/// Analytic `∂_θ F`, `∂_θ J` for the supported (scenario, θ) pairs:
/// modulated coupling with `g0` or `ε`, displacement with `g0` or `d1`,
/// squeezing with `g0` or `d2`.
pub fn closed_form_derivatives<T: Real>(spec: &CouplingSpec<T>, tau: T) -> Result<FDerivatives<T>> {
    let unsupported = |what: &str| {
        Err(Error::UnsupportedClosedForm(format!(
            "theta = {} in the {what} scenario",
            spec.theta.name()
        )))
    };
    let z = T::zero();
    let two = lit::<T>(2.0);
    let scenario = classify(spec)?;
    if spec.theta_is_inert() {
        return Ok(FDerivatives::zero());
    }
    let df = match scenario {
        Scenario::ModulatedCoupling { g0, eps, omega } => {
            let orders = if eps == T::zero() && !(omega > lit(RESONANCE_SWITCH)) {
                unmodulated_orders(tau)
            } else {
                example_i_eps_orders(omega, tau)?
            };
            match spec.theta {
                ThetaTag::G0 => orders.d_g0(g0, eps),
                ThetaTag::Epsilon => orders.d_eps(g0, eps),
                _ => return unsupported("modulated-coupling"),
            }
        }
        Scenario::Displacement { g0, d1, omega } => {
            let (na, bp, bm, _) = example_ii_units(omega, tau);
            let base = unmodulated_orders(tau);
            match spec.theta {
                ThetaTag::G0 => FCoefficients {
                    f_na: d1 * na,
                    ..base.d_g0(g0, z)
                },
                ThetaTag::D1 => FCoefficients {
                    f_na: g0 * na,
                    f_na2: z,
                    f_bp: bp,
                    f_bm: bm,
                    f_nabp: z,
                    f_nabm: z,
                },
                _ => return unsupported("displacement"),
            }
        }
        Scenario::Squeezing { g0, d2, mode } => match spec.theta {
            ThetaTag::G0 => {
                let unit = closed_form_f_example_iii(T::one(), d2, mode, tau)?.f;
                FCoefficients {
                    f_na2: two * g0 * unit.f_na2,
                    ..unit
                }
            }
            ThetaTag::D2 => {
                check_d2(d2)?;
                return Ok(squeeze_d2_derivatives(g0, d2, mode, tau));
            }
            _ => return unsupported("squeezing"),
        },
    };
    Ok(FDerivatives {
        df,
        ..FDerivatives::zero()
    })
}

fn squeeze_d2_derivatives<T: Real>(
    g0: T,
    d2: T,
    mode: SqueezeMode<T>,
    tau: T,
) -> FDerivatives<T> {
    let one = T::one();
    let two = lit::<T>(2.0);
    let g2 = g0 * g0;
    match mode {
        SqueezeMode::Constant => {
            let x = one + two * d2;
            let (sx, cx) = (x * tau).sin_cos();
            FDerivatives {
                df: FCoefficients {
                    f_na2: -two * g2 * tau * (one - (two * x * tau).cos()),
                    f_nabp: -two * g0 * tau * cx,
                    f_nabm: -two * g0 * tau * sx,
                    ..FCoefficients::zero()
                },
                dj_b: two * tau,
                ..FDerivatives::zero()
            }
        }
        SqueezeMode::Resonant { .. } => {
            let (st, ct) = tau.sin_cos();
            let (ch, sh) = ((d2 * tau).cosh(), (d2 * tau).sinh());
            let (ch2, sh2) = ((two * d2 * tau).cosh(), (two * d2 * tau).sinh());
            FDerivatives {
                df: FCoefficients {
                    f_na2: g2 * tau * (sh2 * (two * tau).sin() + ch2),
                    f_nabp: -g0 * tau * (sh * st + ch * ct),
                    f_nabm: g0 * tau * (sh * ct + ch * st),
                    ..FCoefficients::zero()
                },
                dj_plus: tau / two,
                ..FDerivatives::zero()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unmodulated_limit() {
        let tau = 2.3f64;
        let f = closed_form_f_example_i(1.7, 0.0, 0.8, tau).unwrap().f;
        assert!((f.f_na2 + 1.7 * 1.7 * (tau - tau.sin() * tau.cos())).abs() < 1e-14);
        assert!((f.f_nabp + 1.7 * tau.sin()).abs() < 1e-14);
    }

    #[test]
    fn modulated_resonance_values() {
        let c = closed_form_f_example_i(1.0, 0.5, 1.0, 2.0 * PI).unwrap();
        assert_eq!(c.branch, Branch::Resonant);
        assert!(c.f.f_nabp.abs() < 1e-14);
        assert!((c.f.f_nabm + PI / 2.0).abs() < 1e-14);
        let near = closed_form_f_example_i(1.0, 0.5, 1.0 + 1e-7, 2.0 * PI).unwrap();
        assert_eq!(near.branch, Branch::ResonanceLimit);
        assert!(closed_form_f_example_i(1.0, 0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn displacement_values() {
        let c = closed_form_f_example_ii(1.0, 1.0, 1.0, 2.0 * PI).unwrap();
        assert!((c.f.f_bp - PI).abs() < 1e-14);
        assert!(c.f.f_bm.abs() < 1e-14);
        let c = closed_form_f_example_ii(0.6, 0.0, 0.37, 3.0).unwrap();
        assert_eq!((c.f.f_na, c.f.f_bp, c.f.f_bm), (0.0, 0.0, 0.0));
        assert!((c.f.f_nabm - 0.6 * (3.0f64.cos() - 1.0)).abs() < 1e-15);
        let c0 = closed_form_f_example_ii(0.5, 2.0, 0.0, 1.7).unwrap().f;
        assert!((c0.f_na - 0.5 * 2.0 * (3.4 - 3.4f64.sin())).abs() < 1e-14);
        assert!((c0.f_bp - 2.0 * 1.7f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn squeezing_values() {
        let c = closed_form_f_example_iii(1.0f64, 0.0, SqueezeMode::Constant, 1.0).unwrap();
        let u = closed_form_f_example_i(1.0f64, 0.0, 0.0, 1.0).unwrap();
        assert!((c.f.f_na2 - u.f.f_na2).abs() < 1e-15);
        assert_eq!(c.j.j_b, 1.0);
        let r = closed_form_f_example_iii(1.0f64, 0.01, SqueezeMode::Resonant { omega: 2.0 }, 10.0)
            .unwrap();
        assert!((r.j.j_plus - 0.05).abs() < 1e-15);
        assert_eq!((r.j.j_minus, r.j.j_b), (0.0, 10.0));
        assert!(matches!(
            closed_form_f_example_iii(1.0f64, 0.01, SqueezeMode::Resonant { omega: 1.5 }, 1.0),
            Err(Error::Misuse(_))
        ));
        assert!(closed_form_f_example_iii(1.0f64, 0.3, SqueezeMode::Constant, 1.0).is_err());
        let w = closed_form_f_example_iii(1.0f64, 0.1, SqueezeMode::Constant, 1.0).unwrap();
        assert!(w.warning.is_some());
    }

    #[test]
    fn d1_derivative_is_linear() {
        let spec: CouplingSpec = CouplingSpec::new(
            CouplingForm::Constant { g0: 0.8 },
            DriveForm::CosModulated { amp: 1.3, omega: 0.37 },
            DriveForm::Zero,
            ThetaTag::D1,
        );
        let f = closed_form_f(&spec, 9.0).unwrap().f;
        let d = closed_form_derivatives(&spec, 9.0).unwrap();
        assert!((d.df.f_bp - f.f_bp / 1.3).abs() < 1e-14);
        assert!((d.df.f_na - f.f_na / 1.3).abs() < 1e-14);
        assert_eq!((d.dj_plus, d.dj_minus, d.dj_b), (0.0, 0.0, 0.0));
    }

    #[test]
    fn unsupported_pair() {
        let spec: CouplingSpec = CouplingSpec::new(
            CouplingForm::SineModulated {
                g0: 1.0,
                epsilon: 0.5,
                omega: 0.8,
            },
            DriveForm::Zero,
            DriveForm::Zero,
            ThetaTag::OmegaG,
        );
        assert!(matches!(
            closed_form_derivatives(&spec, 1.0),
            Err(Error::UnsupportedClosedForm(_))
        ));
    }
}
