//! The six decoupling functions, their θ-derivatives and the closed forms of
//! the three worked scenarios.

mod closed_form;

pub use closed_form::{
    classify, closed_form_derivatives, closed_form_f, closed_form_f_example_i,
    closed_form_f_example_ii, closed_form_f_example_iii, example_i_eps_orders, Branch, ClosedF,
    EpsOrders, Scenario, SqueezeMode, D2_MAX, D2_WARN, RESONANCE_SWITCH,
};

use crate::coupling::CouplingSpec;
use crate::error::{Error, Result};
use crate::mechanics::{idx, solve_mechanics, solve_mechanics_on_nodes, JTriple, MechanicsSolution, State};
use crate::scalar::{lit, Real};

/// Values of `F_Na, F_Na², F_B+, F_B−, F_NaB+, F_NaB−` at one time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FCoefficients<T = f64> {
    pub f_na: T,
    pub f_na2: T,
    pub f_bp: T,
    pub f_bm: T,
    pub f_nabp: T,
    pub f_nabm: T,
}

impl<T: Real> FCoefficients<T> {
    pub fn zero() -> Self {
        Self {
            f_na: T::zero(),
            f_na2: T::zero(),
            f_bp: T::zero(),
            f_bm: T::zero(),
            f_nabp: T::zero(),
            f_nabm: T::zero(),
        }
    }

    /// Reads the functions off the running integrals of the augmented state.
    pub fn from_state(y: &State<T>) -> Self {
        let two = lit::<T>(2.0);
        Self {
            f_na: -two * y[idx::O_N],
            f_na2: two * y[idx::O_GG],
            f_bp: y[idx::S_DR],
            f_bm: -y[idx::S_DI],
            f_nabp: -y[idx::S_GR],
            f_nabm: y[idx::S_GI],
        }
    }

    pub fn to_array(&self) -> [T; 6] {
        [
            self.f_na,
            self.f_na2,
            self.f_bp,
            self.f_bm,
            self.f_nabp,
            self.f_nabm,
        ]
    }

    pub fn from_array(a: [T; 6]) -> Self {
        Self {
            f_na: a[0],
            f_na2: a[1],
            f_bp: a[2],
            f_bm: a[3],
            f_nabp: a[4],
            f_nabm: a[5],
        }
    }

    pub const NAMES: [&'static str; 6] = ["f_na", "f_na2", "f_bp", "f_bm", "f_nabp", "f_nabm"];
}

/// θ-derivatives of the six functions and of the `J` triple.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FDerivatives<T = f64> {
    pub df: FCoefficients<T>,
    pub dj_plus: T,
    pub dj_minus: T,
    pub dj_b: T,
}

impl<T: Real> FDerivatives<T> {
    pub fn zero() -> Self {
        Self {
            df: FCoefficients::zero(),
            dj_plus: T::zero(),
            dj_minus: T::zero(),
            dj_b: T::zero(),
        }
    }

    fn to_array(self) -> [T; 9] {
        let f = self.df.to_array();
        [
            f[0],
            f[1],
            f[2],
            f[3],
            f[4],
            f[5],
            self.dj_plus,
            self.dj_minus,
            self.dj_b,
        ]
    }

    fn from_array(a: [T; 9]) -> Self {
        Self {
            df: FCoefficients::from_array([a[0], a[1], a[2], a[3], a[4], a[5]]),
            dj_plus: a[6],
            dj_minus: a[7],
            dj_b: a[8],
        }
    }
}

/// How `∂_θ F` and `∂_θ J` are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMethod<T = f64> {
    /// Analytic derivatives of the scenario closed forms.
    ClosedForm,
    /// Central differences of the quadrature pipeline with one Richardson
    /// refinement; `None` selects `1e-6 · max(1, |θ|)`.
    FiniteDiff { h: Option<T> },
}

/// Evaluates the six functions from a mechanics solution at `τ`.
pub fn compute_f<T: Real>(
    spec: &CouplingSpec<T>,
    mech: &MechanicsSolution<T>,
    tau: T,
) -> Result<FCoefficients<T>> {
    if *spec != mech.spec {
        return Err(Error::Misuse(
            "mechanics solution was computed for a different specification".into(),
        ));
    }
    if tau == T::zero() {
        return Ok(FCoefficients::zero());
    }
    Ok(FCoefficients::from_state(&mech.state_at(tau)?))
}

/// `J` triple from a mechanics solution at `τ`.
pub fn compute_j<T: Real>(mech: &MechanicsSolution<T>, tau: T) -> Result<JTriple<T>> {
    mech.j_at(tau)
}

/// Default finite-difference step for parameter value `theta`.
pub fn default_fd_step<T: Real>(theta: T) -> T {
    lit::<T>(1e-6) * theta.abs().max(T::one())
}

/// Finite-difference estimates at steps `h` and `h/2`, and the refined value.
#[derive(Debug, Clone, Copy)]
pub struct FdEstimate<T> {
    pub coarse: FDerivatives<T>,
    pub fine: FDerivatives<T>,
    pub refined: FDerivatives<T>,
}

fn sample<T: Real>(spec: &CouplingSpec<T>, nodes: &[T], tau: T) -> Result<[T; 9]> {
    let mech = solve_mechanics_on_nodes(spec, nodes)?;
    let y = mech.state_at(tau)?;
    let f = FCoefficients::from_state(&y).to_array();
    Ok([
        f[0],
        f[1],
        f[2],
        f[3],
        f[4],
        f[5],
        y[idx::J_PLUS],
        y[idx::J_MINUS],
        y[idx::J_B],
    ])
}

/// Central differences at `h` and `h/2` on the nominal step sequence,
/// combined as `(4 D(h/2) − D(h)) / 3`.
pub fn finite_difference<T: Real>(
    spec: &CouplingSpec<T>,
    tau: T,
    h: T,
    tol: T,
) -> Result<FdEstimate<T>> {
    if !(h > T::zero()) {
        return Err(Error::InvalidParameter("finite-difference step must be > 0".into()));
    }
    if !(tau > T::zero()) {
        return Ok(FdEstimate {
            coarse: FDerivatives::zero(),
            fine: FDerivatives::zero(),
            refined: FDerivatives::zero(),
        });
    }
    let theta = spec.theta_value();
    let nominal = solve_mechanics(spec, tau, tol)?;
    let nodes = nominal.step_nodes().to_vec();
    let central = |step: T| -> Result<[T; 9]> {
        let p = sample(&spec.with_theta(theta + step), &nodes, tau)?;
        let m = sample(&spec.with_theta(theta - step), &nodes, tau)?;
        let mut d = [T::zero(); 9];
        for k in 0..9 {
            d[k] = (p[k] - m[k]) / (step + step);
        }
        Ok(d)
    };
    let coarse = central(h)?;
    let fine = central(h / lit(2.0))?;
    let mut refined = [T::zero(); 9];
    for k in 0..9 {
        refined[k] = (lit::<T>(4.0) * fine[k] - coarse[k]) / lit(3.0);
    }
    Ok(FdEstimate {
        coarse: FDerivatives::from_array(coarse),
        fine: FDerivatives::from_array(fine),
        refined: FDerivatives::from_array(refined),
    })
}

/// `∂_θ F` and `∂_θ J` at `τ` for the tagged parameter.
pub fn derivatives_wrt_theta<T: Real>(
    spec: &CouplingSpec<T>,
    tau: T,
    method: DerivativeMethod<T>,
) -> Result<FDerivatives<T>> {
    match method {
        DerivativeMethod::ClosedForm => closed_form_derivatives(spec, tau),
        DerivativeMethod::FiniteDiff { h } => {
            let h = h.unwrap_or_else(|| default_fd_step(spec.theta_value()));
            Ok(finite_difference(spec, tau, h, T::default_rtol())?.refined)
        }
    }
}

/// Sum of absolute differences over all nine slots.
pub fn derivative_distance<T: Real>(a: &FDerivatives<T>, b: &FDerivatives<T>) -> T {
    a.to_array()
        .iter()
        .zip(b.to_array().iter())
        .map(|(x, y)| (*x - *y).abs())
        .fold(T::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{CouplingForm, DriveForm, ThetaTag};
    use std::f64::consts::PI;

    fn constant(g0: f64) -> CouplingSpec {
        CouplingSpec::new(
            CouplingForm::Constant { g0 },
            DriveForm::Zero,
            DriveForm::Zero,
            ThetaTag::G0,
        )
    }

    #[test]
    fn zero_at_origin() {
        let s = CouplingSpec::new(
            CouplingForm::SineModulated {
                g0: 1.0,
                epsilon: 0.5,
                omega: 0.8,
            },
            DriveForm::CosModulated { amp: 1.0, omega: 0.3 },
            DriveForm::CosModulated { amp: 0.02, omega: 2.0 },
            ThetaTag::G0,
        );
        let m = solve_mechanics(&s, 3.0, 1e-10).unwrap();
        assert_eq!(compute_f(&s, &m, 0.0).unwrap(), FCoefficients::zero());
    }

    #[test]
    fn constant_coupling_at_pi() {
        let s = constant(1.3);
        let m = solve_mechanics(&s, PI, 1e-10).unwrap();
        let f = compute_f(&s, &m, PI).unwrap();
        assert!(f.f_nabp.abs() < 1e-9);
        assert!((f.f_nabm + 2.0 * 1.3).abs() < 1e-9);
        assert!((f.f_na2 + 1.3 * 1.3 * PI).abs() < 1e-9);
        assert_eq!((f.f_na, f.f_bp, f.f_bm), (0.0, 0.0, 0.0));
    }

    #[test]
    fn mismatched_spec_is_misuse() {
        let m = solve_mechanics(&constant(1.0), 1.0, 1e-10).unwrap();
        assert!(matches!(
            compute_f(&constant(2.0), &m, 0.5),
            Err(Error::Misuse(_))
        ));
    }

    #[test]
    fn d1_does_not_move_the_mechanics() {
        let s = CouplingSpec::new(
            CouplingForm::Constant { g0: 0.4 },
            DriveForm::CosModulated { amp: 0.7, omega: 0.37 },
            DriveForm::CosModulated { amp: 0.03, omega: 1.1 },
            ThetaTag::D1,
        );
        let d = derivatives_wrt_theta(&s, 4.0, DerivativeMethod::FiniteDiff { h: None }).unwrap();
        assert_eq!((d.dj_plus, d.dj_minus, d.dj_b), (0.0, 0.0, 0.0));
        assert_eq!(d.df.f_na2, 0.0);
    }

    #[test]
    fn inert_parameter_has_zero_derivatives() {
        let s = constant(0.5).with_tag(ThetaTag::OmegaG);
        let d = derivatives_wrt_theta(&s, 2.0, DerivativeMethod::FiniteDiff { h: None }).unwrap();
        assert_eq!(d, FDerivatives::zero());
    }
}
