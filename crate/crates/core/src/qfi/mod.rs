//! Generator coefficients, the general QFI expression, its closed forms and
//! Cramér–Rao bounds.

mod closed_form;

pub use closed_form::{
    d2_const_coefficients, d2_res_coefficients, qfi_d1_const, qfi_d1_general, qfi_d1_res,
    qfi_d2_const_app, qfi_d2_res_app, qfi_g0_general, qfi_g0_res, qfi_g0_res_asymptotic,
};

use crate::coupling::{CouplingSpec, ProbeState};
use crate::error::{Error, Result};
use crate::fcoeffs::{
    closed_form_derivatives, closed_form_f, compute_f, derivatives_wrt_theta, Branch,
    DerivativeMethod, FCoefficients, FDerivatives,
};
use crate::mechanics::{solve_mechanics, JTriple};
use crate::scalar::{compensated_sum, lit, Real};

/// Coefficients of `H_θ = −i U† ∂_θ U` in the generator basis, plus the
/// auxiliary `R` combinations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QfiCoefficients<T = f64> {
    pub a: T,
    pub b: T,
    pub c_plus: T,
    pub c_minus: T,
    pub c_na_plus: T,
    pub c_na_minus: T,
    pub e: T,
    pub f_big: T,
    pub g_big: T,
    pub k: T,
    pub r0: T,
    pub r_plus: T,
    pub r_minus: T,
}

/// Per-block contributions to the QFI.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QfiBreakdown<T = f64> {
    pub term_a: T,
    pub term_ab: T,
    pub term_b: T,
    pub term_c: T,
    pub term_fg: T,
}

impl<T: Real> QfiBreakdown<T> {
    pub fn total(&self) -> T {
        compensated_sum([
            self.term_a,
            self.term_ab,
            self.term_b,
            self.term_c,
            self.term_fg,
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiResult<T = f64> {
    pub value: T,
    pub breakdown: QfiBreakdown<T>,
    pub branch: Branch,
    pub warning: Option<&'static str>,
}

impl<T: Real> QfiResult<T> {
    pub(crate) fn from_breakdown(breakdown: QfiBreakdown<T>, branch: Branch) -> Self {
        Self {
            value: breakdown.total().max(T::zero()),
            breakdown,
            branch,
            warning: None,
        }
    }
}

/// Builds the coefficients from `F`, `∂_θ F`, `J` and `∂_θ J` at time `τ`.
///
/// The `τ ∂_θ Ω_c` contribution to `B` is fixed at zero: the cavity frequency
/// is never the estimated parameter.
pub fn assemble_coefficients<T: Real>(
    f: &FCoefficients<T>,
    d: &FDerivatives<T>,
    j: &JTriple<T>,
    _tau: T,
) -> QfiCoefficients<T> {
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let df = &d.df;
    let r0 = two * d.dj_minus - (four * j.j_plus).sinh() * d.dj_b;
    let ch = (four * j.j_plus).cosh();
    let r_plus = two * d.dj_plus - ch * d.dj_b;
    let r_minus = two * d.dj_plus + ch * d.dj_b;
    let ep = (four * j.j_minus).exp();
    let em = (-four * j.j_minus).exp();
    let omega_c_term = T::zero();

    let a = -df.f_na2 - two * f.f_nabm * df.f_nabp
        + two * f.f_nabm * f.f_nabp * r0
        + em * f.f_nabp * f.f_nabp * r_plus
        - ep * f.f_nabm * f.f_nabm * r_minus;
    let b = -omega_c_term - df.f_na - two * f.f_bm * df.f_nabp - two * f.f_nabm * df.f_bp
        + two * (f.f_bp * f.f_nabm + f.f_bm * f.f_nabp) * r0
        + two * em * f.f_bp * f.f_nabp * r_plus
        - two * ep * f.f_bm * f.f_nabm * r_minus;
    let c_plus = -df.f_bp + f.f_bp * r0 - ep * f.f_bm * r_minus;
    let c_minus = -df.f_bm - f.f_bm * r0 - em * f.f_bp * r_plus;
    let c_na_plus = -df.f_nabp + f.f_nabp * r0 - ep * f.f_nabm * r_minus;
    let c_na_minus = -df.f_nabm - f.f_nabm * r0 - em * f.f_nabp * r_plus;
    let e = -(ep * r_minus - em * r_plus) / two;
    let f_big = -(ep * r_minus + em * r_plus) / four;
    let g_big = -r0 / two;
    let k = -two * f.f_bm * df.f_bp
        + two * f.f_bm * f.f_bp * r0
        + em * f.f_bp * f.f_bp * r_plus
        - ep * f.f_bm * f.f_bm * r_minus
        + d.dj_b / two
        + e / two;
    QfiCoefficients {
        a,
        b,
        c_plus,
        c_minus,
        c_na_plus,
        c_na_minus,
        e,
        f_big,
        g_big,
        k,
        r0,
        r_plus,
        r_minus,
    }
}

/// Block contributions of the general expression. `e` and `k` are not read.
pub fn qfi_breakdown<T: Real>(c: &QfiCoefficients<T>, probe: &ProbeState<T>) -> QfiBreakdown<T> {
    let four = lit::<T>(4.0);
    let m2 = probe.mu_sq();
    let m4 = m2 * m2;
    let m6 = m4 * m2;
    let ch = probe.cosh_2r();
    let ch2 = ch * ch;
    let sp = c.c_plus + c.c_na_plus * m2;
    let sm = c.c_minus + c.c_na_minus * m2;
    QfiBreakdown {
        term_a: four * (four * m6 + lit::<T>(6.0) * m4 + m2) * c.a * c.a,
        term_ab: four * lit::<T>(2.0) * (lit::<T>(2.0) * m4 + m2) * c.a * c.b,
        term_b: four * m2 * c.b * c.b,
        term_c: four
            * compensated_sum([
                ch * (c.c_na_plus * c.c_na_plus + c.c_na_minus * c.c_na_minus) * m2,
                (sp * sp + sm * sm) / ch,
            ]),
        term_fg: four * four * ch2 / (ch2 + T::one())
            * (c.f_big * c.f_big + c.g_big * c.g_big),
    }
}

/// The general QFI for a coherent cavity state and a thermal mechanical state.
pub fn qfi_general<T: Real>(c: &QfiCoefficients<T>, probe: &ProbeState<T>) -> QfiResult<T> {
    QfiResult::from_breakdown(qfi_breakdown(c, probe), Branch::General)
}

/// Standard-deviation bound `1/√(M·I)`.
pub fn cramer_rao<T: Real>(qfi: T, repetitions: u64) -> Result<T> {
    if repetitions == 0 {
        return Err(Error::InvalidParameter("repetition count must be >= 1".into()));
    }
    if qfi == T::zero() {
        return Err(Error::UnboundedVariance);
    }
    if !(qfi > T::zero()) || !qfi.is_finite() {
        return Err(Error::InvalidParameter("QFI must be finite and > 0".into()));
    }
    let m = T::from_u64(repetitions)
        .ok_or_else(|| Error::InvalidParameter("repetition count not representable".into()))?;
    Ok(T::one() / (m * qfi).sqrt())
}

/// Everything needed to evaluate the general expression at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineInputs<T = f64> {
    pub f: FCoefficients<T>,
    pub d: FDerivatives<T>,
    pub j: JTriple<T>,
    pub branch: Branch,
    pub warning: Option<&'static str>,
}

/// Gathers `F`, `∂_θ F`, `J` either from the scenario closed forms or from
/// quadrature plus finite differences.
pub fn pipeline_inputs<T: Real>(
    spec: &CouplingSpec<T>,
    tau: T,
    method: DerivativeMethod<T>,
) -> Result<PipelineInputs<T>> {
    spec.validate()?;
    match method {
        DerivativeMethod::ClosedForm => {
            let cf = closed_form_f(spec, tau)?;
            let d = closed_form_derivatives(spec, tau)?;
            Ok(PipelineInputs {
                f: cf.f,
                d,
                j: cf.j,
                branch: cf.branch,
                warning: cf.warning,
            })
        }
        DerivativeMethod::FiniteDiff { .. } => {
            if tau == T::zero() {
                return Ok(PipelineInputs {
                    f: FCoefficients::zero(),
                    d: FDerivatives::zero(),
                    j: JTriple {
                        j_plus: T::zero(),
                        j_minus: T::zero(),
                        j_b: T::zero(),
                    },
                    branch: Branch::Numeric,
                    warning: None,
                });
            }
            let mech = solve_mechanics(spec, tau, T::default_rtol())?;
            let f = compute_f(spec, &mech, tau)?;
            let j = mech.j_at(tau)?;
            let d = derivatives_wrt_theta(spec, tau, method)?;
            Ok(PipelineInputs {
                f,
                d,
                j,
                branch: Branch::Numeric,
                warning: None,
            })
        }
    }
}

/// QFI for the tagged parameter of `spec` at time `τ`.
pub fn qfi_for_spec<T: Real>(
    spec: &CouplingSpec<T>,
    probe: &ProbeState<T>,
    tau: T,
    method: DerivativeMethod<T>,
) -> Result<QfiResult<T>> {
    let p = pipeline_inputs(spec, tau, method)?;
    let c = assemble_coefficients(&p.f, &p.d, &p.j, tau);
    let mut r = qfi_general(&c, probe);
    r.branch = p.branch;
    r.warning = p.warning;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn probe(mu: f64, r: f64) -> ProbeState {
        ProbeState::real(mu, r).unwrap()
    }

    #[test]
    fn zero_inputs_give_zero() {
        let c = assemble_coefficients(
            &FCoefficients::from_array([0.3, -1.0, 2.0, 0.1, 0.7, -0.2]),
            &FDerivatives::zero(),
            &JTriple {
                j_plus: 0.2,
                j_minus: -0.1,
                j_b: 3.0,
            },
            1.0,
        );
        assert_eq!(c, QfiCoefficients::default());
        let r = qfi_general(&c, &probe(1.0, 0.3));
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn no_j_dependence_kills_e_f_g() {
        let d = FDerivatives {
            df: FCoefficients::from_array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6]),
            ..FDerivatives::zero()
        };
        let f = FCoefficients::from_array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let j = JTriple {
            j_plus: 0.4,
            j_minus: 0.2,
            j_b: 1.0,
        };
        let c = assemble_coefficients(&f, &d, &j, 2.0);
        assert_eq!((c.e, c.f_big, c.g_big), (0.0, 0.0, 0.0));
        assert_eq!((c.r0, c.r_plus, c.r_minus), (0.0, 0.0, 0.0));
        assert_eq!(c.a, -0.2 - 2.0 * 6.0 * 0.5);
        assert_eq!(c.c_na_plus, -0.5);
        assert_eq!(c.b, -0.1 - 2.0 * 4.0 * 0.5 - 2.0 * 6.0 * 0.3);
    }

    #[test]
    fn e_and_k_are_not_read() {
        let base = QfiCoefficients {
            a: 0.3,
            b: -1.2,
            c_plus: 0.5,
            c_minus: 0.1,
            c_na_plus: -0.7,
            c_na_minus: 0.2,
            f_big: 0.4,
            g_big: -0.3,
            ..Default::default()
        };
        let p = probe(1.7, 0.4);
        let x = qfi_general(&base, &p);
        let y = qfi_general(
            &QfiCoefficients {
                e: 123.0,
                k: -9.0e7,
                ..base
            },
            &p,
        );
        assert_eq!(x.value.to_bits(), y.value.to_bits());
    }

    #[test]
    fn cramer_rao_bounds() {
        assert!((cramer_rao(3.02e25f64, 1).unwrap() / 1.82e-13 - 1.0).abs() < 0.02);
        assert!((cramer_rao(1.58e12f64, 1).unwrap() / 7.96e-7 - 1.0).abs() < 0.02);
        assert_eq!(cramer_rao(16.0, 4).unwrap(), 0.5 * cramer_rao(16.0, 1).unwrap());
        assert!(matches!(cramer_rao(0.0, 1), Err(Error::UnboundedVariance)));
        assert!(cramer_rao(1.0, 0).is_err());
        assert!(cramer_rao(-1.0, 1).is_err());
    }

    fn structured(pattern: usize, v: [f64; 8]) -> QfiCoefficients {
        let mut c = QfiCoefficients::default();
        match pattern {
            // modulated coupling: A and C_Na only
            0 => {
                c.a = v[0];
                c.c_na_plus = v[1];
                c.c_na_minus = v[2];
            }
            // displacement: B and C only
            1 => {
                c.b = v[0];
                c.c_plus = v[1];
                c.c_minus = v[2];
            }
            // squeezing: everything but B and C
            _ => {
                c.a = v[0];
                c.c_na_plus = v[1];
                c.c_na_minus = v[2];
                c.f_big = v[3];
                c.g_big = v[4];
            }
        }
        c
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn nonnegative_on_structured_tuples(pattern in 0usize..3,
                                            v in proptest::array::uniform8(-1e3f64..1e3),
                                            mu in 0.0f64..100.0, r in 0.0f64..4.0) {
            let res = qfi_general(&structured(pattern, v), &probe(mu, r));
            let b = res.breakdown;
            let mag = b.term_a.abs() + b.term_ab.abs() + b.term_b.abs() + b.term_c + b.term_fg;
            prop_assert!(b.total() >= -1e-14 * mag);
            prop_assert!(res.value >= 0.0);
        }
    }
}
