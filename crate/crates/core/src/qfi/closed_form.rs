use crate::coupling::ProbeState;
use crate::error::{Error, Result};
use crate::fcoeffs::{Branch, RESONANCE_SWITCH};
use crate::scalar::{compensated_sum, lit, sinc, Real};

use super::{QfiBreakdown, QfiCoefficients, QfiResult};

fn check_tau<T: Real>(tau: T) -> Result<()> {
    if !(tau >= T::zero()) || !tau.is_finite() {
        return Err(Error::InvalidParameter("tau must be finite and >= 0".into()));
    }
    Ok(())
}

/// `|μ|²(4|μ|⁴ + 6|μ|² + 1)`
fn cubic_weight<T: Real>(m2: T) -> T {
    m2 * (lit::<T>(4.0) * m2 * m2 + lit::<T>(6.0) * m2 + T::one())
}

/// `|μ|² (cosh 2r + |μ|²/cosh 2r)`
fn cna_weight<T: Real>(probe: &ProbeState<T>) -> T {
    let m2 = probe.mu_sq();
    let ch = probe.cosh_2r();
    m2 * (ch + m2 / ch)
}

fn result<T: Real>(term_a: T, term_b: T, term_c: T, term_fg: T, branch: Branch) -> QfiResult<T> {
    QfiResult::from_breakdown(
        QfiBreakdown {
            term_a,
            term_ab: T::zero(),
            term_b,
            term_c,
            term_fg,
        },
        branch,
    )
}

/// QFI for `g0` with `G = g0(1 + ε sin(Ω τ))` at a general frequency.
pub fn qfi_g0_general<T: Real>(
    g0: T,
    eps: T,
    omega: T,
    tau: T,
    probe: &ProbeState<T>,
) -> Result<QfiResult<T>> {
    check_tau(tau)?;
    let one = T::one();
    let d = (omega - one).abs();
    if d < lit(RESONANCE_SWITCH) {
        let mut r = qfi_g0_res(g0, eps, tau, probe)?;
        if d > T::zero() {
            r.branch = Branch::ResonanceLimit;
        }
        return Ok(r);
    }
    if !(omega > T::zero()) {
        return Err(Error::InvalidParameter(
            "general modulated-coupling QFI needs omega_g > 0".into(),
        ));
    }
    let c = |x: f64| lit::<T>(x);
    let w = omega;
    let (w2, e2) = (w * w, eps * eps);
    let (w3, w4) = (w2 * w, w2 * w2);
    let w5 = w4 * w;
    let (st, ct) = tau.sin_cos();
    let (swt, cwt) = (w * tau).sin_cos();
    let sh2 = {
        let s = (w * tau / c(2.0)).sin();
        s * s
    };
    let x = compensated_sum([
        c(2.0) * tau * w5,
        -c(4.0) * tau * w3,
        c(2.0) * tau * w,
        -tau * w3 * e2,
        c(0.5) * w2 * e2 * (c(2.0) * w * tau).sin(),
        c(2.0) * w2 * e2 * ct * swt,
        tau * w * e2,
        -c(4.0) * w4 * eps * ct * sh2,
        -c(2.0) * (w2 - one) * w * st * (w2 - eps * swt - one),
        c(4.0) * w2 * eps * ct * sh2,
        -eps * cwt * (c(2.0) * w3 * eps * st + eps * swt + c(2.0) * w4 - c(6.0) * w2 + c(4.0)),
        c(2.0) * w4 * eps,
        -c(6.0) * w2 * eps,
        c(4.0) * eps,
    ]);
    let den = w2 - one;
    let den4 = den * den * den * den;
    let term_a = c(4.0) * g0 * g0 / (w2 * den4) * cubic_weight(probe.mu_sq()) * x * x;
    let u = one - ct - eps * (w * cwt * st - ct * swt) / den;
    let v = st + eps * (w * (one - ct * cwt) - st * swt) / den;
    let term_c = c(4.0) * cna_weight(probe) * (u * u + v * v);
    Ok(result(term_a, T::zero(), term_c, T::zero(), Branch::General))
}

/// QFI for `g0` with the coupling modulated at the mechanical resonance.
pub fn qfi_g0_res<T: Real>(g0: T, eps: T, tau: T, probe: &ProbeState<T>) -> Result<QfiResult<T>> {
    check_tau(tau)?;
    let c = |x: f64| lit::<T>(x);
    let (st, ct) = tau.sin_cos();
    let e2 = eps * eps;
    let p = compensated_sum([
        c(4.0) * tau * e2,
        -c(3.0) * e2 * (c(2.0) * tau).sin(),
        -c(8.0) * tau * eps * st,
        -c(32.0) * eps * ct,
        c(2.0) * eps * (tau * eps + c(2.0)) * (c(2.0) * tau).cos(),
        c(16.0) * tau,
        -c(16.0) * st,
        c(28.0) * eps,
    ]);
    let term_a = g0 * g0 * cubic_weight(probe.mu_sq()) * p * p / c(16.0);
    let q = eps * st + c(2.0);
    let u = st * q;
    let v = tau * eps - ct * q + c(2.0);
    let term_c = cna_weight(probe) * (u * u + v * v);
    Ok(result(term_a, T::zero(), term_c, T::zero(), Branch::Resonant))
}

/// Long-time, weak-modulation, zero-temperature form of [`qfi_g0_res`]:
/// `16 g0² τ² |μ|² (4|μ|⁴ + 6|μ|² + 1)(1 − ε sin τ)`.
pub fn qfi_g0_res_asymptotic<T: Real>(
    g0: T,
    eps: T,
    tau: T,
    probe: &ProbeState<T>,
) -> Result<QfiResult<T>> {
    check_tau(tau)?;
    let term_a =
        lit::<T>(16.0) * g0 * g0 * tau * tau * cubic_weight(probe.mu_sq()) * (T::one() - eps * tau.sin());
    let mut r = result(term_a, T::zero(), T::zero(), T::zero(), Branch::Approximate);
    if probe.r_t != T::zero() {
        r.warning = Some("asymptotic form assumes r_T = 0");
    }
    Ok(r)
}

/// QFI for `d1` with `D1 = d1 cos(Ω τ)` and constant coupling. `Ω = 0` is the
/// constant drive.
pub fn qfi_d1_general<T: Real>(g0: T, omega: T, tau: T, probe: &ProbeState<T>) -> Result<QfiResult<T>> {
    check_tau(tau)?;
    let one = T::one();
    let d = (omega - one).abs();
    if d < lit(RESONANCE_SWITCH) {
        let mut r = qfi_d1_res(g0, tau, probe)?;
        if d > T::zero() {
            r.branch = Branch::ResonanceLimit;
        }
        return Ok(r);
    }
    if !(omega >= T::zero()) {
        return Err(Error::InvalidParameter("omega_d1 must be >= 0".into()));
    }
    let c = |x: f64| lit::<T>(x);
    let w = omega;
    let w2 = w * w;
    let (st, ct) = tau.sin_cos();
    let (swt, cwt) = (w * tau).sin_cos();
    // sin(Ωτ)/Ω, finite at Ω = 0
    let s1 = tau * sinc(w * tau);
    let y = s1 * (w2 * (one - ct) - one) + st * cwt;
    let den = one - w2;
    let pre = c(4.0) / (den * den);
    let term_b = pre * c(4.0) * g0 * g0 * probe.mu_sq() * y * y;
    let z = compensated_sum([
        c(2.0),
        (w2 - one) * swt * swt,
        -c(2.0) * w * st * swt,
        -c(2.0) * ct * cwt,
    ]);
    let term_c = pre * z / probe.cosh_2r();
    Ok(result(T::zero(), term_b, term_c, T::zero(), Branch::General))
}

/// QFI for a constant displacement drive:
/// `16(g0²|μ|²(τ − sin τ)² + sin²(τ/2)/cosh 2r)`.
pub fn qfi_d1_const<T: Real>(g0: T, tau: T, probe: &ProbeState<T>) -> Result<QfiResult<T>> {
    check_tau(tau)?;
    let c = |x: f64| lit::<T>(x);
    let y = tau - tau.sin();
    let s = (tau / c(2.0)).sin();
    let term_b = c(16.0) * g0 * g0 * probe.mu_sq() * y * y;
    let term_c = c(16.0) * s * s / probe.cosh_2r();
    Ok(result(T::zero(), term_b, term_c, T::zero(), Branch::General))
}

/// QFI for a displacement drive at the mechanical resonance.
pub fn qfi_d1_res<T: Real>(g0: T, tau: T, probe: &ProbeState<T>) -> Result<QfiResult<T>> {
    check_tau(tau)?;
    let c = |x: f64| lit::<T>(x);
    let (st, ct) = tau.sin_cos();
    let y = tau + st * (ct - c(2.0));
    let term_b = c(4.0) * g0 * g0 * probe.mu_sq() * y * y;
    let term_c = (tau * tau + c(2.0) * tau * st * ct + st * st) / probe.cosh_2r();
    Ok(result(T::zero(), term_b, term_c, T::zero(), Branch::Resonant))
}

/// Coefficient list for weak constant squeezing: only `C_Na,+ = 2 g0 τ`.
pub fn d2_const_coefficients<T: Real>(g0: T, tau: T) -> QfiCoefficients<T> {
    QfiCoefficients {
        c_na_plus: lit::<T>(2.0) * g0 * tau,
        ..Default::default()
    }
}

/// Coefficient list for weak squeezing at parametric resonance.
pub fn d2_res_coefficients<T: Real>(g0: T, tau: T) -> QfiCoefficients<T> {
    QfiCoefficients {
        a: -g0 * g0 * tau,
        c_na_plus: g0 * tau,
        f_big: -tau / lit(2.0),
        ..Default::default()
    }
}

/// `16 g0² τ² |μ|² (|μ|² + cosh² 2r)/cosh 2r`, valid for `d2 ≪ 1`.
pub fn qfi_d2_const_app<T: Real>(g0: T, tau: T, probe: &ProbeState<T>) -> Result<QfiResult<T>> {
    check_tau(tau)?;
    let term_c = lit::<T>(16.0) * g0 * g0 * tau * tau * cna_weight(probe);
    Ok(result(T::zero(), T::zero(), term_c, T::zero(), Branch::Approximate))
}

/// Weak squeezing modulated at `Ω = 2`.
pub fn qfi_d2_res_app<T: Real>(g0: T, tau: T, probe: &ProbeState<T>) -> Result<QfiResult<T>> {
    check_tau(tau)?;
    let c = |x: f64| lit::<T>(x);
    let t2 = c(4.0) * tau * tau;
    let g2 = g0 * g0;
    let ch2 = probe.cosh_2r() * probe.cosh_2r();
    let term_a = t2 * g2 * g2 * cubic_weight(probe.mu_sq());
    let term_c = t2 * g2 * cna_weight(probe);
    let term_fg = t2 * ch2 / (ch2 + T::one());
    Ok(result(term_a, T::zero(), term_c, term_fg, Branch::Approximate))
}
