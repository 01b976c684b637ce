use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, wrap_angle, Real};

/// Arguments of arcosh within this distance below 1 are clamped to 1.
pub const ARCOSH_CLAMP: f64 = 1e-9;

/// Squeezing decomposition of the mechanical propagator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JTriple<T = f64> {
    pub j_plus: T,
    pub j_minus: T,
    pub j_b: T,
}

fn arcosh_clamped<T: Real>(x: T) -> Result<T> {
    if x >= T::one() {
        Ok(x.acosh())
    } else if x >= T::one() - lit(ARCOSH_CLAMP) {
        Ok(T::zero())
    } else {
        Err(Error::ArcoshDomain { arg: to_f64(x) })
    }
}

/// `α = e^{−iJ_b}(c+ c− − i s+ s−)`, `β = −e^{−iJ_b}(i s+ c− − c+ s−)` with
/// `c± = cosh 2J±`, `s± = sinh 2J±`.
pub fn bogoliubov_from_j<T: Real>(j: &JTriple<T>) -> (Complex<T>, Complex<T>) {
    let two = lit::<T>(2.0);
    let (cp, sp) = ((two * j.j_plus).cosh(), (two * j.j_plus).sinh());
    let (cm, sm) = ((two * j.j_minus).cosh(), (two * j.j_minus).sinh());
    let (s, c) = j.j_b.sin_cos();
    let phase = Complex::new(c, -s);
    let alpha = phase * Complex::new(cp * cm, -sp * sm);
    let beta = -phase * Complex::new(-cp * sm, sp * cm);
    (alpha, beta)
}

/// Inverts the element formulas for `(J+, J-, J_b)`.
///
/// The closed-form inversion fixes `|J±|` and `J_b` modulo π; the signs and
/// the π shift are chosen so that the element formulas reproduce `(α, β)`.
/// `J_b` is returned in `(−π, π]`.
pub fn extract_j<T: Real>(alpha: Complex<T>, beta: Complex<T>) -> Result<JTriple<T>> {
    let norm = alpha.norm_sqr() - beta.norm_sqr();
    if !((norm - T::one()).abs() <= lit(1e-6)) {
        return Err(Error::InconsistentBogoliubov { norm: to_f64(norm) });
    }
    // Project onto the normalized surface; accepted inputs are only
    // normalized to 1e-6 while the arcosh window is 1e-9.
    let scale = norm.sqrt();
    let (alpha, beta) = (alpha / scale, beta / scale);
    let w = alpha * alpha - beta * beta;
    let m = w.norm();
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    // Domain checks on the arcosh arguments; the values are taken from the
    // equivalent forms sinh 4J+ = 2|Im αβ*| and sinh 4J- = 2|Re αβ*| / |α² − β²|,
    // which keep full precision near the identity.
    arcosh_clamped(m)?;
    arcosh_clamped((two * alpha.norm_sqr() - T::one()) / m)?;
    let z = alpha * beta.conj();
    let jp = (two * z.im.abs()).asinh() / four;
    let jm = (two * z.re.abs() / m).asinh() / four;
    let jb = -w.arg() / two;

    let mut best = JTriple {
        j_plus: jp,
        j_minus: jm,
        j_b: jb,
    };
    let mut best_err = T::infinity();
    for shift in [T::zero(), T::PI()] {
        for sp in [T::one(), -T::one()] {
            for sm in [T::one(), -T::one()] {
                let cand = JTriple {
                    j_plus: sp * jp,
                    j_minus: sm * jm,
                    j_b: jb + shift,
                };
                let (a, b) = bogoliubov_from_j(&cand);
                let err = (a - alpha).norm() + (b - beta).norm();
                if err < best_err * lit(0.5) || (best_err.is_infinite() && err.is_finite()) {
                    best = cand;
                    best_err = err;
                }
            }
        }
    }
    best.j_b = wrap_angle(best.j_b);
    Ok(best)
}

/// Removes 2π jumps so that adjacent samples differ by less than π.
pub fn unwrap_angles<T: Real>(angles: &mut [T]) {
    let two_pi = T::PI() + T::PI();
    let mut offset = T::zero();
    for k in 1..angles.len() {
        let prev = angles[k - 1];
        let mut cur = angles[k] + offset;
        while cur - prev > T::PI() {
            cur -= two_pi;
            offset -= two_pi;
        }
        while cur - prev < -T::PI() {
            cur += two_pi;
            offset += two_pi;
        }
        angles[k] = cur;
    }
}
