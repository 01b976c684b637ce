use num_complex::Complex;

use crate::scalar::{wrap_angle, Real};

/// 2×2 complex matrix, row-major.
pub type Mat2<T> = [[Complex<T>; 2]; 2];

/// Single-mode squeeze `S(r e^{iθ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams<T = f64> {
    pub r: T,
    pub theta: T,
}

impl<T: Real> SqueezeParams<T> {
    pub fn new(r: T, theta: T) -> Self {
        debug_assert!(r >= T::zero());
        Self {
            r,
            theta: wrap_angle(theta),
        }
    }

    /// `t = tanh(r) e^{iθ}`
    pub fn t(&self) -> Complex<T> {
        Complex::from_polar(self.r.tanh(), self.theta)
    }
}

/// `[[cosh r, −e^{iθ} sinh r], [−e^{−iθ} sinh r, cosh r]]`
pub fn squeeze_matrix<T: Real>(p: &SqueezeParams<T>) -> Mat2<T> {
    let (c, s) = (p.r.cosh(), p.r.sinh());
    let z = T::zero();
    [
        [Complex::new(c, z), -Complex::from_polar(s, p.theta)],
        [-Complex::from_polar(s, -p.theta), Complex::new(c, z)],
    ]
}

/// `diag(e^{−ia}, e^{ia})`
pub fn rotation_matrix<T: Real>(a: T) -> Mat2<T> {
    let z = Complex::new(T::zero(), T::zero());
    [
        [Complex::from_polar(T::one(), -a), z],
        [z, Complex::from_polar(T::one(), a)],
    ]
}

/// Composition law `S(z1) S(z2) = R(a) S(z3)` with
/// `t3 = (t1 + t2)/(1 + t1 t2*)` and `e^{−2ia} = (1 + t1 t2*)/(1 + t1* t2)`.
pub fn squeeze_compose<T: Real>(
    s1: &SqueezeParams<T>,
    s2: &SqueezeParams<T>,
) -> (T, SqueezeParams<T>) {
    let (t1, t2) = (s1.t(), s2.t());
    let den = Complex::new(T::one(), T::zero()) + t1 * t2.conj();
    let t3 = (t1 + t2) / den;
    let a = -den.arg();
    let r3 = t3.norm().atanh();
    let theta3 = if t3.norm() > T::zero() {
        t3.arg()
    } else {
        T::zero()
    };
    (a, SqueezeParams::new(r3, theta3))
}

/// `φ_J = arctan(tanh 2J+ tanh 2J−)`,
/// `ζ_J = (i tanh 2J+ − tanh 2J−)/(1 − i tanh 2J+ tanh 2J−)`.
pub fn compact_squeeze_params<T: Real>(j_plus: T, j_minus: T) -> (T, Complex<T>) {
    let two = T::one() + T::one();
    let (a, b) = ((two * j_plus).tanh(), (two * j_minus).tanh());
    let phi = (a * b).atan();
    let zeta = Complex::new(-b, a) / Complex::new(T::one(), -a * b);
    (phi, zeta)
}

pub fn mat_mul<T: Real>(x: &Mat2<T>, y: &Mat2<T>) -> Mat2<T> {
    let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn max_diff(x: &Mat2<f64>, y: &Mat2<f64>) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((x[i][j] - y[i][j]).norm());
            }
        }
        m
    }

    #[test]
    fn identity_squeeze() {
        let s1 = SqueezeParams::new(0.4f64, 1.1);
        let (a, s3) = squeeze_compose(&s1, &SqueezeParams::new(0.0, 2.0));
        assert_eq!(a, 0.0);
        assert!((s3.r - 0.4).abs() < 1e-15 && (s3.theta - 1.1).abs() < 1e-15);
    }

    #[test]
    fn collinear_squeezes_add() {
        let (a, s3) = squeeze_compose(&SqueezeParams::new(0.3f64, 0.0), &SqueezeParams::new(0.5, 0.0));
        assert_eq!(a, 0.0);
        assert!((s3.r - 0.8).abs() < 1e-14);
        assert_eq!(s3.theta, 0.0);
    }

    #[test]
    fn composition_matches_matrix_product() {
        let s1 = SqueezeParams::new(0.3, PI / 2.0);
        let s2 = SqueezeParams::new(0.4, PI);
        let (a, s3) = squeeze_compose(&s1, &s2);
        let lhs = mat_mul(&squeeze_matrix(&s1), &squeeze_matrix(&s2));
        let rhs = mat_mul(&rotation_matrix(a), &squeeze_matrix(&s3));
        assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn compact_params() {
        let (phi, zeta) = compact_squeeze_params(0.0, 0.0);
        assert_eq!((phi, zeta.norm()), (0.0, 0.0));
        let (phi, zeta) = compact_squeeze_params(0.3, 0.0);
        assert_eq!(phi, 0.0);
        assert!((zeta - Complex::new(0.0, 0.6f64.tanh())).norm() < 1e-15);
        let (phi, zeta) = compact_squeeze_params(0.1, 0.2);
        let (a, s3) = squeeze_compose(
            &SqueezeParams::new(0.2, PI / 2.0),
            &SqueezeParams::new(0.4, PI),
        );
        assert!((phi - a).abs() < 1e-14);
        assert!((zeta - s3.t()).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn composed_matrix_is_symplectic(r1 in 0.0f64..2.0, th1 in -3.1f64..3.1,
                                         r2 in 0.0f64..2.0, th2 in -3.1f64..3.1) {
            let s1 = SqueezeParams::new(r1, th1);
            let s2 = SqueezeParams::new(r2, th2);
            let m = mat_mul(&squeeze_matrix(&s1), &squeeze_matrix(&s2));
            let scale = m[0][0].norm_sqr();
            prop_assert!((m[0][0].norm_sqr() - m[0][1].norm_sqr() - 1.0).abs() < 1e-12 * scale.max(1.0));
            let (a, s3) = squeeze_compose(&s1, &s2);
            let rhs = mat_mul(&rotation_matrix(a), &squeeze_matrix(&s3));
            prop_assert!(max_diff(&m, &rhs) < 1e-10 * scale.max(1.0));
        }
    }
}
