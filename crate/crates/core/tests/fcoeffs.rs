use std::f64::consts::PI;

use optoqfi::fcoeffs::{
    closed_form_derivatives, closed_form_f, closed_form_f_example_i, closed_form_f_example_ii,
    closed_form_f_example_iii, compute_f, derivatives_wrt_theta, example_i_eps_orders,
    finite_difference, Branch, DerivativeMethod, FCoefficients, SqueezeMode,
};
use optoqfi::mechanics::solve_mechanics;
use optoqfi::{CouplingForm, CouplingSpec, DriveForm, ThetaTag};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Component-wise relative error with a floor at 1% of the largest magnitude.
fn rel_err(a: &FCoefficients, b: &FCoefficients) -> f64 {
    let (a, b) = (a.to_array(), b.to_array());
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / y.abs().max(1e-2 * scale).max(1e-300))
        .fold(0.0, f64::max)
}

fn mean(a: &FCoefficients, b: &FCoefficients) -> FCoefficients {
    let (a, b) = (a.to_array(), b.to_array());
    FCoefficients::from_array(std::array::from_fn(|k| 0.5 * (a[k] + b[k])))
}

fn quadrature(spec: &CouplingSpec, tau: f64) -> FCoefficients {
    let m = solve_mechanics(spec, tau, 1e-10).unwrap();
    compute_f(spec, &m, tau).unwrap()
}

fn modulated(g0: f64, eps: f64, omega: f64) -> CouplingSpec {
    CouplingSpec::new(
        CouplingForm::SineModulated {
            g0,
            epsilon: eps,
            omega,
        },
        DriveForm::Zero,
        DriveForm::Zero,
        ThetaTag::G0,
    )
}

fn displaced(g0: f64, d1: f64, omega: f64) -> CouplingSpec {
    CouplingSpec::new(
        CouplingForm::Constant { g0 },
        DriveForm::CosModulated { amp: d1, omega },
        DriveForm::Zero,
        ThetaTag::D1,
    )
}

fn off_resonance(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    loop {
        let w: f64 = rng.gen_range(lo..hi);
        if (w - 1.0).abs() > 0.05 {
            return w;
        }
    }
}

#[test]
fn modulated_coupling_matches_quadrature() {
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (g0, eps) = (rng.gen_range(0.1..2.0), rng.gen_range(0.0..1.0));
        let omega = off_resonance(&mut rng, 0.1, 3.0);
        let tau = rng.gen_range(0.5..20.0);
        let cf = closed_form_f_example_i(g0, eps, omega, tau).unwrap();
        assert_eq!(cf.branch, Branch::General);
        worst = worst.max(rel_err(&cf.f, &quadrature(&modulated(g0, eps, omega), tau)));
    }
    assert!(worst < 1e-7, "{worst:e}");
}

#[test]
fn modulated_coupling_reference_point() {
    let spec = modulated(1.0, 0.5, 0.8);
    let cf = closed_form_f(&spec, 7.0).unwrap();
    assert!(rel_err(&cf.f, &quadrature(&spec, 7.0)) < 1e-8);
}

#[test]
fn eps_orders_match_quadrature_separately() {
    // F is polynomial in ε, so three quadratures isolate each order exactly.
    for (omega, tau) in [(0.8, 7.0), (1.7, 3.3), (0.37, 9.1), (1.0, 5.5)] {
        let orders = example_i_eps_orders(omega, tau).unwrap();
        let e = 0.5;
        let f0 = quadrature(&modulated(1.0, 0.0, omega), tau);
        let fp = quadrature(&modulated(1.0, e, omega), tau);
        let fm = quadrature(&modulated(1.0, -e, omega), tau);
        let o1 = (fp.f_na2 - fm.f_na2) / (2.0 * e);
        let o2 = (fp.f_na2 + fm.f_na2 - 2.0 * f0.f_na2) / (2.0 * e * e);
        let scale = orders.na2.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        assert!((orders.na2[0] - f0.f_na2).abs() < 1e-8 * scale);
        assert!((orders.na2[1] - o1).abs() < 1e-8 * scale, "{omega}: {} vs {o1}", orders.na2[1]);
        assert!((orders.na2[2] - o2).abs() < 1e-8 * scale, "{omega}: {} vs {o2}", orders.na2[2]);
        let b1 = (fp.f_nabp - fm.f_nabp) / (2.0 * e);
        let c1 = (fp.f_nabm - fm.f_nabm) / (2.0 * e);
        assert!((orders.nabp[1] - b1).abs() < 1e-8 * scale);
        assert!((orders.nabm[1] - c1).abs() < 1e-8 * scale);
    }
}

#[test]
fn displacement_matches_quadrature() {
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let (g0, d1) = (rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0));
        let omega = if i % 10 == 0 {
            0.0
        } else {
            off_resonance(&mut rng, 0.0, 3.0)
        };
        let tau = rng.gen_range(0.5..20.0);
        let cf = closed_form_f_example_ii(g0, d1, omega, tau).unwrap();
        worst = worst.max(rel_err(&cf.f, &quadrature(&displaced(g0, d1, omega), tau)));
    }
    assert!(worst < 1e-7, "{worst:e}");
}

#[test]
fn displacement_reference_point() {
    let spec = displaced(1.0, 1.0, 0.37);
    let cf = closed_form_f(&spec, 9.0).unwrap();
    assert!(rel_err(&cf.f, &quadrature(&spec, 9.0)) < 1e-8);
}

#[test]
fn resonant_branches_match_quadrature() {
    for tau in [2.0 * PI, 3.3, 11.0] {
        let cf = closed_form_f_example_i(0.7, 0.3, 1.0, tau).unwrap();
        assert!(rel_err(&cf.f, &quadrature(&modulated(0.7, 0.3, 1.0), tau)) < 1e-8);
        let cf = closed_form_f_example_ii(0.5, 2.0, 1.0, tau).unwrap();
        assert!(rel_err(&cf.f, &quadrature(&displaced(0.5, 2.0, 1.0), tau)) < 1e-8);
    }
}

#[test]
fn resonance_branch_continuity() {
    // One-sided offsets differ by O(δ ∂F/∂Ω); the symmetric mean cancels that term.
    let d = 1e-4;
    for tau in [1.0, 2.0 * PI, 7.5, 20.0] {
        let res = closed_form_f_example_i(1.0, 0.5, 1.0, tau).unwrap().f;
        let lo = closed_form_f_example_i(1.0, 0.5, 1.0 - d, tau).unwrap().f;
        let hi = closed_form_f_example_i(1.0, 0.5, 1.0 + d, tau).unwrap().f;
        assert!(rel_err(&mean(&lo, &hi), &res) < 1e-5, "tau={tau}");
        let res = closed_form_f_example_ii(1.0, 1.0, 1.0, tau).unwrap().f;
        let lo = closed_form_f_example_ii(1.0, 1.0, 1.0 - d, tau).unwrap().f;
        let hi = closed_form_f_example_ii(1.0, 1.0, 1.0 + d, tau).unwrap().f;
        assert!(rel_err(&mean(&lo, &hi), &res) < 1e-5, "tau={tau}");
    }
}

#[test]
fn closed_form_derivative_matches_finite_difference() {
    let spec = modulated(1.0, 0.5, 0.8);
    let cf = derivatives_wrt_theta(&spec, 5.0, DerivativeMethod::ClosedForm).unwrap();
    let fd = derivatives_wrt_theta(&spec, 5.0, DerivativeMethod::FiniteDiff { h: Some(1e-6) })
        .unwrap();
    let err = rel_err(&fd.df, &cf.df);
    assert!(err < 1e-6, "{err:e}");
}

#[test]
fn richardson_consistency() {
    let spec = modulated(1.0, 0.5, 0.8).with_tag(ThetaTag::OmegaG);
    let tau = 5.0;
    let h = 1e-2;
    let a = finite_difference(&spec, tau, h, 1e-10).unwrap();
    let b = finite_difference(&spec, tau, h / 2.0, 1e-10).unwrap();
    for k in 0..6 {
        let d_h = a.coarse.df.to_array()[k];
        let d_h2 = a.fine.df.to_array()[k];
        let d_h4 = b.fine.df.to_array()[k];
        let expected = (d_h - d_h2).abs() / 4.0;
        let actual = (d_h2 - d_h4).abs();
        assert!(actual < 10.0 * expected + 1e-12, "slot {k}: {actual:e} vs {expected:e}");
    }
}

#[test]
fn squeezing_resonance_against_mathieu_quadrature() {
    let (d2, tau) = (0.01, 30.0);
    let spec = CouplingSpec::new(
        CouplingForm::Constant { g0: 1.0 },
        DriveForm::Zero,
        DriveForm::CosModulated { amp: d2, omega: 2.0 },
        ThetaTag::D2,
    );
    let cf = closed_form_f_example_iii(1.0, d2, SqueezeMode::Resonant { omega: 2.0 }, tau).unwrap();
    let q = quadrature(&spec, tau);
    let err = (cf.f.f_nabp - q.f_nabp).abs() / q.f_nabp.abs();
    assert!(err < 5e-2, "{err:e}");
}

#[test]
fn squeezing_derivatives_reproduce_coefficient_list() {
    let spec = CouplingSpec::new(
        CouplingForm::Constant { g0: 2.0 },
        DriveForm::Zero,
        DriveForm::CosModulated { amp: 0.0, omega: 2.0 },
        ThetaTag::D2,
    );
    let d = closed_form_derivatives(&spec, 3.0).unwrap();
    assert_eq!(d.dj_plus, 1.5);
    assert_eq!((d.dj_minus, d.dj_b), (0.0, 0.0));
}
