//! Mechanical subsystem: the second-order equations for `P11` and `I_P22`,
//! Bogoliubov coefficients, the squeezing decomposition `(J_b, J+, J-)` and
//! the running integrals from which the decoupling functions are read off.

mod bogoliubov;
mod squeeze;

pub use bogoliubov::{bogoliubov_from_j, extract_j, unwrap_angles, JTriple, ARCOSH_CLAMP};
pub use squeeze::{
    compact_squeeze_params, mat_mul, rotation_matrix, squeeze_compose, squeeze_matrix, Mat2,
    SqueezeParams,
};

use num_complex::Complex;

use crate::coupling::CouplingSpec;
use crate::error::{Error, Result};
use crate::ode::{integrate, integrate_on_nodes, DenseSolution, Dopri5Options};
use crate::scalar::{lit, Real};

/// Number of components of the augmented state.
pub const STATE_DIM: usize = 13;

/// Indices into the augmented state vector.
pub mod idx {
    pub const P11: usize = 0;
    pub const P11_DOT: usize = 1;
    pub const IP22: usize = 2;
    pub const IP22_DOT: usize = 3;
    /// `∫ G Re ξ`
    pub const S_GR: usize = 4;
    /// `∫ G Im ξ`
    pub const S_GI: usize = 5;
    /// `∫ D1 Re ξ`
    pub const S_DR: usize = 6;
    /// `∫ D1 Im ξ`
    pub const S_DI: usize = 7;
    /// `∫ G Im ξ · S_GR`
    pub const O_GG: usize = 8;
    /// `∫ (D1 Im ξ · S_GR + G Im ξ · S_DR)`
    pub const O_N: usize = 9;
    pub const J_B: usize = 10;
    pub const J_PLUS: usize = 11;
    pub const J_MINUS: usize = 12;
}

pub type State<T> = [T; STATE_DIM];

fn initial_state<T: Real>() -> State<T> {
    let mut y = [T::zero(); STATE_DIM];
    y[idx::P11] = T::one();
    y[idx::IP22_DOT] = T::one();
    y
}

fn rhs<T: Real>(spec: &CouplingSpec<T>, t: T, y: &State<T>) -> State<T> {
    let g = spec.eval_g(t);
    let d1 = spec.eval_d1(t);
    let d2 = spec.eval_d2(t);
    let two = lit::<T>(2.0);
    let omega2 = T::one() + lit::<T>(4.0) * d2;
    let re = y[idx::P11];
    let im = -y[idx::IP22];
    let mut dy = [T::zero(); STATE_DIM];
    dy[idx::P11] = y[idx::P11_DOT];
    dy[idx::P11_DOT] = -omega2 * y[idx::P11];
    dy[idx::IP22] = y[idx::IP22_DOT];
    dy[idx::IP22_DOT] = -omega2 * y[idx::IP22];
    dy[idx::S_GR] = g * re;
    dy[idx::S_GI] = g * im;
    dy[idx::S_DR] = d1 * re;
    dy[idx::S_DI] = d1 * im;
    dy[idx::O_GG] = g * im * y[idx::S_GR];
    dy[idx::O_N] = d1 * im * y[idx::S_GR] + g * im * y[idx::S_DR];
    let (jb, jp) = (y[idx::J_B], y[idx::J_PLUS]);
    let (s2, c2) = (two * jb).sin_cos();
    let four_jp = lit::<T>(4.0) * jp;
    dy[idx::J_B] = T::one() + two * d2 * (T::one() - s2 * four_jp.tanh());
    dy[idx::J_PLUS] = d2 * c2;
    dy[idx::J_MINUS] = d2 * s2 / four_jp.cosh();
    dy
}

/// Uniform sampling step: `min(0.01, 2π / (50 Ω_max))`.
pub fn grid_spacing<T: Real>(spec: &CouplingSpec<T>) -> T {
    let w = spec.max_frequency();
    let base = lit::<T>(0.01);
    if w > T::zero() {
        base.min((T::PI() + T::PI()) / (lit::<T>(50.0) * w))
    } else {
        base
    }
}

fn uniform_grid<T: Real>(dt: T, tau_max: T) -> Vec<T> {
    let n = (tau_max / dt).ceil().to_usize().unwrap_or(0).max(1);
    let mut grid: Vec<T> = (0..n).map(|k| lit::<T>(k as f64) * dt).collect();
    grid.push(tau_max);
    grid
}

/// Values of `1 + 4 D2` changing sign mark turning points of the oscillator.
fn turning_points<T: Real>(spec: &CouplingSpec<T>, grid: &[T]) -> Vec<T> {
    let w = |t: T| T::one() + lit::<T>(4.0) * spec.eval_d2(t);
    let mut out = Vec::new();
    for pair in grid.windows(2) {
        let (mut a, mut b) = (pair[0], pair[1]);
        let (wa, wb) = (w(a), w(b));
        if (wa > T::zero()) == (wb > T::zero()) {
            continue;
        }
        let sa = wa > T::zero();
        for _ in 0..60 {
            let m = (a + b) / lit(2.0);
            if (w(m) > T::zero()) == sa {
                a = m;
            } else {
                b = m;
            }
        }
        out.push((a + b) / lit(2.0));
    }
    out
}

/// Gridded mechanical solution with a dense interpolant behind it.
#[derive(Debug, Clone)]
pub struct MechanicsSolution<T = f64> {
    pub spec: CouplingSpec<T>,
    pub grid: Vec<T>,
    pub p11: Vec<T>,
    pub p11_dot: Vec<T>,
    pub ip22: Vec<T>,
    pub ip22_dot: Vec<T>,
    pub xi: Vec<Complex<T>>,
    pub alpha: Vec<Complex<T>>,
    pub beta: Vec<Complex<T>>,
    pub j_plus: Vec<T>,
    pub j_minus: Vec<T>,
    pub j_b: Vec<T>,
    /// Points where `1 + 4 D2` crosses zero (integration continues through them).
    pub turning_points: Vec<T>,
    dense: DenseSolution<T, STATE_DIM>,
}

/// `ξ = P11 − i I_P22`, `α = (ξ + i ξ̇)/2`, `β = (ξ* + i ξ̇*)/2`.
pub fn bogoliubov_from_state<T: Real>(y: &State<T>) -> (Complex<T>, Complex<T>, Complex<T>) {
    let xi = Complex::new(y[idx::P11], -y[idx::IP22]);
    let xi_dot = Complex::new(y[idx::P11_DOT], -y[idx::IP22_DOT]);
    let i = Complex::new(T::zero(), T::one());
    let half = lit::<T>(0.5);
    let alpha = (xi + i * xi_dot) * half;
    let beta = (xi.conj() + i * xi_dot.conj()) * half;
    (xi, alpha, beta)
}

impl<T: Real> MechanicsSolution<T> {
    fn from_dense(
        spec: &CouplingSpec<T>,
        dense: DenseSolution<T, STATE_DIM>,
        tau_max: T,
    ) -> Result<Self> {
        let grid = uniform_grid(grid_spacing(spec), tau_max);
        let n = grid.len();
        let mut sol = MechanicsSolution {
            spec: *spec,
            p11: Vec::with_capacity(n),
            p11_dot: Vec::with_capacity(n),
            ip22: Vec::with_capacity(n),
            ip22_dot: Vec::with_capacity(n),
            xi: Vec::with_capacity(n),
            alpha: Vec::with_capacity(n),
            beta: Vec::with_capacity(n),
            j_plus: Vec::with_capacity(n),
            j_minus: Vec::with_capacity(n),
            j_b: Vec::with_capacity(n),
            turning_points: turning_points(spec, &grid),
            grid,
            dense,
        };
        for k in 0..n {
            let y = sol.dense.eval(sol.grid[k])?;
            let (xi, a, b) = bogoliubov_from_state(&y);
            sol.p11.push(y[idx::P11]);
            sol.p11_dot.push(y[idx::P11_DOT]);
            sol.ip22.push(y[idx::IP22]);
            sol.ip22_dot.push(y[idx::IP22_DOT]);
            sol.xi.push(xi);
            sol.alpha.push(a);
            sol.beta.push(b);
            sol.j_b.push(y[idx::J_B]);
            sol.j_plus.push(y[idx::J_PLUS]);
            sol.j_minus.push(y[idx::J_MINUS]);
        }
        Ok(sol)
    }

    pub fn tau_max(&self) -> T {
        self.dense.t_end()
    }

    /// Full augmented state at `τ` from the dense interpolant.
    pub fn state_at(&self, tau: T) -> Result<State<T>> {
        self.dense.eval(tau)
    }

    pub fn j_at(&self, tau: T) -> Result<JTriple<T>> {
        let y = self.state_at(tau)?;
        Ok(JTriple {
            j_plus: y[idx::J_PLUS],
            j_minus: y[idx::J_MINUS],
            j_b: y[idx::J_B],
        })
    }

    /// `(ξ, α, β)` at `τ`.
    pub fn bogoliubov_at(&self, tau: T) -> Result<(Complex<T>, Complex<T>, Complex<T>)> {
        Ok(bogoliubov_from_state(&self.state_at(tau)?))
    }

    /// Step boundaries chosen by the adaptive integrator.
    pub fn step_nodes(&self) -> &[T] {
        self.dense.nodes()
    }

    pub fn wronskian(&self, k: usize) -> T {
        self.p11[k] * self.ip22_dot[k] - self.p11_dot[k] * self.ip22[k]
    }
}

/// Mechanics solve with relative tolerance `tol` (absolute `tol/100`).
pub fn solve_mechanics<T: Real>(
    spec: &CouplingSpec<T>,
    tau_max: T,
    tol: T,
) -> Result<MechanicsSolution<T>> {
    let opts = Dopri5Options {
        rtol: tol,
        atol: tol * lit(0.01),
        ..Default::default()
    };
    solve_mechanics_with(spec, tau_max, &opts)
}

pub fn solve_mechanics_with<T: Real>(
    spec: &CouplingSpec<T>,
    tau_max: T,
    opts: &Dopri5Options<T>,
) -> Result<MechanicsSolution<T>> {
    spec.validate()?;
    if !(tau_max > T::zero()) || !tau_max.is_finite() {
        return Err(Error::InvalidParameter("tau_max must be > 0".into()));
    }
    let dense = integrate(|t, y| rhs(spec, t, y), T::zero(), initial_state(), tau_max, opts)?;
    MechanicsSolution::from_dense(spec, dense, tau_max)
}

/// Re-integrates on a fixed sequence of step boundaries starting at 0.
pub fn solve_mechanics_on_nodes<T: Real>(
    spec: &CouplingSpec<T>,
    nodes: &[T],
) -> Result<MechanicsSolution<T>> {
    spec.validate()?;
    if nodes.len() < 2 || nodes[0] != T::zero() {
        return Err(Error::InvalidParameter("nodes must start at 0".into()));
    }
    let dense = integrate_on_nodes(|t, y| rhs(spec, t, y), nodes, initial_state())?;
    let tau_max = *nodes.last().expect("non-empty");
    MechanicsSolution::from_dense(spec, dense, tau_max)
}

/// `J` functions on the uniform grid.
#[derive(Debug, Clone)]
pub struct JArrays<T> {
    pub grid: Vec<T>,
    pub j_plus: Vec<T>,
    pub j_minus: Vec<T>,
    pub j_b: Vec<T>,
}

/// Integrates the first-order equations for `(J_b, J+, J-)` on their own.
pub fn solve_j_odes<T: Real>(spec: &CouplingSpec<T>, tau_max: T, tol: T) -> Result<JArrays<T>> {
    spec.validate()?;
    if !(tau_max > T::zero()) {
        return Err(Error::InvalidParameter("tau_max must be > 0".into()));
    }
    let opts = Dopri5Options {
        rtol: tol,
        atol: tol * lit(0.01),
        ..Default::default()
    };
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let f = |t: T, y: &[T; 3]| {
        let d2 = spec.eval_d2(t);
        let (s2, c2) = (two * y[0]).sin_cos();
        [
            T::one() + two * d2 * (T::one() - s2 * (four * y[1]).tanh()),
            d2 * c2,
            d2 * s2 / (four * y[1]).cosh(),
        ]
    };
    let dense = integrate(f, T::zero(), [T::zero(); 3], tau_max, &opts)?;
    let grid = uniform_grid(grid_spacing(spec), tau_max);
    let mut out = JArrays {
        j_plus: Vec::with_capacity(grid.len()),
        j_minus: Vec::with_capacity(grid.len()),
        j_b: Vec::with_capacity(grid.len()),
        grid,
    };
    for &t in &out.grid {
        let y = dense.eval(t)?;
        out.j_b.push(y[0]);
        out.j_plus.push(y[1]);
        out.j_minus.push(y[2]);
    }
    Ok(out)
}

/// Rotating-wave solution at parametric resonance:
/// `ξ = e^{−iτ} cosh(d2 τ) + i e^{iτ} sinh(d2 τ)`.
pub fn rwa_xi<T: Real>(d2: T, tau: T) -> Complex<T> {
    let (s, c) = tau.sin_cos();
    let e_minus = Complex::new(c, -s);
    let e_plus = Complex::new(c, s);
    let i = Complex::new(T::zero(), T::one());
    e_minus * (d2 * tau).cosh() + i * e_plus * (d2 * tau).sinh()
}

/// Extracted `J` along the grid, with `J_b` unwrapped to be continuous.
pub fn extract_j_along<T: Real>(sol: &MechanicsSolution<T>) -> Result<JArrays<T>> {
    let mut out = JArrays {
        grid: sol.grid.clone(),
        j_plus: Vec::with_capacity(sol.grid.len()),
        j_minus: Vec::with_capacity(sol.grid.len()),
        j_b: Vec::with_capacity(sol.grid.len()),
    };
    for (a, b) in sol.alpha.iter().zip(&sol.beta) {
        let j = extract_j(*a, *b)?;
        out.j_plus.push(j.j_plus);
        out.j_minus.push(j.j_minus);
        out.j_b.push(j.j_b);
    }
    unwrap_angles(&mut out.j_b);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{CouplingForm, DriveForm, ThetaTag};
    use std::f64::consts::PI;

    fn spec(d2: DriveForm) -> CouplingSpec {
        CouplingSpec::new(
            CouplingForm::Constant { g0: 1.0 },
            DriveForm::Zero,
            d2,
            ThetaTag::G0,
        )
    }

    #[test]
    fn free_oscillator() {
        let sol = solve_mechanics(&spec(DriveForm::Zero), 20.0 * PI, 1e-10).unwrap();
        assert_eq!(sol.grid[0], 0.0);
        assert_eq!(sol.p11[0], 1.0);
        assert_eq!(sol.ip22_dot[0], 1.0);
        for (k, &t) in sol.grid.iter().enumerate() {
            let want = Complex::new(t.cos(), -t.sin());
            assert!((sol.xi[k] - want).norm() < 1e-9, "t={t}");
            assert!((sol.j_b[k] - t).abs() < 1e-9);
            assert_eq!(sol.j_plus[k], 0.0);
        }
        assert!(sol.turning_points.is_empty());
    }

    #[test]
    fn constant_squeezing_matches_shifted_frequency() {
        let d2 = 0.01;
        let sol = solve_mechanics(&spec(DriveForm::Constant { amp: d2 }), 5.0, 1e-10).unwrap();
        let w = (1.0 + 4.0 * d2).sqrt();
        let (xi, _, _) = sol.bogoliubov_at(5.0).unwrap();
        let want = Complex::new((w * 5.0).cos(), -(w * 5.0).sin() / w);
        assert!((xi - want).norm() < 1e-9);
    }

    #[test]
    fn xi_initial_derivative() {
        let sol = solve_mechanics(&spec(DriveForm::CosModulated { amp: 0.3, omega: 1.3 }), 1.0, 1e-10)
            .unwrap();
        let y = sol.state_at(0.0).unwrap();
        assert_eq!((y[idx::P11_DOT], -y[idx::IP22_DOT]), (0.0, -1.0));
    }

    #[test]
    fn grid_spacing_resolves_fastest_drive() {
        let s = spec(DriveForm::CosModulated { amp: 0.01, omega: 20.0 });
        let dt = grid_spacing(&s);
        assert!((dt - 2.0 * PI / 1000.0).abs() < 1e-15);
        assert_eq!(grid_spacing(&spec(DriveForm::Zero)), 0.01);
    }

    #[test]
    fn turning_point_flagged_and_integration_continues() {
        let s = spec(DriveForm::CosModulated { amp: 0.5, omega: 1.0 });
        let sol = solve_mechanics(&s, 5.0, 1e-10).unwrap();
        assert_eq!(sol.turning_points.len(), 2);
        let t0 = sol.turning_points[0];
        assert!((1.0 + 4.0 * s.eval_d2(t0)).abs() < 1e-12);
        for k in 0..sol.grid.len() {
            assert!((sol.wronskian(k) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn replay_on_nodes_matches() {
        let s = spec(DriveForm::CosModulated { amp: 0.05, omega: 2.0 });
        let a = solve_mechanics(&s, 10.0, 1e-10).unwrap();
        let b = solve_mechanics_on_nodes(&s, a.step_nodes()).unwrap();
        assert_eq!(a.p11, b.p11);
        assert_eq!(a.j_b, b.j_b);
    }

    #[test]
    fn rwa_limits() {
        assert_eq!(rwa_xi(0.01, 0.0), Complex::new(1.0, 0.0));
        let z = rwa_xi(0.0, 1.7);
        assert!((z - Complex::new(1.7f64.cos(), -1.7f64.sin())).norm() < 1e-15);
    }

    #[test]
    fn f32_solution() {
        let s = CouplingSpec::<f32>::new(
            CouplingForm::Constant { g0: 1.0 },
            DriveForm::Zero,
            DriveForm::Zero,
            ThetaTag::G0,
        );
        let sol = solve_mechanics(&s, 6.0, 1e-6).unwrap();
        let k = sol.grid.len() - 1;
        assert!((sol.p11[k] - 6.0f32.cos()).abs() < 1e-4);
    }
}
