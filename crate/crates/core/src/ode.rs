//! Dormand–Prince 5(4) integrator with continuous (dense) output.
//!
//! Besides the adaptive driver, a trajectory can be re-integrated on a given
//! sequence of step boundaries. Finite differences with respect to a
//! parameter use this so that both sides share the same discretisation.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Options<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
    /// Largest step allowed; `None` means unbounded.
    pub h_max: Option<T>,
}

impl<T: Real> Default for Dopri5Options<T> {
    fn default() -> Self {
        Self {
            rtol: T::default_rtol(),
            atol: T::default_atol(),
            max_steps: 2_000_000,
            h_max: None,
        }
    }
}

/// Piecewise quartic interpolant over accepted steps.
#[derive(Debug, Clone)]
pub struct DenseSolution<T, const N: usize> {
    /// Step boundaries, `nodes[0]` is the initial time.
    nodes: Vec<T>,
    /// State at each node.
    states: Vec<[T; N]>,
    /// Interpolation coefficients, five rows of `N` per step.
    rcont: Vec<[[T; N]; 5]>,
}

impl<T: Real, const N: usize> DenseSolution<T, N> {
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn node_states(&self) -> &[[T; N]] {
        &self.states
    }

    pub fn t_start(&self) -> T {
        self.nodes[0]
    }

    pub fn t_end(&self) -> T {
        *self.nodes.last().expect("non-empty")
    }

    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Interpolated state at `t`; exact node values are returned at nodes.
    pub fn eval(&self, t: T) -> Result<[T; N]> {
        let (a, b) = (self.t_start(), self.t_end());
        let slack = lit::<T>(64.0) * T::epsilon() * b.abs().max(T::one());
        if !(t >= a - slack && t <= b + slack) {
            return Err(Error::OutOfRange {
                tau: to_f64(t),
                end: to_f64(b),
            });
        }
        if self.rcont.is_empty() {
            return Ok(self.states[0]);
        }
        let i = match self
            .nodes
            .binary_search_by(|x| x.partial_cmp(&t).expect("finite nodes"))
        {
            Ok(i) => return Ok(self.states[i]),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.rcont.len() - 1),
        };
        let h = self.nodes[i + 1] - self.nodes[i];
        let s = (t - self.nodes[i]) / h;
        let s1 = T::one() - s;
        let r = &self.rcont[i];
        let mut y = [T::zero(); N];
        for k in 0..N {
            y[k] = r[0][k] + s * (r[1][k] + s1 * (r[2][k] + s * (r[3][k] + s1 * r[4][k])));
        }
        Ok(y)
    }
}

struct Tableau<T> {
    c: [T; 7],
    a: [[T; 6]; 7],
    e: [T; 7],
    d: [T; 7],
}

impl<T: Real> Tableau<T> {
    fn new() -> Self {
        let z = T::zero();
        let f = |n: f64, d: f64| lit::<T>(n) / lit::<T>(d);
        Self {
            c: [
                z,
                f(1.0, 5.0),
                f(3.0, 10.0),
                f(4.0, 5.0),
                f(8.0, 9.0),
                T::one(),
                T::one(),
            ],
            a: [
                [z; 6],
                [f(1.0, 5.0), z, z, z, z, z],
                [f(3.0, 40.0), f(9.0, 40.0), z, z, z, z],
                [f(44.0, 45.0), f(-56.0, 15.0), f(32.0, 9.0), z, z, z],
                [
                    f(19372.0, 6561.0),
                    f(-25360.0, 2187.0),
                    f(64448.0, 6561.0),
                    f(-212.0, 729.0),
                    z,
                    z,
                ],
                [
                    f(9017.0, 3168.0),
                    f(-355.0, 33.0),
                    f(46732.0, 5247.0),
                    f(49.0, 176.0),
                    f(-5103.0, 18656.0),
                    z,
                ],
                [
                    f(35.0, 384.0),
                    z,
                    f(500.0, 1113.0),
                    f(125.0, 192.0),
                    f(-2187.0, 6784.0),
                    f(11.0, 84.0),
                ],
            ],
            e: [
                f(71.0, 57600.0),
                z,
                f(-71.0, 16695.0),
                f(71.0, 1920.0),
                f(-17253.0, 339200.0),
                f(22.0, 525.0),
                f(-1.0, 40.0),
            ],
            d: [
                f(-12715105075.0, 11282082432.0),
                z,
                f(87487479700.0, 32700410799.0),
                f(-10690763975.0, 1880347072.0),
                f(701980252875.0, 199316789632.0),
                f(-1453857185.0, 822651844.0),
                f(69997945.0, 29380423.0),
            ],
        }
    }
}

struct Step<T, const N: usize> {
    y1: [T; N],
    k7: [T; N],
    err: [T; N],
    rcont: [[T; N]; 5],
}

fn try_step<T: Real, const N: usize, F>(
    tab: &Tableau<T>,
    f: &F,
    t: T,
    y: &[T; N],
    k1: &[T; N],
    h: T,
) -> Step<T, N>
where
    F: Fn(T, &[T; N]) -> [T; N],
{
    let mut k = [[T::zero(); N]; 7];
    k[0] = *k1;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = tab.a[s][j];
            if a != T::zero() {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(t + tab.c[s] * h, &ys);
    }
    // FSAL: stage 7 is evaluated at the new point.
    let mut y1 = *y;
    for (j, kj) in k.iter().enumerate().take(6) {
        let a = tab.a[6][j];
        for i in 0..N {
            y1[i] += h * a * kj[i];
        }
    }
    let mut err = [T::zero(); N];
    let mut dd = [T::zero(); N];
    for (j, kj) in k.iter().enumerate() {
        for i in 0..N {
            err[i] += h * tab.e[j] * kj[i];
            dd[i] += h * tab.d[j] * kj[i];
        }
    }
    let mut rcont = [[T::zero(); N]; 5];
    for i in 0..N {
        let ydiff = y1[i] - y[i];
        let bspl = h * k[0][i] - ydiff;
        rcont[0][i] = y[i];
        rcont[1][i] = ydiff;
        rcont[2][i] = bspl;
        rcont[3][i] = ydiff - h * k[6][i] - bspl;
        rcont[4][i] = dd[i];
    }
    Step {
        y1,
        k7: k[6],
        err,
        rcont,
    }
}

fn error_norm<T: Real, const N: usize>(
    opts: &Dopri5Options<T>,
    y0: &[T; N],
    step: &Step<T, N>,
) -> T {
    let mut acc = T::zero();
    for i in 0..N {
        let sk = opts.atol + opts.rtol * y0[i].abs().max(step.y1[i].abs());
        let r = step.err[i] / sk;
        acc += r * r;
    }
    (acc / lit(N as f64)).sqrt()
}

fn initial_step<T: Real, const N: usize, F>(
    f: &F,
    t0: T,
    y0: &[T; N],
    k1: &[T; N],
    opts: &Dopri5Options<T>,
    span: T,
) -> T
where
    F: Fn(T, &[T; N]) -> [T; N],
{
    let sk = |y: T| opts.atol + opts.rtol * y.abs();
    let n = lit::<T>(N as f64);
    let (mut dnf, mut dny) = (T::zero(), T::zero());
    for i in 0..N {
        dnf += (k1[i] / sk(y0[i])).powi(2);
        dny += (y0[i] / sk(y0[i])).powi(2);
    }
    let (dnf, dny) = ((dnf / n).sqrt(), (dny / n).sqrt());
    let tiny = lit::<T>(1e-10);
    let mut h = if dnf <= tiny || dny <= tiny {
        lit(1e-6)
    } else {
        lit::<T>(0.01) * dny / dnf
    };
    h = h.min(span);
    let mut y1 = *y0;
    for i in 0..N {
        y1[i] += h * k1[i];
    }
    let k2 = f(t0 + h, &y1);
    let mut der2 = T::zero();
    for i in 0..N {
        der2 += ((k2[i] - k1[i]) / sk(y0[i])).powi(2);
    }
    let der2 = (der2 / n).sqrt() / h;
    let der12 = der2.max(dnf);
    let h1 = if der12 <= lit(1e-15) {
        (h * lit(1e-3)).max(lit(1e-6))
    } else {
        (lit::<T>(0.01) / der12).powf(lit(0.2))
    };
    (lit::<T>(100.0) * h).min(h1).min(span)
}

/// Adaptive integration of `y' = f(t, y)` from `t0` to `t_end`.
pub fn integrate<T: Real, const N: usize, F>(
    f: F,
    t0: T,
    y0: [T; N],
    t_end: T,
    opts: &Dopri5Options<T>,
) -> Result<DenseSolution<T, N>>
where
    F: Fn(T, &[T; N]) -> [T; N],
{
    if !(t_end > t0) {
        return Err(Error::InvalidParameter("t_end must exceed t0".into()));
    }
    if !(opts.rtol > T::zero()) || !(opts.atol > T::zero()) {
        return Err(Error::InvalidParameter("tolerances must be > 0".into()));
    }
    let tab = Tableau::new();
    let safe = lit::<T>(0.9);
    let beta = lit::<T>(0.04);
    let expo = lit::<T>(0.2) - beta * lit(0.75);
    let (fac_lo, fac_hi) = (lit::<T>(0.1), lit::<T>(5.0));
    let h_max = opts.h_max.unwrap_or(t_end - t0);

    let mut sol = DenseSolution {
        nodes: vec![t0],
        states: vec![y0],
        rcont: Vec::new(),
    };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t0, &y0, &k1, opts, t_end - t0).min(h_max);
    let mut facold = lit::<T>(1e-4);
    let mut last = false;
    let mut reject = false;
    let mut n = 0usize;
    loop {
        if n >= opts.max_steps {
            return Err(Error::MaxSteps {
                steps: n,
                tau: to_f64(t),
            });
        }
        if h.abs() <= lit::<T>(10.0) * T::epsilon() * t.abs().max(T::one()) {
            return Err(Error::StepUnderflow { tau: to_f64(t) });
        }
        if t + lit::<T>(1.01) * h >= t_end {
            h = t_end - t;
            last = true;
        }
        n += 1;
        // Step on the representable interval so a replay on the nodes is bitwise identical.
        let t_new = if last { t_end } else { t + h };
        h = t_new - t;
        let step = try_step(&tab, &f, t, &y, &k1, h);
        let err = error_norm(opts, &y, &step);
        if !err.is_finite() {
            h = h * fac_lo;
            last = false;
            reject = true;
            continue;
        }
        let fac11 = err.powf(expo);
        let fac = (fac11 / facold.powf(beta)) / safe;
        let fac = fac.min(lit::<T>(1.0) / fac_lo).max(lit::<T>(1.0) / fac_hi);
        if err <= T::one() {
            facold = err.max(lit(1e-4));
            t = t_new;
            y = step.y1;
            k1 = step.k7;
            sol.nodes.push(t);
            sol.states.push(y);
            sol.rcont.push(step.rcont);
            if last {
                return Ok(sol);
            }
            let mut hnew = (h / fac).min(h_max);
            if reject {
                hnew = hnew.min(h);
            }
            reject = false;
            h = hnew;
        } else {
            h = h / (fac11 / safe).min(lit::<T>(1.0) / fac_lo);
            reject = true;
            last = false;
        }
    }
}

/// Integrates on a prescribed sequence of step boundaries without error control.
pub fn integrate_on_nodes<T: Real, const N: usize, F>(
    f: F,
    nodes: &[T],
    y0: [T; N],
) -> Result<DenseSolution<T, N>>
where
    F: Fn(T, &[T; N]) -> [T; N],
{
    if nodes.is_empty() {
        return Err(Error::InvalidParameter("empty node sequence".into()));
    }
    let tab = Tableau::new();
    let mut sol = DenseSolution {
        nodes: vec![nodes[0]],
        states: vec![y0],
        rcont: Vec::with_capacity(nodes.len() - 1),
    };
    let mut y = y0;
    let mut k1 = f(nodes[0], &y);
    for w in nodes.windows(2) {
        let h = w[1] - w[0];
        if !(h > T::zero()) {
            return Err(Error::InvalidParameter("nodes must increase".into()));
        }
        let step = try_step(&tab, &f, w[0], &y, &k1, h);
        y = step.y1;
        k1 = step.k7;
        sol.nodes.push(w[1]);
        sol.states.push(y);
        sol.rcont.push(step.rcont);
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_t: f64, y: &[f64; 2]) -> [f64; 2] {
        [y[1], -y[0]]
    }

    #[test]
    fn harmonic_oscillator_dense_output() {
        let sol = integrate(oscillator, 0.0, [1.0, 0.0], 20.0, &Dopri5Options::default()).unwrap();
        for i in 0..=2000 {
            let t = 0.01 * i as f64;
            let y = sol.eval(t).unwrap();
            assert!((y[0] - t.cos()).abs() < 1e-9, "t={t}");
            assert!((y[1] + t.sin()).abs() < 1e-9, "t={t}");
        }
        assert!(sol.eval(20.5).is_err());
    }

    #[test]
    fn replay_reproduces_adaptive_run() {
        let opts = Dopri5Options::default();
        let a = integrate(oscillator, 0.0, [1.0, 0.0], 5.0, &opts).unwrap();
        let b = integrate_on_nodes(oscillator, a.nodes(), [1.0, 0.0]).unwrap();
        for (x, y) in a.node_states().iter().zip(b.node_states()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn exponential_growth_f32() {
        let opts = Dopri5Options::<f32>::default();
        let sol = integrate(|_t, y: &[f32; 1]| [y[0]], 0.0, [1.0], 2.0, &opts).unwrap();
        let y = sol.eval(2.0).unwrap()[0];
        assert!((y - 2.0f32.exp()).abs() / y < 1e-5);
    }

    #[test]
    fn step_limit_is_reported() {
        let opts = Dopri5Options {
            max_steps: 3,
            ..Default::default()
        };
        let r = integrate(oscillator, 0.0, [1.0, 0.0], 100.0, &opts);
        assert!(matches!(r, Err(Error::MaxSteps { .. })));
    }

    #[test]
    fn blow_up_underflows() {
        let r = integrate(
            |_t, y: &[f64; 1]| [y[0] * y[0]],
            0.0,
            [1.0],
            2.0,
            &Dopri5Options::default(),
        );
        assert!(matches!(
            r,
            Err(Error::StepUnderflow { .. }) | Err(Error::MaxSteps { .. })
        ));
    }
}
