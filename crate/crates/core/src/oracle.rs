//! Brute-force reference: the Hamiltonian on a truncated two-mode Fock space,
//! time-ordered evolution, finite-difference generators and the mixed-state
//! QFI over the thermal eigenbasis.
//!
//! The Hamiltonian conserves the photon number, so everything is computed per
//! cavity-number block `k`, where it is a real symmetric mechanical matrix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::coupling::{CouplingSpec, ProbeState};
use crate::error::{Error, Result};

/// Ladder operators of a two-mode truncation, cavity index major.
#[derive(Debug, Clone)]
pub struct TruncatedSpace {
    pub n_cav: usize,
    pub n_mech: usize,
    /// Single-mode annihilators.
    pub a_mode: DMatrix<f64>,
    pub b_mode: DMatrix<f64>,
}

/// The nine generators plus the ladder operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    A,
    ADag,
    B,
    BDag,
    Na,
    Na2,
    Nb,
    BPlus,
    BMinus,
    BPlus2,
    BMinus2,
    NaBPlus,
    NaBMinus,
}

impl Operator {
    pub const GENERATORS: [Operator; 9] = [
        Operator::Na2,
        Operator::Na,
        Operator::Nb,
        Operator::BPlus,
        Operator::BMinus,
        Operator::BPlus2,
        Operator::BMinus2,
        Operator::NaBPlus,
        Operator::NaBMinus,
    ];
}

fn annihilator(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Single-mode `N`, `B+`, `B−`, `B+⁽²⁾`, `B−⁽²⁾` built from one annihilator.
fn mode_ops(b: &DMatrix<f64>) -> [DMatrix<Complex64>; 5] {
    let bd = b.transpose();
    let i = Complex64::new(0.0, 1.0);
    let n = &bd * b;
    let b2 = b * b;
    let bd2 = &bd * &bd;
    [
        to_complex(&n),
        to_complex(&(&bd + b)),
        to_complex(&(&bd - b)) * i,
        to_complex(&(&bd2 + &b2)),
        to_complex(&(&bd2 - &b2)) * i,
    ]
}

/// Builds the truncated space.
pub fn build_space(n_cav: usize, n_mech: usize) -> Result<TruncatedSpace> {
    if n_cav < 2 || n_mech < 2 {
        return Err(Error::InvalidParameter(
            "truncation dimensions must be >= 2".into(),
        ));
    }
    Ok(TruncatedSpace {
        n_cav,
        n_mech,
        a_mode: annihilator(n_cav),
        b_mode: annihilator(n_mech),
    })
}

impl TruncatedSpace {
    pub fn dim(&self) -> usize {
        self.n_cav * self.n_mech
    }

    /// Full-space matrix of `op`.
    pub fn operator(&self, op: Operator) -> DMatrix<Complex64> {
        let id_c = DMatrix::<Complex64>::identity(self.n_cav, self.n_cav);
        let id_m = DMatrix::<Complex64>::identity(self.n_mech, self.n_mech);
        let a = to_complex(&self.a_mode);
        let b = to_complex(&self.b_mode);
        let [n_a, ..] = mode_ops(&self.a_mode);
        let [n_b, bp, bm, bp2, bm2] = mode_ops(&self.b_mode);
        match op {
            Operator::A => a.kronecker(&id_m),
            Operator::ADag => a.adjoint().kronecker(&id_m),
            Operator::B => id_c.kronecker(&b),
            Operator::BDag => id_c.kronecker(&b.adjoint()),
            Operator::Na => n_a.kronecker(&id_m),
            Operator::Na2 => (&n_a * &n_a).kronecker(&id_m),
            Operator::Nb => id_c.kronecker(&n_b),
            Operator::BPlus => id_c.kronecker(&bp),
            Operator::BMinus => id_c.kronecker(&bm),
            Operator::BPlus2 => id_c.kronecker(&bp2),
            Operator::BMinus2 => id_c.kronecker(&bm2),
            Operator::NaBPlus => n_a.kronecker(&bp),
            Operator::NaBMinus => n_a.kronecker(&bm),
        }
    }

    /// Mechanical-mode matrices `[N_b, B+, B−, B+⁽²⁾, B−⁽²⁾]`.
    pub fn mech_operators(&self) -> [DMatrix<Complex64>; 5] {
        mode_ops(&self.b_mode)
    }
}

/// Real symmetric pentadiagonal block: diagonal, first and second superdiagonals.
#[derive(Debug, Clone)]
struct Band {
    d: Vec<f64>,
    e: Vec<f64>,
    f: Vec<f64>,
}

impl Band {
    fn block(spec: &CouplingSpec, tau: f64, k: usize, n: usize) -> Self {
        let kf = k as f64;
        let g = spec.eval_g(tau);
        let d1 = spec.eval_d1(tau);
        let d2 = spec.eval_d2(tau);
        let shift = spec.omega_c * kf + d2;
        Self {
            d: (0..n).map(|i| i as f64 * (1.0 + 2.0 * d2) + shift).collect(),
            e: (1..n).map(|i| (d1 - g * kf) * (i as f64).sqrt()).collect(),
            f: (2..n).map(|i| d2 * ((i * (i - 1)) as f64).sqrt()).collect(),
        }
    }

    fn mix(&self, a: f64, other: &Band, b: f64) -> Band {
        let lin = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| a * p + b * q).collect();
        Band {
            d: lin(&self.d, &other.d),
            e: lin(&self.e, &other.e),
            f: lin(&self.f, &other.f),
        }
    }

    fn dense(&self) -> DMatrix<f64> {
        let n = self.d.len();
        let mut h = DMatrix::from_diagonal(&DVector::from_column_slice(&self.d));
        for (i, &x) in self.e.iter().enumerate() {
            h[(i, i + 1)] = x;
            h[(i + 1, i)] = x;
        }
        for (i, &x) in self.f.iter().enumerate() {
            h[(i, i + 2)] = x;
            h[(i + 2, i)] = x;
        }
        debug_assert_eq!(h.nrows(), n);
        h
    }

    /// Upper bound on the spectral norm (max absolute row sum).
    fn norm_bound(&self) -> f64 {
        let n = self.d.len();
        let at = |v: &[f64], i: usize| v.get(i).map_or(0.0, |x: &f64| x.abs());
        (0..n)
            .map(|i| {
                let mut s = self.d[i].abs() + at(&self.e, i) + at(&self.f, i);
                if i >= 1 {
                    s += self.e[i - 1].abs();
                }
                if i >= 2 {
                    s += self.f[i - 2].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// `c · H x`
    fn apply(&self, x: &DMatrix<Complex64>, c: Complex64) -> DMatrix<Complex64> {
        let n = self.d.len();
        let mut y = DMatrix::<Complex64>::zeros(n, x.ncols());
        for col in 0..x.ncols() {
            let xc = x.column(col);
            let mut yc = y.column_mut(col);
            for i in 0..n {
                let mut acc = xc[i] * self.d[i];
                if i + 1 < n {
                    acc += xc[i + 1] * self.e[i];
                }
                if i + 2 < n {
                    acc += xc[i + 2] * self.f[i];
                }
                if i >= 1 {
                    acc += xc[i - 1] * self.e[i - 1];
                }
                if i >= 2 {
                    acc += xc[i - 2] * self.f[i - 2];
                }
                yc[i] = acc * c;
            }
        }
        y
    }

    /// `x ← exp(−i H dt) x` by Taylor series on substeps with `‖H‖ dt ≤ 1`.
    fn apply_exp(&self, x: &mut DMatrix<Complex64>, dt: f64) {
        let subs = (self.norm_bound() * dt.abs()).ceil().max(1.0) as usize;
        let h = dt / subs as f64;
        for _ in 0..subs {
            let mut term = x.clone();
            for j in 1..=40 {
                term = self.apply(&term, Complex64::new(0.0, -h / j as f64));
                *x += &term;
                if term.iter().all(|z| z.norm_sqr() < 1e-36) {
                    break;
                }
            }
        }
    }
}

fn resolve(spec: &CouplingSpec, theta_override: Option<f64>) -> CouplingSpec {
    match theta_override {
        Some(x) => spec.with_theta(x),
        None => *spec,
    }
}

/// Hamiltonian of photon-number block `k` (real symmetric, mechanical space).
/// `(b† + b)²` enters as `B+⁽²⁾ + 2 N_b + 1`.
pub fn hamiltonian_block(
    space: &TruncatedSpace,
    spec: &CouplingSpec,
    tau: f64,
    k: usize,
    theta_override: Option<f64>,
) -> DMatrix<f64> {
    Band::block(&resolve(spec, theta_override), tau, k, space.n_mech).dense()
}

/// Full Hamiltonian matrix.
pub fn hamiltonian_matrix(
    space: &TruncatedSpace,
    spec: &CouplingSpec,
    tau: f64,
    theta_override: Option<f64>,
) -> DMatrix<Complex64> {
    let spec = resolve(spec, theta_override);
    let nm = space.n_mech;
    let mut h = DMatrix::<Complex64>::zeros(space.dim(), space.dim());
    for k in 0..space.n_cav {
        let blk = Band::block(&spec, tau, k, nm).dense();
        h.view_mut((k * nm, k * nm), (nm, nm))
            .copy_from(&to_complex(&blk));
    }
    h
}

/// Time stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stepper {
    /// Exponential of the midpoint Hamiltonian (second order).
    Midpoint,
    /// Two-exponential commutator-free Magnus scheme (fourth order).
    Cf4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Initial step.
    pub dt: f64,
    /// Max-norm difference between successive halvings that counts as converged.
    pub convergence: f64,
    pub max_halvings: usize,
    pub stepper: Stepper,
    /// Finite-difference step; `None` selects `1e-5 · max(1, |θ|)`.
    pub h_fd: Option<f64>,
    /// Top mechanical levels whose population counts as leakage.
    pub edge_levels: usize,
    pub leakage_limit: f64,
    /// Photon-number blocks with a smaller Poisson weight are skipped.
    pub min_block_weight: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            dt: 0.05,
            convergence: 1e-9,
            max_halvings: 10,
            stepper: Stepper::Cf4,
            h_fd: None,
            edge_levels: 2,
            leakage_limit: 1e-8,
            min_block_weight: 1e-15,
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter("oracle step must be > 0".into()));
        }
        if !(self.convergence > 0.0) {
            return Err(Error::InvalidParameter("convergence target must be > 0".into()));
        }
        Ok(())
    }
}

/// Block-diagonal propagator.
#[derive(Debug, Clone)]
pub struct Evolution {
    /// `(k, U_k)` for each evolved photon-number block.
    pub blocks: Vec<(usize, DMatrix<Complex64>)>,
    pub steps: usize,
    pub halvings: usize,
    /// Max-norm difference between the last two halvings.
    pub residual: f64,
}

impl Evolution {
    /// Full-space unitary; blocks that were not evolved are left at zero.
    pub fn unitary(&self, space: &TruncatedSpace) -> DMatrix<Complex64> {
        let nm = space.n_mech;
        let mut u = DMatrix::<Complex64>::zeros(space.dim(), space.dim());
        for (k, blk) in &self.blocks {
            u.view_mut((k * nm, k * nm), (nm, nm)).copy_from(blk);
        }
        u
    }
}

const CF4_C: [f64; 2] = [0.5 - 0.288_675_134_594_812_9, 0.5 + 0.288_675_134_594_812_9];
const CF4_A: [f64; 2] = [0.25 - 0.288_675_134_594_812_9, 0.25 + 0.288_675_134_594_812_9];

/// First `cols` columns of the block propagator.
fn propagate_block(
    spec: &CouplingSpec,
    k: usize,
    n: usize,
    cols: usize,
    tau: f64,
    steps: usize,
    stepper: Stepper,
) -> DMatrix<Complex64> {
    let mut u = DMatrix::<Complex64>::identity(n, cols);
    let dt = tau / steps as f64;
    for s in 0..steps {
        let t = s as f64 * dt;
        match stepper {
            Stepper::Midpoint => Band::block(spec, t + 0.5 * dt, k, n).apply_exp(&mut u, dt),
            Stepper::Cf4 => {
                let h1 = Band::block(spec, t + CF4_C[0] * dt, k, n);
                let h2 = Band::block(spec, t + CF4_C[1] * dt, k, n);
                // earlier-weighted factor acts first
                h1.mix(CF4_A[1], &h2, CF4_A[0]).apply_exp(&mut u, dt);
                h1.mix(CF4_A[0], &h2, CF4_A[1]).apply_exp(&mut u, dt);
            }
        }
    }
    u
}

fn is_time_independent(spec: &CouplingSpec) -> bool {
    use crate::coupling::{CouplingForm, DriveForm};
    let g_const = match spec.g_form {
        CouplingForm::Constant { .. } => true,
        CouplingForm::SineModulated { epsilon, omega, .. } => epsilon == 0.0 || omega == 0.0,
    };
    let d_const = |d: &DriveForm| match d {
        DriveForm::CosModulated { omega, amp } => *omega == 0.0 || *amp == 0.0,
        _ => true,
    };
    g_const && d_const(&spec.d1_form) && d_const(&spec.d2_form)
}

fn max_diff(a: &[(usize, DMatrix<Complex64>)], b: &[(usize, DMatrix<Complex64>)]) -> f64 {
    a.iter()
        .zip(b.iter())
        .flat_map(|((_, x), (_, y))| x.iter().zip(y.iter()).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy)]
struct Shape<'a> {
    n: usize,
    cols: usize,
    ks: &'a [usize],
}

fn evolve_fixed(
    shape: Shape,
    spec: &CouplingSpec,
    tau: f64,
    steps: usize,
    stepper: Stepper,
) -> Vec<(usize, DMatrix<Complex64>)> {
    shape
        .ks
        .iter()
        .map(|&k| (k, propagate_block(spec, k, shape.n, shape.cols, tau, steps, stepper)))
        .collect()
}

fn evolve_blocks(
    shape: Shape,
    spec: &CouplingSpec,
    tau: f64,
    cfg: &OracleConfig,
    allow_exact: bool,
) -> Result<Evolution> {
    cfg.validate()?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter("evolution time must be > 0".into()));
    }
    if allow_exact && is_time_independent(spec) {
        return Ok(Evolution {
            blocks: evolve_fixed(shape, spec, tau, 1, Stepper::Midpoint),
            steps: 1,
            halvings: 0,
            residual: 0.0,
        });
    }
    let mut steps = (tau / cfg.dt).ceil().max(1.0) as usize;
    let mut prev = evolve_fixed(shape, spec, tau, steps, cfg.stepper);
    let mut diff = f64::INFINITY;
    for halving in 1..=cfg.max_halvings {
        steps *= 2;
        let next = evolve_fixed(shape, spec, tau, steps, cfg.stepper);
        diff = max_diff(&prev, &next);
        prev = next;
        if diff < cfg.convergence {
            return Ok(Evolution {
                blocks: prev,
                steps,
                halvings: halving,
                residual: diff,
            });
        }
    }
    Err(Error::NoConvergence {
        halvings: cfg.max_halvings,
        diff,
    })
}

/// Propagator `U(τ)` with step halving until converged in max-norm.
pub fn evolve(
    space: &TruncatedSpace,
    spec: &CouplingSpec,
    tau: f64,
    cfg: &OracleConfig,
    theta_override: Option<f64>,
) -> Result<Evolution> {
    let ks: Vec<usize> = (0..space.n_cav).collect();
    let shape = Shape {
        n: space.n_mech,
        cols: space.n_mech,
        ks: &ks,
    };
    evolve_blocks(shape, &resolve(spec, theta_override), tau, cfg, true)
}

/// `|⟨k|μ⟩|²` for `k < n`.
pub fn poisson_weights(mu_sq: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n);
    let mut p = (-mu_sq).exp();
    for k in 0..n {
        if k > 0 {
            p *= mu_sq / k as f64;
        }
        w.push(p);
    }
    w
}

/// Thermal weights `tanh^{2n} r / cosh² r` down to `cutoff`.
pub fn thermal_weights(r_t: f64, cutoff: f64) -> Vec<f64> {
    let t2 = r_t.tanh().powi(2);
    let mut w = vec![1.0 / r_t.cosh().powi(2)];
    if t2 == 0.0 {
        return w;
    }
    loop {
        let next = w[w.len() - 1] * t2;
        if next < cutoff {
            return w;
        }
        w.push(next);
    }
}

/// Smallest cavity truncation whose coherent-state tail is below `tail`.
pub fn cavity_dimension(mu_sq: f64, tail: f64) -> usize {
    let mut n = 2;
    loop {
        let mass: f64 = poisson_weights(mu_sq, n).iter().sum();
        if 1.0 - mass < tail {
            return n;
        }
        n += 1;
    }
}

/// Mixed-state QFI of the tagged parameter from finite-difference generators.
pub fn qfi_oracle(
    space: &TruncatedSpace,
    spec: &CouplingSpec,
    probe: &ProbeState,
    tau: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    spec.validate()?;
    cfg.validate()?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let mu_sq = probe.mu_sq();
    let p = poisson_weights(mu_sq, space.n_cav);
    let mass: f64 = p.iter().sum();
    if 1.0 - mass > 1e-10 {
        return Err(Error::TruncationLeakage {
            what: "cavity".into(),
            leakage: 1.0 - mass,
            limit: 1e-10,
        });
    }
    let lam = thermal_weights(probe.r_t, 1e-12);
    let n_th = lam.len();
    if n_th + cfg.edge_levels > space.n_mech {
        return Err(Error::TruncationLeakage {
            what: "thermal".into(),
            leakage: lam.iter().skip(space.n_mech.saturating_sub(cfg.edge_levels)).sum(),
            limit: 1e-12,
        });
    }
    let ks: Vec<usize> = (0..space.n_cav).filter(|&k| p[k] >= cfg.min_block_weight).collect();

    let theta = spec.theta_value();
    let h = cfg.h_fd.unwrap_or(1e-5 * theta.abs().max(1.0));
    // A single exponential is exact only if the shifted specifications are static too.
    let exact = is_time_independent(&spec.with_theta(theta + h));
    // Only the thermally occupied columns of each block are needed.
    let shape = Shape {
        n: space.n_mech,
        cols: n_th,
        ks: &ks,
    };
    let nominal = evolve_blocks(shape, spec, tau, cfg, exact)?;
    let fixed = |x: f64| {
        let s = spec.with_theta(x);
        let stepper = if nominal.halvings == 0 { Stepper::Midpoint } else { cfg.stepper };
        evolve_fixed(shape, &s, tau, nominal.steps, stepper)
    };
    let central = |step: f64| -> Vec<DMatrix<Complex64>> {
        let (up, dn) = (fixed(theta + step), fixed(theta - step));
        up.iter()
            .zip(dn.iter())
            .map(|((_, a), (_, b))| (a - b) / Complex64::new(2.0 * step, 0.0))
            .collect()
    };
    let coarse = central(h);
    let fine = central(h / 2.0);

    let nm = space.n_mech;
    let mut leak = 0.0;
    let mut h_mat = DMatrix::<Complex64>::zeros(n_th, n_th);
    let mut h2 = DVector::<f64>::zeros(n_th);
    for (idx, (k, u)) in nominal.blocks.iter().enumerate() {
        let du = (&fine[idx] * Complex64::new(4.0, 0.0) - &coarse[idx]) / Complex64::new(3.0, 0.0);
        let gen = u.adjoint() * &du * Complex64::new(0.0, -1.0);
        let w = p[*k];
        for n in 0..n_th {
            for j in nm - cfg.edge_levels..nm {
                leak += w * lam[n] * u[(j, n)].norm_sqr();
            }
            h2[n] += w * du.column(n).norm_squared();
            for m in 0..n_th {
                h_mat[(n, m)] += gen[(n, m)] * w;
            }
        }
    }
    if leak > cfg.leakage_limit {
        return Err(Error::TruncationLeakage {
            what: "mechanical".into(),
            leakage: leak,
            limit: cfg.leakage_limit,
        });
    }
    let mut var = 0.0;
    let mut cross = 0.0;
    for n in 0..n_th {
        var += lam[n] * (h2[n] - h_mat[(n, n)].re.powi(2));
        for m in 0..n_th {
            if m != n {
                cross += lam[n] * lam[m] / (lam[n] + lam[m]) * h_mat[(n, m)].norm_sqr();
            }
        }
    }
    Ok(4.0 * var - 8.0 * cross)
}

/// One oracle-versus-analytic comparison.
#[derive(Debug, Clone)]
pub struct OracleCase {
    pub name: String,
    pub spec: CouplingSpec,
    pub probe: ProbeState,
    pub tau: f64,
    pub n_cav: usize,
    pub n_mech: usize,
}

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub name: String,
    pub analytic: f64,
    pub oracle: f64,
    pub rel_err: f64,
}

/// Runs one case against the closed-form pipeline.
pub fn run_case(case: &OracleCase, cfg: &OracleConfig) -> Result<OracleOutcome> {
    let analytic = crate::qfi::qfi_for_spec(
        &case.spec,
        &case.probe,
        case.tau,
        crate::fcoeffs::DerivativeMethod::ClosedForm,
    )?
    .value;
    let space = build_space(case.n_cav, case.n_mech)?;
    let oracle = qfi_oracle(&space, &case.spec, &case.probe, case.tau, cfg)?;
    let rel_err = if analytic == 0.0 {
        oracle.abs()
    } else {
        (oracle - analytic).abs() / analytic.abs()
    };
    Ok(OracleOutcome {
        name: case.name.clone(),
        analytic,
        oracle,
        rel_err,
    })
}

/// Desk-scale cases for the modulated-coupling and displacement scenarios.
pub fn default_suite() -> Vec<OracleCase> {
    use crate::coupling::{CouplingForm, DriveForm, ThetaTag};
    let modulated = |g0: f64, epsilon: f64, omega: f64, tag| {
        CouplingSpec::new(
            CouplingForm::SineModulated { g0, epsilon, omega },
            DriveForm::Zero,
            DriveForm::Zero,
            tag,
        )
    };
    let displaced = |g0: f64, d1: f64, omega: f64, tag| {
        let d1_form = if omega == 0.0 {
            DriveForm::Constant { amp: d1 }
        } else {
            DriveForm::CosModulated { amp: d1, omega }
        };
        CouplingSpec::new(CouplingForm::Constant { g0 }, d1_form, DriveForm::Zero, tag)
    };
    let probe = |mu: f64, r: f64| ProbeState::real(mu, r).expect("valid probe");
    let case = |name: &str, spec, probe: ProbeState, tau, n_mech| OracleCase {
        name: name.into(),
        spec,
        probe,
        tau,
        n_cav: cavity_dimension(probe.mu_sq(), 1e-11).min(24),
        n_mech,
    };
    vec![
        case("i-res-g0", modulated(0.1, 0.3, 1.0, ThetaTag::G0), probe(1.0, 0.3), 2.0, 24),
        case("i-const-g0", modulated(0.1, 0.0, 1.0, ThetaTag::G0), probe(1.0, 0.3), 1.0, 24),
        case("i-gen-g0", modulated(0.1, 0.5, 0.8, ThetaTag::G0), probe(1.5, 0.0), 3.0, 28),
        case("i-gen-g0-warm", modulated(0.1, 0.4, 1.7, ThetaTag::G0), probe(2.0, 0.5), 1.5, 32),
        case("i-res-eps", modulated(0.1, 0.5, 1.0, ThetaTag::Epsilon), probe(1.0, 0.2), 4.0, 28),
        case("i-gen-g0-long", modulated(0.05, 0.8, 0.5, ThetaTag::G0), probe(2.0, 0.1), 4.0, 28),
        case("ii-mech-only", displaced(0.0, 1.0, 0.0, ThetaTag::D1), probe(1.0, 0.0), std::f64::consts::PI, 24),
        case("ii-res-d1", displaced(0.2, 0.5, 1.0, ThetaTag::D1), probe(1.0, 0.3), 3.0, 28),
        case("ii-gen-d1", displaced(0.15, 0.7, 0.37, ThetaTag::D1), probe(1.5, 0.5), 4.0, 32),
        case("ii-const-d1", displaced(0.1, 0.3, 0.0, ThetaTag::D1), probe(2.0, 0.2), 2.0, 28),
        case("ii-gen-d1-fast", displaced(0.15, 0.6, 1.6, ThetaTag::D1), probe(1.0, 0.0), 3.5, 32),
        case("ii-gen-g0", displaced(0.2, 0.5, 0.5, ThetaTag::G0), probe(1.0, 0.4), 2.5, 28),
    ]
}

/// A θ-independent control: both sides must be zero.
pub fn control_case() -> OracleCase {
    use crate::coupling::{CouplingForm, DriveForm, ThetaTag};
    let probe = ProbeState::real(1.0, 0.2).expect("valid probe");
    OracleCase {
        name: "control-inert".into(),
        spec: CouplingSpec::new(
            CouplingForm::Constant { g0: 0.2 },
            DriveForm::Zero,
            DriveForm::Zero,
            ThetaTag::OmegaG,
        ),
        probe,
        tau: 2.0,
        n_cav: 16,
        n_mech: 24,
    }
}
