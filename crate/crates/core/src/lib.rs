//! Quantum Fisher information for parameter estimation with a driven
//! nonlinear optomechanical system.
//!
//! The Hamiltonian (in units of the mechanical frequency, with `τ = ω_m t`) is
//!
//! ```text
//! H = Ω_c N_a + N_b − G(τ) N_a (b† + b) + D1(τ) (b† + b) + D2(τ) (b† + b)²
//! ```
//!
//! The physics modules are generic over [`scalar::Real`]; the truncated-space
//! oracle, sweeps and reports work in `f64`.

pub mod coupling;
pub mod error;
pub mod fcoeffs;
pub mod mechanics;
pub mod ode;
pub mod oracle;
pub mod qfi;
pub mod scalar;

pub use coupling::{
    dimensionful_rescale, r_t_from_temperature, CouplingForm, CouplingSpec, DriveForm,
    PhysicalUnits, ProbeState, ThetaTag,
};
pub use error::{Error, Result};
pub use fcoeffs::{Branch, DerivativeMethod, FCoefficients, FDerivatives};
pub use qfi::{cramer_rao, qfi_for_spec, QfiCoefficients, QfiResult};
pub use scalar::Real;

pub type CouplingSpec64 = CouplingSpec<f64>;
pub type CouplingSpec32 = CouplingSpec<f32>;
pub type ProbeState64 = ProbeState<f64>;
pub type QfiResult64 = QfiResult<f64>;
