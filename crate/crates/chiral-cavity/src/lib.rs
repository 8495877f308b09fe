//! Spectral shifts and vacuum Rabi dynamics for a charged particle bound in a
//! central potential inside a single-mode chiral cavity.
//!
//! Vacuum fluctuations of a circularly polarized cavity mode displace the
//! particle coordinate by a chiral length xi, splitting otherwise degenerate
//! angular-momentum doublets and shifting every level by a cavity analogue of
//! the Lamb shift. This crate computes those shifts three independent ways
//! and cross-checks them against each other:
//!
//! - closed forms for hydrogen-like and 2D-oscillator states ([`shifts`]),
//! - numerical expectation values over solved radial bound states
//!   ([`radial`]),
//! - exact diagonalization of the full light-matter Hamiltonian in a
//!   truncated Fock basis ([`fock`]).
//!
//! The [`rabi`] module implements the associated two-level vacuum Rabi
//! problem, comparing two analytic probability kernels against a direct
//! integration of the Schrodinger equation. All physics is computed in
//! Hartree atomic units (hbar = m_e = e = 1); [`units`] converts at the
//! edges.
//!
//! Numerical routines are generic over the scalar through [`real::Real`]
//! (f64 and f32 both work); the `*F64` aliases below pin the common choice.

// Input validation writes `!(x > 0)` instead of `x <= 0` so that NaN takes
// the rejection branch too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod fock;
pub mod model;
pub mod rabi;
pub mod radial;
pub mod real;
pub mod shifts;
pub mod units;

pub use model::{CavityParams, CentralPotential, Chirality, Dimensionality, ModelError};
pub use rabi::{RabiComparison, RabiError, SupportedForm, TwoLevelConfig};
pub use radial::{RadialError, RadialGrid, RadialState};
pub use real::Real;
pub use shifts::{LambResult, Path, ShiftError, ShiftResult, StateLabel};
pub use units::{EnergyUnit, UnitSystem};

pub type CavityParamsF64 = model::CavityParams<f64>;
pub type CentralPotentialF64 = model::CentralPotential<f64>;
pub type RadialGridF64 = radial::RadialGrid<f64>;
pub type RadialStateF64 = radial::RadialState<f64>;
pub type ShiftResultF64 = shifts::ShiftResult<f64>;
pub type LambResultF64 = shifts::LambResult<f64>;
pub type TruncatedHamiltonianF64 = fock::TruncatedHamiltonian<f64>;
pub type ValidationReportF64 = fock::ValidationReport<f64>;
pub type TwoLevelConfigF64 = rabi::TwoLevelConfig<f64>;
pub type RabiComparisonF64 = rabi::RabiComparison<f64>;
