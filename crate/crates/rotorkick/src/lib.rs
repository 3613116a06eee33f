//! Orientation control of a 3D rigid rotor by trains of sudden kicks.
//!
//! A linear polar molecule driven by short half-cycle pulses receives, in the
//! sudden limit, an instantaneous momentum kick `exp(i A cos θ)` and otherwise
//! rotates freely under `B L²`. This crate provides:
//!
//! - the truncated `|l, m⟩` basis at fixed `m` together with the tridiagonal
//!   matrix of `cos θ` and the diagonal of `L²` ([`basis`]);
//! - free evolution, kick propagators, and a split-step integrator for
//!   finite-duration pulses ([`propagation`]);
//! - the optimally oriented states of each truncated subspace and their
//!   orientation-duration figure of merit ([`target`]);
//! - the kick-at-the-maximum scheduling strategy, its fixed-point diagnostics,
//!   and a system-agnostic variant ([`scheduler`]);
//! - per-kick population leakage out of the control subspace, exact and
//!   estimated ([`leakage`]);
//! - Boltzmann ensembles at finite temperature driven by a shared pulse train
//!   ([`thermal`]);
//! - laboratory-unit conversions, a molecule registry, and CSV/JSON emission
//!   for the CLI ([`units`], [`output`], [`cli`]).
//!
//! Internally all times are dimensionless fractions of the rotational period
//! `T_rot = π/B`; physical units enter only through [`units`].

pub mod basis;
pub mod cli;
pub mod leakage;
pub mod linalg;
pub mod output;
pub mod propagation;
pub mod scheduler;
mod signal;
pub mod target;
pub mod thermal;
pub mod units;

pub use basis::{cos_matrix_element, BasisSpec, CosineOperator, L2Diagonal};
pub use leakage::{leakage_estimate, leakage_exact, max_area_for_budget, LeakageReport};
pub use propagation::{KickPropagator, PulseShape, PulseShapeKind, RotorState};
pub use scheduler::{
    find_next_maximum, run_explicit_train, run_kick_train, MaximumMode, PulseTrainResult,
    TrainConfig,
};
pub use target::{
    efficiency_duration_table, optimal_state_approx, optimal_state_exact, orientation_duration,
    EfficiencyDurationRow, TargetState,
};
pub use thermal::{build_ensemble, run_thermal_train, thermal_expectation, thermal_optimal_bound, ThermalEnsemble};
pub use units::{kelvin_to_ratio, physical_to_reduced, MoleculeParams, MoleculeRegistry, PhysicalPulse};

/// Crate version string recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
