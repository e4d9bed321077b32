//! Quantum and classical fidelities for single-mode Gaussian states.
//!
//! The crate provides:
//! * [`state`]: Gaussian states in measured-variance form, conversions to
//!   the squeezed-thermal parameterization, pointwise Wigner evaluation;
//! * [`fidelity`]: closed-form Bhattacharyya (classical) and Uhlmann
//!   (quantum) fidelities, with the configurations lacking a published
//!   closed form reported as unsupported rather than extrapolated;
//! * [`oracle`]: independent brute-force checks — a truncated Fock-basis
//!   Uhlmann fidelity, a purification overlap series, and midpoint-rule
//!   phase-space integrals;
//! * [`teleport`]: transfer-function benchmarking of Gaussian channels and
//!   a Monte-Carlo measure-and-reprepare simulator;
//! * [`ingest`]: homodyne record files and least-squares state estimation.
//!
//! All variances are in shot-noise units (vacuum = 1).

pub mod error;
pub mod fidelity;
pub mod ingest;
pub mod oracle;
pub mod state;
pub mod teleport;

pub use error::{Error, Result};
pub use fidelity::{
    classical_fidelity, displacement_factor, pure_relation_rhs, quantum_fidelity,
    quantum_fidelity_twamley, thermal_fidelity, FidelityResult, Regime,
};
pub use ingest::{estimate_state, load_samples, per_angle_stats, QuadratureSamples, StateEstimate};
pub use oracle::{
    classical_fidelity_grid, epr_overlap_fidelity, uhlmann_fidelity_converged,
    uhlmann_fidelity_fock, wigner_overlap, FockDensityMatrix, GridSpec,
};
pub use state::{GaussianState, SqueezedThermalParams};
pub use teleport::{
    apply_transfer, estimate_transfer, no_entanglement_fidelity, reference_fidelity,
    simulate_heterodyne_teleport, QuadratureStats, TransferFunction,
};
