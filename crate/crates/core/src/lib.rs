//! Feedback compensation of probe-qubit decoherence as a direct measure of
//! measurement uncertainty.
//!
//! A probe qubit prepared in `|X=+1⟩` couples weakly to an observable `A` of a
//! system through `exp(−iσ A⊗Z)`. The system is then measured with a POVM
//! `{E(m)}` and an outcome-dependent correction `exp(+iσ A(m) Z)` is applied to
//! the probe. The coherence `⟨X⟩` that survives tells how well the values
//! `A(m)` track `A`:
//!
//! * [`protocol`] evaluates `⟨X⟩(out)` without feedback, by brute-force
//!   joint-space simulation, and by the reduced system-space trace formula.
//! * [`uncertainty`] computes the Ozawa uncertainty
//!   `ε² = Σ_m Tr(E(m)(A−A(m))ρ(A−A(m)))`, which governs the residual
//!   decoherence `1 − ⟨X⟩ ≈ 2σ²ε²`, and the weak values that minimize it.
//! * [`montecarlo`] runs the same protocol shot by shot as a laboratory would.
//! * [`scenario`] and [`csv`] package experiments as TOML files and produce
//!   σ-sweep tables.
//!
//! ℏ = 1 throughout; σ is dimensionless.

pub mod csv;
pub mod error;
pub mod linalg;
pub mod model;
pub mod montecarlo;
pub mod protocol;
pub mod random;
pub mod scenario;
pub mod uncertainty;

pub use error::{Error, Result};
pub use linalg::{hermitian_eig, partial_trace_system, pauli, tensor, unitary_exp_i, ComplexMatrix, SpectralDecomposition, C64};
pub use model::{
    expectation, outcome_probability, projective_povm_from_basis, projective_povm_with_labels, pure_state, variance,
    DensityMatrix, Effect, Observable, Povm,
};
pub use montecarlo::{estimate_probe_x, simulate_shot, EnsembleEstimate, ShotResult, ShotSampler};
pub use protocol::{
    conditional_probe_state, feedback_unitary, interaction_unitary, probe_output_feedback_joint,
    probe_output_feedback_reduced, probe_output_no_feedback, CouplingStrength, EstimateMap, ProbeOutput,
};
pub use scenario::{builtin_scenarios, parse_scenario, preset, run_sweep, EstimateStrategy, ScenarioSpec, SigmaSweep};
pub use uncertainty::{
    optimize_estimates, ozawa_uncertainty, small_sigma_residual, stationarity_gradient, variance_residual,
    weak_value_estimates, zero_error_closed_form, UncertaintyReport, WeakValueReport,
};
