//! Spectral simulation of first-order massless wave equations on a periodic
//! grid, with pointwise field packings and cross-formulation harnesses.

pub mod error;
pub mod export;
pub mod fft;
pub mod grid;
pub mod harness;
pub mod initial;
pub mod maps;
pub mod residual;
pub mod solver;

pub use error::SimError;
pub use grid::{FieldState, GridSpec, SpinorField};
pub use harness::{
    run_constraint_monitor, run_dispersion, run_duality, run_generalized_maxwell,
    run_neutrino_consistency, Formulation, RepTable, RunSettings, Tolerances, Verdict,
};
pub use initial::{make_initial_em, random_spinor};
pub use maps::{fields_to_wavefunction, rs_vector, wavefunction_to_fields, NumericPacking};
pub use residual::{residual_budget, residual_generalized_maxwell, ResidualSeries};
pub use solver::{
    evolve, l2_norm, l2_rel_diff, plane_wave, propagator_matrix, spectral_derivative,
    CMatrix, CertifiedRep, Evolver,
};
