//! Matrix Numerov solver for one-dimensional Schrödinger problems with
//! pseudo-delta barriers and position-dependent mass.
//!
//! Lengths are in nm, energies in eV, masses relative to the electron mass.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

// Links the system OpenBLAS that provides LAPACK.
extern crate openblas_src;

pub mod assembly;
pub mod config;
pub mod delta_analysis;
pub mod eigensolve;
pub mod error;
pub mod potentials;
pub mod scenarios;
pub mod units;

pub use assembly::{
    assemble_constant_mass, assemble_pdm, effective_potential, DenseMatrix, HamiltonianSystem,
    SystemKind, TridiagonalSymmetric,
};
pub use config::{
    BarrierSpec, GridSpec, MassSpec, OutputSpec, ScenarioConfig, SolveSpec, SweepParameter,
    SweepSpec, VariantMass, VariantSpec,
};
pub use delta_analysis::{
    JumpCheck, Parity, QuantizationResidual, ValidationReport, ValidationThresholds,
};
pub use eigensolve::{solve, Eigenpair, Spectrum};
pub use error::{Error, Result};
pub use potentials::{BasePotential, MassProfile, PotentialSpec, PseudoDelta, PseudoDeltaShape};
pub use scenarios::{
    compare_energies, delta_shape_convergence, preset, run_scenario, run_sweep, ComparisonTable,
    ScenarioResult, ShapeConvergence, SweepResult, VariantResult, PRESET_NAMES,
};
pub use units::{trapezoid, Grid, PhysicalConstants};
