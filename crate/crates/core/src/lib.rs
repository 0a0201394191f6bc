//! Trait-structured selection/mutation dynamics of healthy and cancer cell
//! populations under cytotoxic and cytostatic therapy.
//!
//! Densities `n(x, t)` live on a uniform grid over the resistance trait
//! `x in [0, x_max]`. [`mono`] integrates the single-population models
//! (healthy tissue with homeostasis, cancer under a constant dose),
//! [`combo`] the coupled two-population model with two drugs, and
//! [`oracle`] provides the closed-form predictions the simulations are
//! checked against.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assumptions;
pub mod combo;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod kernel;
pub mod mono;
pub mod oracle;
pub mod rates;
pub mod trajectory;

pub use assumptions::{validate_assumptions, AssumptionReport, CheckStatus};
pub use combo::{
    dose_grid_sweep, net_growth_pair, run_combined, ComboModelSpec, ComboSolver, ComboState,
    SweepTable,
};
pub use error::{Error, Result};
pub use grid::{gaussian_bump, hopf_cole, integrate, DensityField, Grid, LogField};
pub use kernel::{build_kernel, KernelMatrix, KernelSpec};
pub use mono::{
    net_growth, renormalize, step_exact_linear, step_imex, MonoKind, MonoModelSpec, MonoSolver,
    RunMode, SolverState,
};
pub use oracle::{
    concentration_from_i, dose_analysis, fittest_trait_from_rho, hamiltonian, homeostasis_rho,
    optimal_dose, DoseAnalysis, DoseRegime,
};
pub use rates::RateSpec;
pub use trajectory::{Record, Snapshot, Trajectory};
