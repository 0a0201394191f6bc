//! Fixtures shared by the criterion benchmarks.

use resistevo::experiments::scenarios::{healthy_spec, resistance_spec};
use resistevo::{
    gaussian_bump, ComboModelSpec, ComboSolver, ComboState, DensityField, Grid, KernelSpec,
    MonoSolver, RunMode, SolverState,
};

pub fn grid(m: usize) -> Grid {
    Grid::new(m, 1.0).expect("valid grid")
}

pub fn bump(m: usize) -> DensityField {
    gaussian_bump(grid(m), 0.5, 0.01, 1.0).expect("valid bump")
}

/// Healthy solver with mutations switched on so the kernel is exercised.
pub fn healthy_with_mutation(m: usize) -> (MonoSolver, SolverState) {
    let mut spec = healthy_spec();
    spec.theta = 0.1;
    spec.kernel = KernelSpec::new(0.01);
    let solver = MonoSolver::new(spec, grid(m)).expect("valid spec");
    let state = solver
        .initial_state(&bump(m), RunMode::Imex)
        .expect("valid state");
    (solver, state)
}

pub fn resistance(m: usize) -> (MonoSolver, SolverState) {
    let solver = MonoSolver::new(resistance_spec(), grid(m)).expect("valid spec");
    let state = solver
        .initial_state(&bump(m), RunMode::Renormalized)
        .expect("valid state");
    (solver, state)
}

pub fn combination(m: usize, c1: f64, c2: f64) -> (ComboSolver, ComboState) {
    let g = grid(m);
    let solver = ComboSolver::new(ComboModelSpec::standard(c1, c2), g).expect("valid spec");
    let h = gaussian_bump(g, 0.5, 0.01, 0.5).expect("valid bump");
    let c = gaussian_bump(g, 0.5, 0.01, 0.5).expect("valid bump");
    let state = solver.state(0.0, h, c).expect("same grid");
    (solver, state)
}
