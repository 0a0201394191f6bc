//! Single-population dynamics: healthy cells with homeostasis, or cancer
//! cells under a constant cytotoxic dose, in the `eps`-rescaled form
//!
//! `eps dn/dt = R(x) n + gain(x)`.
//!
//! Time stepping is the sign-split IMEX rule
//! `n <- ((1 + dt R+) n + dt gain / eps) / (1 - dt R-)` with `R` already divided
//! by `eps`, which keeps densities positive for any `dt`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{integrate, DensityField, Grid};
use crate::kernel::{build_kernel, KernelMatrix, KernelSpec};
use crate::rates::RateSpec;
use crate::trajectory::{boundary_warning, Record, Snapshot, Trajectory};

/// Raw cancer densities above this trigger an overflow error.
pub const OVERFLOW_LIMIT: f64 = 1e250;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonoKind {
    /// Birth damped by `(1 + rho)^-beta`.
    HealthyHomeostasis,
    /// Linear growth, no density dependence.
    CancerLinear,
}

impl MonoKind {
    pub fn label(&self) -> &'static str {
        match self {
            MonoKind::HealthyHomeostasis => "healthy",
            MonoKind::CancerLinear => "cancer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMode {
    Imex,
    ExactLinear,
    /// Evolves `p = n / rho` with the fitness-average correction.
    Renormalized,
}

impl RunMode {
    pub fn label(&self) -> &'static str {
        match self {
            RunMode::Imex => "imex",
            RunMode::ExactLinear => "exact-linear",
            RunMode::Renormalized => "renormalized",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonoModelSpec {
    pub kind: MonoKind,
    pub r: RateSpec,
    pub d: RateSpec,
    pub mu: RateSpec,
    /// Homeostasis exponent (healthy kind only).
    pub beta: f64,
    /// Fraction of divisions with mutation.
    pub theta: f64,
    pub kernel: KernelSpec,
    /// Time/mutation rescaling; `eps = 1` is the unrescaled model.
    pub eps: f64,
    /// Constant cytotoxic dose.
    pub dose: f64,
}

impl MonoModelSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.theta) {
            return Err(Error::param(
                "theta",
                format!("must lie in [0, 1), got {}", self.theta),
            ));
        }
        if !(self.eps > 0.0) {
            return Err(Error::param(
                "eps",
                format!("must be positive, got {}", self.eps),
            ));
        }
        if self.kind == MonoKind::HealthyHomeostasis && !(self.beta > 0.0) {
            return Err(Error::param(
                "beta",
                format!("must be positive, got {}", self.beta),
            ));
        }
        if !(self.dose >= 0.0) {
            return Err(Error::param(
                "c",
                format!("must be nonnegative, got {}", self.dose),
            ));
        }
        if self.theta > 0.0 {
            self.kernel.validate()?;
        }
        Ok(())
    }

    /// Fitness without the dose term, `r - d`.
    pub fn dose_free_growth(&self, x: f64) -> f64 {
        self.r.eval(x) - self.d.eval(x)
    }
}

/// Net growth rate: `r/(1+rho)^beta - d - c mu` (healthy) or `r - d - c mu` (cancer).
pub fn net_growth(spec: &MonoModelSpec, x: f64, rho: f64, c: f64) -> f64 {
    let birth = match spec.kind {
        MonoKind::HealthyHomeostasis => spec.r.eval(x) / (1.0 + rho).powf(spec.beta),
        MonoKind::CancerLinear => spec.r.eval(x),
    };
    birth - spec.d.eval(x) - c * spec.mu.eval(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub n: DensityField,
    pub rho: f64,
    /// `int p (r - d - c mu)`, cancer kind only.
    pub fitness_avg: Option<f64>,
    pub log_rho: f64,
}

/// Rates sampled on the grid plus the mutation kernel when `theta > 0`.
#[derive(Debug, Clone)]
pub struct MonoSolver {
    spec: MonoModelSpec,
    grid: Grid,
    r: Vec<f64>,
    /// `-d - c mu`
    loss: Vec<f64>,
    /// `r - d - c mu`
    cancer_fitness: Vec<f64>,
    dose_free: Vec<f64>,
    kernel: Option<KernelMatrix>,
}

impl MonoSolver {
    pub fn new(spec: MonoModelSpec, grid: Grid) -> Result<Self> {
        spec.validate()?;
        for (name, rate) in [("r", &spec.r), ("d", &spec.d), ("mu", &spec.mu)] {
            rate.check_on(&grid)
                .map_err(|reason| Error::InvalidParameter { name, reason })?;
        }
        let r = spec.r.sample(&grid);
        let d = spec.d.sample(&grid);
        let mu = spec.mu.sample(&grid);
        let loss: Vec<f64> = d.iter().zip(&mu).map(|(d, m)| -d - spec.dose * m).collect();
        let cancer_fitness = r.iter().zip(&loss).map(|(r, l)| r + l).collect();
        let dose_free = r.iter().zip(&d).map(|(r, d)| r - d).collect();
        let kernel = if spec.theta > 0.0 {
            Some(build_kernel(&grid, &spec.kernel)?)
        } else {
            None
        };
        Ok(MonoSolver {
            spec,
            grid,
            r,
            loss,
            cancer_fitness,
            dose_free,
            kernel,
        })
    }

    pub fn spec(&self) -> &MonoModelSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kernel(&self) -> Option<&KernelMatrix> {
        self.kernel.as_ref()
    }

    fn check_grid(&self, n: &DensityField) -> Result<()> {
        if *n.grid() != self.grid {
            return Err(Error::Incompatible(
                "density lives on a different grid".into(),
            ));
        }
        Ok(())
    }

    /// Fitness averages `(int p (r - d - c mu), int p (r - d))` for `p = n / rho`.
    pub fn fitness_averages(&self, n: &[f64], rho: f64) -> (f64, f64) {
        let g = &self.grid;
        let mut with_dose = 0.0;
        let mut dose_free = 0.0;
        for (i, v) in n.iter().enumerate() {
            let w = g.weight(i) * v;
            with_dose += w * self.cancer_fitness[i];
            dose_free += w * self.dose_free[i];
        }
        (with_dose / rho, dose_free / rho)
    }

    pub fn initial_state(&self, init: &DensityField, mode: RunMode) -> Result<SolverState> {
        self.check_grid(init)?;
        let rho = integrate(init);
        if !(rho > 0.0) {
            return Err(Error::ZeroMass);
        }
        let n = if mode == RunMode::Renormalized {
            init.normalized()?
        } else {
            init.clone()
        };
        let mass = integrate(&n);
        Ok(SolverState {
            t: 0.0,
            fitness_avg: self.cancer_average(n.values(), mass),
            n,
            rho: mass,
            log_rho: rho.ln(),
        })
    }

    fn cancer_average(&self, n: &[f64], rho: f64) -> Option<f64> {
        (self.spec.kind == MonoKind::CancerLinear && rho > 0.0)
            .then(|| self.fitness_averages(n, rho).0)
    }

    /// Growth factor multiplying `r` and the mutation gain.
    fn birth_factor(&self, rho: f64) -> f64 {
        match self.spec.kind {
            MonoKind::HealthyHomeostasis => (1.0 + rho).powf(-self.spec.beta),
            MonoKind::CancerLinear => 1.0,
        }
    }

    /// One IMEX step of the raw equation for `n`.
    pub fn step_imex(&self, state: &SolverState, dt: f64) -> Result<SolverState> {
        self.step(state, dt, RunMode::Imex)
    }

    /// One IMEX step of the renormalized equation for `p`.
    pub fn step_renormalized(&self, state: &SolverState, dt: f64) -> Result<SolverState> {
        self.step(state, dt, RunMode::Renormalized)
    }

    fn step(&self, state: &SolverState, dt: f64, mode: RunMode) -> Result<SolverState> {
        if !(dt > 0.0) {
            return Err(Error::param("dt", format!("must be positive, got {dt}")));
        }
        self.check_grid(&state.n)?;
        let renormalized = mode == RunMode::Renormalized;
        if renormalized && self.spec.kind != MonoKind::CancerLinear {
            return Err(Error::Incompatible(
                "renormalized stepping applies to the cancer model only".into(),
            ));
        }
        let eps = self.spec.eps;
        let theta = self.spec.theta;
        let factor = self.birth_factor(state.rho);
        let shift = if renormalized {
            state
                .fitness_avg
                .unwrap_or_else(|| self.fitness_averages(state.n.values(), state.rho).0)
        } else {
            0.0
        };

        let n = state.n.values();
        let mut gain = vec![0.0; n.len()];
        if let Some(kernel) = &self.kernel {
            let weighted: Vec<f64> = n.iter().zip(&self.r).map(|(v, r)| r * v).collect();
            kernel.apply_gain(&weighted, theta * factor, &mut gain);
        }

        let mut next = Vec::with_capacity(n.len());
        for i in 0..n.len() {
            let rate = ((1.0 - theta) * factor * self.r[i] + self.loss[i] - shift) / eps;
            let (up, down) = if rate > 0.0 { (rate, 0.0) } else { (0.0, rate) };
            let v = ((1.0 + dt * up) * n[i] + dt * gain[i] / eps) / (1.0 - dt * down);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    population: self.spec.kind.label(),
                    node: i,
                    t: state.t + dt,
                    value: v,
                });
            }
            next.push(v);
        }

        let t = state.t + dt;
        let mut mass = self.grid.integrate_values(&next);
        let mut log_rho = mass.ln();
        if renormalized {
            if !(mass > 0.0) {
                return Err(Error::ZeroMass);
            }
            for v in &mut next {
                *v /= mass;
            }
            log_rho = state.log_rho + mass.ln() + dt * shift / eps;
            mass = self.grid.integrate_values(&next);
        } else if self.spec.kind == MonoKind::CancerLinear {
            let max = next.iter().copied().fold(0.0, f64::max);
            if max > OVERFLOW_LIMIT {
                return Err(Error::Overflow { t, max });
            }
        }

        Ok(SolverState {
            t,
            fitness_avg: self.cancer_average(&next, mass),
            n: DensityField::from_raw(self.grid, next),
            rho: mass,
            log_rho,
        })
    }

    fn require_exact_linear(&self) -> Result<()> {
        if self.spec.kind != MonoKind::CancerLinear || self.spec.theta != 0.0 {
            return Err(Error::Incompatible(
                "the exact solution exists only for the cancer model without mutation".into(),
            ));
        }
        Ok(())
    }

    /// `n0(x) exp(R(x) t / eps)` with `R = r - d - c mu`.
    pub fn exact_linear(&self, n0: &DensityField, t: f64) -> Result<DensityField> {
        self.require_exact_linear()?;
        self.check_grid(n0)?;
        let eps = self.spec.eps;
        let values: Vec<f64> = n0
            .values()
            .iter()
            .zip(&self.cancer_fitness)
            .map(|(v, r)| v * (r * t / eps).exp())
            .collect();
        if let Some((node, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                population: "cancer",
                node,
                t,
                value,
            });
        }
        Ok(DensityField::from_raw(self.grid, values))
    }

    /// Exact solution scaled to unit mass, evaluated in log space so it does
    /// not overflow for long times.
    pub fn exact_linear_normalized(&self, n0: &DensityField, t: f64) -> Result<DensityField> {
        self.require_exact_linear()?;
        self.check_grid(n0)?;
        let eps = self.spec.eps;
        let logs: Vec<f64> = n0
            .values()
            .iter()
            .zip(&self.cancer_fitness)
            .map(|(v, r)| {
                if *v > 0.0 {
                    v.ln() + r * t / eps
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return Err(Error::ZeroMass);
        }
        let shifted =
            DensityField::from_raw(self.grid, logs.iter().map(|l| (l - top).exp()).collect());
        shifted.normalized()
    }

    fn record(&self, state: &SolverState) -> Record {
        let averages = (self.spec.kind == MonoKind::CancerLinear && state.rho > 0.0)
            .then(|| self.fitness_averages(state.n.values(), state.rho));
        Record {
            t: state.t,
            rho: state.rho,
            log_rho: state.log_rho,
            xbar: state.n.argmax(),
            mean_trait: state.n.mean_trait(),
            fitness_avg: averages.map(|a| a.0),
            dose_free_avg: averages.map(|a| a.1),
        }
    }

    /// Integrates to `t_final`, recording diagnostics every step and a
    /// snapshot every `save_every` steps (plus the first and last).
    pub fn run(
        &self,
        init: &DensityField,
        dt: f64,
        t_final: f64,
        save_every: usize,
        mode: RunMode,
    ) -> Result<Trajectory> {
        self.run_observed(init, dt, t_final, save_every, mode, |_, _| {})
    }

    /// Like [`MonoSolver::run`], calling `observer(previous, next)` after every step.
    pub fn run_observed(
        &self,
        init: &DensityField,
        dt: f64,
        t_final: f64,
        save_every: usize,
        mode: RunMode,
        mut observer: impl FnMut(&SolverState, &SolverState),
    ) -> Result<Trajectory> {
        if !(dt > 0.0) {
            return Err(Error::param("dt", format!("must be positive, got {dt}")));
        }
        if !(t_final >= 0.0) {
            return Err(Error::param(
                "t_final",
                format!("must be nonnegative, got {t_final}"),
            ));
        }
        if save_every == 0 {
            return Err(Error::param("save_every", "must be at least 1"));
        }
        if matches!(mode, RunMode::ExactLinear | RunMode::Renormalized)
            && self.spec.kind != MonoKind::CancerLinear
        {
            return Err(Error::Incompatible(format!(
                "{} mode requires the cancer model",
                mode.label()
            )));
        }
        if mode == RunMode::ExactLinear {
            self.require_exact_linear()?;
        }

        let steps = step_count(dt, t_final);
        let mut traj = Trajectory::default();
        let mut state = self.initial_state(init, mode)?;
        traj.push_record(self.record(&state));
        traj.snapshots.push(Snapshot {
            t: 0.0,
            density: state.n.clone(),
        });

        for k in 1..=steps {
            let t = if k == steps { t_final } else { k as f64 * dt };
            let h = t - state.t;
            let next = match mode {
                RunMode::Imex => self.step_imex(&state, h),
                RunMode::Renormalized => self.step_renormalized(&state, h),
                RunMode::ExactLinear => self.exact_state(init, t),
            }
            .map_err(|e| match e {
                Error::NonFinite { .. }
                    if self.spec.kind == MonoKind::CancerLinear
                        && mode != RunMode::Renormalized =>
                {
                    Error::Overflow {
                        t,
                        max: f64::INFINITY,
                    }
                }
                other => other,
            })?;
            observer(&state, &next);
            state = next;
            state.t = t;
            traj.push_record(self.record(&state));
            if k % save_every == 0 || k == steps {
                traj.snapshots.push(Snapshot {
                    t,
                    density: state.n.clone(),
                });
            }
        }
        traj.warnings
            .extend(boundary_warning(self.spec.kind.label(), state.t, &state.n));
        Ok(traj)
    }

    fn exact_state(&self, init: &DensityField, t: f64) -> Result<SolverState> {
        let n = self.exact_linear(init, t)?;
        let max = n.max();
        if max > OVERFLOW_LIMIT {
            return Err(Error::Overflow { t, max });
        }
        let rho = integrate(&n);
        Ok(SolverState {
            t,
            fitness_avg: self.cancer_average(n.values(), rho),
            log_rho: rho.ln(),
            n,
            rho,
        })
    }
}

/// Number of steps of size `dt` (the last one possibly shorter) to reach `t_final`.
pub fn step_count(dt: f64, t_final: f64) -> usize {
    let ratio = t_final / dt;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
        rounded as usize
    } else {
        ratio.ceil() as usize
    }
}

/// Free-function form of [`MonoSolver::step_imex`].
pub fn step_imex(state: &SolverState, spec: &MonoModelSpec, dt: f64) -> Result<SolverState> {
    MonoSolver::new(spec.clone(), *state.n.grid())?.step_imex(state, dt)
}

/// Exact solution of the mutation-free cancer model at time `t`.
pub fn step_exact_linear(n0: &DensityField, spec: &MonoModelSpec, t: f64) -> Result<DensityField> {
    MonoSolver::new(spec.clone(), *n0.grid())?.exact_linear(n0, t)
}

/// `p = n / rho` and the dose-bearing fitness average `int p (r - d - c mu)`.
pub fn renormalize(state: &SolverState, spec: &MonoModelSpec) -> Result<(DensityField, f64)> {
    let rho = integrate(&state.n);
    if !(rho > 0.0) {
        return Err(Error::ZeroMass);
    }
    let p = state.n.normalized()?;
    let g = *p.grid();
    let weighted: Vec<f64> = p
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x = g.node(i);
            v * (spec.r.eval(x) - spec.d.eval(x) - spec.dose * spec.mu.eval(x))
        })
        .collect();
    Ok((p, g.integrate_values(&weighted)))
}

/// Distance between the 5% and 95% mass quantiles.
pub fn interquantile_width(n: &DensityField) -> f64 {
    n.mass_quantile(0.95) - n.mass_quantile(0.05)
}

/// Mass-normalized state from an arbitrary density, for callers assembling
/// states by hand.
pub fn state_from_density(solver: &MonoSolver, n: DensityField, t: f64) -> SolverState {
    let rho = integrate(&n);
    SolverState {
        t,
        fitness_avg: solver.cancer_average(n.values(), rho),
        log_rho: rho.ln(),
        n,
        rho,
    }
}
