//! Coupled healthy/cancer dynamics under a cytotoxic dose `c1` and a
//! cytostatic dose `c2`:
//!
//! `dn/dt = R(I, c1, c2, x) n + theta/(1 + alpha c2) int r(y) M(y, x) n(y) dy`
//!
//! with `R = r (1 - theta)/(1 + alpha c2) - d I - mu c1` and competition
//! integrals `I_H = a_HH rho_H + a_HC rho_C`, `I_C = a_CH rho_H + a_CC rho_C`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{gaussian_bump, integrate, DensityField, Grid};
use crate::kernel::{build_kernel, KernelMatrix, KernelSpec};
use crate::rates::RateSpec;
use crate::trajectory::{boundary_warning, Record, Snapshot, Trajectory};

/// Steps with `dt |R-|` above this abort.
pub const STIFFNESS_LIMIT: f64 = 50.0;

pub const DEFAULT_ERADICATION_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComboModelSpec {
    pub r_h: RateSpec,
    pub r_c: RateSpec,
    pub d_h: RateSpec,
    pub d_c: RateSpec,
    pub mu_h: RateSpec,
    pub mu_c: RateSpec,
    pub theta_h: f64,
    pub theta_c: f64,
    pub alpha_h: f64,
    pub alpha_c: f64,
    pub a_hh: f64,
    pub a_hc: f64,
    pub a_ch: f64,
    pub a_cc: f64,
    pub kernel_h: KernelSpec,
    pub kernel_c: KernelSpec,
    pub c1: f64,
    pub c2: f64,
}

impl ComboModelSpec {
    /// Standard two-population setup: `r_H = 1.5/(1+x^2)`, `r_C = 3/(1+x^2)`,
    /// affine competition deaths, `mu = 0.2, 0.4 / (0.49 + x^2)`, `theta = 0.1`,
    /// kernel width 0.01.
    pub fn standard(c1: f64, c2: f64) -> Self {
        ComboModelSpec {
            r_h: RateSpec::rational_decay(1.5, 1.0),
            r_c: RateSpec::rational_decay(3.0, 1.0),
            d_h: RateSpec::affine(0.5, 0.1),
            d_c: RateSpec::affine(0.5, 0.3),
            mu_h: RateSpec::inverse_quadratic(0.2, 0.7),
            mu_c: RateSpec::inverse_quadratic(0.4, 0.7),
            theta_h: 0.1,
            theta_c: 0.1,
            alpha_h: 0.01,
            alpha_c: 1.0,
            a_hh: 1.0,
            a_hc: 0.07,
            a_ch: 0.01,
            a_cc: 1.0,
            kernel_h: KernelSpec::new(0.01),
            kernel_c: KernelSpec::new(0.01),
            c1,
            c2,
        }
    }

    pub fn with_doses(&self, c1: f64, c2: f64) -> Self {
        ComboModelSpec {
            c1,
            c2,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, theta) in [("theta_h", self.theta_h), ("theta_c", self.theta_c)] {
            if !(0.0..1.0).contains(&theta) {
                return Err(Error::param(
                    name,
                    format!("must lie in [0, 1), got {theta}"),
                ));
            }
        }
        for (name, v) in [
            ("alpha_h", self.alpha_h),
            ("alpha_c", self.alpha_c),
            ("a_hh", self.a_hh),
            ("a_hc", self.a_hc),
            ("a_ch", self.a_ch),
            ("a_cc", self.a_cc),
            ("c1", self.c1),
            ("c2", self.c2),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::param(
                    name,
                    format!("must be finite and nonnegative, got {v}"),
                ));
            }
        }
        if self.theta_h > 0.0 {
            self.kernel_h.validate()?;
        }
        if self.theta_c > 0.0 {
            self.kernel_c.validate()?;
        }
        Ok(())
    }

    /// Cytostatic proliferation factors `1/(1 + alpha c2)` for (H, C).
    pub fn cytostatic_factors(&self) -> (f64, f64) {
        (
            1.0 / (1.0 + self.alpha_h * self.c2),
            1.0 / (1.0 + self.alpha_c * self.c2),
        )
    }

    pub fn competition(&self, rho_h: f64, rho_c: f64) -> (f64, f64) {
        (
            self.a_hh * rho_h + self.a_hc * rho_c,
            self.a_ch * rho_h + self.a_cc * rho_c,
        )
    }
}

/// Net growth rates `(R_H, R_C)` at trait `x`.
pub fn net_growth_pair(spec: &ComboModelSpec, x: f64, i_h: f64, i_c: f64) -> (f64, f64) {
    let (f_h, f_c) = spec.cytostatic_factors();
    let rh = spec.r_h.eval(x) * (1.0 - spec.theta_h) * f_h
        - spec.d_h.eval(x) * i_h
        - spec.mu_h.eval(x) * spec.c1;
    let rc = spec.r_c.eval(x) * (1.0 - spec.theta_c) * f_c
        - spec.d_c.eval(x) * i_c
        - spec.mu_c.eval(x) * spec.c1;
    (rh, rc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComboState {
    pub t: f64,
    pub n_h: DensityField,
    pub n_c: DensityField,
    pub rho_h: f64,
    pub rho_c: f64,
    pub i_h: f64,
    pub i_c: f64,
}

#[derive(Debug, Clone)]
struct Population {
    label: &'static str,
    r: Vec<f64>,
    d: Vec<f64>,
    mu: Vec<f64>,
    theta: f64,
    alpha: f64,
    kernel: Option<KernelMatrix>,
}

impl Population {
    fn new(
        label: &'static str,
        grid: &Grid,
        rates: [(&'static str, &RateSpec); 3],
        theta: f64,
        alpha: f64,
        kernel: &KernelSpec,
    ) -> Result<Self> {
        for (name, rate) in rates {
            rate.check_on(grid)
                .map_err(|reason| Error::InvalidParameter { name, reason })?;
        }
        Ok(Population {
            label,
            r: rates[0].1.sample(grid),
            d: rates[1].1.sample(grid),
            mu: rates[2].1.sample(grid),
            theta,
            alpha,
            kernel: if theta > 0.0 {
                Some(build_kernel(grid, kernel)?)
            } else {
                None
            },
        })
    }

    /// Mutation gain `theta f int r(y) M(y, x) n(y) dy`.
    fn gain(&self, n: &[f64], factor: f64) -> Vec<f64> {
        let mut out = vec![0.0; n.len()];
        if let Some(kernel) = &self.kernel {
            let weighted: Vec<f64> = n.iter().zip(&self.r).map(|(v, r)| v * r).collect();
            kernel.apply_gain(&weighted, self.theta * factor, &mut out);
        }
        out
    }

    fn rate(&self, i: usize, factor: f64, competition: f64, c1: f64) -> f64 {
        self.r[i] * (1.0 - self.theta) * factor - self.d[i] * competition - self.mu[i] * c1
    }

    fn advance(
        &self,
        n: &[f64],
        competition: f64,
        c1: f64,
        c2: f64,
        dt: f64,
        t: f64,
    ) -> Result<Vec<f64>> {
        let factor = 1.0 / (1.0 + self.alpha * c2);
        let gain = self.gain(n, factor);
        let mut next = Vec::with_capacity(n.len());
        for i in 0..n.len() {
            let rate = self.rate(i, factor, competition, c1);
            let (up, down) = if rate > 0.0 { (rate, 0.0) } else { (0.0, rate) };
            if -dt * down >= STIFFNESS_LIMIT {
                return Err(Error::Unstable {
                    population: self.label,
                    node: i,
                    stiffness: -dt * down,
                    limit: STIFFNESS_LIMIT,
                });
            }
            let v = ((1.0 + dt * up) * n[i] + dt * gain[i]) / (1.0 - dt * down);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    population: self.label,
                    node: i,
                    t,
                    value: v,
                });
            }
            next.push(v);
        }
        Ok(next)
    }
}

#[derive(Debug, Clone)]
pub struct ComboSolver {
    spec: ComboModelSpec,
    grid: Grid,
    healthy: Population,
    cancer: Population,
}

impl ComboSolver {
    pub fn new(spec: ComboModelSpec, grid: Grid) -> Result<Self> {
        spec.validate()?;
        let healthy = Population::new(
            "healthy",
            &grid,
            [("r_h", &spec.r_h), ("d_h", &spec.d_h), ("mu_h", &spec.mu_h)],
            spec.theta_h,
            spec.alpha_h,
            &spec.kernel_h,
        )?;
        let cancer =
            if spec.kernel_c == spec.kernel_h && healthy.kernel.is_some() && spec.theta_c > 0.0 {
                let mut pop = Population::new(
                    "cancer",
                    &grid,
                    [("r_c", &spec.r_c), ("d_c", &spec.d_c), ("mu_c", &spec.mu_c)],
                    0.0,
                    spec.alpha_c,
                    &spec.kernel_c,
                )?;
                pop.theta = spec.theta_c;
                pop.kernel = healthy.kernel.clone();
                pop
            } else {
                Population::new(
                    "cancer",
                    &grid,
                    [("r_c", &spec.r_c), ("d_c", &spec.d_c), ("mu_c", &spec.mu_c)],
                    spec.theta_c,
                    spec.alpha_c,
                    &spec.kernel_c,
                )?
            };
        Ok(ComboSolver {
            spec,
            grid,
            healthy,
            cancer,
        })
    }

    pub fn spec(&self) -> &ComboModelSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn state(&self, t: f64, n_h: DensityField, n_c: DensityField) -> Result<ComboState> {
        if *n_h.grid() != self.grid || *n_c.grid() != self.grid {
            return Err(Error::Incompatible(
                "density lives on a different grid".into(),
            ));
        }
        let rho_h = integrate(&n_h);
        let rho_c = integrate(&n_c);
        let (i_h, i_c) = self.spec.competition(rho_h, rho_c);
        Ok(ComboState {
            t,
            n_h,
            n_c,
            rho_h,
            rho_c,
            i_h,
            i_c,
        })
    }

    /// One IMEX step of both populations with the competition integrals
    /// frozen at the current state.
    pub fn step(&self, state: &ComboState, dt: f64) -> Result<ComboState> {
        if !(dt > 0.0) {
            return Err(Error::param("dt", format!("must be positive, got {dt}")));
        }
        let t = state.t + dt;
        let s = &self.spec;
        let n_h = self
            .healthy
            .advance(state.n_h.values(), state.i_h, s.c1, s.c2, dt, t)?;
        let n_c = self
            .cancer
            .advance(state.n_c.values(), state.i_c, s.c1, s.c2, dt, t)?;
        self.state(
            t,
            DensityField::from_raw(self.grid, n_h),
            DensityField::from_raw(self.grid, n_c),
        )
    }

    /// Net mutation flux (gain minus loss) integrated over the trait, per population.
    pub fn mutation_mass_balance(&self, state: &ComboState) -> (f64, f64) {
        let (f_h, f_c) = self.spec.cytostatic_factors();
        let balance = |pop: &Population, n: &[f64], factor: f64| {
            let gain = pop.gain(n, factor);
            let loss: Vec<f64> = n
                .iter()
                .zip(&pop.r)
                .map(|(v, r)| pop.theta * factor * r * v)
                .collect();
            self.grid.integrate_values(&gain) - self.grid.integrate_values(&loss)
        };
        (
            balance(&self.healthy, state.n_h.values(), f_h),
            balance(&self.cancer, state.n_c.values(), f_c),
        )
    }

    /// Trapezoid of `R n + gain` for both populations: the explicit mass rate.
    pub fn mass_rates(&self, state: &ComboState) -> (f64, f64) {
        let (f_h, f_c) = self.spec.cytostatic_factors();
        let s = &self.spec;
        let rate = |pop: &Population, n: &[f64], factor: f64, comp: f64| {
            let gain = pop.gain(n, factor);
            let total: Vec<f64> = (0..n.len())
                .map(|i| pop.rate(i, factor, comp, s.c1) * n[i] + gain[i])
                .collect();
            self.grid.integrate_values(&total)
        };
        (
            rate(&self.healthy, state.n_h.values(), f_h, state.i_h),
            rate(&self.cancer, state.n_c.values(), f_c, state.i_c),
        )
    }

    fn records(state: &ComboState) -> (Record, Record) {
        let rec = |n: &DensityField, rho: f64, i: f64| Record {
            t: state.t,
            rho,
            log_rho: rho.ln(),
            xbar: n.argmax(),
            mean_trait: if rho > 0.0 { n.mean_trait() } else { f64::NAN },
            fitness_avg: Some(i),
            dose_free_avg: None,
        };
        (
            rec(&state.n_h, state.rho_h, state.i_h),
            rec(&state.n_c, state.rho_c, state.i_c),
        )
    }

    pub fn run(
        &self,
        init: (&DensityField, &DensityField),
        dt: f64,
        steps: usize,
        save_every: usize,
    ) -> Result<(Trajectory, Trajectory)> {
        self.run_observed(init, dt, steps, save_every, |_, _| {})
    }

    pub fn run_observed(
        &self,
        init: (&DensityField, &DensityField),
        dt: f64,
        steps: usize,
        save_every: usize,
        mut observer: impl FnMut(&ComboState, &ComboState),
    ) -> Result<(Trajectory, Trajectory)> {
        if save_every == 0 {
            return Err(Error::param("save_every", "must be at least 1"));
        }
        let mut state = self.state(0.0, init.0.clone(), init.1.clone())?;
        let mut healthy = Trajectory::default();
        let mut cancer = Trajectory::default();
        let push = |h: &mut Trajectory, c: &mut Trajectory, s: &ComboState, snap: bool| {
            let (rh, rc) = Self::records(s);
            h.push_record(rh);
            c.push_record(rc);
            if snap {
                h.snapshots.push(Snapshot {
                    t: s.t,
                    density: s.n_h.clone(),
                });
                c.snapshots.push(Snapshot {
                    t: s.t,
                    density: s.n_c.clone(),
                });
            }
        };
        push(&mut healthy, &mut cancer, &state, true);
        for k in 1..=steps {
            let mut next = self.step(&state, dt)?;
            next.t = k as f64 * dt;
            observer(&state, &next);
            state = next;
            push(
                &mut healthy,
                &mut cancer,
                &state,
                k % save_every == 0 || k == steps,
            );
        }
        healthy
            .warnings
            .extend(boundary_warning("healthy", state.t, &state.n_h));
        cancer
            .warnings
            .extend(boundary_warning("cancer", state.t, &state.n_c));
        Ok((healthy, cancer))
    }
}

/// Free-function form of [`ComboSolver::run`].
pub fn run_combined(
    spec: &ComboModelSpec,
    init: (&DensityField, &DensityField),
    dt: f64,
    steps: usize,
    save_every: usize,
) -> Result<(Trajectory, Trajectory)> {
    ComboSolver::new(spec.clone(), *init.0.grid())?.run(init, dt, steps, save_every)
}

/// Both populations start as the same Gaussian bump, each with its own mass.
pub fn paired_initial_data(
    grid: Grid,
    center: f64,
    width: f64,
    mass_h: f64,
    mass_c: f64,
) -> Result<(DensityField, DensityField)> {
    Ok((
        gaussian_bump(grid, center, width, mass_h)?,
        gaussian_bump(grid, center, width, mass_c)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub rho_h: f64,
    pub rho_c: f64,
    pub xbar_c: f64,
    pub eradicated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub c1: f64,
    pub c2: f64,
    pub outcome: std::result::Result<SweepOutcome, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub threshold: f64,
    pub rows: Vec<SweepRow>,
}

/// Runs every `(c1, c2)` pair independently; rows keep the order of
/// `c1_list` x `c2_list` regardless of scheduling, and failures are
/// recorded per row.
pub fn dose_grid_sweep(
    spec: &ComboModelSpec,
    init: (&DensityField, &DensityField),
    c1_list: &[f64],
    c2_list: &[f64],
    dt: f64,
    steps: usize,
    threshold: f64,
) -> Result<SweepTable> {
    if c1_list.is_empty() || c2_list.is_empty() {
        return Err(Error::param("doses", "dose lists must not be empty"));
    }
    let rho_c0 = integrate(init.1);
    let pairs: Vec<(f64, f64)> = c1_list
        .iter()
        .flat_map(|&c1| c2_list.iter().map(move |&c2| (c1, c2)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(c1, c2)| {
            let outcome = ComboSolver::new(spec.with_doses(c1, c2), *init.0.grid())
                .and_then(|solver| solver.run(init, dt, steps, steps.max(1)))
                .map(|(h, c)| {
                    let last_h = h.last().expect("initial record");
                    let last_c = c.last().expect("initial record");
                    SweepOutcome {
                        rho_h: last_h.rho,
                        rho_c: last_c.rho,
                        xbar_c: last_c.xbar,
                        eradicated: last_c.rho < threshold * rho_c0,
                    }
                })
                .map_err(|e| {
                    log::error!("sweep row c1={c1} c2={c2} failed: {e}");
                    e.to_string()
                });
            SweepRow { c1, c2, outcome }
        })
        .collect();
    Ok(SweepTable { threshold, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn growth_pair_without_drugs() {
        let s = ComboModelSpec::standard(0.0, 0.0);
        let (rh, rc) = net_growth_pair(&s, 0.0, 0.5, 0.5);
        assert_relative_eq!(rh, 1.5 * 0.9 - 0.25, epsilon = 1e-14);
        assert_relative_eq!(rc, 3.0 * 0.9 - 0.25, epsilon = 1e-14);
        assert_relative_eq!(rh, 1.1, epsilon = 1e-14);
        assert_relative_eq!(rc, 2.45, epsilon = 1e-14);
    }

    #[test]
    fn growth_pair_with_cytotoxic_dose() {
        let s = ComboModelSpec::standard(1.0, 0.0);
        let (rh, rc) = net_growth_pair(&s, 0.0, 0.0, 0.0);
        assert_relative_eq!(rh, 1.35 - 0.2 / 0.49, epsilon = 1e-14);
        assert_relative_eq!(rc, 2.7 - 0.4 / 0.49, epsilon = 1e-14);
        assert!((rh - 0.94184).abs() < 1e-5);
        assert!((rc - 1.88367).abs() < 1e-5);
    }

    #[test]
    fn strong_cytostatic_leaves_only_death() {
        let s = ComboModelSpec::standard(0.7, 1e12);
        let (rh, _) = net_growth_pair(&s, 0.3, 0.4, 0.2);
        let limit = -s.d_h.eval(0.3) * 0.4 - s.mu_h.eval(0.3) * 0.7;
        assert!((rh - limit).abs() < 1e-8);
    }

    #[test]
    fn cytostatic_factor_decreases_with_dose() {
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for k in 0..50 {
            let f = ComboModelSpec::standard(0.0, 0.2 * k as f64).cytostatic_factors();
            assert!(f.0 < prev.0 && f.1 < prev.1);
            prev = f;
        }
    }

    #[test]
    fn zero_net_rate_leaves_density_unchanged() {
        let g = Grid::new(2, 1.0).unwrap();
        let mut spec = ComboModelSpec::standard(0.0, 0.0);
        spec.theta_h = 0.0;
        spec.theta_c = 0.0;
        spec.r_h = RateSpec::constant(1.0);
        spec.d_h = RateSpec::constant(1.0);
        spec.a_hh = 1.0;
        spec.a_hc = 0.0;
        let solver = ComboSolver::new(spec, g).unwrap();
        let n_h = DensityField::from_fn(g, |_| 1.0).unwrap();
        let n_c = DensityField::from_fn(g, |_| 0.0).unwrap();
        let state = solver.state(0.0, n_h.clone(), n_c).unwrap();
        assert_eq!(state.i_h, 1.0);
        let next = solver.step(&state, 0.1).unwrap();
        assert_eq!(next.n_h, n_h);
    }

    #[test]
    fn one_step_mass_change_matches_explicit_rate() {
        let g = Grid::new(500, 1.0).unwrap();
        // c1 = 5 makes both rates negative where the mass sits
        let solver = ComboSolver::new(ComboModelSpec::standard(5.0, 1.0), g).unwrap();
        let (h, c) = paired_initial_data(g, 0.5, 0.01, 0.5, 0.5).unwrap();
        let state = solver.state(0.0, h, c).unwrap();
        let (mh, mc) = solver.mass_rates(&state);
        let mut errs = vec![];
        for dt in [1e-2, 5e-3, 2.5e-3] {
            let next = solver.step(&state, dt).unwrap();
            errs.push((
                (next.rho_h - state.rho_h - dt * mh).abs(),
                (next.rho_c - state.rho_c - dt * mc).abs(),
            ));
        }
        for w in errs.windows(2) {
            // second order: halving dt quarters the defect
            assert!(w[1].0 < 0.3 * w[0].0 && w[1].1 < 0.3 * w[0].1, "{errs:?}");
        }
    }

    #[test]
    fn mutation_operator_conserves_mass() {
        let g = Grid::new(1000, 1.0).unwrap();
        let mut spec = ComboModelSpec::standard(0.0, 0.0);
        spec.r_h = RateSpec::constant(1.5);
        spec.r_c = RateSpec::constant(3.0);
        let solver = ComboSolver::new(spec, g).unwrap();
        let h = gaussian_bump(g, 0.02, 0.01, 0.5).unwrap();
        let c = gaussian_bump(g, 0.97, 0.01, 0.5).unwrap();
        let state = solver.state(0.0, h, c).unwrap();
        let (bh, bc) = solver.mutation_mass_balance(&state);
        assert!(bh.abs() < 1e-10 && bc.abs() < 1e-10);
    }

    #[test]
    fn caches_track_masses() {
        let g = Grid::new(300, 1.0).unwrap();
        let solver = ComboSolver::new(ComboModelSpec::standard(1.5, 1.5), g).unwrap();
        let (h, c) = paired_initial_data(g, 0.5, 0.01, 0.5, 0.5).unwrap();
        let mut state = solver.state(0.0, h, c).unwrap();
        for _ in 0..100 {
            state = solver.step(&state, 0.1).unwrap();
            assert!((state.rho_h - integrate(&state.n_h)).abs() <= 1e-12 * state.rho_h);
            let i_h = solver.spec().a_hh * state.rho_h + solver.spec().a_hc * state.rho_c;
            assert!((state.i_h - i_h).abs() < 1e-12 * (1.0 + state.i_h));
        }
    }

    #[test]
    fn stiff_step_is_rejected() {
        let g = Grid::new(400, 1.0).unwrap();
        let solver = ComboSolver::new(ComboModelSpec::standard(100.0, 0.0), g).unwrap();
        let (h, c) = paired_initial_data(g, 0.5, 0.01, 0.5, 0.5).unwrap();
        let state = solver.state(0.0, h, c).unwrap();
        assert!(matches!(
            solver.step(&state, 1.0),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn sweep_keeps_order_and_records_failures() {
        let g = Grid::new(400, 1.0).unwrap();
        let (h, c) = paired_initial_data(g, 0.5, 0.01, 0.5, 0.5).unwrap();
        let table = dose_grid_sweep(
            &ComboModelSpec::standard(0.0, 0.0),
            (&h, &c),
            &[0.0, 1000.0],
            &[0.0, 1.0],
            0.1,
            20,
            DEFAULT_ERADICATION_THRESHOLD,
        )
        .unwrap();
        let doses: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.c1, r.c2)).collect();
        assert_eq!(
            doses,
            vec![(0.0, 0.0), (0.0, 1.0), (1000.0, 0.0), (1000.0, 1.0)]
        );
        assert!(table.rows[0].outcome.is_ok());
        assert!(table.rows[2].outcome.is_err());
        assert!(dose_grid_sweep(
            &ComboModelSpec::standard(0.0, 0.0),
            (&h, &c),
            &[],
            &[1.0],
            0.1,
            1,
            1e-3
        )
        .is_err());
    }
}
