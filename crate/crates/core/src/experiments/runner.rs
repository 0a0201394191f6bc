//! Runs a configured scenario and writes its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::assumptions::{validate_assumptions, AssumptionReport};
use crate::combo::{dose_grid_sweep, ComboSolver, SweepTable};
use crate::error::{Error, Result};
use crate::mono::{MonoKind, MonoModelSpec, MonoSolver, RunMode};
use crate::oracle::{
    concentration_from_i, dose_analysis_alpha, fittest_trait_from_rho, homeostasis_rho,
    optimal_dose, DoseOptimization,
};
use crate::rates::RateSpec;
use crate::trajectory::Trajectory;

use super::config::{ModelConfig, ScenarioConfig};
use super::csv::{
    write_dose_table, write_oracle, write_snapshots, write_sweep_table, write_timeseries,
    TimeseriesRow,
};

#[derive(Debug, Clone)]
pub enum Simulation {
    Mono {
        trajectory: Trajectory,
        mode: RunMode,
    },
    Combination {
        healthy: Trajectory,
        cancer: Trajectory,
    },
    DoseAnalysis(DoseOptimization),
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub config: ScenarioConfig,
    pub simulation: Simulation,
    pub assumptions: Option<AssumptionReport>,
    /// Closed-form predictions for the scenario, as recorded in `meta.json`.
    pub predictions: serde_json::Value,
}

impl Outcome {
    pub fn warnings(&self) -> Vec<String> {
        match &self.simulation {
            Simulation::Mono { trajectory, .. } => trajectory.warnings.clone(),
            Simulation::Combination { healthy, cancer } => healthy
                .warnings
                .iter()
                .chain(&cancer.warnings)
                .cloned()
                .collect(),
            Simulation::DoseAnalysis(_) => vec![],
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub outcome: Outcome,
    pub files: Vec<PathBuf>,
}

/// `(r0, d, a, alpha)` when the cancer rates have the rational form
/// `r0^2/(1+x^2) - d - alpha^2/(a^2+x^2)` with `alpha^2 = c B`.
pub fn rational_parameters(spec: &MonoModelSpec) -> Option<(f64, f64, f64, f64)> {
    match (spec.r, spec.d, spec.mu) {
        (
            RateSpec::RationalDecay {
                amplitude,
                steepness,
            },
            RateSpec::Constant { value: d },
            RateSpec::InverseQuadratic { numerator, offset },
        ) if steepness == 1.0 && amplitude > 0.0 && numerator >= 0.0 => Some((
            amplitude.sqrt(),
            d,
            offset.abs(),
            (spec.dose * numerator).sqrt(),
        )),
        _ => None,
    }
}

fn mono_predictions(spec: &MonoModelSpec) -> serde_json::Value {
    match spec.kind {
        MonoKind::HealthyHomeostasis => {
            let rho = homeostasis_rho(
                spec.r.eval(0.0),
                spec.d.eval(0.0) + spec.dose * spec.mu.eval(0.0),
                spec.beta,
            )
            .ok();
            json!({ "homeostasis_rho": rho, "fittest_trait_limit": 0.0 })
        }
        MonoKind::CancerLinear => match rational_parameters(spec)
            .and_then(|(r0, d, a, alpha)| dose_analysis_alpha(r0, d, a, alpha).ok())
        {
            Some(an) => json!({
                "regime": an.regime.label(),
                "alpha": an.alpha,
                "y_c": an.y_c,
                "x_c": an.x_c,
                "R_bar": an.r_bar,
            }),
            None => json!({ "note": "no closed form for these rate families" }),
        },
    }
}

/// Driver column name and `(t, driver, x_oracle)` rows.
type OracleRows = (&'static str, Vec<(f64, f64, f64)>);

/// Oracle trait along the trajectory: root of the homeostatic balance for
/// healthy runs, concentration point for cancer runs.
fn oracle_rows(spec: &MonoModelSpec, x_max: f64, traj: &Trajectory) -> Option<OracleRows> {
    match spec.kind {
        MonoKind::HealthyHomeostasis => Some((
            "rho",
            traj.records
                .iter()
                .map(|r| {
                    let x = fittest_trait_from_rho(spec, r.rho, x_max).unwrap_or(f64::NAN);
                    (r.t, r.rho, x)
                })
                .collect(),
        )),
        MonoKind::CancerLinear => {
            let (r0, d, a, alpha) = rational_parameters(spec)?;
            Some((
                "I",
                traj.records
                    .iter()
                    .map(|r| {
                        let i = r.fitness_avg.unwrap_or(f64::NAN);
                        let x = concentration_from_i(r0, d, a, alpha, i).unwrap_or(f64::NAN);
                        (r.t, i, x)
                    })
                    .collect(),
            ))
        }
    }
}

/// Runs the scenario in memory.
pub fn simulate(cfg: &ScenarioConfig) -> Result<Outcome> {
    match &cfg.model {
        ModelConfig::Mono { spec, mode } => {
            let grid = cfg.grid()?;
            let report = validate_assumptions(spec, &grid);
            report.log_failures();
            let solver = MonoSolver::new(spec.clone(), grid)?;
            let init = cfg.initial_data()?.remove(0);
            log::info!(
                "{}: {} model, {} mode, m = {}, dt = {:e}, {} steps",
                cfg.name,
                spec.kind.label(),
                mode.label(),
                grid.m(),
                cfg.dt(),
                cfg.steps()
            );
            let trajectory = solver.run(&init, cfg.dt(), cfg.t_final(), cfg.save_every(), *mode)?;
            Ok(Outcome {
                config: cfg.clone(),
                simulation: Simulation::Mono {
                    trajectory,
                    mode: *mode,
                },
                assumptions: Some(report),
                predictions: mono_predictions(spec),
            })
        }
        ModelConfig::Combination { spec } => {
            let grid = cfg.grid()?;
            let report = validate_assumptions(spec, &grid);
            report.log_failures();
            let solver = ComboSolver::new(spec.clone(), grid)?;
            let init = cfg.initial_data()?;
            log::info!(
                "{}: combination model, c1 = {}, c2 = {}, m = {}, dt = {}, {} steps",
                cfg.name,
                spec.c1,
                spec.c2,
                grid.m(),
                cfg.dt(),
                cfg.steps()
            );
            let (healthy, cancer) = solver.run(
                (&init[0], &init[1]),
                cfg.dt(),
                cfg.steps(),
                cfg.save_every(),
            )?;
            Ok(Outcome {
                config: cfg.clone(),
                simulation: Simulation::Combination { healthy, cancer },
                assumptions: Some(report),
                predictions: json!({}),
            })
        }
        ModelConfig::DoseAnalysis { analysis } => {
            let opt = optimal_dose(analysis.r0, analysis.d, analysis.a, &analysis.doses())?;
            let predictions = json!({
                "c_star": opt.c_star,
                "threshold_c": opt.threshold_c,
                "R_bar_at_c_star": opt
                    .table
                    .iter()
                    .find(|r| r.c == opt.c_star)
                    .map(|r| r.analysis.r_bar),
            });
            Ok(Outcome {
                config: cfg.clone(),
                simulation: Simulation::DoseAnalysis(opt),
                assumptions: None,
                predictions,
            })
        }
    }
}

fn timeseries(outcome: &Outcome) -> Vec<TimeseriesRow> {
    match &outcome.simulation {
        Simulation::Mono { trajectory, .. } => {
            let healthy = matches!(
                &outcome.config.model,
                ModelConfig::Mono { spec, .. } if spec.kind == MonoKind::HealthyHomeostasis
            );
            trajectory
                .records
                .iter()
                .map(|r| {
                    let mut row = TimeseriesRow::empty(r.t);
                    if healthy {
                        row.rho_h = r.rho;
                        row.xbar_h = r.xbar;
                        row.log_rho_h = r.log_rho;
                    } else {
                        row.rho_c = r.rho;
                        row.xbar_c = r.xbar;
                        row.i_h_or_i = r.fitness_avg.unwrap_or(f64::NAN);
                        row.log_rho_c = r.log_rho;
                    }
                    row
                })
                .collect()
        }
        Simulation::Combination { healthy, cancer } => healthy
            .records
            .iter()
            .zip(&cancer.records)
            .map(|(h, c)| TimeseriesRow {
                t: h.t,
                rho_h: h.rho,
                rho_c: c.rho,
                xbar_h: h.xbar,
                xbar_c: c.xbar,
                i_h_or_i: h.fitness_avg.unwrap_or(f64::NAN),
                i_c: c.fitness_avg.unwrap_or(f64::NAN),
                log_rho_h: h.log_rho,
                log_rho_c: c.log_rho,
            })
            .collect(),
        Simulation::DoseAnalysis(_) => vec![],
    }
}

#[derive(Serialize)]
struct Resolved {
    dt: f64,
    steps: usize,
    t_final: f64,
    save_every: usize,
}

fn meta(outcome: &Outcome, files: &[String]) -> serde_json::Value {
    let cfg = &outcome.config;
    let resolved = match cfg.model {
        ModelConfig::DoseAnalysis { .. } => serde_json::Value::Null,
        _ => json!(Resolved {
            dt: cfg.dt(),
            steps: cfg.steps(),
            t_final: cfg.t_final(),
            save_every: cfg.save_every(),
        }),
    };
    let last = |t: &Trajectory| t.last().copied();
    let final_state = match &outcome.simulation {
        Simulation::Mono { trajectory, .. } => json!(last(trajectory)),
        Simulation::Combination { healthy, cancer } => json!({
            "healthy": last(healthy),
            "cancer": last(cancer),
        }),
        Simulation::DoseAnalysis(_) => serde_json::Value::Null,
    };
    json!({
        "scenario": cfg.name,
        "kind": cfg.kind().label(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "config_toml": cfg.to_toml(),
        "resolved": resolved,
        "oracle": outcome.predictions,
        "assumptions": outcome.assumptions,
        "final": final_state,
        "warnings": outcome.warnings(),
        "files": files,
    })
}

/// Tracks files written into an output directory and removes them unless
/// the write completes.
struct Staging {
    dir: PathBuf,
    created_dir: bool,
    files: Vec<PathBuf>,
    done: bool,
}

impl Staging {
    fn new(dir: &Path) -> Result<Self> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Staging {
            dir: dir.to_path_buf(),
            created_dir,
            files: vec![],
            done: false,
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        p
    }

    fn names(&self) -> Vec<String> {
        self.files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect()
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        if self.done {
            return;
        }
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        if self.created_dir {
            let _ = fs::remove_dir(&self.dir);
        }
    }
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the outputs of a finished simulation into `out_dir`.
pub fn write_outputs(outcome: Outcome, out_dir: &Path) -> Result<RunReport> {
    let mut stage = Staging::new(out_dir)?;
    let cfg = &outcome.config;
    match &outcome.simulation {
        Simulation::Mono { trajectory, .. } => {
            let p = stage.path("timeseries.csv");
            write_timeseries(&p, &timeseries(&outcome))?;
            let label = match &cfg.model {
                ModelConfig::Mono { spec, .. } => spec.kind.label(),
                _ => unreachable!(),
            };
            let frames: Vec<_> = trajectory.snapshots.iter().map(|s| (label, s)).collect();
            let p = stage.path("snapshots.csv");
            write_snapshots(&p, &frames, cfg.output.normalize_snapshots)?;
            if let ModelConfig::Mono { spec, .. } = &cfg.model {
                if let Some((driver, rows)) = oracle_rows(spec, cfg.grid.x_max, trajectory) {
                    let p = stage.path("oracle.csv");
                    write_oracle(&p, driver, &rows)?;
                }
            }
        }
        Simulation::Combination { healthy, cancer } => {
            let p = stage.path("timeseries.csv");
            write_timeseries(&p, &timeseries(&outcome))?;
            let frames: Vec<_> = healthy
                .snapshots
                .iter()
                .map(|s| ("healthy", s))
                .chain(cancer.snapshots.iter().map(|s| ("cancer", s)))
                .collect();
            let p = stage.path("snapshots.csv");
            write_snapshots(&p, &frames, cfg.output.normalize_snapshots)?;
        }
        Simulation::DoseAnalysis(opt) => {
            let p = stage.path("dose_table.csv");
            write_dose_table(&p, opt)?;
        }
    }
    let meta_path = stage.path("meta.json");
    let names = stage.names();
    write_json(&meta_path, &meta(&outcome, &names))?;
    stage.done = true;
    Ok(RunReport {
        files: stage.files.clone(),
        outcome,
    })
}

/// Simulates and writes. Nothing is left in `out_dir` on failure.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunReport> {
    let outcome = simulate(cfg)?;
    write_outputs(outcome, out_dir)
}

/// Dose-grid sweep of a two-population configuration; writes `sweep.csv`
/// and `meta.json`.
pub fn run_sweep(cfg: &ScenarioConfig, out_dir: &Path) -> Result<SweepTable> {
    let ModelConfig::Combination { spec } = &cfg.model else {
        return Err(Error::Incompatible(format!(
            "sweeps need a combination model, `{}` is {}",
            cfg.name,
            cfg.kind()
        )));
    };
    let Some(sweep) = &cfg.sweep else {
        return Err(Error::Incompatible(format!(
            "`{}` has no [sweep] section",
            cfg.name
        )));
    };
    let grid = cfg.grid()?;
    validate_assumptions(spec, &grid).log_failures();
    let init = cfg.initial_data()?;
    let table = dose_grid_sweep(
        spec,
        (&init[0], &init[1]),
        &sweep.c1,
        &sweep.c2,
        cfg.dt(),
        cfg.steps(),
        sweep.threshold,
    )?;
    let mut stage = Staging::new(out_dir)?;
    let p = stage.path("sweep.csv");
    write_sweep_table(&p, &table)?;
    let meta_path = stage.path("meta.json");
    let meta = json!({
        "scenario": cfg.name,
        "kind": "sweep",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "config_toml": cfg.to_toml(),
        "resolved": Resolved {
            dt: cfg.dt(),
            steps: cfg.steps(),
            t_final: cfg.t_final(),
            save_every: cfg.save_every(),
        },
        "sweep": table,
        "files": stage.names(),
    });
    write_json(&meta_path, &meta)?;
    stage.done = true;
    Ok(table)
}
