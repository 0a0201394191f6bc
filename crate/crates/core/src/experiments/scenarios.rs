//! Named scenario registry.

use crate::combo::{ComboModelSpec, DEFAULT_ERADICATION_THRESHOLD};
use crate::kernel::KernelSpec;
use crate::mono::{MonoKind, MonoModelSpec, RunMode};
use crate::rates::RateSpec;

use super::config::{
    skeleton, ConfigKind, DoseGridConfig, GridConfig, Horizon, InitConfig, ModelConfig,
    OutputConfig, ScenarioConfig, SweepConfig, TimeConfig, TimeStep,
};

const NAMES: &[&str] = &[
    "fig1-healthy",
    "fig2-resistance-raw",
    "fig3-resistance-renormalized",
    "fig-f1-cytotoxic-0",
    "fig-f1-cytotoxic-1.75",
    "fig-f1-cytotoxic-3.5",
    "fig-f2-cytostatic-1",
    "fig-f2-cytostatic-3",
    "fig-f2-cytostatic-7",
    "fig-f3f4-combo-0",
    "fig-f3f4-combo-1",
    "fig-f3f4-combo-1.5",
    "fig-f3f4-combo-2",
    "dose-analysis-sec4",
];

pub fn list_scenarios() -> &'static [&'static str] {
    NAMES
}

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1-healthy" => "healthy cells with homeostasis, concentration towards x = 0",
        "fig2-resistance-raw" => "cancer cells under constant dose, exact exponential solution",
        "fig3-resistance-renormalized" => "cancer cells under constant dose, renormalized density",
        n if n.starts_with("fig-f1-") => "two populations, cytotoxic drug only",
        n if n.starts_with("fig-f2-") => "two populations, cytostatic drug only",
        n if n.starts_with("fig-f3f4-") => "two populations, equal cytotoxic and cytostatic doses",
        "dose-analysis-sec4" => "closed-form fitness maximum over a dose grid",
        _ => return None,
    })
}

/// Constant-dose cancer model `r = 1/(1+x^2)`, `d = 0.245`, `mu = 0.55^2/(0.5^2+x^2)`, `c = 1`.
pub fn resistance_spec() -> MonoModelSpec {
    MonoModelSpec {
        kind: MonoKind::CancerLinear,
        r: RateSpec::rational_decay(1.0, 1.0),
        d: RateSpec::constant(0.245),
        mu: RateSpec::inverse_quadratic(0.3025, 0.5),
        beta: 1.0,
        theta: 0.0,
        kernel: KernelSpec::default(),
        eps: 0.01,
        dose: 1.0,
    }
}

/// Healthy model `r = 2/(1+5x^2)`, `d = 0.4`, `beta = 1`.
pub fn healthy_spec() -> MonoModelSpec {
    MonoModelSpec {
        kind: MonoKind::HealthyHomeostasis,
        r: RateSpec::rational_decay(2.0, 5.0),
        d: RateSpec::constant(0.4),
        mu: RateSpec::constant(0.0),
        beta: 1.0,
        theta: 0.0,
        kernel: KernelSpec::default(),
        eps: 0.01,
        dose: 0.0,
    }
}

fn mono(
    name: &str,
    spec: MonoModelSpec,
    mode: RunMode,
    coef: f64,
    steps: usize,
    center: f64,
) -> ScenarioConfig {
    ScenarioConfig {
        name: name.to_string(),
        model: ModelConfig::Mono { spec, mode },
        grid: GridConfig {
            m: 4000,
            x_max: 1.0,
        },
        time: TimeConfig {
            step: TimeStep::Diffusive(coef),
            horizon: Horizon::Steps(steps),
            save_every: None,
        },
        init: InitConfig {
            center,
            width: 0.01,
            mass: 1.0,
            mass_c: 0.0,
        },
        output: OutputConfig::default(),
        sweep: None,
    }
}

fn combination(name: &str, c1: f64, c2: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: name.to_string(),
        model: ModelConfig::Combination {
            spec: ComboModelSpec::standard(c1, c2),
        },
        grid: GridConfig {
            m: 2000,
            x_max: 1.0,
        },
        time: TimeConfig {
            step: TimeStep::Fixed(0.1),
            horizon: Horizon::Steps(2000),
            save_every: None,
        },
        init: InitConfig {
            center: 0.5,
            width: 0.01,
            mass: 0.5,
            mass_c: 0.5,
        },
        output: OutputConfig::default(),
        sweep: Some(SweepConfig {
            c1: vec![0.0, 1.0, 1.5, 2.0],
            c2: vec![0.0, 1.0, 1.5, 2.0],
            threshold: DEFAULT_ERADICATION_THRESHOLD,
        }),
    }
}

pub fn scenario(name: &str) -> Option<ScenarioConfig> {
    let cfg = match name {
        "fig1-healthy" => mono(name, healthy_spec(), RunMode::Imex, 25.0, 15_000, 0.7),
        "fig2-resistance-raw" => mono(
            name,
            resistance_spec(),
            RunMode::ExactLinear,
            4500.0,
            1000,
            0.5,
        ),
        "fig3-resistance-renormalized" => mono(
            name,
            resistance_spec(),
            RunMode::Renormalized,
            4500.0,
            8000,
            0.5,
        ),
        "dose-analysis-sec4" => ScenarioConfig {
            name: name.to_string(),
            model: ModelConfig::DoseAnalysis {
                analysis: DoseGridConfig {
                    r0: 1.0,
                    d: 0.245,
                    a: 0.5,
                    c_max: 2.25,
                    c_points: 225,
                },
            },
            ..skeleton(ConfigKind::DoseAnalysis)
        },
        _ => {
            let (prefix, dose) = name.rsplit_once('-')?;
            let dose: f64 = dose.parse().ok()?;
            let cfg = match prefix {
                "fig-f1-cytotoxic" => combination(name, dose, 0.0),
                "fig-f2-cytostatic" => combination(name, 0.0, dose),
                "fig-f3f4-combo" => combination(name, dose, dose),
                _ => return None,
            };
            if !NAMES.contains(&name) {
                return None;
            }
            cfg
        }
    };
    Some(cfg)
}
