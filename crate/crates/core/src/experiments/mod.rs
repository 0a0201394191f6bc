//! Configuration, scenario registry, and output emission.

pub mod config;
pub mod csv;
pub mod runner;
pub mod scenarios;

pub use config::{parse_config, ConfigError, ConfigKind, ModelConfig, ScenarioConfig};
pub use runner::{
    run_scenario, run_sweep, simulate, write_outputs, Outcome, RunReport, Simulation,
};
pub use scenarios::{list_scenarios, scenario};
