//! Command-line front end: run named or configured scenarios, dose sweeps,
//! and the closed-form dose analysis.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info, warn};

use resistevo::experiments::config::{
    parse_config, Horizon, ModelConfig, ScenarioConfig, TimeStep,
};
use resistevo::experiments::runner::{run_scenario, run_sweep, Simulation};
use resistevo::experiments::scenarios::{describe, list_scenarios, scenario};
use resistevo::experiments::ConfigError;
use resistevo::Error;

#[derive(Parser, Debug)]
#[command(
    name = "resistevo",
    version,
    about = "Selection/mutation dynamics of healthy and cancer cells under therapy"
)]
struct Cli {
    /// Only log warnings and errors.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario and write its CSV and meta outputs.
    Run(RunArgs),
    /// Run a grid of (c1, c2) doses for a two-population scenario.
    Sweep(SweepArgs),
    /// Closed-form maximal fitness over a dose grid.
    AnalyzeDose(RunArgs),
    /// List registered scenarios.
    List,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Registered scenario name (see `list`).
    #[arg(long, conflicts_with = "config")]
    scenario: Option<String>,

    /// Configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory [default: out/<scenario name>].
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the number of grid intervals.
    #[arg(long)]
    grid_points: Option<usize>,

    /// Override the time step.
    #[arg(long)]
    dt: Option<f64>,

    /// Override the number of time steps.
    #[arg(long)]
    steps: Option<usize>,

    /// Override the snapshot stride.
    #[arg(long)]
    save_every: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,

    /// Cytotoxic doses, comma separated.
    #[arg(long, value_delimiter = ',')]
    c1: Option<Vec<f64>>,

    /// Cytostatic doses, comma separated.
    #[arg(long, value_delimiter = ',')]
    c2: Option<Vec<f64>>,
}

enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else if matches!(e, Error::Io { .. }) {
            Failure::Io(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(args: &RunArgs, default_scenario: Option<&str>) -> Result<ScenarioConfig, Failure> {
    let mut cfg = match (&args.scenario, &args.config) {
        (Some(name), _) => {
            scenario(name).ok_or_else(|| ConfigError::UnknownScenario(name.clone()))?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        (None, None) => match default_scenario {
            Some(name) => scenario(name).expect("default scenario is registered"),
            None => {
                return Err(Failure::Config(
                    "one of --scenario or --config is required".into(),
                ))
            }
        },
    };
    if let Some(m) = args.grid_points {
        cfg.grid.m = m;
    }
    if let Some(dt) = args.dt {
        cfg.time.step = TimeStep::Fixed(dt);
    }
    if let Some(steps) = args.steps {
        cfg.time.horizon = Horizon::Steps(steps);
    }
    if let Some(s) = args.save_every {
        if s == 0 {
            return Err(Failure::Config("--save-every must be at least 1".into()));
        }
        cfg.time.save_every = Some(s);
    }
    Ok(cfg)
}

fn out_dir(args: &RunArgs, cfg: &ScenarioConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| Path::new("out").join(&cfg.name))
}

fn run(args: &RunArgs) -> Result<(), Failure> {
    run_loaded(args, load(args, None)?)
}

fn run_loaded(args: &RunArgs, cfg: ScenarioConfig) -> Result<(), Failure> {
    let dir = out_dir(args, &cfg);
    let report = run_scenario(&cfg, &dir)?;
    for w in report.outcome.warnings() {
        warn!("{w}");
    }
    match &report.outcome.simulation {
        Simulation::Mono { trajectory, .. } => {
            if let Some(last) = trajectory.last() {
                println!(
                    "{}: t = {:.6}, rho = {:.6}, xbar = {:.6}{}",
                    cfg.name,
                    last.t,
                    last.rho,
                    last.xbar,
                    last.fitness_avg
                        .map(|i| format!(", I = {i:.6}"))
                        .unwrap_or_default()
                );
            }
        }
        Simulation::Combination { healthy, cancer } => {
            if let (Some(h), Some(c)) = (healthy.last(), cancer.last()) {
                println!(
                    "{}: t = {:.6}, rho_H = {:.6}, rho_C = {:.6e}, xbar_H = {:.6}, xbar_C = {:.6}",
                    cfg.name, h.t, h.rho, c.rho, h.xbar, c.xbar
                );
            }
        }
        Simulation::DoseAnalysis(opt) => print_dose(opt),
    }
    println!("wrote {} files to {}", report.files.len(), dir.display());
    Ok(())
}

fn print_dose(opt: &resistevo::oracle::DoseOptimization) {
    println!(
        "c_star = {}, threshold c = r0^2 = {}",
        opt.c_star, opt.threshold_c
    );
    for row in &opt.table {
        let a = &row.analysis;
        println!(
            "c = {:<8.4} alpha = {:<8.5} {:<26} x_c = {:<10} R_bar = {:.6}",
            row.c,
            a.alpha,
            a.regime.label(),
            a.x_c
                .map(|x| format!("{x:.6}"))
                .unwrap_or_else(|| "-".into()),
            a.r_bar
        );
    }
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let mut cfg = load(&args.run, None)?;
    if let Some(c1) = &args.c1 {
        cfg.sweep.get_or_insert_with(default_sweep).c1 = c1.clone();
    }
    if let Some(c2) = &args.c2 {
        cfg.sweep.get_or_insert_with(default_sweep).c2 = c2.clone();
    }
    let dir = args
        .run
        .out
        .clone()
        .unwrap_or_else(|| Path::new("out").join(format!("{}-sweep", cfg.name)));
    let table = run_sweep(&cfg, &dir)?;
    println!("c1,c2,rho_H_final,rho_C_final,xbar_C_final,eradicated");
    let mut failed = 0;
    for row in &table.rows {
        match &row.outcome {
            Ok(o) => println!(
                "{},{},{:.6},{:.6e},{:.6},{}",
                row.c1, row.c2, o.rho_h, o.rho_c, o.xbar_c, o.eradicated
            ),
            Err(e) => {
                failed += 1;
                println!("{},{},nan,nan,nan,failed", row.c1, row.c2);
                error!("c1 = {}, c2 = {}: {e}", row.c1, row.c2);
            }
        }
    }
    info!("wrote sweep to {}", dir.display());
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} sweep row(s) failed")));
    }
    Ok(())
}

fn default_sweep() -> resistevo::experiments::config::SweepConfig {
    resistevo::experiments::config::SweepConfig {
        c1: vec![0.0],
        c2: vec![0.0],
        threshold: resistevo::combo::DEFAULT_ERADICATION_THRESHOLD,
    }
}

fn analyze_dose(args: &RunArgs) -> Result<(), Failure> {
    let cfg = load(args, Some("dose-analysis-sec4"))?;
    if !matches!(cfg.model, ModelConfig::DoseAnalysis { .. }) {
        return Err(Failure::Config(format!(
            "`{}` is a {} scenario, not dose-analysis",
            cfg.name,
            cfg.kind()
        )));
    }
    if args.out.is_some() || cfg.output.dir.is_some() {
        return run_loaded(args, cfg);
    }
    let outcome = resistevo::experiments::simulate(&cfg)?;
    if let Simulation::DoseAnalysis(opt) = &outcome.simulation {
        print_dose(opt);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
        Command::AnalyzeDose(args) => analyze_dose(args),
        Command::List => {
            for name in list_scenarios() {
                println!("{name:<30} {}", describe(name).unwrap_or(""));
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            error!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
