//! Scenario configuration files.
//!
//! A configuration is a TOML document restricted to flat `[section]` tables of
//! `key = value` pairs; dotted keys such as `grid.m = 2000` are equivalent to
//! the sectioned form. `scenario.base` starts from a registered scenario and
//! every other key overrides it.

use std::fmt;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;
use toml_edit::{value, Array, DocumentMut, ImDocument, Item, Table, TableLike, Value};

use crate::combo::ComboModelSpec;
use crate::grid::{gaussian_bump, DensityField, Grid};
use crate::kernel::KernelSpec;
use crate::mono::{step_count, MonoKind, MonoModelSpec, RunMode};
use crate::rates::RateSpec;

use super::scenarios;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },

    #[error("line {line}: key `{key}` does not apply to model kind `{kind}`")]
    NotApplicable {
        key: String,
        kind: &'static str,
        line: usize,
    },

    #[error("{}missing required key `{key}`", at(.line))]
    MissingKey { key: String, line: Option<usize> },

    #[error("line {line}: `{key}` expects {expected}, found {found}")]
    TypeMismatch {
        key: String,
        expected: &'static str,
        found: &'static str,
        line: usize,
    },

    #[error("line {line}: invalid value for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        reason: String,
        line: usize,
    },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

fn at(line: &Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: "),
        None => String::new(),
    }
}

impl ConfigError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::Syntax { line, .. }
            | ConfigError::UnknownKey { line, .. }
            | ConfigError::NotApplicable { line, .. }
            | ConfigError::TypeMismatch { line, .. }
            | ConfigError::InvalidValue { line, .. } => Some(*line),
            ConfigError::MissingKey { line, .. } => *line,
            ConfigError::UnknownScenario(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigKind {
    Healthy,
    Cancer,
    Combination,
    DoseAnalysis,
}

impl ConfigKind {
    pub fn label(self) -> &'static str {
        match self {
            ConfigKind::Healthy => "healthy",
            ConfigKind::Cancer => "cancer",
            ConfigKind::Combination => "combination",
            ConfigKind::DoseAnalysis => "dose-analysis",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            ConfigKind::Healthy,
            ConfigKind::Cancer,
            ConfigKind::Combination,
            ConfigKind::DoseAnalysis,
        ]
        .into_iter()
        .find(|k| k.label() == s)
    }

    fn bit(self) -> u8 {
        match self {
            ConfigKind::Healthy => H,
            ConfigKind::Cancer => C,
            ConfigKind::Combination => X,
            ConfigKind::DoseAnalysis => D,
        }
    }
}

impl fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Uniform dose grid `c_k = c_max k / points`, `k = 1..=points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoseGridConfig {
    pub r0: f64,
    pub d: f64,
    pub a: f64,
    pub c_max: f64,
    pub c_points: usize,
}

impl DoseGridConfig {
    pub fn doses(&self) -> Vec<f64> {
        let n = self.c_points.max(1);
        (1..=n).map(|k| self.c_max * k as f64 / n as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    Mono { spec: MonoModelSpec, mode: RunMode },
    Combination { spec: ComboModelSpec },
    DoseAnalysis { analysis: DoseGridConfig },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub m: usize,
    pub x_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeStep {
    Fixed(f64),
    /// `dt = coef dx^2 / eps`.
    Diffusive(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Horizon {
    Steps(usize),
    FinalTime(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeConfig {
    pub step: TimeStep,
    pub horizon: Horizon,
    pub save_every: Option<usize>,
}

/// Gaussian bump initial data; `mass_c` is the cancer mass of the
/// two-population model, `mass` the healthy (or only) one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitConfig {
    pub center: f64,
    pub width: f64,
    pub mass: f64,
    pub mass_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputConfig {
    pub frames: usize,
    pub normalize_snapshots: bool,
    pub dir: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            frames: 10,
            normalize_snapshots: false,
            dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub init: InitConfig,
    pub output: OutputConfig,
    pub sweep: Option<SweepConfig>,
}

impl ScenarioConfig {
    pub fn kind(&self) -> ConfigKind {
        match &self.model {
            ModelConfig::Mono { spec, .. } => match spec.kind {
                MonoKind::HealthyHomeostasis => ConfigKind::Healthy,
                MonoKind::CancerLinear => ConfigKind::Cancer,
            },
            ModelConfig::Combination { .. } => ConfigKind::Combination,
            ModelConfig::DoseAnalysis { .. } => ConfigKind::DoseAnalysis,
        }
    }

    pub fn grid(&self) -> crate::Result<Grid> {
        Grid::new(self.grid.m, self.grid.x_max)
    }

    /// Resolved time step.
    pub fn dt(&self) -> f64 {
        match self.time.step {
            TimeStep::Fixed(dt) => dt,
            TimeStep::Diffusive(coef) => {
                let dx = self.grid.x_max / self.grid.m as f64;
                let eps = match &self.model {
                    ModelConfig::Mono { spec, .. } => spec.eps,
                    _ => 1.0,
                };
                coef * dx * dx / eps
            }
        }
    }

    pub fn steps(&self) -> usize {
        match self.time.horizon {
            Horizon::Steps(n) => n,
            Horizon::FinalTime(t) => step_count(self.dt(), t),
        }
    }

    pub fn t_final(&self) -> f64 {
        match self.time.horizon {
            Horizon::Steps(n) => n as f64 * self.dt(),
            Horizon::FinalTime(t) => t,
        }
    }

    /// Snapshot stride: explicit, or chosen to give about `output.frames` frames.
    pub fn save_every(&self) -> usize {
        self.time
            .save_every
            .unwrap_or_else(|| (self.steps() / self.output.frames.max(1)).max(1))
    }

    /// Initial densities: one for single-population models, `(healthy, cancer)` otherwise.
    pub fn initial_data(&self) -> crate::Result<Vec<DensityField>> {
        let grid = self.grid()?;
        let bump = |mass| gaussian_bump(grid, self.init.center, self.init.width, mass);
        match self.model {
            ModelConfig::Mono { .. } => Ok(vec![bump(self.init.mass)?]),
            ModelConfig::Combination { .. } => {
                Ok(vec![bump(self.init.mass)?, bump(self.init.mass_c)?])
            }
            ModelConfig::DoseAnalysis { .. } => Ok(vec![]),
        }
    }

    /// Prints the fully resolved configuration; `parse_config` reads it back
    /// to an equal value.
    pub fn to_toml(&self) -> String {
        let mut doc = DocumentMut::new();
        let kind = self.kind();
        let mut scenario = Table::new();
        scenario["name"] = value(self.name.as_str());
        doc["scenario"] = Item::Table(scenario);

        let mut model = Table::new();
        model["kind"] = value(kind.label());
        let mut kernel = Table::new();
        match &self.model {
            ModelConfig::Mono { spec, mode } => {
                model["mode"] = value(mode.label());
                model["r"] = value(spec.r.to_string());
                model["d"] = value(spec.d.to_string());
                model["mu"] = value(spec.mu.to_string());
                if kind == ConfigKind::Healthy {
                    model["beta"] = value(spec.beta);
                }
                model["theta"] = value(spec.theta);
                model["eps"] = value(spec.eps);
                model["dose"] = value(spec.dose);
                kernel["sigma"] = value(spec.kernel.sigma);
                kernel["trunc"] = value(spec.kernel.trunc);
            }
            ModelConfig::Combination { spec } => {
                for (k, r) in [
                    ("r_h", &spec.r_h),
                    ("r_c", &spec.r_c),
                    ("d_h", &spec.d_h),
                    ("d_c", &spec.d_c),
                    ("mu_h", &spec.mu_h),
                    ("mu_c", &spec.mu_c),
                ] {
                    model[k] = value(r.to_string());
                }
                for (k, v) in [
                    ("theta_h", spec.theta_h),
                    ("theta_c", spec.theta_c),
                    ("alpha_h", spec.alpha_h),
                    ("alpha_c", spec.alpha_c),
                    ("a_hh", spec.a_hh),
                    ("a_hc", spec.a_hc),
                    ("a_ch", spec.a_ch),
                    ("a_cc", spec.a_cc),
                    ("c1", spec.c1),
                    ("c2", spec.c2),
                ] {
                    model[k] = value(v);
                }
                kernel["sigma"] = value(spec.kernel_h.sigma);
                kernel["trunc"] = value(spec.kernel_h.trunc);
                kernel["sigma_c"] = value(spec.kernel_c.sigma);
                kernel["trunc_c"] = value(spec.kernel_c.trunc);
            }
            ModelConfig::DoseAnalysis { analysis } => {
                model["r0"] = value(analysis.r0);
                model["d"] = value(analysis.d);
                model["a"] = value(analysis.a);
                model["c_max"] = value(analysis.c_max);
                model["c_points"] = value(analysis.c_points as i64);
            }
        }
        doc["model"] = Item::Table(model);

        if kind != ConfigKind::DoseAnalysis {
            doc["kernel"] = Item::Table(kernel);

            let mut grid = Table::new();
            grid["m"] = value(self.grid.m as i64);
            grid["x_max"] = value(self.grid.x_max);
            doc["grid"] = Item::Table(grid);

            let mut time = Table::new();
            match self.time.step {
                TimeStep::Fixed(dt) => time["dt"] = value(dt),
                TimeStep::Diffusive(c) => time["dt_coef"] = value(c),
            }
            match self.time.horizon {
                Horizon::Steps(n) => time["steps"] = value(n as i64),
                Horizon::FinalTime(t) => time["t_final"] = value(t),
            }
            if let Some(s) = self.time.save_every {
                time["save_every"] = value(s as i64);
            }
            doc["time"] = Item::Table(time);

            let mut init = Table::new();
            init["center"] = value(self.init.center);
            init["width"] = value(self.init.width);
            if kind == ConfigKind::Combination {
                init["mass_h"] = value(self.init.mass);
                init["mass_c"] = value(self.init.mass_c);
            } else {
                init["mass"] = value(self.init.mass);
            }
            doc["init"] = Item::Table(init);
        }

        let mut output = Table::new();
        if kind != ConfigKind::DoseAnalysis {
            output["frames"] = value(self.output.frames as i64);
            output["normalize_snapshots"] = value(self.output.normalize_snapshots);
        }
        if let Some(dir) = &self.output.dir {
            output["dir"] = value(dir.as_str());
        }
        if !output.is_empty() {
            doc["output"] = Item::Table(output);
        }

        if let Some(sweep) = &self.sweep {
            let mut t = Table::new();
            t["c1"] = value(sweep.c1.iter().copied().collect::<Array>());
            t["c2"] = value(sweep.c2.iter().copied().collect::<Array>());
            t["threshold"] = value(sweep.threshold);
            doc["sweep"] = Item::Table(t);
        }
        doc.to_string()
    }
}

const H: u8 = 1;
const C: u8 = 2;
const X: u8 = 4;
const D: u8 = 8;
const MONO: u8 = H | C;
const SIM: u8 = H | C | X;
const ALL: u8 = H | C | X | D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Float,
    Int,
    Bool,
    Text,
    FloatList,
}

impl Ty {
    fn name(self) -> &'static str {
        match self {
            Ty::Float => "a number",
            Ty::Int => "a nonnegative integer",
            Ty::Bool => "a boolean",
            Ty::Text => "a string",
            Ty::FloatList => "an array of numbers",
        }
    }
}

const KEYS: &[(&str, u8, Ty)] = &[
    ("scenario.base", ALL, Ty::Text),
    ("scenario.name", ALL, Ty::Text),
    ("model.kind", ALL, Ty::Text),
    ("model.mode", MONO, Ty::Text),
    ("model.r", MONO, Ty::Text),
    ("model.d", MONO, Ty::Text),
    ("model.mu", MONO, Ty::Text),
    ("model.beta", H, Ty::Float),
    ("model.theta", MONO, Ty::Float),
    ("model.eps", MONO, Ty::Float),
    ("model.dose", MONO, Ty::Float),
    ("model.r_h", X, Ty::Text),
    ("model.r_c", X, Ty::Text),
    ("model.d_h", X, Ty::Text),
    ("model.d_c", X, Ty::Text),
    ("model.mu_h", X, Ty::Text),
    ("model.mu_c", X, Ty::Text),
    ("model.theta_h", X, Ty::Float),
    ("model.theta_c", X, Ty::Float),
    ("model.alpha_h", X, Ty::Float),
    ("model.alpha_c", X, Ty::Float),
    ("model.a_hh", X, Ty::Float),
    ("model.a_hc", X, Ty::Float),
    ("model.a_ch", X, Ty::Float),
    ("model.a_cc", X, Ty::Float),
    ("model.c1", X, Ty::Float),
    ("model.c2", X, Ty::Float),
    ("model.r0", D, Ty::Float),
    ("model.d", D, Ty::Float),
    ("model.a", D, Ty::Float),
    ("model.c_max", D, Ty::Float),
    ("model.c_points", D, Ty::Int),
    ("kernel.sigma", SIM, Ty::Float),
    ("kernel.trunc", SIM, Ty::Float),
    ("kernel.sigma_c", X, Ty::Float),
    ("kernel.trunc_c", X, Ty::Float),
    ("grid.m", SIM, Ty::Int),
    ("grid.x_max", SIM, Ty::Float),
    ("time.dt", SIM, Ty::Float),
    ("time.dt_coef", MONO, Ty::Float),
    ("time.steps", SIM, Ty::Int),
    ("time.t_final", SIM, Ty::Float),
    ("time.save_every", SIM, Ty::Int),
    ("init.center", SIM, Ty::Float),
    ("init.width", SIM, Ty::Float),
    ("init.mass", MONO, Ty::Float),
    ("init.mass_h", X, Ty::Float),
    ("init.mass_c", X, Ty::Float),
    ("output.frames", SIM, Ty::Int),
    ("output.normalize_snapshots", SIM, Ty::Bool),
    ("output.dir", ALL, Ty::Text),
    ("sweep.c1", X, Ty::FloatList),
    ("sweep.c2", X, Ty::FloatList),
    ("sweep.threshold", X, Ty::Float),
];

/// Keys that must be present when no `scenario.base` is given.
fn required(kind: ConfigKind) -> &'static [&'static str] {
    match kind {
        ConfigKind::Healthy | ConfigKind::Cancer => &[
            "model.r",
            "model.d",
            "grid.m",
            "time.dt|time.dt_coef",
            "time.steps|time.t_final",
            "init.center",
        ],
        ConfigKind::Combination => &[
            "model.r_h",
            "model.r_c",
            "model.d_h",
            "model.d_c",
            "model.mu_h",
            "model.mu_c",
            "model.alpha_h",
            "model.alpha_c",
            "model.a_hh",
            "model.a_hc",
            "model.a_ch",
            "model.a_cc",
            "grid.m",
            "time.dt",
            "time.steps|time.t_final",
            "init.center",
        ],
        ConfigKind::DoseAnalysis => &["model.r0", "model.d", "model.a", "model.c_max"],
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Raw {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<f64>),
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    line: usize,
    raw: Raw,
    found: &'static str,
}

fn line_of(text: &str, span: Option<Range<usize>>) -> usize {
    span.map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
        .unwrap_or(1)
}

fn kind_name(v: &Value) -> &'static str {
    match v {
        Value::String(_) => "a string",
        Value::Integer(_) => "an integer",
        Value::Float(_) => "a float",
        Value::Boolean(_) => "a boolean",
        Value::Datetime(_) => "a datetime",
        Value::Array(_) => "an array",
        Value::InlineTable(_) => "a table",
    }
}

fn to_raw(v: &Value) -> Option<Raw> {
    Some(match v {
        Value::String(s) => Raw::Text(s.value().clone()),
        Value::Integer(i) => Raw::Int(*i.value()),
        Value::Float(f) => Raw::Float(*f.value()),
        Value::Boolean(b) => Raw::Bool(*b.value()),
        Value::Array(a) => Raw::List(
            a.iter()
                .map(|x| match x {
                    Value::Integer(i) => Some(*i.value() as f64),
                    Value::Float(f) => Some(*f.value()),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()?,
        ),
        _ => return None,
    })
}

fn collect(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let doc = ImDocument::parse(text).map_err(|e| ConfigError::Syntax {
        line: line_of(text, e.span()),
        message: e.message().trim().to_string(),
    })?;
    let mut out = Vec::new();
    let root = doc.as_table();
    for (section, item) in root.iter() {
        let (key, sitem) = root.get_key_value(section).expect("key from iteration");
        let section_line = line_of(text, key.span().or_else(|| sitem.span()));
        let Some(table) = item.as_table_like() else {
            return Err(ConfigError::UnknownKey {
                key: section.to_string(),
                line: section_line,
            });
        };
        walk(text, section, table, section_line, &mut out)?;
    }
    Ok(out)
}

fn walk(
    text: &str,
    section: &str,
    table: &dyn TableLike,
    section_line: usize,
    out: &mut Vec<Entry>,
) -> Result<(), ConfigError> {
    for (name, item) in table.iter() {
        let full = format!("{section}.{name}");
        let line = table
            .get_key_value(name)
            .and_then(|(k, _)| k.span())
            .map(|s| line_of(text, Some(s)))
            .unwrap_or(section_line);
        let Some(v) = item.as_value() else {
            return Err(ConfigError::UnknownKey { key: full, line });
        };
        if let Value::InlineTable(_) = v {
            return Err(ConfigError::UnknownKey { key: full, line });
        }
        let found = kind_name(v);
        let raw = to_raw(v).ok_or_else(|| ConfigError::TypeMismatch {
            key: full.clone(),
            expected: "a number, string, boolean or array of numbers",
            found,
            line,
        })?;
        out.push(Entry {
            key: full,
            line,
            raw,
            found,
        });
    }
    Ok(())
}

fn first_line_of_section(entries: &[Entry], key: &str) -> Option<usize> {
    let section = key.split('.').next()?;
    entries
        .iter()
        .filter(|e| e.key.split('.').next() == Some(section))
        .map(|e| e.line)
        .min()
}

fn type_check(e: &Entry, ty: Ty) -> Result<(), ConfigError> {
    let ok = matches!(
        (ty, &e.raw),
        (Ty::Float, Raw::Float(_) | Raw::Int(_))
            | (Ty::Int, Raw::Int(_))
            | (Ty::Bool, Raw::Bool(_))
            | (Ty::Text, Raw::Text(_))
            | (Ty::FloatList, Raw::List(_))
    );
    if !ok {
        return Err(ConfigError::TypeMismatch {
            key: e.key.clone(),
            expected: ty.name(),
            found: e.found,
            line: e.line,
        });
    }
    if let Raw::Int(i) = e.raw {
        if ty == Ty::Int && i < 0 {
            return Err(invalid(e, "must be nonnegative"));
        }
    }
    Ok(())
}

fn invalid(e: &Entry, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: e.key.clone(),
        reason: reason.into(),
        line: e.line,
    }
}

fn float(e: &Entry) -> f64 {
    match e.raw {
        Raw::Float(f) => f,
        Raw::Int(i) => i as f64,
        _ => unreachable!("type checked"),
    }
}

fn int(e: &Entry) -> usize {
    match e.raw {
        Raw::Int(i) => i as usize,
        _ => unreachable!("type checked"),
    }
}

fn as_text(e: &Entry) -> &str {
    match &e.raw {
        Raw::Text(s) => s,
        _ => unreachable!("type checked"),
    }
}

fn rate(e: &Entry) -> Result<RateSpec, ConfigError> {
    as_text(e)
        .parse()
        .map_err(|reason: String| invalid(e, reason))
}

/// Defaults used when no base scenario is named.
pub(crate) fn skeleton(kind: ConfigKind) -> ScenarioConfig {
    let zero = RateSpec::constant(0.0);
    let model = match kind {
        ConfigKind::Healthy | ConfigKind::Cancer => ModelConfig::Mono {
            spec: MonoModelSpec {
                kind: if kind == ConfigKind::Healthy {
                    MonoKind::HealthyHomeostasis
                } else {
                    MonoKind::CancerLinear
                },
                r: zero,
                d: zero,
                mu: zero,
                beta: 1.0,
                theta: 0.0,
                kernel: KernelSpec::default(),
                eps: 1.0,
                dose: 0.0,
            },
            mode: RunMode::Imex,
        },
        ConfigKind::Combination => ModelConfig::Combination {
            spec: ComboModelSpec {
                theta_h: 0.0,
                theta_c: 0.0,
                c1: 0.0,
                c2: 0.0,
                ..ComboModelSpec::standard(0.0, 0.0)
            },
        },
        ConfigKind::DoseAnalysis => ModelConfig::DoseAnalysis {
            analysis: DoseGridConfig {
                r0: f64::NAN,
                d: f64::NAN,
                a: f64::NAN,
                c_max: f64::NAN,
                c_points: 100,
            },
        },
    };
    ScenarioConfig {
        name: "custom".into(),
        model,
        grid: GridConfig {
            m: 1000,
            x_max: 1.0,
        },
        time: TimeConfig {
            step: TimeStep::Fixed(0.0),
            horizon: Horizon::Steps(0),
            save_every: None,
        },
        init: InitConfig {
            center: 0.5,
            width: 0.01,
            mass: if kind == ConfigKind::Combination {
                0.5
            } else {
                1.0
            },
            mass_c: if kind == ConfigKind::Combination {
                0.5
            } else {
                0.0
            },
        },
        output: OutputConfig::default(),
        sweep: None,
    }
}

/// Parses a configuration document; see the module docs for the format.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let entries = collect(text)?;
    let find = |key: &str| entries.iter().find(|e| e.key == key);
    if let Some(e) = entries
        .iter()
        .find(|e| !KEYS.iter().any(|(k, _, _)| *k == e.key))
    {
        return Err(ConfigError::UnknownKey {
            key: e.key.clone(),
            line: e.line,
        });
    }

    for key in ["scenario.base", "scenario.name", "model.kind"] {
        if let Some(e) = find(key) {
            type_check(e, Ty::Text)?;
        }
    }
    let requested_kind = match find("model.kind") {
        Some(e) => Some(ConfigKind::parse(as_text(e)).ok_or_else(|| {
            invalid(
                e,
                "expected one of healthy, cancer, combination, dose-analysis",
            )
        })?),
        None => None,
    };

    let base = find("scenario.base");
    let mut cfg = match (base, requested_kind) {
        (Some(e), _) => scenarios::scenario(as_text(e))
            .ok_or_else(|| ConfigError::UnknownScenario(as_text(e).to_string()))?,
        (None, Some(kind)) => skeleton(kind),
        (None, None) => {
            return Err(ConfigError::MissingKey {
                key: "model.kind".into(),
                line: first_line_of_section(&entries, "model.kind"),
            })
        }
    };
    let kind = cfg.kind();
    if let (Some(e), Some(k)) = (find("model.kind"), requested_kind) {
        if k != kind {
            return Err(invalid(
                e,
                format!("base scenario has kind `{kind}`, not `{k}`"),
            ));
        }
    }

    for e in &entries {
        let Some(&(_, _, ty)) = KEYS
            .iter()
            .find(|(k, mask, _)| *k == e.key && mask & kind.bit() != 0)
        else {
            return Err(ConfigError::NotApplicable {
                key: e.key.clone(),
                kind: kind.label(),
                line: e.line,
            });
        };
        type_check(e, ty)?;
    }

    if base.is_none() {
        for req in required(kind) {
            if !req.split('|').any(|k| find(k).is_some()) {
                let key = req.split('|').next().unwrap_or(req);
                return Err(ConfigError::MissingKey {
                    key: req.replace('|', " or "),
                    line: first_line_of_section(&entries, key),
                });
            }
        }
    }
    for pair in [("time.dt", "time.dt_coef"), ("time.steps", "time.t_final")] {
        if let (Some(_), Some(e)) = (find(pair.0), find(pair.1)) {
            return Err(invalid(e, format!("conflicts with `{}`", pair.0)));
        }
    }

    // Population-specific kernel keys win over the shared ones.
    let mut ordered: Vec<&Entry> = entries.iter().collect();
    ordered.sort_by_key(|e| e.key.ends_with("_c") && e.key.starts_with("kernel."));
    for e in ordered {
        apply(&mut cfg, e)?;
    }
    Ok(cfg)
}

fn mode_from(e: &Entry) -> Result<RunMode, ConfigError> {
    match as_text(e) {
        "imex" => Ok(RunMode::Imex),
        "exact-linear" => Ok(RunMode::ExactLinear),
        "renormalized" => Ok(RunMode::Renormalized),
        _ => Err(invalid(
            e,
            "expected one of imex, exact-linear, renormalized",
        )),
    }
}

fn apply(cfg: &mut ScenarioConfig, e: &Entry) -> Result<(), ConfigError> {
    let key = e.key.as_str();
    match key {
        "scenario.base" | "model.kind" => {}
        "scenario.name" => cfg.name = as_text(e).to_string(),
        "grid.m" => cfg.grid.m = int(e),
        "grid.x_max" => cfg.grid.x_max = float(e),
        "time.dt" => cfg.time.step = TimeStep::Fixed(float(e)),
        "time.dt_coef" => cfg.time.step = TimeStep::Diffusive(float(e)),
        "time.steps" => cfg.time.horizon = Horizon::Steps(int(e)),
        "time.t_final" => cfg.time.horizon = Horizon::FinalTime(float(e)),
        "time.save_every" => {
            if int(e) == 0 {
                return Err(invalid(e, "must be at least 1"));
            }
            cfg.time.save_every = Some(int(e));
        }
        "init.center" => cfg.init.center = float(e),
        "init.width" => cfg.init.width = float(e),
        "init.mass" | "init.mass_h" => cfg.init.mass = float(e),
        "init.mass_c" => cfg.init.mass_c = float(e),
        "output.frames" => {
            if int(e) == 0 {
                return Err(invalid(e, "must be at least 1"));
            }
            cfg.output.frames = int(e);
        }
        "output.normalize_snapshots" => {
            cfg.output.normalize_snapshots = matches!(e.raw, Raw::Bool(true))
        }
        "output.dir" => cfg.output.dir = Some(as_text(e).to_string()),
        _ if key.starts_with("sweep.") => {
            let sweep = cfg.sweep.get_or_insert_with(|| SweepConfig {
                c1: vec![0.0],
                c2: vec![0.0],
                threshold: crate::combo::DEFAULT_ERADICATION_THRESHOLD,
            });
            match (key, &e.raw) {
                ("sweep.c1", Raw::List(v)) => sweep.c1 = v.clone(),
                ("sweep.c2", Raw::List(v)) => sweep.c2 = v.clone(),
                _ => sweep.threshold = float(e),
            }
            if matches!(&e.raw, Raw::List(v) if v.is_empty()) {
                return Err(invalid(e, "dose list must not be empty"));
            }
        }
        _ => match &mut cfg.model {
            ModelConfig::Mono { spec, mode } => match key {
                "model.mode" => *mode = mode_from(e)?,
                "model.r" => spec.r = rate(e)?,
                "model.d" => spec.d = rate(e)?,
                "model.mu" => spec.mu = rate(e)?,
                "model.beta" => spec.beta = float(e),
                "model.theta" => spec.theta = float(e),
                "model.eps" => spec.eps = float(e),
                "model.dose" => spec.dose = float(e),
                "kernel.sigma" => spec.kernel.sigma = float(e),
                "kernel.trunc" => spec.kernel.trunc = float(e),
                _ => unreachable!("key table and apply disagree on {key}"),
            },
            ModelConfig::Combination { spec } => match key {
                "model.r_h" => spec.r_h = rate(e)?,
                "model.r_c" => spec.r_c = rate(e)?,
                "model.d_h" => spec.d_h = rate(e)?,
                "model.d_c" => spec.d_c = rate(e)?,
                "model.mu_h" => spec.mu_h = rate(e)?,
                "model.mu_c" => spec.mu_c = rate(e)?,
                "model.theta_h" => spec.theta_h = float(e),
                "model.theta_c" => spec.theta_c = float(e),
                "model.alpha_h" => spec.alpha_h = float(e),
                "model.alpha_c" => spec.alpha_c = float(e),
                "model.a_hh" => spec.a_hh = float(e),
                "model.a_hc" => spec.a_hc = float(e),
                "model.a_ch" => spec.a_ch = float(e),
                "model.a_cc" => spec.a_cc = float(e),
                "model.c1" => spec.c1 = float(e),
                "model.c2" => spec.c2 = float(e),
                "kernel.sigma" => {
                    spec.kernel_h.sigma = float(e);
                    spec.kernel_c.sigma = float(e);
                }
                "kernel.trunc" => {
                    spec.kernel_h.trunc = float(e);
                    spec.kernel_c.trunc = float(e);
                }
                "kernel.sigma_c" => spec.kernel_c.sigma = float(e),
                "kernel.trunc_c" => spec.kernel_c.trunc = float(e),
                _ => unreachable!("key table and apply disagree on {key}"),
            },
            ModelConfig::DoseAnalysis { analysis } => match key {
                "model.r0" => analysis.r0 = float(e),
                "model.d" => analysis.d = float(e),
                "model.a" => analysis.a = float(e),
                "model.c_max" => analysis.c_max = float(e),
                "model.c_points" => {
                    if int(e) == 0 {
                        return Err(invalid(e, "need at least 1 point"));
                    }
                    analysis.c_points = int(e);
                }
                _ => unreachable!("key table and apply disagree on {key}"),
            },
        },
    }
    Ok(())
}
