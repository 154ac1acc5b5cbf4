//! `key=value` run configuration.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Keys
//! missing from the text take the preset's default, then the global default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use resideq_core::StepperKind;

use crate::presets::{self, Preset};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: &'static str,
        value: String,
        reason: &'static str,
    },
    #[error("no preset `{model}/{test}`")]
    UnknownPreset { model: &'static str, test: String },
    #[error("preset `{model}/{test}` has no scheme `{scheme}` (choose from {choices})")]
    UnknownScheme {
        model: &'static str,
        test: &'static str,
        scheme: String,
        choices: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Model {
    Fp,
    Pme,
    Boltzmann,
    Swe,
    Advect,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fp => "fp",
            Self::Pme => "pme",
            Self::Boltzmann => "boltzmann",
            Self::Swe => "swe",
            Self::Advect => "advect",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        [Self::Fp, Self::Pme, Self::Boltzmann, Self::Swe, Self::Advect]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// The model's stability estimate.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    /// The preset's initial datum.
    Preset,
    /// The discrete equilibrium itself.
    Equilibrium,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub test: String,
    pub scheme: String,
    pub n_cells: usize,
    pub dt: TimeStep,
    pub t_end: f64,
    pub sample_every: f64,
    pub snapshot_times: Vec<f64>,
    pub alpha: f64,
    pub indicator_epsilon: f64,
    pub g: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub init: Init,
    pub stepper: StepperKind,
    pub cfl: f64,
    pub n_steps: usize,
    pub n_random: usize,
}

pub const KEYS: &[&str] = &[
    "model",
    "test",
    "scheme",
    "n_cells",
    "dt",
    "t_end",
    "sample_every",
    "snapshot_times",
    "alpha",
    "indicator_epsilon",
    "g",
    "output_dir",
    "seed",
    "init",
    "stepper",
    "cfl",
    "n_steps",
    "n_random",
];

const GLOBAL_DEFAULTS: &[(&str, &str)] = &[
    ("dt", "auto"),
    ("t_end", "1"),
    ("sample_every", "0.1"),
    ("snapshot_times", ""),
    ("alpha", "2"),
    ("indicator_epsilon", "1e-14"),
    ("g", "9.81"),
    ("output_dir", "."),
    ("seed", "0"),
    ("init", "preset"),
    ("stepper", "forward_euler"),
    ("cfl", "0.9"),
    ("n_steps", "400"),
    ("n_random", "24"),
];

fn static_key(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| *k == key)
}

/// Splits config text into key/value pairs, rejecting unknown and repeated
/// keys.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<&'static str, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| ConfigError::Malformed {
            line,
            text: raw.to_string(),
        })?;
        let k = k.trim();
        let key = static_key(k).ok_or_else(|| ConfigError::UnknownKey {
            line,
            key: k.to_string(),
        })?;
        if out.insert(key, v.trim().to_string()).is_some() {
            return Err(ConfigError::Duplicate {
                line,
                key: k.to_string(),
            });
        }
    }
    Ok(out)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &[])
}

/// Parses `text` and then applies `key=value` overrides, which may replace
/// keys set in the text.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let mut pairs = parse_pairs(text)?;
    for (i, o) in overrides.iter().enumerate() {
        let one = parse_pairs(o).map_err(|e| match e {
            ConfigError::Malformed { text, .. } => ConfigError::Malformed { line: i + 1, text },
            ConfigError::UnknownKey { key, .. } => ConfigError::UnknownKey { line: i + 1, key },
            other => other,
        })?;
        if one.is_empty() {
            return Err(ConfigError::Malformed {
                line: i + 1,
                text: o.clone(),
            });
        }
        pairs.extend(one);
    }
    build(pairs)
}

fn build(user: BTreeMap<&'static str, String>) -> Result<RunConfig, ConfigError> {
    let model_text = user.get("model").ok_or(ConfigError::Missing("model"))?;
    let model: Model = model_text.parse().map_err(|_| ConfigError::InvalidValue {
        key: "model",
        value: model_text.clone(),
        reason: "expected fp, pme, boltzmann, swe or advect",
    })?;
    let test = user.get("test").ok_or(ConfigError::Missing("test"))?;
    let preset = presets::find(model, test).ok_or_else(|| ConfigError::UnknownPreset {
        model: model.name(),
        test: test.clone(),
    })?;

    let mut all: BTreeMap<&'static str, String> = GLOBAL_DEFAULTS
        .iter()
        .map(|(k, v)| (*k, v.to_string()))
        .collect();
    for (k, v) in preset.defaults {
        all.insert(static_key(k).expect("preset keys are known"), v.to_string());
    }
    all.insert("scheme", preset.schemes[0].to_string());
    all.extend(user);
    let get = |k: &'static str| all.get(k).map(String::as_str).unwrap_or("");

    let scheme = get("scheme").to_string();
    if !preset.schemes.contains(&scheme.as_str()) {
        return Err(ConfigError::UnknownScheme {
            model: model.name(),
            test: preset.test,
            scheme,
            choices: preset.schemes.join(", "),
        });
    }

    let cfg = RunConfig {
        model,
        test: preset.test.to_string(),
        scheme,
        n_cells: number(&all, "n_cells")?,
        dt: match get("dt") {
            "auto" => TimeStep::Auto,
            _ => TimeStep::Fixed(number(&all, "dt")?),
        },
        t_end: number(&all, "t_end")?,
        sample_every: number(&all, "sample_every")?,
        snapshot_times: list(get("snapshot_times"))?,
        alpha: number(&all, "alpha")?,
        indicator_epsilon: number(&all, "indicator_epsilon")?,
        g: number(&all, "g")?,
        output_dir: PathBuf::from(get("output_dir")),
        seed: number(&all, "seed")?,
        init: match get("init") {
            "preset" => Init::Preset,
            "equilibrium" => Init::Equilibrium,
            other => return Err(invalid("init", other, "expected preset or equilibrium")),
        },
        stepper: match get("stepper") {
            "forward_euler" => StepperKind::ForwardEuler,
            "ssp_rk2" => StepperKind::SspRk2,
            "ssp_rk3" => StepperKind::SspRk3,
            other => return Err(invalid("stepper", other, "expected forward_euler, ssp_rk2 or ssp_rk3")),
        },
        cfl: number(&all, "cfl")?,
        n_steps: number(&all, "n_steps")?,
        n_random: number(&all, "n_random")?,
    };
    validate(&cfg, preset)?;
    Ok(cfg)
}

fn invalid(key: &'static str, value: impl ToString, reason: &'static str) -> ConfigError {
    ConfigError::InvalidValue {
        key,
        value: value.to_string(),
        reason,
    }
}

fn number<T: FromStr>(all: &BTreeMap<&'static str, String>, key: &'static str) -> Result<T, ConfigError> {
    let v = all.get(key).map(String::as_str).unwrap_or("");
    v.parse().map_err(|_| invalid(key, v, "not a number of the expected kind"))
}

fn list(v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| invalid("snapshot_times", s, "not a number")))
        .collect()
}

fn validate(c: &RunConfig, preset: &Preset) -> Result<(), ConfigError> {
    let finite_pos = |x: f64| x.is_finite() && x > 0.0;
    if c.n_cells < 2 {
        return Err(invalid("n_cells", c.n_cells, "need at least 2 cells"));
    }
    if let TimeStep::Fixed(dt) = c.dt {
        if !finite_pos(dt) {
            return Err(invalid("dt", dt, "must be positive or `auto`"));
        }
        if preset.test == "tvd-sweep" {
            return Err(invalid("dt", dt, "the sweep sets dt from cfl"));
        }
    }
    if !(c.t_end.is_finite() && c.t_end >= 0.0) {
        return Err(invalid("t_end", c.t_end, "must be non-negative"));
    }
    if !finite_pos(c.sample_every) {
        return Err(invalid("sample_every", c.sample_every, "must be positive"));
    }
    if let Some(t) = c.snapshot_times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(invalid("snapshot_times", t, "times must be non-negative"));
    }
    if !(c.alpha.is_finite() && c.alpha > 1.0) {
        return Err(invalid("alpha", c.alpha, "must exceed 1"));
    }
    if !(c.indicator_epsilon.is_finite() && c.indicator_epsilon >= 0.0) {
        return Err(invalid("indicator_epsilon", c.indicator_epsilon, "must be non-negative"));
    }
    if !finite_pos(c.g) {
        return Err(invalid("g", c.g, "must be positive"));
    }
    if !(c.cfl > 0.0 && c.cfl < 1.0) {
        return Err(invalid("cfl", c.cfl, "must lie in (0, 1)"));
    }
    if c.n_steps == 0 {
        return Err(invalid("n_steps", c.n_steps, "must be positive"));
    }
    Ok(())
}
