//! Sectioned key-value configuration files.
//!
//! The grammar is line-oriented UTF-8 text:
//!
//! ```text
//! # comment            full-line, or trailing after any other line
//! [section]            one of: model, sweep, evolve, threshold, output
//! key = value          whitespace around each token is ignored
//! ```
//!
//! Every key has a default, so the empty file is a valid configuration.
//! Unknown sections, unknown keys, duplicate keys and malformed values are
//! errors carrying the line and column (1-based, bytes) where the
//! offending token starts. All rates and frequencies are dimensionless in
//! units of gamma_s; times are in units of 2 pi / gamma_s.
//!
//! Keys by section, with defaults:
//!
//! ```text
//! [model]      variant = cascaded_tc   (cascaded_tc | cascaded_jc |
//!                                       cascaded_empty_cavity | classical_tc)
//!              xi = 1.0, g = 1.25, kappa = 5.0, gamma = 0.375,
//!              gamma_s = 1.0, mu = 1.0, delta_c = 0.0,
//!              delta_s / delta_1 / delta_2 = delta_c, n_max = 10
//! [sweep]      axis = delta_c (delta_c | g), start = -20.0, stop = 20.0,
//!              points = 161
//! [evolve]     t_max = 20.0, points = 401
//! [threshold]  g_lo = 0.5, g_hi = 1.5
//! [output]     failure_budget = 0
//! ```

use std::collections::HashMap;
use std::fmt;

use cascade_qed::model::{ModelParams, Variant};
use cascade_qed::sweep::SweepAxis;
use cascade_qed::Error as CoreError;

/// Parse or range failure; points at the offending token when it came
/// from the file (range failures on defaulted values carry no location).
#[derive(Debug)]
pub struct ConfigError {
    pub location: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((line, column)) => write!(
                f,
                "config error at line {line}, column {column}: {}",
                self.message
            ),
            None => write!(f, "config error: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err_at(line: usize, column: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        location: Some((line, column)),
        message: message.into(),
    }
}

/// One `key = value` entry with the position where its key starts.
#[derive(Debug, Clone)]
pub struct Entry {
    pub section: String,
    pub key: String,
    pub value: String,
    pub line: usize,
    pub column: usize,
}

/// Grammar-level parse: entries in order, plus each section header with
/// its position. Section and key names are not interpreted here.
pub fn parse_entries(text: &str) -> Result<(Vec<Entry>, Vec<(String, usize, usize)>), ConfigError> {
    let mut entries = Vec::new();
    let mut headers = Vec::new();
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = stripped.len() - stripped.trim_start().len() + 1;
        if let Some(body) = trimmed.strip_prefix('[') {
            let name = body
                .strip_suffix(']')
                .ok_or_else(|| err_at(line, column, "section header missing closing `]`"))?
                .trim();
            if name.is_empty() {
                return Err(err_at(line, column, "empty section name"));
            }
            headers.push((name.to_string(), line, column));
            section = Some(name.to_string());
            continue;
        }
        let eq = trimmed
            .find('=')
            .ok_or_else(|| err_at(line, column, "expected `key = value` or `[section]`"))?;
        let key = trimmed[..eq].trim();
        let value = trimmed[eq + 1..].trim();
        if key.is_empty() {
            return Err(err_at(line, column, "missing key before `=`"));
        }
        if value.is_empty() {
            return Err(err_at(line, column, format!("missing value for key `{key}`")));
        }
        let section = section
            .clone()
            .ok_or_else(|| err_at(line, column, "entry before any `[section]` header"))?;
        entries.push(Entry {
            section,
            key: key.to_string(),
            value: value.to_string(),
            line,
            column,
        });
    }
    Ok((entries, headers))
}

/// Grid settings for the `sweep` subcommand.
#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

/// Time grid for the `evolve` subcommand.
#[derive(Debug, Clone)]
pub struct EvolveSettings {
    pub t_max: f64,
    pub points: usize,
}

/// Bisection bracket for the `threshold` subcommand.
#[derive(Debug, Clone)]
pub struct ThresholdSettings {
    pub g_lo: f64,
    pub g_hi: f64,
}

/// A fully resolved configuration: every key has its explicit or default
/// value, and all range constraints have been checked.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub model: ModelParams,
    pub sweep: SweepSettings,
    pub evolve: EvolveSettings,
    pub threshold: ThresholdSettings,
    pub failure_budget: usize,
}

const SECTIONS: [&str; 5] = ["model", "sweep", "evolve", "threshold", "output"];

fn parse_f64(e: &Entry) -> Result<f64, ConfigError> {
    e.value
        .parse::<f64>()
        .map_err(|_| err_at(e.line, e.column, format!("{}: not a number: `{}`", e.key, e.value)))
}

fn parse_usize(e: &Entry) -> Result<usize, ConfigError> {
    e.value.parse::<usize>().map_err(|_| {
        err_at(
            e.line,
            e.column,
            format!("{}: not a non-negative integer: `{}`", e.key, e.value),
        )
    })
}

impl Resolved {
    pub fn from_text(text: &str) -> Result<Resolved, ConfigError> {
        let (entries, headers) = parse_entries(text)?;
        for (name, line, column) in &headers {
            if !SECTIONS.contains(&name.as_str()) {
                return Err(err_at(
                    *line,
                    *column,
                    format!("unknown section `[{name}]`; expected one of {SECTIONS:?}"),
                ));
            }
        }

        let mut positions: HashMap<(String, String), (usize, usize)> = HashMap::new();
        let mut variant = None;
        let mut floats: HashMap<&'static str, f64> = HashMap::new();
        let mut n_max = None;
        let mut axis = None;
        let mut points = None;
        let mut e_points = None;
        let mut budget = None;

        const MODEL_FLOATS: [&str; 10] = [
            "xi", "g", "kappa", "gamma", "gamma_s", "mu", "delta_c", "delta_s", "delta_1",
            "delta_2",
        ];

        for e in &entries {
            let slot = (e.section.clone(), e.key.clone());
            if let Some((line, _)) = positions.get(&slot) {
                return Err(err_at(
                    e.line,
                    e.column,
                    format!("duplicate key `{}` in [{}] (first set at line {line})", e.key, e.section),
                ));
            }
            positions.insert(slot, (e.line, e.column));

            match (e.section.as_str(), e.key.as_str()) {
                ("model", "variant") => {
                    variant = Some(e.value.parse::<Variant>().map_err(|_| {
                        err_at(
                            e.line,
                            e.column,
                            format!(
                                "variant: unknown value `{}`; expected cascaded_tc, cascaded_jc, cascaded_empty_cavity or classical_tc",
                                e.value
                            ),
                        )
                    })?);
                }
                ("model", "n_max") => n_max = Some(parse_usize(e)?),
                ("model", key) => {
                    let key = MODEL_FLOATS
                        .iter()
                        .find(|k| **k == key)
                        .ok_or_else(|| {
                            err_at(e.line, e.column, format!("unknown key `{key}` in [model]"))
                        })?;
                    floats.insert(key, parse_f64(e)?);
                }
                ("sweep", "axis") => {
                    axis = Some(e.value.parse::<SweepAxis>().map_err(|_| {
                        err_at(
                            e.line,
                            e.column,
                            format!("axis: unknown value `{}`; expected delta_c or g", e.value),
                        )
                    })?);
                }
                ("sweep", "start") => {
                    floats.insert("sweep.start", parse_f64(e)?);
                }
                ("sweep", "stop") => {
                    floats.insert("sweep.stop", parse_f64(e)?);
                }
                ("sweep", "points") => points = Some(parse_usize(e)?),
                ("evolve", "t_max") => {
                    floats.insert("evolve.t_max", parse_f64(e)?);
                }
                ("evolve", "points") => e_points = Some(parse_usize(e)?),
                ("threshold", "g_lo") => {
                    floats.insert("threshold.g_lo", parse_f64(e)?);
                }
                ("threshold", "g_hi") => {
                    floats.insert("threshold.g_hi", parse_f64(e)?);
                }
                ("output", "failure_budget") => budget = Some(parse_usize(e)?),
                (section, key) => {
                    return Err(err_at(
                        e.line,
                        e.column,
                        format!("unknown key `{key}` in [{section}]"),
                    ));
                }
            }
        }

        let locate = |section: &str, key: &str| {
            positions
                .get(&(section.to_string(), key.to_string()))
                .copied()
        };

        let mut model = ModelParams::new(variant.unwrap_or(Variant::CascadedTc));
        if let Some(&v) = floats.get("xi") {
            model.xi = v;
        }
        if let Some(&v) = floats.get("g") {
            model.g = v;
        }
        if let Some(&v) = floats.get("kappa") {
            model.kappa = v;
        }
        if let Some(&v) = floats.get("gamma") {
            model.gamma = v;
        }
        if let Some(&v) = floats.get("gamma_s") {
            model.gamma_s = v;
        }
        if let Some(&v) = floats.get("mu") {
            model.mu = v;
        }
        let delta_c = floats.get("delta_c").copied().unwrap_or(0.0);
        model.delta_c = delta_c;
        model.delta_s = floats.get("delta_s").copied().unwrap_or(delta_c);
        model.delta_1 = floats.get("delta_1").copied().unwrap_or(delta_c);
        model.delta_2 = floats.get("delta_2").copied().unwrap_or(delta_c);
        if let Some(v) = n_max {
            model.n_max = v;
        }
        model.validate().map_err(|e| ConfigError {
            location: match &e {
                CoreError::InvalidParam { name, .. } => locate("model", name),
                _ => None,
            },
            message: e.to_string(),
        })?;

        let sweep = SweepSettings {
            axis: axis.unwrap_or(SweepAxis::DeltaC),
            start: floats.get("sweep.start").copied().unwrap_or(-20.0),
            stop: floats.get("sweep.stop").copied().unwrap_or(20.0),
            points: points.unwrap_or(161),
        };
        if sweep.points < 2 {
            return Err(ConfigError {
                location: locate("sweep", "points"),
                message: format!("points: a scan needs at least 2 grid points, got {}", sweep.points),
            });
        }
        if !sweep.start.is_finite() || !sweep.stop.is_finite() || sweep.stop <= sweep.start {
            return Err(ConfigError {
                location: locate("sweep", "stop"),
                message: format!(
                    "stop: sweep range must be finite with stop > start, got [{}, {}]",
                    sweep.start, sweep.stop
                ),
            });
        }

        let evolve = EvolveSettings {
            t_max: floats.get("evolve.t_max").copied().unwrap_or(20.0),
            points: e_points.unwrap_or(401),
        };
        if !evolve.t_max.is_finite() || evolve.t_max <= 0.0 {
            return Err(ConfigError {
                location: locate("evolve", "t_max"),
                message: format!("t_max: must be finite and > 0, got {}", evolve.t_max),
            });
        }
        if evolve.points < 2 {
            return Err(ConfigError {
                location: locate("evolve", "points"),
                message: format!("points: evolution needs at least 2 time points, got {}", evolve.points),
            });
        }

        let threshold = ThresholdSettings {
            g_lo: floats.get("threshold.g_lo").copied().unwrap_or(0.5),
            g_hi: floats.get("threshold.g_hi").copied().unwrap_or(1.5),
        };
        if !threshold.g_lo.is_finite()
            || !threshold.g_hi.is_finite()
            || threshold.g_lo < 0.0
            || threshold.g_hi <= threshold.g_lo
        {
            return Err(ConfigError {
                location: locate("threshold", "g_hi"),
                message: format!(
                    "g_hi: bracket must satisfy 0 <= g_lo < g_hi, got [{}, {}]",
                    threshold.g_lo, threshold.g_hi
                ),
            });
        }

        Ok(Resolved {
            model,
            sweep,
            evolve,
            threshold,
            failure_budget: budget.unwrap_or(0),
        })
    }

    /// The sweep grid: `points` equally spaced values from `start` to
    /// `stop`. With the defaults this reproduces the library's default
    /// 161-point grid bit for bit.
    pub fn sweep_grid(&self) -> Vec<f64> {
        let step = (self.sweep.stop - self.sweep.start) / (self.sweep.points - 1) as f64;
        (0..self.sweep.points)
            .map(|i| self.sweep.start + step * i as f64)
            .collect()
    }

    /// Full resolved parameter set in config grammar order, for the
    /// manifest echo. Values use the shortest representation that parses
    /// back to the same number.
    pub fn echo(&self) -> Vec<(&'static str, Vec<(&'static str, String)>)> {
        let m = &self.model;
        vec![
            (
                "model",
                vec![
                    ("variant", m.variant.name().to_string()),
                    ("xi", m.xi.to_string()),
                    ("g", m.g.to_string()),
                    ("kappa", m.kappa.to_string()),
                    ("gamma", m.gamma.to_string()),
                    ("gamma_s", m.gamma_s.to_string()),
                    ("mu", m.mu.to_string()),
                    ("delta_c", m.delta_c.to_string()),
                    ("delta_s", m.delta_s.to_string()),
                    ("delta_1", m.delta_1.to_string()),
                    ("delta_2", m.delta_2.to_string()),
                    ("n_max", m.n_max.to_string()),
                ],
            ),
            (
                "sweep",
                vec![
                    ("axis", self.sweep.axis.name().to_string()),
                    ("start", self.sweep.start.to_string()),
                    ("stop", self.sweep.stop.to_string()),
                    ("points", self.sweep.points.to_string()),
                ],
            ),
            (
                "evolve",
                vec![
                    ("t_max", self.evolve.t_max.to_string()),
                    ("points", self.evolve.points.to_string()),
                ],
            ),
            (
                "threshold",
                vec![
                    ("g_lo", self.threshold.g_lo.to_string()),
                    ("g_hi", self.threshold.g_hi.to_string()),
                ],
            ),
            (
                "output",
                vec![("failure_budget", self.failure_budget.to_string())],
            ),
        ]
    }
}
