use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::eigen::{Family, HERMITE_CAP, LADDER_CAP};
use crate::gauge::Gauge;
use crate::units::{ParamsProfile, PhysicalParams};

/// Default tolerance for every named check. Overrides may only tighten these.
pub const DEFAULT_TOLERANCES: [(&str, f64); 16] = [
    ("commutator", 1e-12),
    ("covariance_residual", 1e-10),
    ("displacement", 1e-10),
    ("drift_absolute", 1e-10),
    ("drift_relative", 1e-8),
    ("eigen_residual", 1e-10),
    ("flux_tol", 1e-9),
    ("gauge_agreement", 1e-8),
    ("hall_relative", 1e-12),
    ("invariant_factor", 1e-12),
    ("ladder_residual", 1e-10),
    ("period_relative", 1e-6),
    ("phase_modulus", 1e-12),
    ("radius", 1e-6),
    ("resum_distance", 1e-6),
    ("roundtrip", 0.0),
];

/// A problem with the invocation or configuration; maps to exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<crate::Error> for ConfigError {
    fn from(e: crate::Error) -> Self {
        ConfigError(e.to_string())
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<&'static str, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(DEFAULT_TOLERANCES.into_iter().collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    /// Replace `name` with `value`; rejects unknown names, non-positive values
    /// and anything looser than the default.
    pub fn tighten(&mut self, name: &str, value: f64) -> Result<(), ConfigError> {
        let Some((&key, &default)) = DEFAULT_TOLERANCES
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(k, v)| (k, v))
        else {
            return bad(format!("unknown tolerance '{name}'"));
        };
        if default == 0.0 {
            return bad(format!("tolerance '{name}' is fixed at 0"));
        }
        if !(value.is_finite() && value > 0.0) {
            return bad(format!("tolerance '{name}' must be positive, got {value}"));
        }
        if value > default {
            return bad(format!(
                "tolerance '{name}' may only tighten: {value} > default {default}"
            ));
        }
        self.0.insert(key, value);
        Ok(())
    }

    /// Parse a `name=value` command-line override.
    pub fn tighten_str(&mut self, spec: &str) -> Result<(), ConfigError> {
        let Some((name, value)) = spec.split_once('=') else {
            return bad(format!("expected name=value, got '{spec}'"));
        };
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| ConfigError(format!("tolerance '{name}': '{value}' is not a number")))?;
        self.tighten(name.trim(), value)
    }
}

/// JSON run configuration. Every key is optional; unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// If present, must name the subcommand being run.
    pub suite: Option<String>,
    pub params: Option<ParamsProfile>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,

    pub n_max: Option<u32>,
    pub n: Option<u32>,
    pub lams: Option<Vec<f64>>,
    pub lam: Option<f64>,
    pub lam1: Option<f64>,
    pub lam2: Option<f64>,
    pub j_max: Option<u32>,
    pub j_values: Option<Vec<u32>>,
    pub k_values: Option<Vec<i64>>,
    pub families: Option<Vec<String>>,
    pub family: Option<String>,
    pub nodes: Option<usize>,
    pub half_width: Option<f64>,
    pub gauge: Option<Gauge>,
    pub start: Option<[f64; 2]>,
    pub velocity: Option<[f64; 2]>,
    pub periods: Option<u32>,
    pub steps_per_period: Option<u32>,
    /// File name (inside the output directory) for export suites.
    pub file: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }
}

pub fn load_params(path: &Path) -> Result<PhysicalParams, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let profile: ParamsProfile =
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    Ok(PhysicalParams::try_from(profile)?)
}

/// Fully validated options with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub params: PhysicalParams,
    pub tol: Tolerances,
    pub n_max: Option<u32>,
    pub n: u32,
    pub lams: Option<Vec<f64>>,
    pub lam: Option<f64>,
    pub lam1: f64,
    pub lam2: f64,
    pub j_max: Option<u32>,
    pub j_values: Vec<u32>,
    pub k_values: Vec<i64>,
    pub families: Vec<Family>,
    pub family: Family,
    pub nodes: Option<usize>,
    pub half_width: f64,
    pub gauge: Gauge,
    pub start: [f64; 2],
    pub velocity: [f64; 2],
    pub periods: Option<u32>,
    pub steps_per_period: u32,
    pub file: Option<String>,
}

fn finite(name: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        bad(format!("'{name}' must be finite"))
    }
}

fn parse_family(s: &str) -> Result<Family, ConfigError> {
    s.parse()
        .map_err(|_| ConfigError(format!("unknown family '{s}'")))
}

impl Settings {
    /// Merge config file, `--params` file and `--tol` overrides, in that order
    /// of precedence (later wins), and validate everything.
    pub fn resolve(
        suite: &str,
        config: RunConfig,
        params_override: Option<PhysicalParams>,
        tol_overrides: &[String],
    ) -> Result<Self, ConfigError> {
        if let Some(s) = &config.suite {
            if s != suite {
                return bad(format!("config is for suite '{s}', not '{suite}'"));
            }
        }
        let params = match (params_override, config.params) {
            (Some(p), _) => p,
            (None, Some(profile)) => PhysicalParams::try_from(profile)?,
            (None, None) => PhysicalParams::natural(),
        };
        let mut tol = Tolerances::default();
        for (name, &value) in &config.tolerances {
            tol.tighten(name, value)?;
        }
        for spec in tol_overrides {
            tol.tighten_str(spec)?;
        }

        if let Some(n) = config.n_max.into_iter().chain(config.n).max() {
            if n > HERMITE_CAP {
                return bad(format!("level {n} exceeds cap {HERMITE_CAP}"));
            }
        }
        let lams = match config.lams {
            Some(v) if v.is_empty() => return bad("'lams' must not be empty"),
            Some(v) => Some(
                v.into_iter()
                    .map(|l| finite("lams", l))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        let lam = config.lam.map(|l| finite("lam", l)).transpose()?;
        let lam1 = finite("lam1", config.lam1.unwrap_or(std::f64::consts::TAU.sqrt()))?;
        let lam2 = finite("lam2", config.lam2.unwrap_or(std::f64::consts::TAU.sqrt()))?;
        let j_values = config
            .j_values
            .unwrap_or_else(|| (10..=40).step_by(2).collect());
        if j_values.is_empty() {
            return bad("'j_values' must not be empty");
        }
        if let Some(&j) = config.j_max.iter().chain(&j_values).max() {
            if j > LADDER_CAP {
                return bad(format!("ladder power {j} exceeds cap {LADDER_CAP}"));
            }
        }
        let families = match config.families {
            Some(v) if v.is_empty() => return bad("'families' must not be empty"),
            Some(v) => v
                .iter()
                .map(|s| parse_family(s))
                .collect::<Result<Vec<_>, _>>()?,
            None => Family::ALL.to_vec(),
        };
        let family = config
            .family
            .as_deref()
            .map(parse_family)
            .transpose()?
            .unwrap_or(Family::LANDAU_FIRST);
        if let Some(nodes) = config.nodes {
            if !(8..=4096).contains(&nodes) {
                return bad(format!("'nodes' must be in 8..=4096, got {nodes}"));
            }
        }
        let half_width = finite("half_width", config.half_width.unwrap_or(10.0))?;
        if half_width <= 0.0 {
            return bad("'half_width' must be positive");
        }
        let start = config.start.unwrap_or([0.3, -0.2]);
        let velocity = config.velocity.unwrap_or([1.0, 0.0]);
        for v in start.iter().chain(&velocity) {
            finite("start/velocity", *v)?;
        }
        if config.periods == Some(0) {
            return bad("'periods' must be at least 1");
        }
        let steps_per_period = config.steps_per_period.unwrap_or(1000);
        if steps_per_period < 8 {
            return bad("'steps_per_period' must be at least 8");
        }
        if let Some(f) = &config.file {
            if f.is_empty() || f.contains(['/', '\\']) || f == "." || f == ".." {
                return bad(format!("'file' must be a plain file name, got '{f}'"));
            }
        }
        Ok(Self {
            params,
            tol,
            n_max: config.n_max,
            n: config.n.unwrap_or(0),
            lams,
            lam,
            lam1,
            lam2,
            j_max: config.j_max,
            j_values,
            k_values: config.k_values.unwrap_or_else(|| (-3..=3).collect()),
            families,
            family,
            nodes: config.nodes,
            half_width,
            gauge: config.gauge.unwrap_or(Gauge::Landau),
            start,
            velocity,
            periods: config.periods,
            steps_per_period,
            file: config.file,
        })
    }
}
