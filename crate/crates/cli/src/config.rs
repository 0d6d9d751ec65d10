//! Experiment configuration: the JSON file format, inline overrides and
//! validation.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use spinorq::{GeneratorConvention, Sign};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Overrides the default output directory when neither the flag nor the
/// config file names one.
pub const OUT_DIR_ENV: &str = "SPINORQ_OUT_DIR";

/// Largest register for kinds that prepare and sample a state.
pub const MAX_STATE_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Classify,
    Search,
    HamSearch,
    VerifyAlgebra,
    Chirality,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Classify => "classify",
            Kind::Search => "search",
            Kind::HamSearch => "ham-search",
            Kind::VerifyAlgebra => "verify-algebra",
            Kind::Chirality => "chirality",
        }
    }

    fn prepares_state(self) -> bool {
        self != Kind::VerifyAlgebra
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format {other:?} (expected json, csv or svg)")),
        }
    }
}

/// An angle given either in radians or as a rational multiple of π such as
/// `"pi/6"` or `"3pi/8"`. The original spelling is kept so configs survive a
/// JSON round trip unchanged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Expr(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64, String> {
        match self {
            Angle::Radians(x) if x.is_finite() => Ok(*x),
            Angle::Radians(x) => Err(format!("angle {x} is not finite")),
            Angle::Expr(s) => parse_angle(s),
        }
    }

    /// Numbers become [`Angle::Radians`], anything else is kept as an expression.
    pub fn from_flag(s: &str) -> Angle {
        match s.trim().parse::<f64>() {
            Ok(x) => Angle::Radians(x),
            Err(_) => Angle::Expr(s.trim().to_string()),
        }
    }
}

/// Parses `[-][k][*]pi[/d]` (with `π` accepted for `pi`) or a plain number.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let bad = || format!("cannot read angle {text:?}: expected radians or a form like pi/6, 3pi/8, -pi/4");
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('π', "pi");
    if let Ok(x) = s.parse::<f64>() {
        return if x.is_finite() { Ok(x) } else { Err(bad()) };
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.as_str()),
    };
    let (numerator, denominator) = match body.split_once('/') {
        Some((num, den)) => (num, Some(den)),
        None => (body, None),
    };
    let coefficient = numerator.strip_suffix("pi").ok_or_else(bad)?;
    let coefficient = coefficient.strip_suffix('*').unwrap_or(coefficient);
    let k: f64 = if coefficient.is_empty() {
        1.0
    } else {
        coefficient.parse::<u64>().map_err(|_| bad())? as f64
    };
    let d: f64 = match denominator {
        Some(den) => {
            let d = den.parse::<u64>().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            d as f64
        }
        None => 1.0,
    };
    let value = k * PI / d;
    Ok(if negative { -value } else { value })
}

/// Parses `+1`, `-1`, `1`, `+`, `-`, `plus` or `minus`.
pub fn parse_sign(s: &str) -> Result<Sign, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "+1" | "1" | "+" | "plus" => Ok(Sign::Plus),
        "-1" | "-" | "minus" => Ok(Sign::Minus),
        other => Err(format!("cannot read sign {other:?}: expected +1 or -1")),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub kind: Kind,
    pub n_qubits: usize,
    #[serde(default)]
    pub convention: GeneratorConvention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    /// Branch signs of the `Γ_j` eigenstate before its σ₂/σ₃ slot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_signs: Option<Vec<Sign>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub middle_sign: Option<Sign>,
    /// Sign of the classification observable `±Γ_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator_sign: Option<Sign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_min: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub include_odd: bool,
    /// Omitted for `classify` means "use the Hoeffding budget"; `0` means exact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<Format>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_G_MIN: f64 = 0.5;

impl ExperimentConfig {
    pub fn theta_radians(&self) -> Result<Option<f64>, CliError> {
        self.theta
            .as_ref()
            .map(|a| a.radians().map_err(|m| CliError::config(m, "theta")))
            .transpose()
    }

    pub fn theta_required(&self) -> Result<f64, CliError> {
        self.theta_radians()?
            .ok_or_else(|| CliError::config(format!("{} needs theta", self.kind), "theta"))
    }

    pub fn i(&self) -> usize {
        self.i.unwrap_or(2)
    }

    pub fn j(&self) -> usize {
        self.j.unwrap_or(1)
    }

    pub fn formats(&self) -> Vec<Format> {
        let mut f = self.formats.clone().unwrap_or_else(|| vec![Format::Json]);
        f.sort();
        f.dedup();
        f
    }

    pub fn base_name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{}-n{}-seed{}", self.kind, self.n_qubits, self.seed))
    }

    /// Flag or config value, then the environment override.
    pub fn resolved_out_dir(&self) -> Option<PathBuf> {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(
                format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", self.schema_version),
                "schema_version",
            ));
        }
        let limit = if self.kind.prepares_state() {
            MAX_STATE_QUBITS
        } else {
            spinorq::clifford::MAX_SYMBOLIC_QUBITS
        };
        if self.n_qubits == 0 || self.n_qubits > limit {
            return Err(CliError::config(
                format!("n_qubits = {} outside [1, {limit}] for {}", self.n_qubits, self.kind),
                "n_qubits",
            ));
        }
        if self.formats.as_ref().is_some_and(|f| f.is_empty()) {
            return Err(CliError::config("formats must not be empty", "formats"));
        }
        if let Some(name) = &self.name {
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(CliError::config(format!("name {name:?} must be a plain file stem"), "name"));
            }
        }
        if !self.kind.prepares_state() {
            return Ok(());
        }
        let theta = self.theta_required()?;
        if !(theta > 0.0 && theta < PI / 2.0) {
            return Err(CliError::config(format!("theta = {theta} outside (0, pi/2)"), "theta"));
        }
        let top = 2 * self.n_qubits;
        for (field, value) in [("i", self.i()), ("j", self.j())] {
            if value == 0 || value > top {
                return Err(CliError::config(format!("{field} = {value} outside [1, {top}]"), field));
            }
        }
        if self.i() == self.j() {
            return Err(CliError::config(format!("i and j must differ, both are {}", self.i()), "i"));
        }
        Ok(())
    }
}

/// Values given on the command line; `None` leaves the config untouched.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n_qubits: Option<usize>,
    pub theta: Option<Angle>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub g_min: Option<f64>,
    pub operator_sign: Option<Sign>,
    pub convention: Option<GeneratorConvention>,
    pub out_dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub name: Option<String>,
    pub include_odd: bool,
}

fn json<T: Serialize>(v: &Option<T>) -> Option<Value> {
    v.as_ref()
        .map(|x| serde_json::to_value(x).expect("config values serialize"))
}

impl Overrides {
    fn apply(&self, obj: &mut Map<String, Value>) {
        let entries = [
            ("n_qubits", json(&self.n_qubits)),
            ("theta", json(&self.theta)),
            ("i", json(&self.i)),
            ("j", json(&self.j)),
            ("shots", json(&self.shots)),
            ("seed", json(&self.seed)),
            ("delta", json(&self.delta)),
            ("g_min", json(&self.g_min)),
            ("operator_sign", json(&self.operator_sign)),
            ("convention", json(&self.convention)),
            ("out_dir", json(&self.out_dir)),
            ("formats", json(&self.formats)),
            ("name", json(&self.name)),
            ("include_odd", self.include_odd.then_some(Value::Bool(true))),
        ];
        for (key, value) in entries {
            if let Some(v) = value {
                obj.insert(key.to_string(), v);
            }
        }
    }
}

pub fn read_config_value(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::config(
            format!("{}: config must be a JSON object", path.display()),
            "",
        )),
        Err(e) => Err(CliError::config(format!("{}: {e}", path.display()), "")),
    }
}

/// Builds a config from an optional file, the subcommand's kind and inline
/// overrides. Without a file the current schema version is implied.
pub fn assemble(
    file: Option<&Path>,
    kind: Option<Kind>,
    overrides: &Overrides,
) -> Result<ExperimentConfig, CliError> {
    let mut obj = match file {
        Some(p) => read_config_value(p)?,
        None => {
            let mut m = Map::new();
            m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
            m
        }
    };
    if let Some(kind) = kind {
        if let Some(found) = obj.get("kind").and_then(Value::as_str) {
            if found != kind.as_str() {
                return Err(CliError::config(
                    format!("config is for {found:?} but the subcommand is {kind}"),
                    "kind",
                ));
            }
        }
        obj.insert("kind".into(), Value::from(kind.as_str()));
    }
    overrides.apply(&mut obj);
    let config: ExperimentConfig = serde_json::from_value(Value::Object(obj)).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .filter(|_| msg.starts_with("missing field") || msg.starts_with("unknown field"))
            .unwrap_or("")
            .to_string();
        CliError::config(msg, field)
    })?;
    config.validate()?;
    Ok(config)
}
