//! Line-oriented `key = value` run configuration.
//!
//! Every key has a fixed type; every command has a fixed key set with
//! documented defaults (see [`Command::keys`]). Unknown keys are rejected.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;

use thiserror::Error;
use trimode_core::classical::{ClassicalError, ClassicalParams, Direction};
use trimode_core::sweep::Spacing;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid `{key}`: {reason}")]
    Validation { key: String, reason: String },
}

impl ConfigError {
    pub fn validation(key: &str, reason: impl Into<String>) -> Self {
        ConfigError::Validation {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    /// Offending key of a validation error.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Validation { key, .. } => Some(key),
            ConfigError::Parse { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    DynamicsRun,
    DynamicsFixedPoints,
    DynamicsRegions,
    DynamicsHopf,
    DynamicsRay,
    ScatterSpectrum,
    ScatterOptimize,
    ScatterGammaSweep,
    ScatterAsymMap,
    FullSpectrum,
    FullSidebandSweep,
}

type KeyTable = &'static [(&'static str, Option<&'static str>)];

const CLASSICAL: KeyTable = &[
    ("P", Some("0.005")),
    ("Delta", Some("0.5")),
    ("kappa", Some("0.05")),
    ("gamma", Some("1e-3")),
    ("direction", Some("forward")),
];

impl Command {
    pub const ALL: [Command; 11] = [
        Command::DynamicsRun,
        Command::DynamicsFixedPoints,
        Command::DynamicsRegions,
        Command::DynamicsHopf,
        Command::DynamicsRay,
        Command::ScatterSpectrum,
        Command::ScatterOptimize,
        Command::ScatterGammaSweep,
        Command::ScatterAsymMap,
        Command::FullSpectrum,
        Command::FullSidebandSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::DynamicsRun => "dynamics run",
            Command::DynamicsFixedPoints => "dynamics fixed-points",
            Command::DynamicsRegions => "dynamics regions",
            Command::DynamicsHopf => "dynamics hopf",
            Command::DynamicsRay => "dynamics ray",
            Command::ScatterSpectrum => "scatter spectrum",
            Command::ScatterOptimize => "scatter optimize",
            Command::ScatterGammaSweep => "scatter gamma-sweep",
            Command::ScatterAsymMap => "scatter asym-map",
            Command::FullSpectrum => "full spectrum",
            Command::FullSidebandSweep => "full sideband-sweep",
        }
    }

    /// Accepts `group action` with any whitespace between the words.
    pub fn parse(text: &str) -> Option<Self> {
        let words: Vec<&str> = text.split_whitespace().collect();
        let joined = words.join(" ");
        Command::ALL.into_iter().find(|c| c.name() == joined)
    }

    /// Accepted keys and their defaults. `None` marks an optional key with
    /// no default (the command documents the fallback).
    pub fn keys(self) -> Vec<(&'static str, Option<&'static str>)> {
        let own: KeyTable = match self {
            Command::DynamicsRun => &[
                ("t_end", Some("2000")),
                ("dt_out", Some("0.1")),
                ("record_from", Some("0")),
                ("forcing", Some("operating-point")),
                ("ramp", Some("1000")),
                ("rtol", Some("1e-9")),
                ("atol", Some("1e-12")),
            ],
            Command::DynamicsFixedPoints => &[],
            Command::DynamicsRegions => &[
                ("P_min", Some("1e-4")),
                ("P_max", Some("10")),
                ("P_points", Some("200")),
                ("P_spacing", Some("log")),
                ("Delta_min", Some("0.005")),
                ("Delta_max", Some("1")),
                ("Delta_points", Some("200")),
                ("Delta_spacing", Some("linear")),
            ],
            Command::DynamicsHopf => &[
                ("Delta_min", Some("0.05")),
                ("Delta_max", Some("1")),
                ("Delta_points", Some("64")),
                ("Delta_spacing", Some("linear")),
                ("P_max", Some("10")),
            ],
            Command::DynamicsRay => &[
                ("P_min", Some("0.0058")),
                ("P_max", Some("0.0156")),
                ("P_points", Some("15")),
                ("P_spacing", Some("linear")),
                ("t_end", Some("5e4")),
                ("dt_out", Some("0.05")),
            ],
            Command::ScatterSpectrum => &[
                ("kappa", Some("1")),
                ("Gamma", Some("0.1")),
                ("Gamma1", None),
                ("Gamma2", None),
                ("kappad", Some("5")),
                ("Jm", Some("0.2")),
                ("theta", Some("pi/2")),
                ("design", Some("optimal")),
                ("J0", None),
                ("G1", None),
                ("G2", None),
                ("omega_min", Some("-2")),
                ("omega_max", Some("2")),
                ("omega_points", Some("801")),
            ],
            Command::ScatterOptimize => &[
                ("kappa", Some("1")),
                ("Gamma", Some("0.1")),
                ("Gamma1", None),
                ("Gamma2", None),
                ("kappad", Some("10")),
                ("Jm", Some("auto")),
            ],
            Command::ScatterGammaSweep => &[
                ("kappa", Some("1")),
                ("kappad", Some("5")),
                ("Gamma_min", Some("1e-3")),
                ("Gamma_max", Some("0.5")),
                ("Gamma_points", Some("64")),
                ("Gamma_spacing", Some("log")),
            ],
            Command::ScatterAsymMap => &[
                ("kappa", Some("1")),
                ("kappad", Some("10")),
                ("Gamma1_min", Some("0.01")),
                ("Gamma1_max", Some("0.3")),
                ("Gamma1_points", Some("30")),
                ("Gamma1_spacing", Some("linear")),
                ("Gamma2_min", Some("0.01")),
                ("Gamma2_max", Some("0.3")),
                ("Gamma2_points", Some("30")),
                ("Gamma2_spacing", Some("linear")),
            ],
            Command::FullSpectrum => &[
                ("ratio", Some("20")),
                ("kappa", Some("1")),
                ("Gamma", Some("0.04")),
                ("kappad", Some("10")),
                ("detuning_min", Some("-2")),
                ("detuning_max", Some("2")),
                ("omega_points", Some("801")),
            ],
            Command::FullSidebandSweep => &[
                ("kappa", Some("1")),
                ("Gamma", Some("0.04")),
                ("kappad", Some("10")),
                ("ratios", Some("10, 20, 50, 85, 200, 500")),
            ],
        };
        let shared: KeyTable = match self {
            Command::DynamicsRun | Command::DynamicsFixedPoints => CLASSICAL,
            Command::DynamicsRegions | Command::DynamicsHopf => &CLASSICAL[2..],
            Command::DynamicsRay => &[
                ("Delta", Some("1")),
                ("kappa", Some("0.05")),
                ("gamma", Some("1e-3")),
                ("direction", Some("forward")),
            ],
            _ => &[],
        };
        shared.iter().chain(own).copied().collect()
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Phase angle, keeping the symbolic spelling for lossless re-emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Zero,
    HalfPi,
    Pi,
    ThreeHalvesPi,
    Radians(f64),
}

impl Theta {
    pub fn radians(self) -> f64 {
        match self {
            Theta::Zero => 0.0,
            Theta::HalfPi => FRAC_PI_2,
            Theta::Pi => PI,
            Theta::ThreeHalvesPi => 3.0 * FRAC_PI_2,
            Theta::Radians(r) => r,
        }
    }

    fn parse(text: &str) -> Option<Self> {
        let t = text.replace(' ', "").replace('π', "pi").to_ascii_lowercase();
        match t.as_str() {
            "0" => Some(Theta::Zero),
            "pi/2" => Some(Theta::HalfPi),
            "pi" => Some(Theta::Pi),
            "3pi/2" => Some(Theta::ThreeHalvesPi),
            _ => parse_finite(&t).map(Theta::Radians),
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Zero => f.write_str("0"),
            Theta::HalfPi => f.write_str("pi/2"),
            Theta::Pi => f.write_str("pi"),
            Theta::ThreeHalvesPi => f.write_str("3pi/2"),
            Theta::Radians(r) => write!(f, "{r:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Count(usize),
    Theta(Theta),
    Direction(Direction),
    Spacing(Spacing),
    /// `auto`, or a number, for keys that can be optimised.
    Auto,
    Word(&'static str),
    List(Vec<f64>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x:?}"),
            Value::Count(n) => write!(f, "{n}"),
            Value::Theta(t) => write!(f, "{t}"),
            Value::Direction(d) => f.write_str(d.label()),
            Value::Spacing(Spacing::Linear) => f.write_str("linear"),
            Value::Spacing(Spacing::Log) => f.write_str("log"),
            Value::Auto => f.write_str("auto"),
            Value::Word(w) => f.write_str(w),
            Value::List(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| format!("{x:?}")).collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Physical rate: finite and `>= 0`.
    Rate,
    /// Finite and `> 0`.
    Positive,
    /// Any finite number.
    Real,
    Count,
    Theta,
    Direction,
    Spacing,
    RateOrAuto,
    Choice(&'static [&'static str]),
    PositiveList,
}

fn kind_of(key: &str) -> Option<Kind> {
    let base = key
        .strip_suffix("_min")
        .or_else(|| key.strip_suffix("_max"))
        .map(|b| (b, Kind::Positive))
        .or_else(|| key.strip_suffix("_points").map(|b| (b, Kind::Count)))
        .or_else(|| key.strip_suffix("_spacing").map(|b| (b, Kind::Spacing)));
    if let Some((axis, kind)) = base {
        return match axis {
            "P" | "Delta" | "Gamma" | "Gamma1" | "Gamma2" => Some(kind),
            "omega" | "detuning" if kind == Kind::Positive => Some(Kind::Real),
            "omega" if kind == Kind::Count => Some(Kind::Count),
            _ => None,
        };
    }
    Some(match key {
        "P" | "kappa" | "gamma" | "Gamma" | "Gamma1" | "Gamma2" | "kappad" | "J0" | "G1" | "G2" | "ramp"
        | "record_from" => Kind::Rate,
        "t_end" | "dt_out" | "rtol" | "atol" | "ratio" => Kind::Positive,
        "Delta" => Kind::Real,
        "Jm" => Kind::RateOrAuto,
        "theta" => Kind::Theta,
        "direction" => Kind::Direction,
        "forcing" => Kind::Choice(&["operating-point", "none"]),
        "design" => Kind::Choice(&["optimal", "manual"]),
        "ratios" => Kind::PositiveList,
        _ => return None,
    })
}

fn parse_finite(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_value(key: &str, text: &str) -> Result<Value, ConfigError> {
    let kind = kind_of(key).ok_or_else(|| ConfigError::validation(key, "unknown key"))?;
    let bad = |what: &str| ConfigError::validation(key, format!("expected {what}, got `{text}`"));
    let number = || parse_finite(text).ok_or_else(|| bad("a finite number"));
    Ok(match kind {
        Kind::Rate => {
            let x = number()?;
            if x < 0.0 {
                return Err(ConfigError::validation(key, format!("rate must be nonnegative, got {x}")));
            }
            Value::Number(x)
        }
        Kind::Positive => {
            let x = number()?;
            if x <= 0.0 {
                return Err(ConfigError::validation(key, format!("must be positive, got {x}")));
            }
            Value::Number(x)
        }
        Kind::Real => Value::Number(number()?),
        Kind::Count => match text.parse::<usize>() {
            Ok(n) if n >= 1 => Value::Count(n),
            _ => return Err(bad("a positive integer")),
        },
        Kind::Theta => Value::Theta(Theta::parse(text).ok_or_else(|| bad("0, pi/2, pi, 3pi/2 or radians"))?),
        Kind::Direction => Value::Direction(match text {
            "forward" => Direction::Forward,
            "backward" => Direction::Backward,
            _ => return Err(bad("forward or backward")),
        }),
        Kind::Spacing => Value::Spacing(match text {
            "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            _ => return Err(bad("linear or log")),
        }),
        Kind::RateOrAuto => {
            if text == "auto" {
                Value::Auto
            } else {
                match parse_value("kappa", text) {
                    Ok(v) => v,
                    Err(_) => return Err(bad("auto or a nonnegative number")),
                }
            }
        }
        Kind::Choice(options) => match options.iter().find(|o| **o == text) {
            Some(o) => Value::Word(o),
            None => return Err(bad(&options.join(" or "))),
        },
        Kind::PositiveList => {
            let mut xs = Vec::new();
            for part in text.split(',') {
                match parse_finite(part.trim()) {
                    Some(x) if x > 0.0 => xs.push(x),
                    _ => return Err(bad("a comma-separated list of positive numbers")),
                }
            }
            Value::List(xs)
        }
    })
}

/// A parsed run configuration. Without a command only the key types are
/// checked; [`RunConfig::for_command`] checks the key set and fills defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub parameters: BTreeMap<String, Value>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Parse {
                line: line_no,
                message: "empty key or value".into(),
            });
        }
        if let Some(first) = seen.insert(key.to_string(), line_no) {
            return Err(ConfigError::Parse {
                line: line_no,
                message: format!("`{key}` already set on line {first}"),
            });
        }
        cfg.set(key, value)?;
    }
    match cfg.command {
        Some(c) => cfg.for_command(c),
        None => Ok(cfg),
    }
}

impl RunConfig {
    /// Sets one key from its textual value, replacing any previous value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "command" => {
                let c = Command::parse(value).ok_or_else(|| ConfigError::validation(key, format!("unknown command `{value}`")))?;
                self.command = Some(c);
            }
            "output" => self.output_path = Some(PathBuf::from(value)),
            "format" => {
                self.format = Some(Format::parse(value).ok_or_else(|| ConfigError::validation(key, "expected csv or json"))?);
            }
            _ => {
                let v = parse_value(key, value)?;
                if let Some(c) = self.command {
                    if !c.keys().iter().any(|(k, _)| *k == key) {
                        return Err(ConfigError::validation(key, format!("not accepted by `{c}`")));
                    }
                }
                self.parameters.insert(key.to_string(), v);
            }
        }
        Ok(())
    }

    /// Binds the config to `command`: rejects keys the command does not
    /// take and fills defaults for the rest.
    pub fn for_command(mut self, command: Command) -> Result<Self, ConfigError> {
        if let Some(existing) = self.command {
            if existing != command {
                return Err(ConfigError::validation(
                    "command",
                    format!("config names `{existing}` but `{command}` was requested"),
                ));
            }
        }
        let table = command.keys();
        for key in self.parameters.keys() {
            if !table.iter().any(|(k, _)| k == key) {
                return Err(ConfigError::validation(key, format!("not accepted by `{command}`")));
            }
        }
        for (key, default) in table {
            if let (Some(d), false) = (default, self.parameters.contains_key(key)) {
                let v = parse_value(key, d).expect("defaults are valid");
                self.parameters.insert(key.to_string(), v);
            }
        }
        self.command = Some(command);
        Ok(self)
    }

    /// Canonical text form; parsing it yields an equal config.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        if let Some(c) = self.command {
            out.push_str(&format!("command = {c}\n"));
        }
        if let Some(f) = self.format {
            out.push_str(&format!("format = {}\n", f.name()));
        }
        if let Some(p) = &self.output_path {
            out.push_str(&format!("output = {}\n", p.display()));
        }
        for (k, v) in &self.parameters {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.parameters.get(key)
    }

    pub fn has(&self, key: &str) -> bool {
        self.parameters.contains_key(key)
    }

    fn missing(key: &str) -> ConfigError {
        ConfigError::validation(key, "required")
    }

    pub fn number(&self, key: &str) -> Result<f64, ConfigError> {
        match self.get(key) {
            Some(Value::Number(x)) => Ok(*x),
            Some(Value::Count(n)) => Ok(*n as f64),
            Some(_) => Err(ConfigError::validation(key, "not a number here")),
            None => Err(Self::missing(key)),
        }
    }

    pub fn count(&self, key: &str) -> Result<usize, ConfigError> {
        match self.get(key) {
            Some(Value::Count(n)) => Ok(*n),
            _ => Err(Self::missing(key)),
        }
    }

    /// `None` for `auto`.
    pub fn number_or_auto(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(key) {
            Some(Value::Auto) => Ok(None),
            _ => self.number(key).map(Some),
        }
    }

    pub fn theta(&self, key: &str) -> Result<f64, ConfigError> {
        match self.get(key) {
            Some(Value::Theta(t)) => Ok(t.radians()),
            _ => Err(Self::missing(key)),
        }
    }

    pub fn direction(&self) -> Result<Direction, ConfigError> {
        match self.get("direction") {
            Some(Value::Direction(d)) => Ok(*d),
            _ => Err(Self::missing("direction")),
        }
    }

    pub fn spacing(&self, key: &str) -> Result<Spacing, ConfigError> {
        match self.get(key) {
            Some(Value::Spacing(s)) => Ok(*s),
            _ => Err(Self::missing(key)),
        }
    }

    pub fn word(&self, key: &str) -> Result<&'static str, ConfigError> {
        match self.get(key) {
            Some(Value::Word(w)) => Ok(w),
            _ => Err(Self::missing(key)),
        }
    }

    pub fn list(&self, key: &str) -> Result<&[f64], ConfigError> {
        match self.get(key) {
            Some(Value::List(xs)) => Ok(xs),
            _ => Err(Self::missing(key)),
        }
    }

    /// Classical block parameters; a config without a command is read with
    /// the `dynamics fixed-points` defaults.
    pub fn classical_params(&self) -> Result<ClassicalParams, ConfigError> {
        let cfg = match self.command {
            Some(_) => self.clone(),
            None => self.clone().for_command(Command::DynamicsFixedPoints)?,
        };
        ClassicalParams::new(
            cfg.number("P")?,
            cfg.number("Delta")?,
            cfg.number("kappa")?,
            cfg.number("gamma")?,
            cfg.direction()?,
        )
        .map_err(classical_validation)
    }
}

/// Maps a classical parameter error onto the config key it came from.
pub fn classical_validation(e: ClassicalError) -> ConfigError {
    match &e {
        ClassicalError::InvalidParameter { name, .. } | ClassicalError::UnitError { name, .. } => {
            let key = match *name {
                "power" => "P",
                "delta" => "Delta",
                other => other,
            };
            ConfigError::validation(key, e.to_string())
        }
        _ => ConfigError::validation("parameters", e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_payload() {
        let cfg = parse_config("P = 0.005\nDelta = 0.5\nkappa = 0.05\ngamma = 1e-3\ndirection = forward").unwrap();
        let p = cfg.classical_params().unwrap();
        assert_eq!(p, ClassicalParams::new(0.005, 0.5, 0.05, 1e-3, Direction::Forward).unwrap());
    }

    #[test]
    fn negative_rate_names_key() {
        let e = parse_config("kappa = -1").unwrap_err();
        assert_eq!(e.key(), Some("kappa"));
    }

    #[test]
    fn unknown_key_rejected() {
        assert_eq!(parse_config("kapa = 1").unwrap_err().key(), Some("kapa"));
        let e = parse_config("command = dynamics run\nGamma = 0.1").unwrap_err();
        assert_eq!(e.key(), Some("Gamma"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_config("# header\nP = 0.1\nnonsense\n").unwrap_err();
        assert_eq!(
            e,
            ConfigError::Parse {
                line: 3,
                message: "expected `key = value`, got `nonsense`".into()
            }
        );
        let e = parse_config("P = 0.1\nP = 0.2").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 2, .. }));
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = parse_config("\n  # only a comment\nP = 0.01   # trailing\n\n").unwrap();
        assert_eq!(cfg.number("P").unwrap(), 0.01);
    }

    #[test]
    fn theta_symbols() {
        for (text, r) in [("0", 0.0), ("pi/2", FRAC_PI_2), ("pi", PI), ("3pi/2", 3.0 * FRAC_PI_2), ("0.25", 0.25)] {
            let cfg = parse_config(&format!("theta = {text}")).unwrap();
            assert_eq!(cfg.theta("theta").unwrap(), r);
        }
        assert_eq!(parse_config("theta = 3 pi / 2").unwrap().theta("theta").unwrap(), 3.0 * FRAC_PI_2);
        assert_eq!(parse_config("theta = tau").unwrap_err().key(), Some("theta"));
    }

    #[test]
    fn defaults_filled_for_command() {
        let cfg = parse_config("command = scatter spectrum\nGamma = 0.05").unwrap();
        assert_eq!(cfg.number("Gamma").unwrap(), 0.05);
        assert_eq!(cfg.number("kappad").unwrap(), 5.0);
        assert_eq!(cfg.theta("theta").unwrap(), FRAC_PI_2);
        assert!(!cfg.has("J0"));
    }

    #[test]
    fn command_conflict_rejected() {
        let cfg = parse_config("command = dynamics run").unwrap();
        assert_eq!(cfg.for_command(Command::DynamicsHopf).unwrap_err().key(), Some("command"));
    }

    #[test]
    fn every_default_parses() {
        for c in Command::ALL {
            let cfg = RunConfig::default().for_command(c).unwrap();
            assert_eq!(Command::parse(c.name()), Some(c));
            assert!(!cfg.parameters.is_empty());
        }
    }

    #[test]
    fn list_values() {
        let cfg = parse_config("ratios = 20, 85").unwrap();
        assert_eq!(cfg.list("ratios").unwrap(), &[20.0, 85.0]);
        assert_eq!(parse_config("ratios = 20, -1").unwrap_err().key(), Some("ratios"));
    }
}
