//! Experiment configuration as a flat `key = value` file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use kaczmarz_accel::{AuxPolicy, Error, Fallback, GalleryKind, Mode, Result, TransformTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Plain,
    Accel(Mode),
}

impl RunMode {
    pub fn name(self) -> &'static str {
        match self {
            RunMode::Plain => "plain",
            RunMode::Accel(m) => m.name(),
        }
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("plain") {
            Ok(RunMode::Plain)
        } else {
            s.parse().map(RunMode::Accel)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown output format `{s}`"))),
        }
    }
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// `None` keeps the mode's default policy.
fn fallback_name(f: Option<Fallback>) -> &'static str {
    match f {
        None => "default",
        Some(Fallback::PreviousZ) => "previous-z",
        Some(Fallback::LastIterate) => "last-iterate",
        Some(Fallback::Abort) => "abort",
    }
}

fn parse_fallback(s: &str) -> Result<Option<Fallback>> {
    match s.trim().to_ascii_lowercase().as_str() {
        "default" => Ok(None),
        "previous-z" => Ok(Some(Fallback::PreviousZ)),
        "last-iterate" => Ok(Some(Fallback::LastIterate)),
        "abort" | "none" => Ok(Some(Fallback::Abort)),
        _ => Err(Error::Config(format!("unknown fallback policy `{s}`"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub matrix: GalleryKind,
    pub size: usize,
    pub precondition: bool,
    pub mode: RunMode,
    pub transform: TransformTag,
    pub k: usize,
    /// `random`, `ones` or `canonical`.
    pub aux: String,
    /// Seeds the auxiliary vectors and the noise.
    pub seed: u64,
    pub noise: Option<f64>,
    /// Outer iterations (sweeps in plain mode).
    pub max_iter: usize,
    pub lanczos: bool,
    pub fallback: Option<Fallback>,
    pub stop_on_signal: bool,
    pub spectral: bool,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            matrix: GalleryKind::Parter,
            size: 1000,
            precondition: true,
            mode: RunMode::Accel(Mode::Ak),
            transform: TransformTag::VectorEpsilon,
            k: 5,
            aux: "random".into(),
            seed: 0,
            noise: None,
            max_iter: 30,
            lanczos: false,
            fallback: None,
            stop_on_signal: false,
            spectral: false,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

const KEYS: [&str; 16] = [
    "matrix",
    "size",
    "precondition",
    "mode",
    "transform",
    "k",
    "aux",
    "seed",
    "noise",
    "max_iter",
    "lanczos",
    "fallback",
    "stop_on_signal",
    "spectral",
    "out",
    "format",
];

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "`{key}` expects a boolean, got `{v}`"
        ))),
    }
}

fn parse_num<N: FromStr>(key: &str, v: &str) -> Result<N> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}` expects a number, got `{v}`")))
}

impl ExperimentConfig {
    pub fn aux_policy(&self) -> Result<AuxPolicy> {
        AuxPolicy::parse(&self.aux, self.seed)
    }

    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "matrix" => self.matrix = v.parse()?,
            "size" => self.size = parse_num(key, v)?,
            "precondition" => self.precondition = parse_bool(key, v)?,
            "mode" => self.mode = v.parse()?,
            "transform" => self.transform = v.parse()?,
            "k" => self.k = parse_num(key, v)?,
            "aux" => {
                AuxPolicy::parse(v, 0)?;
                self.aux = v.to_ascii_lowercase();
            }
            "seed" => self.seed = parse_num(key, v)?,
            "noise" => {
                self.noise = match v {
                    "none" | "" => None,
                    _ => Some(parse_num(key, v)?),
                }
            }
            "max_iter" => self.max_iter = parse_num(key, v)?,
            "lanczos" => self.lanczos = parse_bool(key, v)?,
            "fallback" => self.fallback = parse_fallback(v)?,
            "stop_on_signal" => self.stop_on_signal = parse_bool(key, v)?,
            "spectral" => self.spectral = parse_bool(key, v)?,
            "out" => self.out = (!v.is_empty() && v != "-").then(|| PathBuf::from(v)),
            "format" => self.format = v.parse()?,
            other => {
                return Err(Error::Config(format!(
                    "unknown configuration key `{other}`"
                )))
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> String {
        match key {
            "matrix" => self.matrix.to_string(),
            "size" => self.size.to_string(),
            "precondition" => self.precondition.to_string(),
            "mode" => self.mode.to_string(),
            "transform" => self.transform.to_string(),
            "k" => self.k.to_string(),
            "aux" => self.aux.clone(),
            "seed" => self.seed.to_string(),
            "noise" => self.noise.map_or("none".into(), |d| format!("{d:?}")),
            "max_iter" => self.max_iter.to_string(),
            "lanczos" => self.lanczos.to_string(),
            "fallback" => fallback_name(self.fallback).into(),
            "stop_on_signal" => self.stop_on_signal.to_string(),
            "spectral" => self.spectral.to_string(),
            "out" => self
                .out
                .as_ref()
                .map_or("-".into(), |p| p.display().to_string()),
            "format" => self.format.name().into(),
            _ => unreachable!(),
        }
    }

    /// Every key, one `key = value` line each.
    pub fn to_kv_string(&self) -> String {
        KEYS.iter()
            .map(|k| format!("{k} = {}\n", self.get(k)))
            .collect()
    }

    /// Ordered `(key, value)` pairs, as written by `to_kv_string`.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        KEYS.iter().map(|&k| (k, self.get(k))).collect()
    }

    /// Reads `key = value` lines over the defaults; `#` starts a comment.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::Config(format!(
                "size must be >= 2, got {}",
                self.size
            )));
        }
        if let RunMode::Accel(_) = self.mode {
            if self.k == 0 {
                return Err(Error::Config("k must be >= 1".into()));
            }
            if self.k > self.size {
                return Err(Error::Config(format!(
                    "k = {} exceeds the system order {}",
                    self.k, self.size
                )));
            }
        }
        if let Some(d) = self.noise {
            if !(d >= 0.0) || !d.is_finite() {
                return Err(Error::Config(format!("noise must be >= 0, got {d}")));
            }
        }
        self.aux_policy()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig {
            matrix: GalleryKind::Lesp,
            size: 10000,
            mode: RunMode::Accel(Mode::Rk),
            transform: TransformTag::Topological,
            noise: Some(1e-5),
            fallback: Some(Fallback::Abort),
            out: Some(PathBuf::from("out/run.csv")),
            format: OutputFormat::Json,
            aux: "ones".into(),
            seed: 42,
            ..ExperimentConfig::default()
        };
        let back = ExperimentConfig::from_kv_str(&cfg.to_kv_string()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_kv_string(), cfg.to_kv_string());
    }

    #[test]
    fn comments_and_defaults() {
        let cfg =
            ExperimentConfig::from_kv_str("# parter run\nsize = 500 # small\n\nmode = plain\n")
                .unwrap();
        assert_eq!(cfg.size, 500);
        assert_eq!(cfg.mode, RunMode::Plain);
        assert_eq!(cfg.k, 5);
    }

    #[test]
    fn bad_lines_are_config_errors() {
        assert!(ExperimentConfig::from_kv_str("size 500").is_err());
        assert!(ExperimentConfig::from_kv_str("colour = red").is_err());
        assert!(ExperimentConfig::from_kv_str("matrix = baart").is_err());
        assert!(ExperimentConfig::from_kv_str("k = five").is_err());
    }
}
