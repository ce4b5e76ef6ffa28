use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{SeShape, SeSpec};
use crate::ingest::{default_cache_dir, Selector, CACHE_ENV};
use crate::pipelines::{Method1Params, Method2Params, Thresholds};

/// Output encoding of every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(Error::InvalidParameter(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Table => "table",
        })
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub method1: Method1Params,
    pub method2: Method2Params,
    pub thresholds: Thresholds,
    pub cache_dir: PathBuf,
    /// `None` lets the subcommand pick its natural format.
    pub format: Option<OutputFormat>,
    /// `None` uses the global thread pool.
    pub threads: Option<usize>,
    pub url_template: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            method1: Method1Params::default(),
            method2: Method2Params::default(),
            thresholds: Thresholds::default(),
            cache_dir: default_cache_dir(),
            format: None,
            threads: None,
            url_template: None,
        }
    }
}

/// Keys accepted in config files.
pub const CONFIG_KEYS: &[&str] = &[
    "selector",
    "m1_selector",
    "m2_selector",
    "thickness",
    "resolution",
    "dot_radius",
    "growth_shape",
    "growth_step",
    "max_growth_iters",
    "se",
    "skeleton_se",
    "box_min",
    "box_max",
    "face_resolution",
    "stroke_radius",
    "trace",
    "geodesic_se",
    "max_iters",
    "rho_threshold",
    "delta_threshold",
    "format",
    "threads",
    "cache_dir",
    "url_template",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::InvalidParameter(format!("bad value {value:?} for {key}"))),
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let k = key.as_str();
        match k {
            "selector" => {
                let s: Selector = value.parse()?;
                self.method1.selector = s;
                self.method2.selector = s;
            }
            "m1_selector" => self.method1.selector = value.parse()?,
            "m2_selector" => self.method2.selector = value.parse()?,
            "thickness" => self.method1.slice_thickness = parse(k, value)?,
            "resolution" => self.method1.resolution = parse(k, value)?,
            "dot_radius" => self.method1.dot_radius = parse(k, value)?,
            "growth_shape" => self.method1.growth.shape = value.parse::<SeShape>()?,
            "growth_step" => self.method1.growth.step = parse(k, value)?,
            "max_growth_iters" => self.method1.max_growth_iters = parse(k, value)?,
            "se" => {
                let se: SeSpec = value.parse()?;
                self.method1.skeleton_se = se;
                self.method2.geodesic_se = se;
            }
            "skeleton_se" => self.method1.skeleton_se = value.parse()?,
            "box_min" => self.method1.box_min = parse(k, value)?,
            "box_max" => self.method1.box_max = parse(k, value)?,
            "face_resolution" => self.method2.resolution = parse(k, value)?,
            "stroke_radius" => self.method2.stroke_radius = parse(k, value)?,
            "trace" => self.method2.trace = parse_bool(k, value)?,
            "geodesic_se" => self.method2.geodesic_se = value.parse()?,
            "max_iters" => self.method2.max_iters = parse(k, value)?,
            "rho_threshold" => self.thresholds.rho = parse(k, value)?,
            "delta_threshold" => self.thresholds.delta = parse(k, value)?,
            "format" => self.format = Some(value.parse()?),
            "threads" => self.threads = Some(parse(k, value)?),
            "cache_dir" => self.cache_dir = PathBuf::from(value.trim()),
            "url_template" => self.url_template = Some(value.trim().to_string()),
            _ => return Err(Error::InvalidParameter(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("config line {}: expected key = value", n + 1))
            })?;
            self.set(key, value)
                .map_err(|e| Error::InvalidParameter(format!("config line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_config_file(&mut self, path: &Path) -> Result<()> {
        self.apply_config_text(&std::fs::read_to_string(path)?)
    }

    /// Cache directory from the environment, if set and non-empty.
    pub fn apply_env(&mut self) {
        if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
            self.cache_dir = PathBuf::from(dir);
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.method1.validate()?;
        self.method2.validate()?;
        if !(self.thresholds.rho >= 0.0) {
            return Err(Error::InvalidParameter("rho threshold must be non-negative".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be positive".into()));
        }
        Ok(())
    }
}
