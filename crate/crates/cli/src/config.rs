//! Key=value configuration file.
//!
//! Recognized keys: `units` (hyp | teich), `tolerance` (positive float used
//! for the command-level boundary audit), `cache_dir` (directory for
//! norm-ball files), `parallelism` (worker count for enumeration). Unknown
//! keys are rejected so typos cannot silently fall back to defaults. The
//! file path comes from `--config` or the MODCOUNT_CONFIG environment
//! variable; with neither set, built-in defaults apply.

use modcount_core::plane::DISTANCE_TOL;
use modcount_core::{Error, Result, Units};
use std::path::{Path, PathBuf};

pub const CONFIG_ENV_VAR: &str = "MODCOUNT_CONFIG";

#[derive(Debug, Clone)]
pub struct Config {
    pub units: Units,
    pub tolerance: f64,
    pub cache_dir: Option<PathBuf>,
    pub parallelism: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            units: Units::Hyperbolic,
            tolerance: DISTANCE_TOL,
            cache_dir: None,
            parallelism: 1,
        }
    }
}

pub fn load(flag: Option<&Path>) -> Result<Config> {
    let path = match flag {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from),
    };
    let Some(path) = path else { return Ok(Config::default()) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Io(format!("config {}: {e}", path.display())))?;
    parse(&text)
}

fn parse(text: &str) -> Result<Config> {
    let mut cfg = Config::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("config line {}: expected key=value, got '{line}'", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "units" => cfg.units = value.parse()?,
            "tolerance" => {
                let t: f64 = value
                    .parse()
                    .map_err(|_| Error::Parse(format!("tolerance '{value}' is not a number")))?;
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::BadParameter(format!(
                        "tolerance {t} must be positive and finite"
                    )));
                }
                cfg.tolerance = t;
            }
            "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
            "parallelism" => {
                let n: usize = value.parse().map_err(|_| {
                    Error::Parse(format!("parallelism '{value}' is not a worker count"))
                })?;
                if n == 0 {
                    return Err(Error::BadParameter("parallelism must be at least 1".into()));
                }
                cfg.parallelism = n;
            }
            other => {
                return Err(Error::Parse(format!("unknown config key '{other}'")));
            }
        }
    }
    Ok(cfg)
}
