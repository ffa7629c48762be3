//! Run configuration as flat `key = value` text.
//!
//! ```text
//! # default geometry
//! frame_size = 512
//! proto_len = 512
//! hop = 64
//! shorten_len = 128
//! mode = ols
//! estimator = mmse-lsa
//! ```
//!
//! Unknown keys are errors. Later assignments win, which is how command-line
//! overrides are layered on top of a file.

use std::path::{Path, PathBuf};

use crate::equalizer::{EngineConfig, FilterMode};
use crate::gains::EstimatorParams;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GainSourceSpec {
    MmseLsa,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub engine: EngineConfig,
    pub estimator: EstimatorParams,
    pub gain_source: GainSourceSpec,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            engine: EngineConfig::default(),
            estimator: EstimatorParams::default(),
            gain_source: GainSourceSpec::MmseLsa,
            seed: 0,
        }
    }
}

pub const KEYS: &[&str] = &[
    "frame_size",
    "proto_len",
    "hop",
    "sample_rate",
    "shorten_len",
    "mode",
    "estimator",
    "gains",
    "g_max",
    "alpha_dd",
    "xi_min_db",
    "gain_floor_db",
    "alpha_noise",
    "gamma_threshold",
    "init_frames",
    "lambda_floor",
    "seed",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("{key}: cannot parse {value:?}")))
}

impl Config {
    /// Parses config text on top of the defaults and validates the result.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected `key = value`, got {raw:?}", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    /// Sets one key without re-validating.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let fb = &mut self.engine.filterbank;
        let est = &mut self.estimator;
        match key {
            "frame_size" => fb.frame_size = parse_num(key, value)?,
            "proto_len" => fb.proto_len = parse_num(key, value)?,
            "hop" => fb.hop = parse_num(key, value)?,
            "sample_rate" => fb.sample_rate_hz = parse_num(key, value)?,
            "shorten_len" => self.engine.shorten_len = parse_num(key, value)?,
            "mode" => self.engine.mode = value.parse::<FilterMode>()?,
            "g_max" => self.engine.g_max = parse_num(key, value)?,
            "estimator" => match value {
                "mmse-lsa" => self.gain_source = GainSourceSpec::MmseLsa,
                other => return Err(Error::config(format!("unknown estimator {other:?}"))),
            },
            "gains" => self.gain_source = GainSourceSpec::File(PathBuf::from(value)),
            "alpha_dd" => est.alpha_dd = parse_num(key, value)?,
            "xi_min_db" => est.xi_min_db = parse_num(key, value)?,
            "gain_floor_db" => est.gain_floor_db = parse_num(key, value)?,
            "alpha_noise" => est.alpha_noise = parse_num(key, value)?,
            "gamma_threshold" => est.gamma_threshold = parse_num(key, value)?,
            "init_frames" => est.init_frames = parse_num(key, value)?,
            "lambda_floor" => est.lambda_floor = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            other => return Err(Error::config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.engine.validate()?;
        self.estimator.validate()
    }

    /// Renders every key, so `Config::parse(&cfg.to_text())` reproduces `cfg`.
    pub fn to_text(&self) -> String {
        let fb = &self.engine.filterbank;
        let est = &self.estimator;
        let source = match &self.gain_source {
            GainSourceSpec::MmseLsa => "estimator = mmse-lsa".to_string(),
            GainSourceSpec::File(p) => format!("gains = {}", p.display()),
        };
        format!(
            "frame_size = {}\nproto_len = {}\nhop = {}\nsample_rate = {}\nshorten_len = {}\nmode = {}\ng_max = {:?}\n{source}\n\
             alpha_dd = {:?}\nxi_min_db = {:?}\ngain_floor_db = {:?}\nalpha_noise = {:?}\ngamma_threshold = {:?}\n\
             init_frames = {}\nlambda_floor = {:?}\nseed = {}\n",
            fb.frame_size,
            fb.proto_len,
            fb.hop,
            fb.sample_rate_hz,
            self.engine.shorten_len,
            self.engine.mode,
            self.engine.g_max,
            est.alpha_dd,
            est.xi_min_db,
            est.gain_floor_db,
            est.alpha_noise,
            est.gamma_threshold,
            est.init_frames,
            est.lambda_floor,
            self.seed,
        )
    }
}
