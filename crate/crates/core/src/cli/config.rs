//! Flat `key = value` pipeline configuration.

use std::path::Path;

use crate::degrade::WienerParams;
use crate::error::{Error, Result};
use crate::notch::NotchParams;
use crate::preprocess::PreprocessParams;
use crate::synth::DegradeParams;

pub const SEED_ENV: &str = "LENTIRESTORE_SEED";

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub preprocess: PreprocessParams,
    pub notch: NotchParams,
    pub wiener: WienerParams,
    pub degrade: DegradeParams,
    /// Stroke angle used by the node metric.
    pub line_angle: f64,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            preprocess: PreprocessParams::default(),
            notch: NotchParams::default(),
            wiener: WienerParams::default(),
            degrade: DegradeParams::default(),
            line_angle: 80.0,
            seed: 0,
        }
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("{key}: cannot parse '{value}'")))
}

impl PipelineConfig {
    pub const KEYS: &'static [&'static str] = &[
        "threshold",
        "kernel",
        "passes",
        "adaptive_max",
        "keep_angle",
        "half_width",
        "dc_radius",
        "zero_percentile",
        "notch_binarize",
        "cutoff",
        "binarize",
        "gain_cap",
        "pitch",
        "tilt",
        "shift",
        "noise_sigma",
        "phase",
        "line_angle",
        "seed",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "threshold" => self.preprocess.threshold = number(key, value)?,
            "kernel" => self.preprocess.kernel = number(key, value)?,
            "passes" => self.preprocess.passes = number(key, value)?,
            "adaptive_max" => self.preprocess.adaptive_max = number(key, value)?,
            "keep_angle" => self.notch.keep_angle = number(key, value)?,
            "half_width" => self.notch.half_width = number(key, value)?,
            "dc_radius" => self.notch.dc_radius = number(key, value)?,
            "zero_percentile" => self.notch.zero_percentile = number(key, value)?,
            "notch_binarize" => {
                self.notch.binarize_threshold = match value {
                    "none" | "" => None,
                    v => Some(number(key, v)?),
                }
            }
            "cutoff" => self.wiener.cutoff = number(key, value)?,
            "binarize" => self.wiener.binarize_threshold = number(key, value)?,
            "gain_cap" => self.wiener.gain_cap = number(key, value)?,
            "pitch" => self.degrade.pitch = number(key, value)?,
            "tilt" => self.degrade.tilt = number(key, value)?,
            "shift" => self.degrade.shift = number(key, value)?,
            "noise_sigma" => self.degrade.noise_sigma = number(key, value)?,
            "phase" => self.degrade.phase = number(key, value)?,
            "line_angle" => self.line_angle = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            other => {
                return Err(Error::Parse(format!(
                    "unknown config key '{other}' (known: {})",
                    Self::KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn merge_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("config line {}: expected key = value", i + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Parse(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::io(path, e),
        })?;
        self.merge_text(&text)
    }

    /// Overrides the seed from the environment value, if present.
    pub fn merge_env_seed(&mut self, value: Option<&str>) -> Result<()> {
        if let Some(v) = value {
            self.seed = number(SEED_ENV, v.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.preprocess.validate()?;
        self.notch.validate()?;
        self.wiener.validate()?;
        self.degrade.validate()
    }
}
