//! Run configuration (TOML). Every field has a default, so an empty file
//! or no file at all is valid.
//!
//! ```toml
//! [tolerances]
//! collinearity_px = 0.5      # allowed spread of the centerline points
//! parallel_angle_deg = 0.3   # concurrency / parallelism threshold
//!
//! [fit]
//! max_evaluations = 400000
//! max_cycles = 60
//! reflection = 1.0
//! expansion = 2.0
//! contraction = 0.5
//! shrink = 0.5
//! restarts = 0
//! seed = 0
//! rms_threshold_px = 2.0
//! initial_alpha = 78.0
//! initial_lambda = 1.6
//!
//! [camera]
//! eye = [3.0, -4.0, 3.0]
//! target = [0.0, 0.0, 1.0]
//! up = [0.0, 0.0, 1.0]
//! focal = 1.0
//! scale = 800.0
//! offset = [400.0, 300.0]
//! image = [800.0, 600.0]
//!
//! [output]
//! format = "table"           # or "json"
//! ```
//!
//! The `DURER_CONFIG` environment variable names a config file when
//! `--config` is not given.

use std::path::Path;

use durer_core::fit::FitConfig;
use durer_core::{Camera, MeasureSettings, Vec3};
use serde::{Deserialize, Serialize};

use crate::error::{read, Error, Result};

pub const CONFIG_ENV: &str = "DURER_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub collinearity_px: f64,
    pub parallel_angle_deg: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            collinearity_px: durer_core::analysis::DEFAULT_COLLINEARITY_PX,
            parallel_angle_deg: durer_core::analysis::DEFAULT_PARALLEL_DEG,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSection {
    pub max_evaluations: usize,
    pub max_cycles: usize,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    pub restarts: usize,
    pub seed: u64,
    pub rms_threshold_px: f64,
    pub initial_alpha: f64,
    pub initial_lambda: f64,
}

impl Default for FitSection {
    fn default() -> Self {
        let d = FitConfig::default();
        Self {
            max_evaluations: d.max_evaluations,
            max_cycles: d.max_cycles,
            reflection: d.reflection,
            expansion: d.expansion,
            contraction: d.contraction,
            shrink: d.shrink,
            restarts: d.restarts,
            seed: d.seed,
            rms_threshold_px: d.rms_threshold,
            initial_alpha: 78.0,
            initial_lambda: 1.6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CameraSection {
    pub eye: [f64; 3],
    pub target: [f64; 3],
    pub up: [f64; 3],
    pub focal: f64,
    pub scale: f64,
    pub offset: [f64; 2],
    /// Image size written into synthetic annotations.
    pub image: [f64; 2],
}

impl Default for CameraSection {
    fn default() -> Self {
        Self {
            eye: [3.0, -4.0, 3.0],
            target: [0.0, 0.0, 1.0],
            up: [0.0, 0.0, 1.0],
            focal: 1.0,
            scale: 800.0,
            offset: [400.0, 300.0],
            image: [800.0, 600.0],
        }
    }
}

impl CameraSection {
    pub fn camera(&self) -> Result<Camera> {
        Camera::look_at(
            Vec3::from_array(self.eye),
            Vec3::from_array(self.target),
            Vec3::from_array(self.up),
            self.focal,
            self.scale,
            self.offset,
        )
        .map_err(|e| Error::Config(format!("camera: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub fit: FitSection,
    pub camera: CameraSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?).map_err(|e| match e {
            Error::Config(m) => Error::Parse { path: path.into(), message: m },
            other => other,
        })
    }

    /// `--config` wins over `DURER_CONFIG`; with neither, defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        if !(t.collinearity_px > 0.0 && t.parallel_angle_deg > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        let f = &self.fit;
        if f.max_evaluations < 1 || f.max_cycles < 1 {
            return Err(Error::Config("fit budget must be at least 1".into()));
        }
        if !(f.reflection > 0.0 && f.expansion > 1.0 && f.contraction > 0.0 && f.contraction < 1.0 && f.shrink > 0.0 && f.shrink < 1.0) {
            return Err(Error::Config("simplex coefficients out of range".into()));
        }
        if f.rms_threshold_px.is_nan() || f.rms_threshold_px <= 0.0 {
            return Err(Error::Config("rms threshold must be positive".into()));
        }
        self.camera.camera()?;
        Ok(())
    }

    pub fn measure_settings(&self) -> MeasureSettings {
        MeasureSettings { collinearity_px: self.tolerances.collinearity_px }
    }

    pub fn fit_config(&self) -> FitConfig {
        let f = &self.fit;
        FitConfig {
            max_evaluations: f.max_evaluations,
            max_cycles: f.max_cycles,
            reflection: f.reflection,
            expansion: f.expansion,
            contraction: f.contraction,
            shrink: f.shrink,
            restarts: f.restarts,
            seed: f.seed,
            rms_threshold: f.rms_threshold_px,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_default() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn partial_sections() {
        let cfg = RunConfig::parse("[tolerances]\ncollinearity_px = 1.5\n[output]\nformat = \"json\"\n").unwrap();
        assert_eq!(cfg.tolerances.collinearity_px, 1.5);
        assert_eq!(cfg.tolerances.parallel_angle_deg, 0.3);
        assert_eq!(cfg.output.format, Format::Json);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::parse("[tolerances]\ncollinearity_px = 0.0\n").is_err());
        assert!(RunConfig::parse("[fit]\nmax_evaluations = 0\n").is_err());
        assert!(RunConfig::parse("[fit]\nbogus = 1\n").is_err());
        assert!(RunConfig::parse("[camera]\neye = [0.0, 0.0, 1.0]\n").is_err());
    }
}
