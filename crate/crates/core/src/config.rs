//! Run configuration shared by every command. Loaded from TOML; echoed into
//! every report manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{GdafError, Result};
use crate::metrics::DEFAULT_EPS;
use crate::model::{default_pair_names, JointMap, DEFAULT_SAMPLES};
use crate::segmentation::{Averaging, SegmentationParams};

/// Where work integration takes its cycle duration from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DurationMode {
    /// Use `cycle_duration_s` when recorded, else fall back to 1 s and flag it.
    #[default]
    FromData,
    /// Always integrate over a unit-length cycle.
    Unit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub eps: f64,
    pub n_samples: usize,
    pub pair_set: Vec<String>,
    /// Joints compared across entities; all common channels when unset.
    pub joints: Option<Vec<String>>,
    /// Joints exported as torque-angle loops; sagittal hip/knee/ankle when unset.
    pub loop_joints: Option<Vec<String>>,
    pub joint_map_path: Option<PathBuf>,
    pub min_stride_s: f64,
    pub robot_jump_threshold: f64,
    pub steady_state_trim_strides: usize,
    pub duration_mode: DurationMode,
    pub averaging: Averaging,
    pub heel_velocity_channel: String,
    pub robot_strike_channel: String,
    /// Human work magnitudes below this are flagged as reference-degenerate.
    pub degenerate_reference_threshold: f64,
    /// Drop flagged divergence cells from the per-speed mean.
    pub exclude_flagged_work_cells: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let seg = SegmentationParams::default();
        Self {
            eps: DEFAULT_EPS,
            n_samples: DEFAULT_SAMPLES,
            pair_set: default_pair_names(),
            joints: None,
            loop_joints: None,
            joint_map_path: None,
            min_stride_s: seg.min_stride_s,
            robot_jump_threshold: seg.robot_jump_threshold_deg,
            steady_state_trim_strides: seg.steady_state_trim_strides,
            duration_mode: DurationMode::FromData,
            averaging: seg.averaging,
            heel_velocity_channel: seg.heel_velocity_channel,
            robot_strike_channel: seg.robot_strike_channel,
            degenerate_reference_threshold: 1e-6,
            exclude_flagged_work_cells: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| GdafError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| GdafError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn check(&self) -> Result<()> {
        let positive = [
            ("eps", self.eps),
            ("min_stride_s", self.min_stride_s),
            ("robot_jump_threshold", self.robot_jump_threshold),
            ("degenerate_reference_threshold", self.degenerate_reference_threshold),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(GdafError::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.n_samples < 2 {
            return Err(GdafError::Config(format!(
                "n_samples must be >= 2, got {}",
                self.n_samples
            )));
        }
        if self.pair_set.is_empty() {
            return Err(GdafError::Config("pair_set must not be empty".into()));
        }
        if matches!(&self.joints, Some(j) if j.is_empty()) {
            return Err(GdafError::Config("joints must not be empty when set".into()));
        }
        Ok(())
    }

    pub fn segmentation(&self) -> SegmentationParams {
        SegmentationParams {
            n_samples: self.n_samples,
            min_stride_s: self.min_stride_s,
            robot_jump_threshold_deg: self.robot_jump_threshold,
            steady_state_trim_strides: self.steady_state_trim_strides,
            averaging: self.averaging,
            heel_velocity_channel: self.heel_velocity_channel.clone(),
            robot_strike_channel: self.robot_strike_channel.clone(),
        }
    }

    /// Loads the configured joint map, if any.
    pub fn joint_map(&self) -> Result<Option<JointMap>> {
        let Some(path) = &self.joint_map_path else {
            return Ok(None);
        };
        let text = fs::read_to_string(path).map_err(|e| GdafError::io(path, e))?;
        let map: JointMap = serde_json::from_str(&text)
            .map_err(|e| GdafError::Mapping(format!("{}: {e}", path.display())))?;
        map.check()?;
        Ok(Some(map))
    }
}
