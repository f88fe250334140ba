//! Self-contained data bundle consumed by the browser gait player: both
//! entities' grids, channel labels, speeds and the joint map.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{GdafError, Result};
use crate::io::GaitSetDocument;
use crate::model::{speed_key, validate_gaitset, Entity, GaitSet, JointMap};
use crate::scalar::Scalar;

pub const VIEWER_FORMAT: &str = "gdaf-viewer-bundle";
pub const VIEWER_VERSION: u32 = 1;

/// One entry of the union speed list, tagged with the entities that have it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedTag {
    pub speed_mps: f64,
    pub entities: Vec<Entity>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct ViewerBundle<T> {
    pub format: String,
    pub version: u32,
    pub speeds: Vec<SpeedTag>,
    pub human: GaitSetDocument<T>,
    pub robot: GaitSetDocument<T>,
    pub joint_map: JointMap,
}

/// Union of both speed grids in ascending order, each tagged per entity.
pub fn union_speeds<T: Scalar>(human: &GaitSet<T>, robot: &GaitSet<T>) -> Vec<SpeedTag> {
    let mut tags: Vec<SpeedTag> = Vec::new();
    for (entity, gs) in [(Entity::Human, human), (Entity::Robot, robot)] {
        for &s in gs.speed_grid.speeds() {
            match tags.iter_mut().find(|t| speed_key(t.speed_mps) == speed_key(s)) {
                Some(t) => t.entities.push(entity),
                None => tags.push(SpeedTag {
                    speed_mps: s,
                    entities: vec![entity],
                }),
            }
        }
    }
    tags.sort_by(|a, b| a.speed_mps.total_cmp(&b.speed_mps));
    tags
}

impl<T: Scalar> ViewerBundle<T> {
    /// Builds a bundle from two valid gait sets. Without an explicit map the
    /// identity over the robot channels present in the human set is used.
    pub fn new(human: &GaitSet<T>, robot: &GaitSet<T>, joint_map: Option<JointMap>) -> Result<Self> {
        for gs in [human, robot] {
            let v = validate_gaitset(gs);
            if !v.is_empty() {
                return Err(GdafError::Invalid(v));
            }
        }
        let joint_map = joint_map.unwrap_or_else(|| {
            JointMap::identity(
                robot
                    .channels
                    .iter()
                    .filter(|c| human.channel_index(&c.name).is_some())
                    .map(|c| c.name.as_str()),
            )
        });
        Ok(Self {
            format: VIEWER_FORMAT.into(),
            version: VIEWER_VERSION,
            speeds: union_speeds(human, robot),
            human: GaitSetDocument::from_gaitset(human),
            robot: GaitSetDocument::from_gaitset(robot),
            joint_map,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| GdafError::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| GdafError::io(path, e))?;
        let b: Self = serde_json::from_str(&text).map_err(|e| GdafError::Malformed {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if b.format != VIEWER_FORMAT || b.version != VIEWER_VERSION {
            return Err(GdafError::Schema(format!(
                "unsupported viewer bundle {} v{}",
                b.format, b.version
            )));
        }
        Ok(b)
    }

    /// Both entities as gait sets.
    pub fn gaitsets(&self) -> Result<(GaitSet<T>, GaitSet<T>)> {
        Ok((self.human.clone().into_gaitset()?, self.robot.clone().into_gaitset()?))
    }
}
