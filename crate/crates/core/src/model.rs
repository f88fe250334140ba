//! Domain types: channels, speed grids, cycle-normalized series and the
//! channel x speed container holding both entities' trajectories.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GdafError, Result};
use crate::scalar::Scalar;

/// Samples per normalized gait cycle (0%..100% at 1% steps).
pub const DEFAULT_SAMPLES: usize = 101;

/// Speeds closer than this are treated as the same grid point.
pub const SPEED_RESOLUTION: f64 = 1e-6;

pub const CENTRAL_CHANNELS: [&str; 3] = ["pelvis_tilt", "pelvis_list", "pelvis_rotation"];

pub const BILATERAL_JOINTS: [&str; 6] = [
    "hip_flexion",
    "hip_adduction",
    "hip_rotation",
    "knee",
    "ankle",
    "subtalar",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnatomicalGroup {
    Pelvis,
    Hip,
    Knee,
    Ankle,
    Subtalar,
    /// Non-canonical channels (robot waist, arms, ...). Carried but not analyzed by default.
    Other,
}

impl AnatomicalGroup {
    fn lateralized(self) -> bool {
        !matches!(self, AnatomicalGroup::Pelvis | AnatomicalGroup::Other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelId {
    pub name: String,
    pub side: Side,
    #[serde(rename = "group")]
    pub anatomical_group: AnatomicalGroup,
}

impl ChannelId {
    pub fn new(name: impl Into<String>, side: Side, anatomical_group: AnatomicalGroup) -> Self {
        Self {
            name: name.into(),
            side,
            anatomical_group,
        }
    }

    /// Infers side and group from a channel label.
    ///
    /// Sides come from an `_l`/`_r` suffix or a `left_`/`right_` prefix;
    /// groups from the first anatomical keyword found in the label.
    pub fn from_name(name: impl Into<String>) -> Self {
        let name = name.into();
        let lower = name.to_ascii_lowercase();
        let side = if lower.ends_with("_l") || lower.starts_with("left_") {
            Side::Left
        } else if lower.ends_with("_r") || lower.starts_with("right_") {
            Side::Right
        } else {
            Side::Central
        };
        let group = if lower.contains("pelvis") {
            AnatomicalGroup::Pelvis
        } else if lower.contains("subtalar") {
            AnatomicalGroup::Subtalar
        } else if lower.contains("hip") {
            AnatomicalGroup::Hip
        } else if lower.contains("knee") {
            AnatomicalGroup::Knee
        } else if lower.contains("ankle") {
            AnatomicalGroup::Ankle
        } else {
            AnatomicalGroup::Other
        };
        Self::new(name, side, group)
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// The canonical channel vocabulary: three pelvis channels followed by
/// left/right instances of the six bilateral joints.
pub fn canonical_channels() -> Vec<ChannelId> {
    let mut out: Vec<ChannelId> = CENTRAL_CHANNELS
        .iter()
        .map(|n| ChannelId::from_name(*n))
        .collect();
    for joint in BILATERAL_JOINTS {
        out.push(ChannelId::from_name(format!("{joint}_l")));
        out.push(ChannelId::from_name(format!("{joint}_r")));
    }
    out
}

/// Ascending walking speeds in m/s.
///
/// Construction through [`SpeedGrid::new`] enforces the ordering rule;
/// [`SpeedGrid::from_vec_unchecked`] exists so that loaded documents can be
/// reported on by [`validate_gaitset`] instead of failing outright.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpeedGrid(Vec<f64>);

impl SpeedGrid {
    pub fn new(speeds_mps: Vec<f64>) -> Result<Self> {
        let grid = Self(speeds_mps);
        match grid.problems().into_iter().next() {
            None => Ok(grid),
            Some(msg) => Err(GdafError::Schema(msg)),
        }
    }

    pub fn from_vec_unchecked(speeds_mps: Vec<f64>) -> Self {
        Self(speeds_mps)
    }

    /// 28 speeds, 0.50 to 1.85 m/s in 0.05 m/s steps.
    pub fn reference() -> Self {
        Self((0..28).map(|i| f64::from(50 + 5 * i) / 100.0).collect())
    }

    pub fn speeds(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, speed: f64) -> Option<usize> {
        let key = speed_key(speed);
        self.0.iter().position(|s| speed_key(*s) == key)
    }

    /// Speeds present in both grids, in ascending order.
    pub fn intersect(&self, other: &SpeedGrid) -> Vec<f64> {
        self.0
            .iter()
            .copied()
            .filter(|s| other.index_of(*s).is_some())
            .collect()
    }

    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.0.is_empty() {
            out.push("speed grid is empty".to_string());
        }
        for (i, s) in self.0.iter().enumerate() {
            if !(s.is_finite() && *s > 0.0) {
                out.push(format!("speed #{i} ({s}) must be finite and > 0"));
            }
        }
        for (i, w) in self.0.windows(2).enumerate() {
            if w[1] <= w[0] {
                out.push(format!(
                    "speeds not strictly increasing at #{}: {} then {}",
                    i + 1,
                    w[0],
                    w[1]
                ));
            }
        }
        out
    }
}

/// Integer key for speed comparison at [`SPEED_RESOLUTION`].
pub fn speed_key(speed: f64) -> i64 {
    (speed / SPEED_RESOLUTION).round() as i64
}

/// One gait cycle sampled at N equally spaced cycle percentages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleSeries<T>(Vec<T>);

impl<T: Scalar> CycleSeries<T> {
    pub fn new(samples: Vec<T>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(GdafError::Schema(format!(
                "cycle series needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(GdafError::Schema(format!("non-finite sample at index {i}")));
        }
        Ok(Self(samples))
    }

    pub fn from_vec_unchecked(samples: Vec<T>) -> Self {
        Self(samples)
    }

    pub fn constant(value: T, n: usize) -> Self {
        Self(vec![value; n])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self(self.0.iter().map(|v| f(*v)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entity {
    Human,
    Robot,
}

impl Entity {
    pub fn as_str(self) -> &'static str {
        match self {
            Entity::Human => "human",
            Entity::Robot => "robot",
        }
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Pos,
    Torque,
    Power,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::Pos, Quantity::Torque, Quantity::Power];

    /// Document key of the grid holding this quantity.
    pub fn key(self) -> &'static str {
        match self {
            Quantity::Pos => "pos_deg",
            Quantity::Torque => "torque_nmkg",
            Quantity::Power => "power_wkg",
        }
    }
}

/// Grid indexed `[channel][speed]`.
pub type Grid<T> = Vec<Vec<CycleSeries<T>>>;

/// Cycle-normalized trajectories of one entity across channels and speeds.
///
/// Fields are public: this is a plain value object, and [`validate_gaitset`]
/// is the single place the structural rules are checked.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitSet<T> {
    pub entity: Entity,
    pub channels: Vec<ChannelId>,
    pub speed_grid: SpeedGrid,
    pub pos_deg: Grid<T>,
    pub torque_nmkg: Grid<T>,
    pub power_wkg: Grid<T>,
    /// Mean stride duration per speed, seconds.
    pub cycle_duration_s: Option<Vec<T>>,
    pub provenance: BTreeMap<String, String>,
}

impl<T: Scalar> GaitSet<T> {
    pub fn grid(&self, quantity: Quantity) -> &Grid<T> {
        match quantity {
            Quantity::Pos => &self.pos_deg,
            Quantity::Torque => &self.torque_nmkg,
            Quantity::Power => &self.power_wkg,
        }
    }

    pub fn grid_mut(&mut self, quantity: Quantity) -> &mut Grid<T> {
        match quantity {
            Quantity::Pos => &mut self.pos_deg,
            Quantity::Torque => &mut self.torque_nmkg,
            Quantity::Power => &mut self.power_wkg,
        }
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c.name == name)
    }

    pub fn channel_names(&self) -> Vec<&str> {
        self.channels.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn speed_index(&self, speed: f64) -> Result<usize> {
        self.speed_grid
            .index_of(speed)
            .ok_or_else(|| GdafError::UnknownSpeed {
                speed,
                available: format_speeds(self.speed_grid.speeds()),
            })
    }

    /// Sample count of the first cell, or 0 for an empty set.
    pub fn n_samples(&self) -> usize {
        self.pos_deg
            .first()
            .and_then(|row| row.first())
            .map_or(0, CycleSeries::len)
    }

    pub fn series(&self, quantity: Quantity, channel: &str, speed: f64) -> Result<&CycleSeries<T>> {
        let c = self
            .channel_index(channel)
            .ok_or_else(|| GdafError::MissingChannel(channel.to_string()))?;
        let s = self.speed_index(speed)?;
        Ok(&self.grid(quantity)[c][s])
    }

    /// Stride duration at speed index `s`, if durations are recorded.
    pub fn duration_at(&self, s: usize) -> Option<T> {
        self.cycle_duration_s.as_ref().and_then(|d| d.get(s).copied())
    }
}

pub(crate) fn format_speeds(speeds: &[f64]) -> String {
    speeds
        .iter()
        .map(|s| format!("{s}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// One structural problem found by [`validate_gaitset`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub field: String,
    pub channel: Option<String>,
    pub speed: Option<f64>,
    pub message: String,
}

impl Violation {
    pub(crate) fn new(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: field.to_string(),
            channel: None,
            speed: None,
            message: message.into(),
        }
    }

    pub(crate) fn at(mut self, channel: Option<&str>, speed: Option<f64>) -> Self {
        self.channel = channel.map(str::to_string);
        self.speed = speed;
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field)?;
        if let Some(c) = &self.channel {
            write!(f, "[{c}]")?;
        }
        if let Some(s) = self.speed {
            write!(f, "@{s}m/s")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Checks every structural invariant of a gait set. Empty result means valid.
pub fn validate_gaitset<T: Scalar>(gs: &GaitSet<T>) -> Vec<Violation> {
    let mut out = Vec::new();

    let mut seen = std::collections::HashSet::new();
    for ch in &gs.channels {
        if !seen.insert(ch.name.as_str()) {
            out.push(Violation::new("channels", "duplicate channel name").at(Some(&ch.name), None));
        }
        let bad_side = match ch.anatomical_group {
            AnatomicalGroup::Pelvis => ch.side != Side::Central,
            AnatomicalGroup::Other => false,
            g => g.lateralized() && ch.side == Side::Central,
        };
        if bad_side {
            out.push(
                Violation::new(
                    "channels",
                    format!(
                        "side {:?} inconsistent with group {:?}",
                        ch.side, ch.anatomical_group
                    ),
                )
                .at(Some(&ch.name), None),
            );
        }
    }
    if gs.channels.is_empty() {
        out.push(Violation::new("channels", "no channels"));
    }

    for msg in gs.speed_grid.problems() {
        out.push(Violation::new("speeds_mps", msg));
    }

    let speeds = gs.speed_grid.speeds();
    let expected_n = gs.n_samples();
    if expected_n < 2 && !gs.channels.is_empty() && !speeds.is_empty() {
        out.push(Violation::new(
            "n_samples",
            format!("need at least 2 samples per cycle, got {expected_n}"),
        ));
    }
    for q in Quantity::ALL {
        let grid = gs.grid(q);
        if grid.len() != gs.channels.len() {
            out.push(Violation::new(
                q.key(),
                format!(
                    "has {} channel rows, expected {}",
                    grid.len(),
                    gs.channels.len()
                ),
            ));
            continue;
        }
        for (ch, row) in gs.channels.iter().zip(grid) {
            if row.len() != speeds.len() {
                out.push(
                    Violation::new(
                        q.key(),
                        format!("has {} speed columns, expected {}", row.len(), speeds.len()),
                    )
                    .at(Some(&ch.name), None),
                );
                continue;
            }
            for (speed, cell) in speeds.iter().zip(row) {
                if cell.len() != expected_n {
                    out.push(
                        Violation::new(
                            q.key(),
                            format!("has {} samples, expected {expected_n}", cell.len()),
                        )
                        .at(Some(&ch.name), Some(*speed)),
                    );
                } else if let Some(i) = cell.as_slice().iter().position(|v| !v.is_finite()) {
                    out.push(
                        Violation::new(q.key(), format!("non-finite sample at index {i}"))
                            .at(Some(&ch.name), Some(*speed)),
                    );
                }
            }
        }
    }

    if let Some(d) = &gs.cycle_duration_s {
        if d.len() != speeds.len() {
            out.push(Violation::new(
                "cycle_duration_s",
                format!("has {} entries, expected {}", d.len(), speeds.len()),
            ));
        }
        for (i, v) in d.iter().enumerate() {
            if !(v.is_finite() && *v > T::zero()) {
                out.push(
                    Violation::new("cycle_duration_s", format!("duration {v} must be > 0"))
                        .at(None, speeds.get(i).copied()),
                );
            }
        }
    }
    out
}

/// Left and right instances of one bilateral joint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilateralPair {
    pub pair_name: String,
    pub left: ChannelId,
    pub right: ChannelId,
}

impl BilateralPair {
    pub fn new(pair_name: impl Into<String>, left: ChannelId, right: ChannelId) -> Result<Self> {
        let pair_name = pair_name.into();
        if left.side != Side::Left || right.side != Side::Right {
            return Err(GdafError::Config(format!(
                "pair `{pair_name}`: `{}` must be left and `{}` right",
                left.name, right.name
            )));
        }
        if left.anatomical_group != right.anatomical_group {
            return Err(GdafError::Config(format!(
                "pair `{pair_name}`: `{}` and `{}` belong to different groups",
                left.name, right.name
            )));
        }
        Ok(Self {
            pair_name,
            left,
            right,
        })
    }

    /// Resolves `<name>_l` / `<name>_r` among the given channels.
    pub fn resolve(pair_name: &str, channels: &[ChannelId]) -> Result<Self> {
        let find = |suffix: &str| {
            let wanted = format!("{pair_name}_{suffix}");
            channels
                .iter()
                .find(|c| c.name == wanted)
                .cloned()
                .ok_or_else(|| {
                    GdafError::Config(format!("pair `{pair_name}`: channel `{wanted}` not found"))
                })
        };
        Self::new(pair_name, find("l")?, find("r")?)
    }
}

/// The six default bilateral pairs.
pub fn default_pair_names() -> Vec<String> {
    BILATERAL_JOINTS.iter().map(|s| s.to_string()).collect()
}

/// Axis sign of a human-to-robot channel transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply<T: Scalar>(self, v: T) -> T {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        })
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        if v == 1.0 {
            Ok(Sign::Plus)
        } else if v == -1.0 {
            Ok(Sign::Minus)
        } else {
            Err(serde::de::Error::custom(format!("sign must be 1 or -1, got {v}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointMapEntry {
    pub human: String,
    pub robot: String,
    pub sign: Sign,
    #[serde(default)]
    pub offset_deg: f64,
}

/// Human-to-robot channel correspondence with per-channel affine angle transforms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct JointMap {
    pub entries: Vec<JointMapEntry>,
    #[serde(default)]
    pub excluded_human_channels: Vec<String>,
}

impl JointMap {
    /// Identity mapping over the given channel names.
    pub fn identity<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        Self {
            entries: names
                .into_iter()
                .map(|n| JointMapEntry {
                    human: n.to_string(),
                    robot: n.to_string(),
                    sign: Sign::Plus,
                    offset_deg: 0.0,
                })
                .collect(),
            excluded_human_channels: Vec::new(),
        }
    }

    /// Checks the map is one-to-one and offsets are finite.
    pub fn check(&self) -> Result<()> {
        let mut humans = std::collections::HashSet::new();
        let mut robots = std::collections::HashSet::new();
        for e in &self.entries {
            if !humans.insert(e.human.as_str()) {
                return Err(GdafError::Mapping(format!(
                    "human channel `{}` mapped more than once",
                    e.human
                )));
            }
            if !robots.insert(e.robot.as_str()) {
                return Err(GdafError::Mapping(format!(
                    "robot channel `{}` is the target of more than one entry",
                    e.robot
                )));
            }
            if !e.offset_deg.is_finite() {
                return Err(GdafError::Mapping(format!(
                    "offset for `{}` is not finite",
                    e.human
                )));
            }
            if self.excluded_human_channels.contains(&e.human) {
                return Err(GdafError::Mapping(format!(
                    "`{}` is both mapped and excluded",
                    e.human
                )));
            }
        }
        Ok(())
    }

    /// Robot-to-human map undoing this one on the mapped channels.
    pub fn inverse(&self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|e| JointMapEntry {
                    human: e.robot.clone(),
                    robot: e.human.clone(),
                    sign: e.sign,
                    offset_deg: -e.sign.apply(e.offset_deg),
                })
                .collect(),
            excluded_human_channels: Vec::new(),
        }
    }
}
