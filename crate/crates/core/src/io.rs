//! On-disk containers: `.gaitset.json` documents, `.rawrec.json` raw
//! recordings and flat CSV exports.
//!
//! Documents are compact UTF-8 JSON. Numbers are written in their shortest
//! round-trip form so that `load(save(gs)) == gs` holds bit for bit.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{GdafError, Result};
use crate::model::{
    format_speeds, validate_gaitset, ChannelId, CycleSeries, Entity, GaitSet, Grid, Quantity,
    SpeedGrid, Violation,
};
use crate::scalar::Scalar;

pub const GAITSET_EXTENSION: &str = ".gaitset.json";
pub const RAWREC_EXTENSION: &str = ".rawrec.json";

const REQUIRED_KEYS: [&str; 7] = [
    "entity",
    "channels",
    "speeds_mps",
    "n_samples",
    "pos_deg",
    "torque_nmkg",
    "power_wkg",
];

/// Channel entry in a document. Plain strings are accepted on input and
/// have side/group inferred from the label.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ChannelDoc {
    Full(ChannelId),
    Name(String),
}

impl From<ChannelDoc> for ChannelId {
    fn from(c: ChannelDoc) -> Self {
        match c {
            ChannelDoc::Full(c) => c,
            ChannelDoc::Name(n) => ChannelId::from_name(n),
        }
    }
}

/// Serialized form of a [`GaitSet`]; arrays are channel-major, speed-minor,
/// samples innermost.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct GaitSetDocument<T> {
    entity: Entity,
    channels: Vec<ChannelDoc>,
    speeds_mps: Vec<f64>,
    n_samples: usize,
    pos_deg: Vec<Vec<Vec<T>>>,
    torque_nmkg: Vec<Vec<Vec<T>>>,
    power_wkg: Vec<Vec<Vec<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cycle_duration_s: Option<Vec<T>>,
    #[serde(default)]
    provenance: BTreeMap<String, String>,
}

impl<T: Scalar> GaitSetDocument<T> {
    pub fn from_gaitset(gs: &GaitSet<T>) -> Self {
        let grid = |g: &Grid<T>| -> Vec<Vec<Vec<T>>> {
            g.iter()
                .map(|row| row.iter().map(|c| c.as_slice().to_vec()).collect())
                .collect()
        };
        Self {
            entity: gs.entity,
            channels: gs.channels.iter().cloned().map(ChannelDoc::Full).collect(),
            speeds_mps: gs.speed_grid.speeds().to_vec(),
            n_samples: gs.n_samples(),
            pos_deg: grid(&gs.pos_deg),
            torque_nmkg: grid(&gs.torque_nmkg),
            power_wkg: grid(&gs.power_wkg),
            cycle_duration_s: gs.cycle_duration_s.clone(),
            provenance: gs.provenance.clone(),
        }
    }

    /// Converts to a gait set after checking array extents; every mismatch
    /// is reported in one [`GdafError::Invalid`]. Content rules are left to
    /// [`validate_gaitset`].
    pub fn into_gaitset(self) -> Result<GaitSet<T>> {
        let channels: Vec<ChannelId> = self.channels.into_iter().map(ChannelId::from).collect();
        let speeds = self.speeds_mps;
        let n = self.n_samples;
        let mut problems = Vec::new();
        let mut convert = |key: &str, arr: Vec<Vec<Vec<T>>>| -> Grid<T> {
            if arr.len() != channels.len() {
                problems.push(Violation::new(
                    key,
                    format!("{} channel rows, expected {}", arr.len(), channels.len()),
                ));
            }
            arr.into_iter()
                .enumerate()
                .map(|(c, row)| {
                    let name = channels.get(c).map(|ch| ch.name.as_str());
                    if row.len() != speeds.len() {
                        problems.push(
                            Violation::new(
                                key,
                                format!("row {c}: {} speed columns, expected {}", row.len(), speeds.len()),
                            )
                            .at(name, None),
                        );
                    }
                    row.into_iter()
                        .enumerate()
                        .map(|(s, cell)| {
                            if cell.len() != n {
                                problems.push(
                                    Violation::new(
                                        key,
                                        format!(
                                            "cell [{c}][{s}]: {} samples, expected n_samples = {n}",
                                            cell.len()
                                        ),
                                    )
                                    .at(name, speeds.get(s).copied()),
                                );
                            }
                            CycleSeries::from_vec_unchecked(cell)
                        })
                        .collect()
                })
                .collect()
        };
        let pos_deg = convert("pos_deg", self.pos_deg);
        let torque_nmkg = convert("torque_nmkg", self.torque_nmkg);
        let power_wkg = convert("power_wkg", self.power_wkg);
        if !problems.is_empty() {
            return Err(GdafError::Invalid(problems));
        }
        Ok(GaitSet {
            entity: self.entity,
            channels,
            speed_grid: SpeedGrid::from_vec_unchecked(speeds),
            pos_deg,
            torque_nmkg,
            power_wkg,
            cycle_duration_s: self.cycle_duration_s,
            provenance: self.provenance,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("document serialization cannot fail");
        s.push('\n');
        s
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| GdafError::io(path, e))
}

fn malformed(path: &Path, e: &serde_json::Error) -> GdafError {
    GdafError::Malformed {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses document text without running content validation.
pub fn parse_document<T: Scalar>(
    text: &str,
    path: &Path,
) -> Result<GaitSetDocument<T>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| malformed(path, &e))?;
    let obj = value
        .as_object()
        .ok_or_else(|| GdafError::Schema("top level must be an object".into()))?;
    if let Some(missing) = REQUIRED_KEYS.iter().find(|k| !obj.contains_key(**k)) {
        return Err(GdafError::Schema(format!("missing key {missing}")));
    }
    serde_json::from_value(value).map_err(|e| GdafError::Schema(e.to_string()))
}

/// Reads a document into a gait set, checking extents but not content.
/// Used by `validate`, which reports violations instead of failing on them.
pub fn read_gaitset_unvalidated<T: Scalar>(path: &Path) -> Result<GaitSet<T>> {
    let text = read_text(path)?;
    parse_document(&text, path)?.into_gaitset()
}

/// Loads a gait set and rejects it unless it passes [`validate_gaitset`].
pub fn load_gaitset<T: Scalar>(path: impl AsRef<Path>) -> Result<GaitSet<T>> {
    let gs = read_gaitset_unvalidated(path.as_ref())?;
    let violations = validate_gaitset(&gs);
    if violations.is_empty() {
        Ok(gs)
    } else {
        Err(GdafError::Invalid(violations))
    }
}

pub fn gaitset_to_json<T: Scalar>(gs: &GaitSet<T>) -> String {
    GaitSetDocument::from_gaitset(gs).to_json()
}

/// Writes a gait set; invalid sets are rejected before anything is written.
pub fn save_gaitset<T: Scalar>(gs: &GaitSet<T>, path: impl AsRef<Path>) -> Result<()> {
    let violations = validate_gaitset(gs);
    if !violations.is_empty() {
        return Err(GdafError::Invalid(violations));
    }
    let path = path.as_ref();
    fs::write(path, gaitset_to_json(gs)).map_err(|e| GdafError::io(path, e))
}

/// Formats a cycle percentage: integral values without a fraction.
pub(crate) fn format_pct(k: usize, n: usize) -> String {
    let pct = 100.0 * k as f64 / (n - 1) as f64;
    if pct.fract() == 0.0 {
        format!("{}", pct as i64)
    } else {
        format!("{pct:?}")
    }
}

/// CSV of one quantity at one speed: `gait_pct` then one column per channel.
pub fn export_table<T: Scalar>(gs: &GaitSet<T>, quantity: Quantity, speed: f64) -> Result<String> {
    let s = gs.speed_grid.index_of(speed).ok_or_else(|| GdafError::UnknownSpeed {
        speed,
        available: format_speeds(gs.speed_grid.speeds()),
    })?;
    let grid = gs.grid(quantity);
    let n = gs.n_samples();
    let mut out = String::from("gait_pct");
    for ch in &gs.channels {
        out.push(',');
        out.push_str(&ch.name);
    }
    out.push('\n');
    for k in 0..n {
        out.push_str(&format_pct(k, n));
        for row in grid {
            out.push(',');
            out.push_str(&row[s].as_slice()[k].to_text());
        }
        out.push('\n');
    }
    Ok(out)
}

/// Per-quantity channel data of a raw recording, `[channel][sample]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct RawData<T> {
    pub pos_deg: Vec<Vec<T>>,
    pub torque: Vec<Vec<T>>,
    pub power: Vec<Vec<T>>,
    /// Joint angular velocities in rad/s; when present, power is recomputed as velocity x torque.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_velocity_rads: Option<Vec<Vec<T>>>,
    /// Event-source signals (heel velocity, ankle pitch, ...), keyed by name.
    #[serde(default)]
    pub events: BTreeMap<String, Vec<T>>,
}

/// A fixed-rate multi-channel recording of one trial at one speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct RawRecording<T> {
    pub sample_rate_hz: f64,
    pub channels: Vec<String>,
    pub data: RawData<T>,
    pub speed_label_mps: f64,
    /// Set when torque/power are not yet mass-normalized.
    #[serde(default)]
    pub body_mass_kg: Option<f64>,
}

impl<T: Scalar> RawRecording<T> {
    pub fn len(&self) -> usize {
        self.data.pos_deg.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel_ids(&self) -> Vec<ChannelId> {
        self.channels.iter().map(ChannelId::from_name).collect()
    }

    /// Equal lengths across all series, matching channel counts, positive rate.
    pub fn check(&self) -> Result<()> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(GdafError::Schema(format!(
                "sample_rate_hz must be > 0, got {}",
                self.sample_rate_hz
            )));
        }
        if let Some(m) = self.body_mass_kg {
            if !(m.is_finite() && m > 0.0) {
                return Err(GdafError::Schema(format!("body_mass_kg must be > 0, got {m}")));
            }
        }
        let len = self.len();
        let n_ch = self.channels.len();
        let mut arrays: Vec<(&str, &Vec<Vec<T>>)> = vec![
            ("pos_deg", &self.data.pos_deg),
            ("torque", &self.data.torque),
            ("power", &self.data.power),
        ];
        if let Some(w) = &self.data.angular_velocity_rads {
            arrays.push(("angular_velocity_rads", w));
        }
        for (key, arr) in arrays {
            if arr.len() != n_ch {
                return Err(GdafError::Schema(format!(
                    "data.{key}: {} channel rows, expected {n_ch}",
                    arr.len()
                )));
            }
            if let Some((c, _)) = arr.iter().enumerate().find(|(_, s)| s.len() != len) {
                return Err(GdafError::Schema(format!(
                    "data.{key}[{c}]: length differs from {len}"
                )));
            }
        }
        for (name, s) in &self.data.events {
            if s.len() != len {
                return Err(GdafError::Schema(format!(
                    "data.events.{name}: length {} differs from {len}",
                    s.len()
                )));
            }
        }
        Ok(())
    }

    /// Looks up an event-source signal, falling back to a position channel.
    pub fn event_signal(&self, name: &str) -> Option<&[T]> {
        if let Some(s) = self.data.events.get(name) {
            return Some(s);
        }
        self.channels
            .iter()
            .position(|c| c == name)
            .map(|i| self.data.pos_deg[i].as_slice())
    }
}

pub fn load_raw_recording<T: Scalar>(
    path: impl AsRef<Path>,
) -> Result<RawRecording<T>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let rec: RawRecording<T> = serde_json::from_str(&text).map_err(|e| malformed(path, &e))?;
    rec.check()?;
    Ok(rec)
}

pub fn save_raw_recording<T: Scalar>(
    rec: &RawRecording<T>,
    path: impl AsRef<Path>,
) -> Result<()> {
    rec.check()?;
    let path = path.as_ref();
    let mut s = serde_json::to_string(rec).expect("recording serialization cannot fail");
    s.push('\n');
    fs::write(path, s).map_err(|e| GdafError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_set() -> GaitSet<f64> {
        let cell = || vec![vec![CycleSeries::constant(0.0, 101)]];
        GaitSet {
            entity: Entity::Human,
            channels: vec![ChannelId::from_name("knee_l")],
            speed_grid: SpeedGrid::new(vec![1.0]).unwrap(),
            pos_deg: cell(),
            torque_nmkg: cell(),
            power_wkg: cell(),
            cycle_duration_s: None,
            provenance: BTreeMap::new(),
        }
    }

    #[test]
    fn zero_document_loads() {
        let text = format!(
            r#"{{"entity":"human","channels":["knee_l"],"speeds_mps":[1.0],"n_samples":101,
            "pos_deg":[[{z}]],"torque_nmkg":[[{z}]],"power_wkg":[[{z}]]}}"#,
            z = serde_json::to_string(&vec![0.0; 101]).unwrap()
        );
        let gs = parse_document::<f64>(&text, Path::new("x"))
            .unwrap()
            .into_gaitset()
            .unwrap();
        assert_eq!(gs, zero_set());
    }

    #[test]
    fn missing_torque_key() {
        let text = r#"{"entity":"human","channels":[],"speeds_mps":[],"n_samples":101,
            "pos_deg":[],"power_wkg":[]}"#;
        let err = parse_document::<f64>(text, Path::new("x")).unwrap_err();
        assert_eq!(err.to_string(), "schema error: missing key torque_nmkg");
    }

    #[test]
    fn malformed_names_position() {
        let err = parse_document::<f64>("{\n  \"entity\": ,", Path::new("f.json")).unwrap_err();
        match err {
            GdafError::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn extent_mismatch_names_array() {
        let mut doc = GaitSetDocument::from_gaitset(&zero_set());
        doc.power_wkg[0][0].pop();
        doc.torque_nmkg[0][0].push(0.0);
        match doc.into_gaitset().unwrap_err() {
            GdafError::Invalid(v) => {
                assert_eq!(v.len(), 2);
                assert_eq!(v[0].field, "torque_nmkg");
                assert_eq!(v[1].field, "power_wkg");
                assert!(v[1].to_string().contains("cell [0][0]"), "{}", v[1]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn save_load_zero_set() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("z.gaitset.json");
        save_gaitset(&zero_set(), &p).unwrap();
        assert_eq!(load_gaitset::<f64>(&p).unwrap(), zero_set());
    }

    #[test]
    fn invalid_set_not_written() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.gaitset.json");
        let mut gs = zero_set();
        gs.speed_grid = SpeedGrid::from_vec_unchecked(vec![-1.0]);
        assert!(matches!(save_gaitset(&gs, &p), Err(GdafError::Invalid(_))));
        assert!(!p.exists());
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let err = save_gaitset(&zero_set(), "/nonexistent-dir/x.gaitset.json").unwrap_err();
        assert!(matches!(err, GdafError::Io { .. }));
    }

    #[test]
    fn export_constant_channel() {
        let mut gs = zero_set();
        gs.pos_deg[0][0] = CycleSeries::constant(5.0, 101);
        let csv = export_table(&gs, Quantity::Pos, 1.0).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "gait_pct,knee_l");
        assert_eq!(lines.len(), 102);
        assert_eq!(lines[1], "0,5.0");
        assert_eq!(lines[101], "100,5.0");
        assert!(lines[1..].iter().all(|l| l.ends_with(",5.0")));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn export_unknown_speed_lists_available() {
        let err = export_table(&zero_set(), Quantity::Pos, 2.0).unwrap_err().to_string();
        assert!(err.contains("available: 1"), "{err}");
    }

    #[test]
    fn pct_formatting() {
        assert_eq!(format_pct(50, 101), "50");
        assert_eq!(format_pct(1, 5), "25");
        assert_eq!(format_pct(1, 4), "33.333333333333336");
    }
}
