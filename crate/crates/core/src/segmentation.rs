//! Raw recordings to gait sets: stride event detection, per-stride
//! resampling onto the normalized cycle, stride averaging and joint mapping.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{GdafError, Result};
use crate::io::RawRecording;
use crate::model::{
    speed_key, validate_gaitset, ChannelId, CycleSeries, Entity, GaitSet, Grid, JointMap,
    Quantity, SpeedGrid,
};
use crate::scalar::Scalar;

/// Ascending sample indices of right heel strikes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrideEvents {
    pub strike_indices: Vec<usize>,
}

impl StrideEvents {
    pub fn new(strike_indices: Vec<usize>) -> Result<Self> {
        if strike_indices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GdafError::Schema("strike indices must be strictly increasing".into()));
        }
        if strike_indices.len() < 2 {
            return Err(GdafError::InsufficientStrides {
                found: strike_indices.len(),
            });
        }
        Ok(Self { strike_indices })
    }

    pub fn stride_count(&self) -> usize {
        self.strike_indices.len().saturating_sub(1)
    }

    /// Drops `m` strides from each end (acceleration/deceleration phases).
    pub fn trim(&self, m: usize) -> Result<Self> {
        let strides = self.stride_count();
        if strides <= 2 * m {
            return Err(GdafError::InsufficientStrides {
                found: strides.saturating_sub(2 * m).min(1),
            });
        }
        Ok(Self {
            strike_indices: self.strike_indices[m..self.strike_indices.len() - m].to_vec(),
        })
    }

    /// Strike-to-strike durations in seconds.
    pub fn durations_s(&self, rate_hz: f64) -> Vec<f64> {
        self.strike_indices
            .windows(2)
            .map(|w| (w[1] - w[0]) as f64 / rate_hz)
            .collect()
    }
}

/// Keeps candidates at least `min_gap` samples after the last kept one.
fn enforce_separation(candidates: impl IntoIterator<Item = usize>, min_gap: f64) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for i in candidates {
        match kept.last() {
            Some(&last) if ((i - last) as f64) < min_gap => {}
            _ => kept.push(i),
        }
    }
    kept
}

fn check_detection_input(len: usize, rate_hz: f64, min_stride_s: f64) -> Result<()> {
    if len < 3 {
        return Err(GdafError::EmptyInput("event signal needs at least 3 samples"));
    }
    if !(rate_hz > 0.0 && min_stride_s > 0.0) {
        return Err(GdafError::Config(
            "sample rate and minimum stride duration must be > 0".into(),
        ));
    }
    Ok(())
}

/// Heel strikes as positive-to-nonpositive zero crossings of the forward
/// heel velocity (`v[i-1] > 0 >= v[i]`), at least `min_stride_s` apart.
pub fn detect_heel_strikes<T: Scalar>(
    velocity: &[T],
    rate_hz: f64,
    min_stride_s: f64,
) -> Result<StrideEvents> {
    check_detection_input(velocity.len(), rate_hz, min_stride_s)?;
    let zero = T::zero();
    let crossings = (1..velocity.len()).filter(|&i| velocity[i - 1] > zero && velocity[i] <= zero);
    let strikes = enforce_separation(crossings, min_stride_s * rate_hz);
    StrideEvents::new(strikes)
}

/// Robot gait events from abrupt ankle-pitch changes: local maxima of
/// `|theta[i] - theta[i-1]|` exceeding `jump_threshold`, at least
/// `min_stride_s` apart.
pub fn detect_robot_strikes<T: Scalar>(
    theta: &[T],
    rate_hz: f64,
    jump_threshold: T,
    min_stride_s: f64,
) -> Result<StrideEvents> {
    check_detection_input(theta.len(), rate_hz, min_stride_s)?;
    // jump[i] = |theta[i] - theta[i-1]|, jump[0] = 0
    let jump: Vec<T> = std::iter::once(T::zero())
        .chain(theta.windows(2).map(|w| (w[1] - w[0]).abs()))
        .collect();
    let peaks = (1..jump.len()).filter(|&i| {
        let rises = jump[i] > jump[i - 1];
        let falls = jump.get(i + 1).is_none_or(|next| jump[i] >= *next);
        jump[i] > jump_threshold && rises && falls
    });
    let strikes = enforce_separation(peaks, min_stride_s * rate_hz);
    StrideEvents::new(strikes)
}

/// Linearly interpolates `series[start..=end]` onto `n` equally spaced
/// cycle positions; the last output equals `series[end]`.
pub fn resample_stride<T: Scalar>(series: &[T], start: usize, end: usize, n: usize) -> Result<CycleSeries<T>> {
    if end <= start {
        return Err(GdafError::DegenerateStride {
            index: start,
            reason: "stride shorter than 2 samples".into(),
        });
    }
    if end >= series.len() {
        return Err(GdafError::DegenerateStride {
            index: start,
            reason: format!("stride ends at {end}, past series length {}", series.len()),
        });
    }
    if n < 2 {
        return Err(GdafError::Config(format!("n_samples must be >= 2, got {n}")));
    }
    let stride = &series[start..=end];
    let span = (stride.len() - 1) as f64;
    let out = (0..n)
        .map(|k| {
            // exact for k = 0 and k = n - 1 since the product is an integer
            let pos = k as f64 * span / (n - 1) as f64;
            let i0 = pos.floor() as usize;
            if i0 >= stride.len() - 1 {
                return stride[stride.len() - 1];
            }
            let frac = T::lit(pos - i0 as f64);
            let (a, b) = (stride[i0], stride[i0 + 1]);
            a + (b - a) * frac
        })
        .collect();
    Ok(CycleSeries::from_vec_unchecked(out))
}

/// Cuts one series into strides and resamples each onto `n` samples.
pub fn slice_and_resample<T: Scalar>(
    series: &[T],
    events: &StrideEvents,
    n: usize,
) -> Result<Vec<CycleSeries<T>>> {
    events
        .strike_indices
        .windows(2)
        .map(|w| resample_stride(series, w[0], w[1], n))
        .collect()
}

/// Resampled strides of every channel of a recording, `[channel][stride]`
/// per quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordingStrides<T> {
    pub pos_deg: Vec<Vec<CycleSeries<T>>>,
    pub torque_nmkg: Vec<Vec<CycleSeries<T>>>,
    pub power_wkg: Vec<Vec<CycleSeries<T>>>,
}

impl<T> RecordingStrides<T> {
    fn quantity(&self, q: Quantity) -> &Vec<Vec<CycleSeries<T>>> {
        match q {
            Quantity::Pos => &self.pos_deg,
            Quantity::Torque => &self.torque_nmkg,
            Quantity::Power => &self.power_wkg,
        }
    }
}

/// Slices and resamples every channel of a recording.
///
/// Torque and power are divided by body mass when the recording carries
/// one. When angular velocities are present, power is recomputed as
/// velocity x (normalized) torque instead of using the stored channel.
pub fn slice_recording<T: Scalar>(
    rec: &RawRecording<T>,
    events: &StrideEvents,
    n: usize,
) -> Result<RecordingStrides<T>> {
    rec.check()?;
    let mass = rec.body_mass_kg.map(T::lit);
    let normalize = |s: &[T]| -> Vec<T> {
        match mass {
            Some(m) => s.iter().map(|v| *v / m).collect(),
            None => s.to_vec(),
        }
    };
    let torque: Vec<Vec<T>> = rec.data.torque.iter().map(|s| normalize(s)).collect();
    let power: Vec<Vec<T>> = match &rec.data.angular_velocity_rads {
        Some(omega) => omega
            .iter()
            .zip(&torque)
            .map(|(w, t)| w.iter().zip(t).map(|(a, b)| *a * *b).collect())
            .collect(),
        None => rec.data.power.iter().map(|s| normalize(s)).collect(),
    };
    let cut = |arr: &[Vec<T>]| -> Result<Vec<Vec<CycleSeries<T>>>> {
        arr.iter().map(|s| slice_and_resample(s, events, n)).collect()
    };
    Ok(RecordingStrides {
        pos_deg: cut(&rec.data.pos_deg)?,
        torque_nmkg: cut(&torque)?,
        power_wkg: cut(&power)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    #[default]
    Mean,
    Median,
}

fn check_equal_lengths<T: Scalar>(strides: &[CycleSeries<T>]) -> Result<usize> {
    let first = strides
        .first()
        .ok_or(GdafError::EmptyInput("no strides to average"))?;
    let n = first.len();
    if let Some(i) = strides.iter().position(|s| s.len() != n) {
        return Err(GdafError::Schema(format!(
            "stride {i} has {} samples, expected {n}",
            strides[i].len()
        )));
    }
    Ok(n)
}

/// Pointwise arithmetic mean of equally sampled strides.
pub fn average_strides<T: Scalar>(strides: &[CycleSeries<T>]) -> Result<CycleSeries<T>> {
    let n = check_equal_lengths(strides)?;
    let count = T::from_usize(strides.len()).expect("stride count fits the scalar type");
    let out = (0..n)
        .map(|k| strides.iter().map(|s| s.as_slice()[k]).sum::<T>() / count)
        .collect();
    Ok(CycleSeries::from_vec_unchecked(out))
}

/// Pointwise median of equally sampled strides.
pub fn median_strides<T: Scalar>(strides: &[CycleSeries<T>]) -> Result<CycleSeries<T>> {
    let n = check_equal_lengths(strides)?;
    let out = (0..n)
        .map(|k| {
            let mut col: Vec<T> = strides.iter().map(|s| s.as_slice()[k]).collect();
            col.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
            let m = col.len() / 2;
            if col.len() % 2 == 1 {
                col[m]
            } else {
                (col[m - 1] + col[m]) * T::half()
            }
        })
        .collect();
    Ok(CycleSeries::from_vec_unchecked(out))
}

pub fn combine_strides<T: Scalar>(strides: &[CycleSeries<T>], mode: Averaging) -> Result<CycleSeries<T>> {
    match mode {
        Averaging::Mean => average_strides(strides),
        Averaging::Median => median_strides(strides),
    }
}

/// Re-expresses a human gait set in robot channel space.
///
/// Angles become `sign * angle + offset_deg`, torques `sign * torque`;
/// power is unchanged because moment and angular velocity flip together.
/// Unmapped and excluded human channels are dropped.
pub fn apply_joint_map<T: Scalar>(gs: &GaitSet<T>, map: &JointMap) -> Result<GaitSet<T>> {
    if gs.entity != Entity::Human {
        return Err(GdafError::Mapping(format!(
            "joint maps apply to human gait sets, got {}",
            gs.entity
        )));
    }
    map.check()?;
    let mut channels = Vec::with_capacity(map.entries.len());
    let mut pos: Grid<T> = Vec::new();
    let mut torque: Grid<T> = Vec::new();
    let mut power: Grid<T> = Vec::new();
    for e in &map.entries {
        let c = gs.channel_index(&e.human).ok_or_else(|| {
            GdafError::Mapping(format!("mapped human channel `{}` not in gait set", e.human))
        })?;
        let offset = T::lit(e.offset_deg);
        channels.push(ChannelId::from_name(e.robot.clone()));
        pos.push(
            gs.pos_deg[c]
                .iter()
                .map(|s| s.map(|v| e.sign.apply(v) + offset))
                .collect(),
        );
        torque.push(gs.torque_nmkg[c].iter().map(|s| s.map(|v| e.sign.apply(v))).collect());
        power.push(gs.power_wkg[c].clone());
    }
    let mut provenance = gs.provenance.clone();
    provenance.insert("joint_map_applied".into(), "true".into());
    Ok(GaitSet {
        entity: gs.entity,
        channels,
        speed_grid: gs.speed_grid.clone(),
        pos_deg: pos,
        torque_nmkg: torque,
        power_wkg: power,
        cycle_duration_s: gs.cycle_duration_s.clone(),
        provenance,
    })
}

/// Key of one averaged cell handed to [`build_gaitset`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellKey {
    pub quantity: Quantity,
    pub channel: String,
    pub speed_index: usize,
}

/// Assembles averaged cells into a gait set. Every (quantity, channel,
/// speed) cell must be present.
pub fn build_gaitset<T: Scalar>(
    entity: Entity,
    channels: Vec<ChannelId>,
    speed_grid: SpeedGrid,
    mut cells: HashMap<CellKey, CycleSeries<T>>,
    cycle_duration_s: Option<Vec<T>>,
    provenance: BTreeMap<String, String>,
) -> Result<GaitSet<T>> {
    let mut take = |q: Quantity| -> Result<Grid<T>> {
        channels
            .iter()
            .map(|ch| {
                (0..speed_grid.len())
                    .map(|s| {
                        let key = CellKey {
                            quantity: q,
                            channel: ch.name.clone(),
                            speed_index: s,
                        };
                        cells.remove(&key).ok_or_else(|| GdafError::IncompleteGrid {
                            quantity: q.key(),
                            channel: ch.name.clone(),
                            speed: speed_grid.speeds()[s],
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let pos_deg = take(Quantity::Pos)?;
    let torque_nmkg = take(Quantity::Torque)?;
    let power_wkg = take(Quantity::Power)?;
    let gs = GaitSet {
        entity,
        channels,
        speed_grid,
        pos_deg,
        torque_nmkg,
        power_wkg,
        cycle_duration_s,
        provenance,
    };
    let violations = validate_gaitset(&gs);
    if violations.is_empty() {
        Ok(gs)
    } else {
        Err(GdafError::Invalid(violations))
    }
}

/// Knobs of the segmentation pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationParams {
    pub n_samples: usize,
    pub min_stride_s: f64,
    pub robot_jump_threshold_deg: f64,
    pub steady_state_trim_strides: usize,
    pub averaging: Averaging,
    /// Event signal for human strikes (forward heel velocity).
    pub heel_velocity_channel: String,
    /// Event signal for robot strikes (right ankle pitch).
    pub robot_strike_channel: String,
}

impl Default for SegmentationParams {
    fn default() -> Self {
        Self {
            n_samples: crate::model::DEFAULT_SAMPLES,
            min_stride_s: 0.4,
            robot_jump_threshold_deg: 2.0,
            steady_state_trim_strides: 2,
            averaging: Averaging::Mean,
            heel_velocity_channel: "right_heel_velocity_fwd".into(),
            robot_strike_channel: "ankle_r".into(),
        }
    }
}

/// Strike detection for one recording according to its entity.
pub fn detect_events<T: Scalar>(
    rec: &RawRecording<T>,
    entity: Entity,
    params: &SegmentationParams,
) -> Result<StrideEvents> {
    match entity {
        Entity::Human => {
            let name = &params.heel_velocity_channel;
            let v = rec
                .event_signal(name)
                .ok_or_else(|| GdafError::MissingChannel(name.clone()))?;
            detect_heel_strikes(v, rec.sample_rate_hz, params.min_stride_s)
        }
        Entity::Robot => {
            let name = &params.robot_strike_channel;
            let theta = rec
                .event_signal(name)
                .ok_or_else(|| GdafError::MissingChannel(name.clone()))?;
            detect_robot_strikes(
                theta,
                rec.sample_rate_hz,
                T::lit(params.robot_jump_threshold_deg),
                params.min_stride_s,
            )
        }
    }
}

/// Per-speed outcome of [`segment_recordings`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedSummary {
    pub speed_mps: f64,
    pub recordings: usize,
    pub strides: usize,
    pub mean_duration_s: f64,
}

/// Segmentation outcome; the error side carries the index of the failing
/// recording when one is to blame.
pub type SegmentOutcome<T> = std::result::Result<(GaitSet<T>, Vec<SpeedSummary>), (Option<usize>, GdafError)>;

/// Full pipeline: detect, trim, slice, resample and average every
/// recording, grouping by speed label.
///
/// Errors carry the index of the failing recording in `Err((index, err))`
/// so callers can name the file.
pub fn segment_recordings<T: Scalar>(
    recordings: &[RawRecording<T>],
    entity: Entity,
    params: &SegmentationParams,
) -> SegmentOutcome<T> {
    let first = recordings
        .first()
        .ok_or((None, GdafError::EmptyInput("no recordings")))?;
    let channels = first.channels.clone();

    // speed key -> (speed, strides per quantity/channel, durations, recording count)
    struct Group<T> {
        speed: f64,
        strides: BTreeMap<(Quantity, usize), Vec<CycleSeries<T>>>,
        durations: Vec<f64>,
        recordings: usize,
    }
    let mut groups: BTreeMap<i64, Group<T>> = BTreeMap::new();

    for (i, rec) in recordings.iter().enumerate() {
        let fail = |e: GdafError| (Some(i), e);
        rec.check().map_err(fail)?;
        if rec.channels != channels {
            return Err(fail(GdafError::Schema(
                "channel list differs from the first recording".into(),
            )));
        }
        let events = detect_events(rec, entity, params)
            .and_then(|ev| ev.trim(params.steady_state_trim_strides))
            .map_err(fail)?;
        let strides = slice_recording(rec, &events, params.n_samples).map_err(fail)?;
        let g = groups.entry(speed_key(rec.speed_label_mps)).or_insert_with(|| Group {
            speed: rec.speed_label_mps,
            strides: BTreeMap::new(),
            durations: Vec::new(),
            recordings: 0,
        });
        g.recordings += 1;
        g.durations.extend(events.durations_s(rec.sample_rate_hz));
        for q in Quantity::ALL {
            for (c, per_stride) in strides.quantity(q).iter().enumerate() {
                g.strides.entry((q, c)).or_default().extend(per_stride.iter().cloned());
            }
        }
    }

    let speed_grid = SpeedGrid::new(groups.values().map(|g| g.speed).collect()).map_err(|e| (None, e))?;
    let mut cells = HashMap::new();
    let mut durations = Vec::new();
    let mut summaries = Vec::new();
    for (s, g) in groups.values().enumerate() {
        for ((q, c), strides) in &g.strides {
            let avg = combine_strides(strides, params.averaging).map_err(|e| (None, e))?;
            cells.insert(
                CellKey {
                    quantity: *q,
                    channel: channels[*c].clone(),
                    speed_index: s,
                },
                avg,
            );
        }
        let mean_duration = g.durations.iter().sum::<f64>() / g.durations.len() as f64;
        durations.push(T::lit(mean_duration));
        summaries.push(SpeedSummary {
            speed_mps: g.speed,
            recordings: g.recordings,
            strides: g.durations.len(),
            mean_duration_s: mean_duration,
        });
    }
    let mut provenance = BTreeMap::new();
    provenance.insert("source".into(), "segmentation".into());
    provenance.insert("sample_rate_hz".into(), format!("{}", first.sample_rate_hz));
    let gs = build_gaitset(
        entity,
        first.channel_ids(),
        speed_grid,
        cells,
        Some(durations),
        provenance,
    )
    .map_err(|e| (None, e))?;
    Ok((gs, summaries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{JointMapEntry, Sign};

    fn series(v: &[f64]) -> CycleSeries<f64> {
        CycleSeries::from_vec_unchecked(v.to_vec())
    }

    #[test]
    fn heel_strike_hand_trace() {
        let v = [1.0, 0.5, -0.1, -0.2, 1.0, 0.5, -0.1];
        let ev = detect_heel_strikes(&v, 1.0, 1.0).unwrap();
        assert_eq!(ev.strike_indices, vec![2, 6]);
    }

    #[test]
    fn heel_strike_needs_crossings() {
        let v = [1.0, 2.0, 0.5, 3.0];
        assert!(matches!(
            detect_heel_strikes(&v, 1.0, 1.0),
            Err(GdafError::InsufficientStrides { found: 0 })
        ));
    }

    #[test]
    fn close_crossings_keep_earliest() {
        // crossings at 1 and 3 (2 samples apart), then one at 8
        let v = [1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0, -1.0];
        let ev = detect_heel_strikes(&v, 1.0, 3.0).unwrap();
        assert_eq!(ev.strike_indices, vec![1, 8]);
        let ev = detect_heel_strikes(&v, 1.0, 1.0).unwrap();
        assert_eq!(ev.strike_indices, vec![1, 3, 8]);
    }

    #[test]
    fn robot_strike_hand_trace() {
        let theta = [0.0, 0.0, 0.0, 5.0, 5.0, 5.0, 0.0, 0.0];
        let ev = detect_robot_strikes(&theta, 1.0, 3.0, 1.0).unwrap();
        assert_eq!(ev.strike_indices, vec![3, 6]);
    }

    #[test]
    fn robot_strike_failures() {
        assert!(detect_robot_strikes(&[1.0; 8], 1.0, 3.0, 1.0).is_err());
        let theta = [0.0, 0.0, 0.0, 5.0, 5.0, 5.0, 0.0, 0.0];
        assert!(matches!(
            detect_robot_strikes(&theta, 1.0, 6.0, 1.0),
            Err(GdafError::InsufficientStrides { .. })
        ));
    }

    #[test]
    fn short_input_rejected() {
        assert!(detect_heel_strikes(&[1.0, -1.0], 1.0, 1.0).is_err());
    }

    #[test]
    fn identity_resample() {
        let ev = StrideEvents::new(vec![0, 4]).unwrap();
        let out = slice_and_resample(&[0.0, 1.0, 2.0, 3.0, 4.0], &ev, 5).unwrap();
        assert_eq!(out, vec![series(&[0.0, 1.0, 2.0, 3.0, 4.0])]);
    }

    #[test]
    fn triangle_resample() {
        let out = resample_stride(&[0.0, 1.0, 0.0], 0, 2, 5).unwrap();
        assert_eq!(out, series(&[0.0, 0.5, 1.0, 0.5, 0.0]));
    }

    #[test]
    fn constant_resample() {
        for n in [2, 7, 101] {
            let out = resample_stride(&[3.25; 40], 5, 31, n).unwrap();
            assert!(out.as_slice().iter().all(|v| *v == 3.25));
        }
    }

    #[test]
    fn degenerate_stride_named() {
        let err = resample_stride(&[0.0, 1.0], 1, 1, 5).unwrap_err();
        assert!(matches!(err, GdafError::DegenerateStride { index: 1, .. }));
        let err = resample_stride(&[0.0, 1.0], 0, 4, 5).unwrap_err();
        assert!(matches!(err, GdafError::DegenerateStride { index: 0, .. }));
    }

    #[test]
    fn averaging() {
        let one = series(&[1.0, 2.0]);
        assert_eq!(average_strides(std::slice::from_ref(&one)).unwrap(), one);
        let avg = average_strides(&[series(&[0.0; 3]), series(&[2.0; 3])]).unwrap();
        assert_eq!(avg, series(&[1.0; 3]));
        assert!(matches!(
            average_strides::<f64>(&[]),
            Err(GdafError::EmptyInput(_))
        ));
        let med = median_strides(&[series(&[0.0]), series(&[1.0]), series(&[10.0])]).unwrap();
        assert_eq!(med, series(&[1.0]));
    }

    fn human_set() -> GaitSet<f64> {
        let cell = |v: f64| vec![vec![CycleSeries::constant(v, 5)]];
        GaitSet {
            entity: Entity::Human,
            channels: vec![ChannelId::from_name("knee_l"), ChannelId::from_name("mtp_l")],
            speed_grid: SpeedGrid::new(vec![1.0]).unwrap(),
            pos_deg: [cell(10.0), cell(1.0)].concat(),
            torque_nmkg: [cell(0.5), cell(1.0)].concat(),
            power_wkg: [cell(2.0), cell(1.0)].concat(),
            cycle_duration_s: None,
            provenance: BTreeMap::new(),
        }
    }

    #[test]
    fn joint_map_rename_and_flip() {
        let gs = human_set();
        let mut map = JointMap::identity(["knee_l"]);
        map.excluded_human_channels.push("mtp_l".into());
        map.entries[0].robot = "left_knee".into();
        let out = apply_joint_map(&gs, &map).unwrap();
        assert_eq!(out.channel_names(), vec!["left_knee"]);
        assert_eq!(out.pos_deg[0], gs.pos_deg[0]);

        map.entries[0].sign = Sign::Minus;
        let out = apply_joint_map(&gs, &map).unwrap();
        assert!(out.pos_deg[0][0].as_slice().iter().all(|v| *v == -10.0));
        assert!(out.torque_nmkg[0][0].as_slice().iter().all(|v| *v == -0.5));
        assert_eq!(out.power_wkg[0], gs.power_wkg[0]);
    }

    #[test]
    fn joint_map_unknown_channel() {
        let map = JointMap {
            entries: vec![JointMapEntry {
                human: "elbow_l".into(),
                robot: "x".into(),
                sign: Sign::Plus,
                offset_deg: 0.0,
            }],
            excluded_human_channels: vec![],
        };
        assert!(matches!(
            apply_joint_map(&human_set(), &map),
            Err(GdafError::Mapping(_))
        ));
        let mut robot = human_set();
        robot.entity = Entity::Robot;
        assert!(apply_joint_map(&robot, &JointMap::identity(["knee_l"])).is_err());
    }

    fn full_cells(channels: &[&str], speeds: usize) -> HashMap<CellKey, CycleSeries<f64>> {
        let mut cells = HashMap::new();
        for q in Quantity::ALL {
            for c in channels {
                for s in 0..speeds {
                    cells.insert(
                        CellKey {
                            quantity: q,
                            channel: c.to_string(),
                            speed_index: s,
                        },
                        series(&[0.0, 1.0, 2.0]),
                    );
                }
            }
        }
        cells
    }

    #[test]
    fn build_single_cell_set() {
        let gs = build_gaitset(
            Entity::Robot,
            vec![ChannelId::from_name("knee_l")],
            SpeedGrid::new(vec![1.0]).unwrap(),
            full_cells(&["knee_l"], 1),
            None,
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!((gs.channels.len(), gs.speed_grid.len(), gs.n_samples()), (1, 1, 3));
    }

    #[test]
    fn build_reports_missing_cell() {
        let mut cells = full_cells(&["knee_l"], 2);
        cells.remove(&CellKey {
            quantity: Quantity::Torque,
            channel: "knee_l".into(),
            speed_index: 1,
        });
        let err = build_gaitset(
            Entity::Robot,
            vec![ChannelId::from_name("knee_l")],
            SpeedGrid::new(vec![1.0, 1.5]).unwrap(),
            cells,
            None,
            BTreeMap::new(),
        )
        .unwrap_err();
        match err {
            GdafError::IncompleteGrid {
                quantity,
                channel,
                speed,
            } => {
                assert_eq!((quantity, channel.as_str(), speed), ("torque_nmkg", "knee_l", 1.5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stride_durations() {
        let ev = StrideEvents::new(vec![0, 200, 400]).unwrap();
        let d = ev.durations_s(200.0);
        assert_eq!(d, vec![1.0, 1.0]);
        assert_eq!(d.iter().sum::<f64>() / d.len() as f64, 1.0);
    }

    #[test]
    fn trimming() {
        let ev = StrideEvents::new((0..7).map(|i| i * 10).collect()).unwrap();
        assert_eq!(ev.trim(2).unwrap().strike_indices, vec![20, 30, 40]);
        assert!(ev.trim(3).is_err());
        assert_eq!(ev.trim(0).unwrap(), ev);
    }
}
