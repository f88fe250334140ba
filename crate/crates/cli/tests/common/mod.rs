#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use gdaf_core::io::{RawData, RawRecording};
use gdaf_core::model::{canonical_channels, CycleSeries, Entity, GaitSet, SpeedGrid};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn gdaf_bin() -> &'static str {
    env!("CARGO_BIN_EXE_gdaf")
}

/// A smooth random cycle: a few harmonics plus an offset, never constant.
pub fn smooth_cycle<R: Rng>(rng: &mut R, n: usize, amp: f64) -> CycleSeries<f64> {
    let offset = rng.gen_range(-amp..amp);
    let harmonics: Vec<(f64, f64)> = (1..=3)
        .map(|h| (rng.gen_range(0.2..1.0) * amp / h as f64, rng.gen_range(0.0..TAU)))
        .collect();
    let values = (0..n)
        .map(|k| {
            let x = TAU * k as f64 / (n - 1) as f64;
            offset
                + harmonics
                    .iter()
                    .enumerate()
                    .map(|(h, (a, p))| a * ((h + 1) as f64 * x + p).sin())
                    .sum::<f64>()
        })
        .collect();
    CycleSeries::from_vec_unchecked(values)
}

/// A valid gait set over the canonical channels with random smooth cycles.
pub fn random_gaitset<R: Rng>(rng: &mut R, entity: Entity, n: usize, speeds: Vec<f64>) -> GaitSet<f64> {
    let channels = canonical_channels();
    let n_sp = speeds.len();
    let grid = |amp: f64, rng: &mut R| -> Vec<Vec<CycleSeries<f64>>> {
        (0..channels.len())
            .map(|_| (0..n_sp).map(|_| smooth_cycle(rng, n, amp)).collect())
            .collect()
    };
    let pos_deg = grid(30.0, rng);
    let torque_nmkg = grid(1.5, rng);
    let power_wkg = grid(2.0, rng);
    let durations = speeds.iter().map(|s| 1.6 - 0.4 * s).collect();
    GaitSet {
        entity,
        channels: channels.clone(),
        speed_grid: SpeedGrid::new(speeds).expect("ascending speeds"),
        pos_deg,
        torque_nmkg,
        power_wkg,
        cycle_duration_s: Some(durations),
        provenance: BTreeMap::new(),
    }
}

/// Random ascending subset of the reference speed grid, at least one speed.
pub fn random_speeds<R: Rng>(rng: &mut R, max: usize) -> Vec<f64> {
    let all = SpeedGrid::reference();
    let count = rng.gen_range(1..=max);
    let mut idx: Vec<usize> = rand::seq::index::sample(rng, all.len(), count).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| all.speeds()[i]).collect()
}

/// Copies every `_l` channel onto its `_r` partner.
pub fn mirrored(gs: &GaitSet<f64>) -> GaitSet<f64> {
    let mut out = gs.clone();
    for (ci, ch) in gs.channels.iter().enumerate() {
        if let Some(stem) = ch.name.strip_suffix("_l") {
            let right = gs.channel_index(&format!("{stem}_r")).expect("partner channel");
            out.pos_deg[right] = gs.pos_deg[ci].clone();
            out.torque_nmkg[right] = gs.torque_nmkg[ci].clone();
            out.power_wkg[right] = gs.power_wkg[ci].clone();
        }
    }
    out
}

/// A 200 Hz human recording whose heel-velocity signal crosses zero
/// downward exactly at every multiple of `stride_len`.
pub fn walking_recording(speed: f64, strides: usize, stride_len: usize) -> RawRecording<f64> {
    let len = strides * stride_len + 1;
    let phase = |i: usize| TAU * (i % stride_len) as f64 / stride_len as f64;
    let channels = ["hip_flexion_l", "hip_flexion_r", "knee_l", "knee_r"];
    let series = |amp: f64, shift: f64| -> Vec<f64> { (0..len).map(|i| amp * (phase(i) + shift).sin()).collect() };
    let pos: Vec<Vec<f64>> = (0..channels.len()).map(|c| series(30.0, c as f64)).collect();
    let torque: Vec<Vec<f64>> = (0..channels.len()).map(|c| series(1.0, 0.5 + c as f64)).collect();
    let power: Vec<Vec<f64>> = (0..channels.len()).map(|c| series(2.0, 1.0 + c as f64)).collect();
    let mut events = BTreeMap::new();
    events.insert(
        "right_heel_velocity_fwd".to_string(),
        (0..len)
            .map(|i| -(TAU * (i as f64 + 0.5) / stride_len as f64).sin())
            .collect(),
    );
    RawRecording {
        sample_rate_hz: 200.0,
        channels: channels.iter().map(|s| s.to_string()).collect(),
        data: RawData {
            pos_deg: pos,
            torque,
            power,
            angular_velocity_rads: None,
            events,
        },
        speed_label_mps: speed,
        body_mass_kg: None,
    }
}

/// Every file under `dir`, keyed by its path relative to `dir`.
pub fn read_tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).expect("readable directory") {
            let path = entry.expect("directory entry").path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).expect("under root").to_path_buf();
                out.insert(rel, std::fs::read(&path).expect("readable file"));
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}
