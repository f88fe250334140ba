//! Analysis of a human/robot gait-set pair into a report bundle: similarity
//! heatmaps, symmetry distributions, work curves, torque-angle loops and
//! the per-speed composite index table.
//!
//! Bundle directory layout (all CSV files are LF-terminated, `.` decimals):
//!
//! | file | columns |
//! |------|---------|
//! | `manifest.json` | run metadata, config echo, flag counts |
//! | `similarity_{angle,moment,power}.csv` | `joint`, one column per speed (empty = undefined) |
//! | `si_distribution.csv` | `pair,speed_mps,entity,si,a_work` |
//! | `work_curves.csv` | `joint,speed_mps,entity,w_plus,w_minus,duration_s,unit_duration` |
//! | `work_divergence.csv` | `joint`, one column per speed |
//! | `loops/<entity>_<joint>_<speed>.csv` | `gait_pct,angle_deg,torque_nmkg` (N + 1 rows) |
//! | `gdaf_table.csv` | `speed_mps,si_robot,si_human,a_work_robot,a_work_human,s_robot,r_wav,d_work,h,c` |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::config::{DurationMode, RunConfig};
use crate::error::{GdafError, Result};
use crate::io::format_pct;
use crate::metrics::{
    combined_si, combined_waveform, extrema, mean_defined, symmetry_index, waveform_similarity,
    work_decompose, work_divergence, work_symmetry, Extrema, GdafIndices, MetricTable, Work,
    WorkEntry, WorkTable,
};
use crate::model::{
    speed_key, validate_gaitset, BilateralPair, Entity, GaitSet, Quantity, SPEED_RESOLUTION,
};
use crate::scalar::{mean, Scalar};
use crate::segmentation::apply_joint_map;

pub const GDAF_TABLE_HEADER: &str =
    "speed_mps,si_robot,si_human,a_work_robot,a_work_human,s_robot,r_wav,d_work,h,c";

const LOOP_PREFIXES: [&str; 3] = ["hip_flexion", "knee", "ankle"];

/// Speed label: rounded to 1e-6 m/s, at least two decimals (`0.50`, `1.85`, `1.234`).
pub fn format_speed(speed: f64) -> String {
    let micro = speed_key(speed);
    let per_unit = (1.0 / SPEED_RESOLUTION).round() as i64;
    let (whole, frac) = (micro.div_euclid(per_unit), micro.rem_euclid(per_unit));
    let mut digits = format!("{frac:06}");
    while digits.len() > 2 && digits.ends_with('0') {
        digits.pop();
    }
    format!("{whole}.{digits}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Heatmaps<T> {
    pub angle: MetricTable<T>,
    pub moment: MetricTable<T>,
    pub power: MetricTable<T>,
}

impl<T: Scalar> Heatmaps<T> {
    pub fn table(&self, q: Quantity) -> &MetricTable<T> {
        match q {
            Quantity::Pos => &self.angle,
            Quantity::Torque => &self.moment,
            Quantity::Power => &self.power,
        }
    }
}

/// Symmetry of one bilateral pair for one entity at one speed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryRecord<T> {
    pub pair: String,
    pub speed_mps: f64,
    pub entity: Entity,
    pub si: T,
    pub a_work: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopRecord<T> {
    pub entity: Entity,
    pub joint: String,
    pub speed_mps: f64,
    pub points: Vec<(T, T)>,
}

impl<T: Scalar> LoopRecord<T> {
    pub fn file_name(&self) -> String {
        format!("{}_{}_{}.csv", self.entity, self.joint, format_speed(self.speed_mps))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntitySummary {
    pub entity: Entity,
    pub channels: usize,
    pub speeds: usize,
    pub n_samples: usize,
    pub unit_duration: bool,
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Flags {
    /// Similarity cells left undefined because a series was constant, per quantity.
    pub excluded_similarity_cells: BTreeMap<String, usize>,
    /// Work-divergence cells whose human reference work is near zero.
    pub reference_degenerate_work_cells: Vec<String>,
    pub annotations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub human: EntitySummary,
    pub robot: EntitySummary,
    pub common_speeds_mps: Vec<f64>,
    pub joints: Vec<String>,
    pub pairs: Vec<String>,
    pub flags: Flags,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBundle<T> {
    pub manifest: Manifest,
    pub heatmaps: Heatmaps<T>,
    pub si_distribution: Vec<SymmetryRecord<T>>,
    pub work_curves: WorkTable<T>,
    pub work_divergence: MetricTable<T>,
    pub loops: Vec<LoopRecord<T>>,
    pub gdaf_table: Vec<GdafIndices<T>>,
}

fn resolve_joints<T: Scalar>(h: &GaitSet<T>, r: &GaitSet<T>, cfg: &RunConfig) -> Result<Vec<String>> {
    let joints: Vec<String> = match &cfg.joints {
        Some(list) => {
            for j in list {
                if h.channel_index(j).is_none() || r.channel_index(j).is_none() {
                    return Err(GdafError::Config(format!(
                        "joint `{j}` is not present in both gait sets"
                    )));
                }
            }
            list.clone()
        }
        None => r
            .channels
            .iter()
            .filter(|c| h.channel_index(&c.name).is_some())
            .map(|c| c.name.clone())
            .collect(),
    };
    if joints.is_empty() {
        return Err(GdafError::Config("the gait sets share no channel".into()));
    }
    Ok(joints)
}

fn resolve_pairs<T: Scalar>(h: &GaitSet<T>, r: &GaitSet<T>, cfg: &RunConfig) -> Result<Vec<BilateralPair>> {
    cfg.pair_set
        .iter()
        .map(|name| {
            BilateralPair::resolve(name, &h.channels)?;
            BilateralPair::resolve(name, &r.channels)
        })
        .collect()
}

/// Cycle duration used for work integration and whether it was assumed.
fn duration<T: Scalar>(gs: &GaitSet<T>, speed: f64, mode: DurationMode) -> (T, bool) {
    let recorded = match mode {
        DurationMode::Unit => None,
        DurationMode::FromData => gs.speed_grid.index_of(speed).and_then(|s| gs.duration_at(s)),
    };
    match recorded {
        Some(t) => (t, false),
        None => (T::one(), true),
    }
}

/// `R_wav` from per-quantity means; quantities with no defined cell are
/// dropped and the remaining weights renormalized.
fn r_wav_from_means<T: Scalar>(angle: Option<T>, moment: Option<T>, power: Option<T>) -> Result<T> {
    if let (Some(a), Some(m), Some(p)) = (angle, moment, power) {
        return Ok(combined_waveform(a, m, p));
    }
    let parts = [(0.5, angle), (0.3, moment), (0.2, power)];
    let (mut acc, mut weight) = (T::zero(), T::zero());
    for (w, v) in parts {
        if let Some(v) = v {
            acc = acc + T::lit(w) * v;
            weight = weight + T::lit(w);
        }
    }
    if weight == T::zero() {
        return Err(GdafError::DegenerateVariance);
    }
    Ok(acc / weight)
}

fn side_extrema<T: Scalar>(gs: &GaitSet<T>, pair: &BilateralPair, speed: f64) -> Result<(Extrema<T>, Extrema<T>)> {
    let get = |name: &str| -> Result<Extrema<T>> {
        let s = gs.series(Quantity::Pos, name, speed)?;
        extrema(s.as_slice()).ok_or(GdafError::EmptyInput("empty angle series"))
    };
    Ok((get(&pair.left.name)?, get(&pair.right.name)?))
}

/// Runs the whole analysis of `human` against `robot`.
///
/// When a joint map is configured and the human set has not been mapped
/// yet (no `joint_map_applied` provenance entry), it is applied first.
pub fn build_report<T: Scalar>(human: &GaitSet<T>, robot: &GaitSet<T>, cfg: &RunConfig) -> Result<ReportBundle<T>> {
    cfg.check()?;
    for gs in [human, robot] {
        let v = validate_gaitset(gs);
        if !v.is_empty() {
            return Err(GdafError::Invalid(v));
        }
    }
    let mapped;
    let human = match cfg.joint_map()? {
        Some(map) if human.provenance.get("joint_map_applied").map(String::as_str) != Some("true") => {
            mapped = apply_joint_map(human, &map)?;
            &mapped
        }
        _ => human,
    };
    if human.n_samples() != robot.n_samples() {
        return Err(GdafError::Schema(format!(
            "sample counts differ: human {} vs robot {}",
            human.n_samples(),
            robot.n_samples()
        )));
    }

    let speeds = human.speed_grid.intersect(&robot.speed_grid);
    if speeds.is_empty() {
        return Err(GdafError::NoCommonSpeeds);
    }
    let joints = resolve_joints(human, robot, cfg)?;
    let pairs = resolve_pairs(human, robot, cfg)?;
    let loop_joints: Vec<String> = match &cfg.loop_joints {
        Some(list) => {
            if let Some(j) = list.iter().find(|j| !joints.contains(j)) {
                return Err(GdafError::Config(format!("loop joint `{j}` is not a compared joint")));
            }
            list.clone()
        }
        None => joints
            .iter()
            .filter(|j| LOOP_PREFIXES.iter().any(|p| j.starts_with(p)))
            .cloned()
            .collect(),
    };
    let eps = T::lit(cfg.eps);
    let threshold = T::lit(cfg.degenerate_reference_threshold);

    // channels needing work: compared joints plus both sides of every pair
    let mut work_channels: Vec<String> = joints.clone();
    for p in &pairs {
        for name in [&p.left.name, &p.right.name] {
            if !work_channels.contains(name) {
                work_channels.push(name.clone());
            }
        }
    }

    let mut heatmaps = Heatmaps {
        angle: MetricTable::new("similarity_angle", joints.clone(), speeds.clone()),
        moment: MetricTable::new("similarity_moment", joints.clone(), speeds.clone()),
        power: MetricTable::new("similarity_power", joints.clone(), speeds.clone()),
    };
    let mut d_table = MetricTable::new("work_divergence", joints.clone(), speeds.clone());
    let mut flags = Flags::default();
    let mut excluded = [0usize; 3];
    let mut si_distribution = Vec::new();
    let mut work_curves = WorkTable::default();
    let mut loops = Vec::new();
    let mut gdaf_table = Vec::with_capacity(speeds.len());
    let (mut unit_h, mut unit_r) = (false, false);

    for (col, &speed) in speeds.iter().enumerate() {
        // waveform similarity
        let sim = waveform_similarity(human, robot, &joints, speed)?;
        let mut means = [None; 3];
        for (qi, q) in Quantity::ALL.into_iter().enumerate() {
            let cells = sim.cells(q);
            let table = match q {
                Quantity::Pos => &mut heatmaps.angle,
                Quantity::Torque => &mut heatmaps.moment,
                Quantity::Power => &mut heatmaps.power,
            };
            for (row, v) in cells.iter().enumerate() {
                table.set(row, col, *v);
            }
            let (m, n_excluded) = mean_defined(cells);
            means[qi] = m;
            excluded[qi] += n_excluded;
        }
        let r_wav = r_wav_from_means(means[0], means[1], means[2])?;

        // work per channel and entity
        let (t_h, u_h) = duration(human, speed, cfg.duration_mode);
        let (t_r, u_r) = duration(robot, speed, cfg.duration_mode);
        unit_h |= u_h;
        unit_r |= u_r;
        let mut works: BTreeMap<(Entity, &str), Work<T>> = BTreeMap::new();
        for name in &work_channels {
            for (role, gs, t, unit) in [
                (Entity::Human, human, t_h, u_h),
                (Entity::Robot, robot, t_r, u_r),
            ] {
                let p = gs.series(Quantity::Power, name, speed)?;
                let w = work_decompose(p.as_slice(), t);
                works.insert((role, name.as_str()), w);
                work_curves.entries.push(WorkEntry {
                    channel: name.clone(),
                    speed_mps: speed,
                    entity: role,
                    work: w,
                    duration_s: t,
                    unit_duration: unit,
                });
            }
        }
        let work = |e: Entity, name: &str| works[&(e, name)];

        // bilateral symmetry
        let (mut si_r, mut si_h, mut a_r, mut a_h) = (vec![], vec![], vec![], vec![]);
        for p in &pairs {
            let (hl, hr) = side_extrema(human, p, speed)?;
            let (rl, rr) = side_extrema(robot, p, speed)?;
            let (whl, whr) = (work(Entity::Human, &p.left.name), work(Entity::Human, &p.right.name));
            let (wrl, wrr) = (work(Entity::Robot, &p.left.name), work(Entity::Robot, &p.right.name));
            let entries = [
                (Entity::Robot, symmetry_index(rl, rr, hl, hr, eps), work_symmetry(wrl, wrr, whl, whr, eps)),
                (Entity::Human, symmetry_index(hl, hr, hl, hr, eps), work_symmetry(whl, whr, whl, whr, eps)),
            ];
            for (entity, si, a) in entries {
                match entity {
                    Entity::Robot => {
                        si_r.push(si);
                        a_r.push(a);
                    }
                    Entity::Human => {
                        si_h.push(si);
                        a_h.push(a);
                    }
                }
                si_distribution.push(SymmetryRecord {
                    pair: p.pair_name.clone(),
                    speed_mps: speed,
                    entity,
                    si,
                    a_work: a,
                });
            }
        }

        // work divergence
        let mut d_cells = Vec::with_capacity(joints.len());
        for (row, j) in joints.iter().enumerate() {
            let wh = work(Entity::Human, j);
            let d = work_divergence(wh, work(Entity::Robot, j), eps);
            d_table.set(row, col, Some(d));
            let degenerate = wh.plus.abs() < threshold || wh.minus.abs() < threshold;
            if degenerate {
                flags
                    .reference_degenerate_work_cells
                    .push(format!("{j}@{}", format_speed(speed)));
            }
            if !(degenerate && cfg.exclude_flagged_work_cells) {
                d_cells.push(d);
            }
        }
        let d_work = mean(&d_cells).ok_or_else(|| {
            GdafError::Config(format!(
                "every work divergence cell at {} m/s is reference-degenerate and excluded",
                format_speed(speed)
            ))
        })?;

        let pair_mean = |v: &[T]| combined_si(v).expect("pair set is non-empty");
        gdaf_table.push(GdafIndices::from_components(
            speed,
            pair_mean(&si_r),
            pair_mean(&si_h),
            pair_mean(&a_r),
            pair_mean(&a_h),
            r_wav,
            d_work,
        ));

        for (role, gs) in [(Entity::Human, human), (Entity::Robot, robot)] {
            for j in &loop_joints {
                loops.push(LoopRecord {
                    entity: role,
                    joint: j.clone(),
                    speed_mps: speed,
                    points: crate::metrics::torque_angle_loop(gs, j, speed)?,
                });
            }
        }
    }

    for (qi, name) in ["angle", "moment", "power"].into_iter().enumerate() {
        flags.excluded_similarity_cells.insert(name.into(), excluded[qi]);
    }
    if unit_h || unit_r {
        flags.annotations.push(
            "unit-duration assumption: cycle durations missing, work integrated over 1 s cycles"
                .into(),
        );
    }
    let summary = |role: Entity, gs: &GaitSet<T>, unit: bool| EntitySummary {
        entity: role,
        channels: gs.channels.len(),
        speeds: gs.speed_grid.len(),
        n_samples: gs.n_samples(),
        unit_duration: unit,
        provenance: gs.provenance.clone(),
    };
    let manifest = Manifest {
        tool: "gdaf".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        human: summary(Entity::Human, human, unit_h),
        robot: summary(Entity::Robot, robot, unit_r),
        common_speeds_mps: speeds,
        joints,
        pairs: pairs.iter().map(|p| p.pair_name.clone()).collect(),
        flags,
    };
    Ok(ReportBundle {
        manifest,
        heatmaps,
        si_distribution,
        work_curves,
        work_divergence: d_table,
        loops,
        gdaf_table,
    })
}

fn bool_text(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| GdafError::io(path, e))
}

impl<T: Scalar> ReportBundle<T> {
    pub fn si_distribution_csv(&self) -> String {
        let mut out = String::from("pair,speed_mps,entity,si,a_work\n");
        for r in &self.si_distribution {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.pair,
                format_speed(r.speed_mps),
                r.entity,
                r.si.to_text(),
                r.a_work.to_text()
            );
        }
        out
    }

    pub fn work_curves_csv(&self) -> String {
        let mut out =
            String::from("joint,speed_mps,entity,w_plus,w_minus,duration_s,unit_duration\n");
        for e in &self.work_curves.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                e.channel,
                format_speed(e.speed_mps),
                e.entity,
                e.work.plus.to_text(),
                e.work.minus.to_text(),
                e.duration_s.to_text(),
                bool_text(e.unit_duration)
            );
        }
        out
    }

    pub fn gdaf_table_csv(&self) -> String {
        let mut out = format!("{GDAF_TABLE_HEADER}\n");
        for g in &self.gdaf_table {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                format_speed(g.speed_mps),
                g.si_robot.to_text(),
                g.si_human.to_text(),
                g.a_work_robot.to_text(),
                g.a_work_human.to_text(),
                g.s_robot.to_text(),
                g.r_wav.to_text(),
                g.d_work.to_text(),
                g.h.to_text(),
                g.c.to_text()
            );
        }
        out
    }

    pub fn manifest_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        s.push('\n');
        s
    }
}

fn loop_csv<T: Scalar>(points: &[(T, T)]) -> String {
    let n = points.len().saturating_sub(1);
    let mut out = String::from("gait_pct,angle_deg,torque_nmkg\n");
    for (k, (a, t)) in points.iter().enumerate() {
        // the closing point repeats 0%
        let pct = if k == n { "0".to_string() } else { format_pct(k, n.max(2)) };
        let _ = writeln!(out, "{pct},{},{}", a.to_text(), t.to_text());
    }
    out
}

/// Writes every artifact family into `dir` (created if needed). Output is a
/// pure function of the bundle, so identical bundles give identical trees.
pub fn write_bundle<T: Scalar>(bundle: &ReportBundle<T>, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    let loops_dir = dir.join("loops");
    fs::create_dir_all(&loops_dir).map_err(|e| GdafError::io(&loops_dir, e))?;
    write_file(&dir.join("manifest.json"), &bundle.manifest_json())?;
    for (q, file) in [
        (Quantity::Pos, "similarity_angle.csv"),
        (Quantity::Torque, "similarity_moment.csv"),
        (Quantity::Power, "similarity_power.csv"),
    ] {
        write_file(&dir.join(file), &bundle.heatmaps.table(q).to_csv("joint"))?;
    }
    write_file(&dir.join("si_distribution.csv"), &bundle.si_distribution_csv())?;
    write_file(&dir.join("work_curves.csv"), &bundle.work_curves_csv())?;
    write_file(
        &dir.join("work_divergence.csv"),
        &bundle.work_divergence.to_csv("joint"),
    )?;
    for l in &bundle.loops {
        write_file(&loops_dir.join(l.file_name()), &loop_csv(&l.points))?;
    }
    write_file(&dir.join("gdaf_table.csv"), &bundle.gdaf_table_csv())
}

/// Parses a `gdaf_table.csv` back into indices.
pub fn parse_gdaf_table<T: Scalar + FromStr>(text: &str) -> Result<Vec<GdafIndices<T>>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == GDAF_TABLE_HEADER => {}
        other => {
            return Err(GdafError::Schema(format!(
                "unexpected gdaf table header: {other:?}"
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let bad = |what: &str| GdafError::Schema(format!("gdaf table row {}: {what}", i + 1));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 10 {
                return Err(bad("expected 10 fields"));
            }
            let speed: f64 = f[0].parse().map_err(|_| bad("bad speed"))?;
            let v = |k: usize| f[k].parse::<T>().map_err(|_| bad(f[k]));
            Ok(GdafIndices {
                speed_mps: speed,
                si_robot: v(1)?,
                si_human: v(2)?,
                a_work_robot: v(3)?,
                a_work_human: v(4)?,
                s_robot: v(5)?,
                r_wav: v(6)?,
                d_work: v(7)?,
                h: v(8)?,
                c: v(9)?,
            })
        })
        .collect()
}

/// Human-readable table, one column per speed, rows in the order
/// SI, A, S (symmetry), R_wav, d_work, H (human-likeness), C. Symmetry
/// rows show the robot value with the human reference in parentheses.
pub fn format_index_table<T: Scalar>(rows: &[GdafIndices<T>]) -> String {
    let f = |v: T| format!("{:.4}", v.to_f64().unwrap_or(f64::NAN));
    let mut lines: Vec<(String, String, Vec<String>)> = vec![(
        "Category".into(),
        "Metric".into(),
        rows.iter().map(|g| format_speed(g.speed_mps)).collect(),
    )];
    let mut push = |cat: &str, metric: &str, cells: Vec<String>| {
        lines.push((cat.into(), metric.into(), cells));
    };
    push(
        "Symmetry",
        "SI_R (SI_H)",
        rows.iter().map(|g| format!("{} ({})", f(g.si_robot), f(g.si_human))).collect(),
    );
    push(
        "",
        "A_W_R (A_W_H)",
        rows.iter()
            .map(|g| format!("{} ({})", f(g.a_work_robot), f(g.a_work_human)))
            .collect(),
    );
    push("", "S_R", rows.iter().map(|g| f(g.s_robot)).collect());
    push("Human-likeness", "R_wav", rows.iter().map(|g| f(g.r_wav)).collect());
    push("", "d_work", rows.iter().map(|g| f(g.d_work)).collect());
    push("", "H", rows.iter().map(|g| f(g.h)).collect());
    push("Comprehensive", "C_GDAF", rows.iter().map(|g| f(g.c)).collect());

    let w0 = lines.iter().map(|l| l.0.len()).max().unwrap_or(0);
    let w1 = lines.iter().map(|l| l.1.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..rows.len())
        .map(|i| lines.iter().map(|l| l.2[i].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (cat, metric, cells) in &lines {
        let mut line = format!("{cat:<w0$}  {metric:<w1$}");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(line, "  {c:>w$}");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
