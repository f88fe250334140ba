//! Waveform similarity, bilateral symmetry, mechanical work and the
//! composite divergence cost.

pub mod composite;
pub mod loops;
pub mod similarity;
pub mod symmetry;
pub mod table;
pub mod work;

pub use composite::{gdaf_cost, pillar_humanlikeness, pillar_symmetry, GdafIndices};
pub use loops::{loop_area, torque_angle_loop};
pub use similarity::{
    combined_waveform, mean_defined, pearson, waveform_similarity, WaveformSimilarity,
};
pub use symmetry::{combined_si, extrema, symmetry_index, Extrema};
pub use table::MetricTable;
pub use work::{work_decompose, work_divergence, work_symmetry, Work, WorkEntry, WorkTable};

/// Default guard added to every reference-scaled denominator.
pub const DEFAULT_EPS: f64 = 1e-8;
