//! Gait divergence analysis between human and humanoid-robot walking.
//!
//! The pipeline turns fixed-rate recordings into cycle-normalized gait sets
//! ([`segmentation`]), compares two gait sets joint by joint and speed by
//! speed ([`metrics`]), and packages the results as CSV/JSON bundles
//! ([`report`]). Everything numeric is generic over [`Scalar`]; the aliases
//! below fix the sample type to `f64` (or `f32`).

pub mod config;
pub mod error;
pub mod io;
pub mod metrics;
pub mod model;
pub mod report;
pub mod scalar;
pub mod segmentation;
pub mod viewer;

pub use config::{DurationMode, RunConfig};
pub use error::{GdafError, Result};
pub use model::{
    validate_gaitset, BilateralPair, ChannelId, Entity, JointMap, Quantity, SpeedGrid, Violation,
};
pub use scalar::Scalar;

pub type GaitSet = model::GaitSet<f64>;
pub type GaitSetF32 = model::GaitSet<f32>;
pub type CycleSeries = model::CycleSeries<f64>;
pub type CycleSeriesF32 = model::CycleSeries<f32>;
pub type RawRecording = io::RawRecording<f64>;
pub type ReportBundle = report::ReportBundle<f64>;
pub type GdafIndices = metrics::GdafIndices<f64>;
pub type MetricTable = metrics::MetricTable<f64>;
pub type WorkTable = metrics::WorkTable<f64>;
pub type ViewerBundle = viewer::ViewerBundle<f64>;
