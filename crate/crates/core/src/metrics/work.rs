use serde::Serialize;

use crate::model::Entity;
use crate::scalar::Scalar;

/// Positive and negative mechanical work over one cycle, J/kg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Work<T> {
    pub plus: T,
    pub minus: T,
}

fn trapezoid<T: Scalar>(values: impl Iterator<Item = T>, dt: T) -> T {
    let half = T::half();
    let mut prev: Option<T> = None;
    let mut acc = T::zero();
    for v in values {
        if let Some(p) = prev {
            acc = acc + (p + v) * half;
        }
        prev = Some(v);
    }
    acc * dt
}

/// Trapezoidal integral of a uniformly sampled cycle lasting `duration` seconds.
pub fn integrate<T: Scalar>(power: &[T], duration: T) -> T {
    let dt = duration / T::from_usize(power.len().saturating_sub(1).max(1)).expect("usize fits");
    trapezoid(power.iter().copied(), dt)
}

/// Splits a power cycle into generated (`max(P, 0)`) and absorbed
/// (`min(P, 0)`) work by trapezoidal integration with `dt = T / (N - 1)`.
pub fn work_decompose<T: Scalar>(power: &[T], duration: T) -> Work<T> {
    let dt = duration / T::from_usize(power.len().saturating_sub(1).max(1)).expect("usize fits");
    let zero = T::zero();
    Work {
        plus: trapezoid(power.iter().map(|p| p.max(zero)), dt),
        minus: trapezoid(power.iter().map(|p| p.min(zero)), dt),
    }
}

/// Left/right work asymmetry of one entity scaled by the human reference:
///
/// `0.5 * (2|W+L - W+R| / (|W+LH| + |W+RH| + eps) + 2|W-L - W-R| / (|W-LH| + |W-RH| + eps))`
pub fn work_symmetry<T: Scalar>(
    left: Work<T>,
    right: Work<T>,
    human_left: Work<T>,
    human_right: Work<T>,
    eps: T,
) -> T {
    let two = T::lit(2.0);
    let pos = two * (left.plus - right.plus).abs()
        / (human_left.plus.abs() + human_right.plus.abs() + eps);
    let neg = two * (left.minus - right.minus).abs()
        / (human_left.minus.abs() + human_right.minus.abs() + eps);
    T::half() * (pos + neg)
}

/// Human-referenced divergence of robot work at one joint:
///
/// `0.5 * (|W+H - W+R| / (|W+H| + eps) + |W-H - W-R| / (|W-H| + eps))`
pub fn work_divergence<T: Scalar>(human: Work<T>, robot: Work<T>, eps: T) -> T {
    let pos = (human.plus - robot.plus).abs() / (human.plus.abs() + eps);
    let neg = (human.minus - robot.minus).abs() / (human.minus.abs() + eps);
    T::half() * (pos + neg)
}

/// Work of one channel of one entity at one speed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkEntry<T> {
    pub channel: String,
    pub speed_mps: f64,
    pub entity: Entity,
    pub work: Work<T>,
    pub duration_s: T,
    /// The cycle duration was unknown and taken as 1 s.
    pub unit_duration: bool,
}

/// Work entries keyed by (channel, speed, entity), in insertion order.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct WorkTable<T> {
    pub entries: Vec<WorkEntry<T>>,
}

impl<T: Scalar> WorkTable<T> {
    pub fn get(&self, channel: &str, speed_mps: f64, entity: Entity) -> Option<&WorkEntry<T>> {
        let key = crate::model::speed_key(speed_mps);
        self.entries.iter().find(|e| {
            e.channel == channel && e.entity == entity && crate::model::speed_key(e.speed_mps) == key
        })
    }
}
