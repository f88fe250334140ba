use crate::error::Result;
use crate::model::{GaitSet, Quantity};
use crate::scalar::Scalar;

/// `(angle, torque)` points over the cycle, closed by repeating the 0% point.
pub fn torque_angle_loop<T: Scalar>(gs: &GaitSet<T>, joint: &str, speed: f64) -> Result<Vec<(T, T)>> {
    let angle = gs.series(Quantity::Pos, joint, speed)?.as_slice();
    let torque = gs.series(Quantity::Torque, joint, speed)?.as_slice();
    let mut points: Vec<(T, T)> = angle.iter().copied().zip(torque.iter().copied()).collect();
    if let Some(first) = points.first().copied() {
        points.push(first);
    }
    Ok(points)
}

/// Signed shoelace area of a closed polygon (positive when counter-clockwise).
pub fn loop_area<T: Scalar>(points: &[(T, T)]) -> T {
    let twice = points
        .windows(2)
        .map(|w| w[0].0 * w[1].1 - w[1].0 * w[0].1)
        .fold(T::zero(), |a, b| a + b);
    twice * T::half()
}
