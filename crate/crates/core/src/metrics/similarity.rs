use serde::Serialize;

use crate::error::{GdafError, Result};
use crate::model::{CycleSeries, GaitSet, Quantity};
use crate::scalar::{mean, Scalar};

/// Sample Pearson correlation of two equally sampled cycles.
///
/// Fails with [`GdafError::DegenerateVariance`] when either series is
/// constant.
pub fn pearson<T: Scalar>(x: &CycleSeries<T>, y: &CycleSeries<T>) -> Result<T> {
    pearson_slices(x.as_slice(), y.as_slice())
}

pub fn pearson_slices<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(GdafError::Schema(format!(
            "pearson: lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(GdafError::EmptyInput("pearson needs at least 2 samples"));
    }
    if is_constant(x) || is_constant(y) {
        return Err(GdafError::DegenerateVariance);
    }
    let mx = mean(x).expect("non-empty");
    let my = mean(y).expect("non-empty");
    // Centered values are kept as unevaluated (hi, lo) pairs and the sums are
    // accumulated with error-free transforms, so r keeps full relative
    // accuracy even when heavy cancellation makes it close to zero.
    let dx: Vec<(T, T)> = x.iter().map(|a| two_sum(*a, -mx)).collect();
    let dy: Vec<(T, T)> = y.iter().map(|b| two_sum(*b, -my)).collect();
    let sxy = centered_dot(&dx, &dy);
    let sxx = centered_dot(&dx, &dx);
    let syy = centered_dot(&dy, &dy);
    if sxx == T::zero() || syy == T::zero() {
        return Err(GdafError::DegenerateVariance);
    }
    // sqrt(a * a) == a exactly, so pearson(x, x) is exactly 1
    let r = sxy / (sxx * syy).sqrt();
    // rounding can push |r| a hair past 1
    Ok(r.max(-T::one()).min(T::one()))
}

fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod<T: Scalar>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Sum of `(xh + xl) * (yh + yl)` over the pairs, evaluated as if in twice
/// the working precision.
fn centered_dot<T: Scalar>(x: &[(T, T)], y: &[(T, T)]) -> T {
    let (mut s, mut c) = (T::zero(), T::zero());
    for (&(xh, xl), &(yh, yl)) in x.iter().zip(y) {
        let (p, pe) = two_prod(xh, yh);
        let (t, te) = two_sum(s, p);
        s = t;
        c = c + pe + te + xh * yl + xl * yh + xl * yl;
    }
    s + c
}

fn is_constant<T: Scalar>(x: &[T]) -> bool {
    x.iter().all(|v| *v == x[0])
}

/// Per-joint correlations at one speed; `None` marks a degenerate cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveformSimilarity<T> {
    pub joints: Vec<String>,
    pub angle: Vec<Option<T>>,
    pub moment: Vec<Option<T>>,
    pub power: Vec<Option<T>>,
}

impl<T: Scalar> WaveformSimilarity<T> {
    pub fn cells(&self, quantity: Quantity) -> &[Option<T>] {
        match quantity {
            Quantity::Pos => &self.angle,
            Quantity::Torque => &self.moment,
            Quantity::Power => &self.power,
        }
    }
}

/// Correlates human and robot angle, moment and power per joint at `speed`.
pub fn waveform_similarity<T: Scalar>(
    human: &GaitSet<T>,
    robot: &GaitSet<T>,
    joints: &[String],
    speed: f64,
) -> Result<WaveformSimilarity<T>> {
    let cell = |q: Quantity, j: &str| -> Result<Option<T>> {
        let h = human.series(q, j, speed)?;
        let r = robot.series(q, j, speed)?;
        match pearson(h, r) {
            Ok(v) => Ok(Some(v)),
            Err(GdafError::DegenerateVariance) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let column = |q: Quantity| -> Result<Vec<Option<T>>> {
        joints.iter().map(|j| cell(q, j)).collect()
    };
    Ok(WaveformSimilarity {
        joints: joints.to_vec(),
        angle: column(Quantity::Pos)?,
        moment: column(Quantity::Torque)?,
        power: column(Quantity::Power)?,
    })
}

/// Mean over defined cells and the number of excluded (undefined) cells.
pub fn mean_defined<T: Scalar>(cells: &[Option<T>]) -> (Option<T>, usize) {
    let defined: Vec<T> = cells.iter().flatten().copied().collect();
    (mean(&defined), cells.len() - defined.len())
}

/// `0.5 * angle + 0.3 * moment + 0.2 * power` over per-quantity mean correlations.
pub fn combined_waveform<T: Scalar>(mean_angle: T, mean_moment: T, mean_power: T) -> T {
    T::lit(0.5) * mean_angle + T::lit(0.3) * mean_moment + T::lit(0.2) * mean_power
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn s(v: &[f64]) -> CycleSeries<f64> {
        CycleSeries::from_vec_unchecked(v.to_vec())
    }

    #[test]
    fn perfect_correlation() {
        assert_eq!(pearson(&s(&[1.0, 2.0, 3.0]), &s(&[1.0, 2.0, 3.0])).unwrap(), 1.0);
        let x = [1.0, 4.0, 2.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v| -v + 7.0).collect();
        assert!(close(pearson(&s(&x), &s(&y)).unwrap(), -1.0, 1e-15));
    }

    #[test]
    fn four_point_fixture() {
        // cov 3, var_x 5, var_y 2 (after centering): 3 / sqrt(10)
        let r = pearson(&s(&[0.0, 1.0, 2.0, 3.0]), &s(&[0.0, 1.0, 1.0, 2.0])).unwrap();
        assert!(close(r, 0.948_683_298_050_513_8, 1e-15), "{r}");
    }

    #[test]
    fn constant_is_degenerate() {
        assert!(matches!(
            pearson(&s(&[0.1; 5]), &s(&[1.0, 2.0, 3.0, 4.0, 5.0])),
            Err(GdafError::DegenerateVariance)
        ));
    }

    #[test]
    fn f32_works() {
        let x = CycleSeries::from_vec_unchecked(vec![0.0f32, 1.0, 2.0, 3.0]);
        let y = CycleSeries::from_vec_unchecked(vec![0.0f32, 1.0, 1.0, 2.0]);
        assert!((pearson(&x, &y).unwrap() - 0.948_683_3).abs() < 1e-6);
    }

    #[test]
    fn combined_weights() {
        assert_eq!(combined_waveform(1.0, 1.0, 1.0), 1.0);
        assert!(close(combined_waveform(0.8, 0.5, 0.2), 0.59, 1e-15));
        assert_eq!(combined_waveform(0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn mean_skips_undefined() {
        assert_eq!(mean_defined(&[Some(1.0), None, Some(0.5)]), (Some(0.75), 1));
        assert_eq!(mean_defined::<f64>(&[None]), (None, 1));
    }
}
