use crate::scalar::{mean, Scalar};

/// Peak flexion (`max`) and peak extension (`min`) over a cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema<T> {
    pub max: T,
    pub min: T,
}

/// Returns `None` only for an empty series.
pub fn extrema<T: Scalar>(series: &[T]) -> Option<Extrema<T>> {
    let first = *series.first()?;
    Some(series.iter().skip(1).fold(
        Extrema {
            max: first,
            min: first,
        },
        |acc, v| Extrema {
            max: acc.max.max(*v),
            min: acc.min.min(*v),
        },
    ))
}

/// Bilateral symmetry index of one entity's left/right extrema, scaled by
/// the human reference extrema:
///
/// `2 (|Lmax - Rmax| + |Lmin - Rmin|) / (|LHmax| + |RHmax| + |LHmin| + |RHmin| + eps)`
pub fn symmetry_index<T: Scalar>(
    left: Extrema<T>,
    right: Extrema<T>,
    human_left: Extrema<T>,
    human_right: Extrema<T>,
    eps: T,
) -> T {
    let two = T::lit(2.0);
    let num = two * ((left.max - right.max).abs() + (left.min - right.min).abs());
    let den = (human_left.max.abs() + human_right.max.abs())
        + (human_left.min.abs() + human_right.min.abs())
        + eps;
    num / den
}

/// Mean over pairs; `None` for an empty pair set.
pub fn combined_si<T: Scalar>(per_pair: &[T]) -> Option<T> {
    mean(per_pair)
}
