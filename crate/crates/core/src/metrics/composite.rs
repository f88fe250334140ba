use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Robot symmetry pillar: `0.5 * SI + 0.5 * A / 10`.
pub fn pillar_symmetry<T: Scalar>(si_robot: T, a_work_robot: T) -> T {
    T::half() * si_robot + T::half() * (a_work_robot / T::lit(10.0))
}

/// Human-likeness pillar: `((1 - R_wav) + d_work / 10) / 2`.
pub fn pillar_humanlikeness<T: Scalar>(r_wav: T, d_work: T) -> T {
    ((T::one() - r_wav) + d_work / T::lit(10.0)) / T::lit(2.0)
}

/// Composite cost, equal weight on both pillars. Lower is better.
pub fn gdaf_cost<T: Scalar>(s_robot: T, h: T) -> T {
    T::half() * s_robot + T::half() * h
}

/// Everything computed for one speed, from the pillar inputs up to the composite cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GdafIndices<T> {
    pub speed_mps: f64,
    pub si_robot: T,
    pub si_human: T,
    pub a_work_robot: T,
    pub a_work_human: T,
    pub s_robot: T,
    pub r_wav: T,
    pub d_work: T,
    pub h: T,
    pub c: T,
}

impl<T: Scalar> GdafIndices<T> {
    /// Derives `s_robot`, `h` and `c` from the pillar inputs.
    pub fn from_components(
        speed_mps: f64,
        si_robot: T,
        si_human: T,
        a_work_robot: T,
        a_work_human: T,
        r_wav: T,
        d_work: T,
    ) -> Self {
        let s_robot = pillar_symmetry(si_robot, a_work_robot);
        let h = pillar_humanlikeness(r_wav, d_work);
        Self {
            speed_mps,
            si_robot,
            si_human,
            a_work_robot,
            a_work_human,
            s_robot,
            r_wav,
            d_work,
            h,
            c: gdaf_cost(s_robot, h),
        }
    }

    /// True when `s_robot`, `h` and `c` equal their definitions bit for bit.
    pub fn identities_hold(&self) -> bool {
        self.s_robot == pillar_symmetry(self.si_robot, self.a_work_robot)
            && self.h == pillar_humanlikeness(self.r_wav, self.d_work)
            && self.c == gdaf_cost(self.s_robot, self.h)
    }
}
