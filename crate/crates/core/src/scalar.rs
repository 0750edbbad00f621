use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating point type the metric and bound computations are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Absolute threshold under which a covariance-derived denominator is treated as zero.
    const DEGENERACY_TOL: Self;

    /// Converts an `f64` constant. Every finite `f64` converts (with rounding) to both supported types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits in float")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const DEGENERACY_TOL: f64 = 1e-15;
}

// f32 accumulation leaves residue around 1e-7 where the exact value is zero.
impl Scalar for f32 {
    const DEGENERACY_TOL: f32 = 1e-6;
}

/// Clamps a correlation-type ratio into `[-1, 1]`, absorbing last-ulp rounding overshoot.
pub(crate) fn clamp_unit<T: Scalar>(x: T) -> T {
    x.max(-T::one()).min(T::one())
}
