//! Scalar abstraction for the floating-point modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real field used by the quantum, CSS and bound computations: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for Hermiticity, trace and normalization invariants.
    const INVARIANT_TOL: Self;
    /// Probabilities below this are treated as zero inside entropies.
    const ENTROPY_FLOOR: Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }
}

impl Real for f64 {
    const INVARIANT_TOL: Self = 1e-12;
    const ENTROPY_FLOOR: Self = 1e-15;
}

impl Real for f32 {
    const INVARIANT_TOL: Self = 1e-5;
    const ENTROPY_FLOOR: Self = 1e-7;
}
