use std::fmt;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the analytics are generic over: `f32` or `f64`.
///
/// Timestamps, prices and all derived statistics share one scalar type.
/// `f64` is the working default; `f32` halves memory for short synthetic
/// series but cannot represent epoch-scale timestamps to the second, so
/// prefer `f64` whenever real exchange data is involved.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Convert from `f64`, the type all configuration enters as.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is convertible to any Real")
    }

    /// Lossy `f64` view, used for diagnostics and error reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real is convertible to f64")
    }

    /// Exact conversion of small counts (grid sizes, event counts).
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::of(n as f64)
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + NumAssign + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}
