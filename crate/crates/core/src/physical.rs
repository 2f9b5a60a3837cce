//! Physical-time measurement: equidistant resampling and mean squared
//! returns.
//!
//! Sampling uses previous-tick interpolation (the last traded price at or
//! before each grid time) over non-overlapping, consecutive windows
//! anchored at the first tick. The trailing partial window is dropped.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::PriceSeries;

/// Hard cap on the number of sampling windows; finer grids than this are
/// almost certainly a unit mistake (e.g. dt in nanoseconds) and would
/// exhaust memory before producing anything useful.
const MAX_WINDOWS: f64 = 1e8;

/// Simple returns sampled on an equidistant grid of spacing `dt` seconds.
#[derive(Debug, Clone)]
pub struct ReturnSample<T> {
    dt: T,
    returns: Vec<T>,
}

impl<T: Real> ReturnSample<T> {
    #[inline]
    pub fn dt(&self) -> T {
        self.dt
    }

    #[inline]
    pub fn returns(&self) -> &[T] {
        &self.returns
    }

    /// Number of complete windows, `floor(span / dt)`.
    #[inline]
    pub fn n_windows(&self) -> usize {
        self.returns.len()
    }

    /// Mean of the squared returns.
    pub fn squared_return_mean(&self) -> Result<T> {
        if self.returns.is_empty() {
            return Err(Error::EmptySample);
        }
        let sum = self.returns.iter().fold(T::zero(), |a, &r| a + r * r);
        Ok(sum / T::of_usize(self.returns.len()))
    }
}

/// Sample `series` at `t_k = t_first + k * dt` with previous-tick
/// interpolation and return the simple returns of consecutive samples.
pub fn sample_returns<T: Real>(series: &PriceSeries<T>, dt: T) -> Result<ReturnSample<T>> {
    if !dt.is_finite() || dt <= T::zero() {
        return Err(Error::InvalidSamplingInterval { dt: dt.as_f64() });
    }
    let span = series.span()?;
    if span < dt {
        return Err(Error::SpanTooShort { span: span.as_f64(), dt: dt.as_f64() });
    }

    // floor(span/dt) with a few ulps of slack so that a mathematically
    // integer ratio is not truncated by representation error
    let ratio = span / dt;
    let windows_scalar = (ratio + ratio * T::epsilon() * T::of(4.0)).floor();
    let windows_f = windows_scalar.as_f64();
    if windows_f > MAX_WINDOWS {
        return Err(Error::InvalidArgument {
            name: "dt",
            value: dt.as_f64(),
            requirement: "coarse enough to keep the window count below 1e8",
        });
    }
    let windows = windows_f as usize;

    let ticks = series.ticks();
    let t_first = series.first().time();
    let mut returns = Vec::with_capacity(windows);
    let mut idx = 0usize;
    let mut prev_price = ticks[0].price();
    for k in 1..=windows {
        let target = t_first + T::of_usize(k) * dt;
        while idx + 1 < ticks.len() && ticks[idx + 1].time() <= target {
            idx += 1;
        }
        let price = ticks[idx].price();
        returns.push((price - prev_price) / prev_price);
        prev_price = price;
    }
    Ok(ReturnSample { dt, returns })
}
