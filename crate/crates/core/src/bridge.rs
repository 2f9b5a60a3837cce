//! Links the two time paradigms: the physical-time invariant
//! `c_physical = <r(dt)^2> / dt` and the intrinsic-time invariant
//! `c_intrinsic = mean((os - delta)^2) * N / span` measure the same
//! quantity (sigma^2 for a Brownian path) from opposite sides, so their
//! per-grid profiles should coincide up to estimation noise. When they do
//! not — some markets show a persistent gap — the ratio `lambda`
//! quantifies the mismatch as a single correction factor.
//!
//! The intrinsic side doubles as an activity decomposition: the
//! directional-change count per window proxies volatility while the mean
//! overshoot proxies illiquidity, so a change in squared returns can be
//! attributed to one, the other, or both.
//!
//! Note on naming: the normalized count `N / span` divides the number of
//! directional changes (not overshoots) by the span; the overshoot count
//! is one lower since the first event opens the stream.
//!
//! All operations are pure over read-only inputs; profile construction
//! parallelizes across grid indices.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intrinsic::{dissect, overshoot_stats};
use crate::physical::sample_returns;
use crate::real::Real;
use crate::series::PriceSeries;
use crate::stats;

/// Physical-time invariant: mean squared return per second of sampling
/// interval, in 1/second. Equals sigma^2 for Brownian input at any `dt`.
pub fn c_physical<T: Real>(series: &PriceSeries<T>, dt: T) -> Result<T> {
    Ok(sample_returns(series, dt)?.squared_return_mean()? / dt)
}

/// Intrinsic-time invariant: overshoot variability times directional
/// changes per second, in 1/second. Needs at least two events so that one
/// completed overshoot segment exists.
pub fn c_intrinsic<T: Real>(series: &PriceSeries<T>, delta: T) -> Result<T> {
    let span = series.span()?;
    if span <= T::zero() {
        return Err(Error::ZeroSpan);
    }
    let dissection = dissect(series, delta)?;
    if dissection.n_dc() < 2 {
        return Err(Error::TooFewEvents { needed: 2, got: dissection.n_dc() });
    }
    let stats = overshoot_stats(&dissection);
    let var_os = stats.var_os.expect("n_dc >= 2 implies a completed segment");
    Ok(var_os * T::of_usize(stats.n_dc) / span)
}

/// Paired invariant evaluations over two equally long grids, indexed
/// `0..k`. Both sides are in 1/second.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantProfile<T> {
    dt_grid: Vec<T>,
    delta_grid: Vec<T>,
    c_physical: Vec<T>,
    c_intrinsic: Vec<T>,
}

impl<T: Real> InvariantProfile<T> {
    /// Assemble a profile from already-computed values, enforcing equal
    /// lengths and finite, non-negative entries.
    pub fn from_parts(
        dt_grid: Vec<T>,
        delta_grid: Vec<T>,
        c_physical: Vec<T>,
        c_intrinsic: Vec<T>,
    ) -> Result<Self> {
        if dt_grid.len() != delta_grid.len()
            || c_physical.len() != dt_grid.len()
            || c_intrinsic.len() != dt_grid.len()
        {
            return Err(Error::GridLengthMismatch {
                dt_len: dt_grid.len().min(c_physical.len()),
                delta_len: delta_grid.len().min(c_intrinsic.len()),
            });
        }
        if dt_grid.is_empty() {
            return Err(Error::EmptyProfile);
        }
        for (index, value) in c_physical.iter().chain(&c_intrinsic).enumerate() {
            if !value.is_finite() || *value < T::zero() {
                return Err(Error::InvalidArgument {
                    name: "invariant",
                    value: value.as_f64(),
                    requirement: "finite and non-negative",
                });
            }
            let _ = index;
        }
        Ok(Self { dt_grid, delta_grid, c_physical, c_intrinsic })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.dt_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt_grid(&self) -> &[T] {
        &self.dt_grid
    }

    pub fn delta_grid(&self) -> &[T] {
        &self.delta_grid
    }

    pub fn c_physical(&self) -> &[T] {
        &self.c_physical
    }

    pub fn c_intrinsic(&self) -> &[T] {
        &self.c_intrinsic
    }

    /// Both invariant sets concatenated: physical first, then intrinsic.
    pub fn pooled(&self) -> Vec<T> {
        self.c_physical.iter().chain(&self.c_intrinsic).copied().collect()
    }

    /// Mean of the pooled values.
    pub fn pooled_mean(&self) -> T {
        stats::mean(&self.pooled()).expect("profile is never empty")
    }

    /// Population standard deviation of the pooled values.
    pub fn pooled_std(&self) -> T {
        stats::pop_std(&self.pooled()).expect("profile is never empty")
    }

    /// CSV export: `index,dt,c_physical,delta,c_intrinsic`, one row per
    /// grid index.
    pub fn write_csv<W: std::io::Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "index,dt,c_physical,delta,c_intrinsic")?;
        for i in 0..self.len() {
            writeln!(
                writer,
                "{},{},{},{},{}",
                i, self.dt_grid[i], self.c_physical[i], self.delta_grid[i], self.c_intrinsic[i]
            )?;
        }
        Ok(())
    }
}

/// Evaluate both invariants per index over equally long grids.
pub fn invariant_profile<T: Real>(
    series: &PriceSeries<T>,
    dt_grid: &[T],
    delta_grid: &[T],
) -> Result<InvariantProfile<T>> {
    if dt_grid.len() != delta_grid.len() {
        return Err(Error::GridLengthMismatch { dt_len: dt_grid.len(), delta_len: delta_grid.len() });
    }
    if dt_grid.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let physical: Vec<T> = dt_grid
        .par_iter()
        .enumerate()
        .map(|(i, &dt)| c_physical(series, dt).map_err(Error::at_index(i)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;
    let intrinsic: Vec<T> = delta_grid
        .par_iter()
        .enumerate()
        .map(|(i, &delta)| c_intrinsic(series, delta).map_err(Error::at_index(i)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_>>()?;
    InvariantProfile::from_parts(dt_grid.to_vec(), delta_grid.to_vec(), physical, intrinsic)
}

/// Both sides of the bridge identity at one `(dt, delta)` pair:
/// `lhs = (span/dt) * <r(dt)^2>`, `rhs = mean((os-delta)^2) * N`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BridgeCheck<T> {
    pub lhs: T,
    pub rhs: T,
    /// `|lhs - rhs| / max(lhs, rhs)`; zero when both sides vanish.
    pub rel_gap: T,
}

pub fn bridge_check<T: Real>(series: &PriceSeries<T>, dt: T, delta: T) -> Result<BridgeCheck<T>> {
    let span = series.span()?;
    let lhs = (span / dt) * sample_returns(series, dt)?.squared_return_mean()?;

    let dissection = dissect(series, delta)?;
    if dissection.n_dc() < 2 {
        return Err(Error::TooFewEvents { needed: 2, got: dissection.n_dc() });
    }
    let stats = overshoot_stats(&dissection);
    let rhs = stats.var_os.expect("n_dc >= 2") * T::of_usize(stats.n_dc);

    let scale = lhs.max(rhs);
    let rel_gap = if scale > T::zero() { (lhs - rhs).abs() / scale } else { T::zero() };
    Ok(BridgeCheck { lhs, rhs, rel_gap })
}

/// The correction factor restoring the bridge identity, estimated as the
/// ratio of pooled means (robust to per-index noise). `dispersion` is the
/// population standard deviation of the per-index ratios, reported so
/// users can judge whether a single constant is an adequate description.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaEstimate<T> {
    pub lambda: T,
    pub method: &'static str,
    pub dispersion: T,
}

pub fn estimate_lambda<T: Real>(profile: &InvariantProfile<T>) -> Result<LambdaEstimate<T>> {
    for (index, &ct) in profile.c_physical().iter().enumerate() {
        if ct <= T::zero() {
            return Err(Error::NonPositiveInvariant { index });
        }
    }
    let mean_physical = stats::mean(profile.c_physical()).expect("profile is never empty");
    let mean_intrinsic = stats::mean(profile.c_intrinsic()).expect("profile is never empty");
    let ratios: Vec<T> = profile
        .c_intrinsic()
        .iter()
        .zip(profile.c_physical())
        .map(|(&ci, &cp)| ci / cp)
        .collect();
    Ok(LambdaEstimate {
        lambda: mean_intrinsic / mean_physical,
        method: "pooled-mean-ratio",
        dispersion: stats::pop_std(&ratios).expect("profile is never empty"),
    })
}

/// Per-window activity: the directional-change count proxies volatility,
/// the mean overshoot proxies illiquidity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ActivityWindow<T> {
    pub window_start: T,
    pub dc_count: usize,
    pub mean_overshoot: Option<T>,
}

/// Cap on the number of windows, mirroring the sampling cap.
const MAX_WINDOWS: f64 = 1e8;

/// Split the span into consecutive windows of `window` seconds and
/// attribute each directional change (and the overshoot it certifies) to
/// the window containing its confirmation time.
///
/// The trailing partial window is kept as a (shorter) window of its own,
/// so per-window counts always sum to the full-series count.
pub fn decompose<T: Real>(
    series: &PriceSeries<T>,
    delta: T,
    window: T,
) -> Result<Vec<ActivityWindow<T>>> {
    if !window.is_finite() || window <= T::zero() {
        return Err(Error::InvalidArgument {
            name: "window",
            value: window.as_f64(),
            requirement: "positive and finite",
        });
    }
    let span = series.span()?;
    if span <= T::zero() {
        return Err(Error::ZeroSpan);
    }
    if window > span {
        return Err(Error::InvalidWindow { window: window.as_f64(), span: span.as_f64() });
    }
    let count_f = (span / window).ceil().as_f64();
    if count_f > MAX_WINDOWS {
        return Err(Error::InvalidArgument {
            name: "window",
            value: window.as_f64(),
            requirement: "coarse enough to keep the window count below 1e8",
        });
    }
    let n_windows = (count_f as usize).max(1);

    let dissection = dissect(series, delta)?;
    let t_first = series.first().time();
    let mut counts = vec![0usize; n_windows];
    let mut os_sum = vec![T::zero(); n_windows];
    let mut os_n = vec![0usize; n_windows];
    for event in dissection.events() {
        let offset = ((event.confirm_time - t_first) / window).floor().as_f64() as usize;
        let index = offset.min(n_windows - 1);
        counts[index] += 1;
        if let Some(os) = event.prev_overshoot {
            os_sum[index] += os;
            os_n[index] += 1;
        }
    }

    Ok((0..n_windows)
        .map(|m| ActivityWindow {
            window_start: t_first + T::of_usize(m) * window,
            dc_count: counts[m],
            mean_overshoot: (os_n[m] > 0).then(|| os_sum[m] / T::of_usize(os_n[m])),
        })
        .collect())
}

/// Closed forms for an arithmetic Brownian path: expected event count
/// `sigma^2 * span / delta^2`, expected overshoot `delta`, overshoot
/// variance `delta^2`, and their product `sigma^2 * span` — the
/// intrinsic side of the bridge identity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BmTheory<T> {
    pub expected_dc_count: T,
    pub expected_overshoot: T,
    pub overshoot_variance: T,
    pub rhs_product: T,
}

pub fn bm_theoretical<T: Real>(delta: T, sigma: T, span: T) -> Result<BmTheory<T>> {
    for (name, value) in [("delta", delta), ("sigma", sigma), ("span", span)] {
        if !value.is_finite() || value <= T::zero() {
            return Err(Error::InvalidArgument {
                name,
                value: value.as_f64(),
                requirement: "positive and finite",
            });
        }
    }
    let sigma_sq_span = sigma * sigma * span;
    Ok(BmTheory {
        expected_dc_count: sigma_sq_span / (delta * delta),
        expected_overshoot: delta,
        overshoot_variance: delta * delta,
        rhs_product: sigma_sq_span,
    })
}
