//! Threshold grids and power-law estimation `f(x) = alpha * x^E`.
//!
//! Fits are ordinary least squares on `(ln x, ln y)` — the standard
//! estimator for scaling laws and the straight lines seen on log-log
//! plots. The regression is unweighted; no per-point uncertainties are
//! assumed. The method is recorded in every report so downstream
//! consumers know what produced the numbers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intrinsic::{dissect, overshoot_stats};
use crate::physical::sample_returns;
use crate::real::Real;
use crate::series::PriceSeries;

/// A geometric grid of `k` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogGrid<T> {
    lo: T,
    hi: T,
    k: usize,
}

impl<T: Real> LogGrid<T> {
    pub fn new(lo: T, hi: T, k: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo > T::zero() && lo < hi) {
            return Err(Error::InvalidGrid {
                reason: format!("need 0 < lo < hi and finite bounds, got lo={lo}, hi={hi}"),
            });
        }
        if k < 2 {
            return Err(Error::InvalidGrid { reason: format!("need at least 2 points, got {k}") });
        }
        Ok(Self { lo, hi, k })
    }

    #[inline]
    pub fn lo(&self) -> T {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> T {
        self.hi
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Materialize the grid: `x_i = lo * (hi/lo)^(i/(k-1))`, with the
    /// endpoints pinned to `lo` and `hi` exactly.
    pub fn points(&self) -> Vec<T> {
        let ratio = self.hi / self.lo;
        let denom = T::of_usize(self.k - 1);
        (0..self.k)
            .map(|i| {
                if i == 0 {
                    self.lo
                } else if i == self.k - 1 {
                    self.hi
                } else {
                    self.lo * ratio.powf(T::of_usize(i) / denom)
                }
            })
            .collect()
    }
}

/// Convenience wrapper: validate and materialize in one call.
pub fn log_grid<T: Real>(lo: T, hi: T, k: usize) -> Result<Vec<T>> {
    Ok(LogGrid::new(lo, hi, k)?.points())
}

/// Result of fitting `y = alpha * x^E`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerLawFit<T> {
    pub alpha: T,
    pub exponent: T,
    pub r_squared: T,
    pub n_points: usize,
}

/// Least-squares fit of `ln y = E ln x + ln alpha`.
///
/// All coordinates must be strictly positive and at least two distinct
/// abscissae are required. Exact power-law inputs are recovered to
/// floating-point accuracy with `r_squared = 1`.
pub fn fit_power_law<T: Real>(points: &[(T, T)]) -> Result<PowerLawFit<T>> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: points.len() });
    }
    for (index, &(x, y)) in points.iter().enumerate() {
        if !(x.is_finite() && y.is_finite() && x > T::zero() && y > T::zero()) {
            return Err(Error::NonPositivePoint { index, x: x.as_f64(), y: y.as_f64() });
        }
    }

    let n = T::of_usize(points.len());
    let lx: Vec<T> = points.iter().map(|&(x, _)| x.ln()).collect();
    let ly: Vec<T> = points.iter().map(|&(_, y)| y.ln()).collect();
    let mx = lx.iter().fold(T::zero(), |a, &v| a + v) / n;
    let my = ly.iter().fold(T::zero(), |a, &v| a + v) / n;

    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&x, &y) in lx.iter().zip(&ly) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= T::zero() {
        return Err(Error::DegenerateAbscissa);
    }

    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;

    let mut ss_res = T::zero();
    let mut ss_tot = T::zero();
    for (&x, &y) in lx.iter().zip(&ly) {
        let resid = y - (exponent * x + intercept);
        ss_res += resid * resid;
        let dev = y - my;
        ss_tot += dev * dev;
    }
    let r_squared = if ss_tot <= T::zero() {
        T::one() // constant y is fit exactly by a zero slope
    } else {
        (T::one() - ss_res / ss_tot).max(T::zero()).min(T::one())
    };

    Ok(PowerLawFit { alpha: intercept.exp(), exponent, r_squared, n_points: points.len() })
}

/// One fitted law together with the points it was fitted on.
#[derive(Debug, Clone, Serialize)]
pub struct LawEstimate<T> {
    pub fit: PowerLawFit<T>,
    pub points: Vec<(T, T)>,
    pub x_axis: &'static str,
    pub y_axis: &'static str,
    pub alpha_unit: &'static str,
}

/// The four scaling laws evaluated on one series:
///
/// * mean squared return vs sampling interval (exponent near 1),
/// * overshoot variability vs threshold (near 2),
/// * directional changes per second vs threshold (near -2),
/// * mean overshoot vs threshold (near 1).
#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport<T> {
    pub method: &'static str,
    pub squared_returns: LawEstimate<T>,
    pub os_variability: LawEstimate<T>,
    pub dc_count: LawEstimate<T>,
    pub mean_overshoot: LawEstimate<T>,
}

impl<T> ScalingReport<T> {
    /// The laws in report order, keyed by their short names.
    pub fn laws(&self) -> [(&'static str, &LawEstimate<T>); 4] {
        [
            ("squared_returns", &self.squared_returns),
            ("os_variability", &self.os_variability),
            ("dc_count", &self.dc_count),
            ("mean_overshoot", &self.mean_overshoot),
        ]
    }
}

/// Write one law's points as a two-column CSV ready for log-log plotting.
pub fn write_law_points<T: Real, W: std::io::Write>(
    mut writer: W,
    law: &LawEstimate<T>,
) -> Result<()> {
    writeln!(writer, "{},{}", law.x_axis, law.y_axis)?;
    for &(x, y) in &law.points {
        writeln!(writer, "{x},{y}")?;
    }
    Ok(())
}

/// Evaluate all four laws over the given grids and fit each one.
///
/// Grid points are evaluated in parallel (they are independent); any
/// point with zero observations fails the whole suite, naming the law,
/// the index and the grid value.
pub fn scaling_suite<T: Real>(
    series: &PriceSeries<T>,
    dt_grid: &LogGrid<T>,
    delta_grid: &LogGrid<T>,
) -> Result<ScalingReport<T>> {
    let span = series.span()?;
    if span <= T::zero() {
        return Err(Error::ZeroSpan);
    }

    let dts = dt_grid.points();
    let squared_returns: Vec<(T, T)> = first_err(
        dts.par_iter()
            .enumerate()
            .map(|(index, &dt)| {
                let sample = sample_returns(series, dt).map_err(|e| match e {
                    Error::SpanTooShort { .. } => {
                        Error::EmptyGridPoint { law: "squared_returns", index, x: dt.as_f64() }
                    }
                    other => other,
                })?;
                Ok((dt, sample.squared_return_mean()?))
            })
            .collect(),
    )?;

    let deltas = delta_grid.points();
    let per_delta = first_err(
        deltas
            .par_iter()
            .map(|&delta| dissect(series, delta).map(|d| overshoot_stats(&d)))
            .collect(),
    )?;

    let mut dc_count = Vec::with_capacity(deltas.len());
    let mut mean_overshoot = Vec::with_capacity(deltas.len());
    let mut os_variability = Vec::with_capacity(deltas.len());
    for (index, (&delta, stats)) in deltas.iter().zip(&per_delta).enumerate() {
        let x = delta.as_f64();
        if stats.n_dc == 0 {
            return Err(Error::EmptyGridPoint { law: "dc_count", index, x });
        }
        dc_count.push((delta, T::of_usize(stats.n_dc) / span));
        match (stats.mean_os, stats.var_os) {
            (Some(mean), Some(var)) => {
                mean_overshoot.push((delta, mean));
                os_variability.push((delta, var));
            }
            _ => return Err(Error::EmptyGridPoint { law: "os_variability", index, x }),
        }
    }

    Ok(ScalingReport {
        method: "ols-log-log",
        squared_returns: LawEstimate {
            fit: fit_power_law(&squared_returns).map_err(Error::law_fit("squared_returns"))?,
            points: squared_returns,
            x_axis: "dt_seconds",
            y_axis: "mean_squared_return",
            alpha_unit: "fraction^2 per second^E",
        },
        os_variability: LawEstimate {
            fit: fit_power_law(&os_variability).map_err(Error::law_fit("os_variability"))?,
            points: os_variability,
            x_axis: "delta_fraction",
            y_axis: "overshoot_variability",
            alpha_unit: "dimensionless",
        },
        dc_count: LawEstimate {
            fit: fit_power_law(&dc_count).map_err(Error::law_fit("dc_count"))?,
            points: dc_count,
            x_axis: "delta_fraction",
            y_axis: "dc_per_second",
            alpha_unit: "events per second",
        },
        mean_overshoot: LawEstimate {
            fit: fit_power_law(&mean_overshoot).map_err(Error::law_fit("mean_overshoot"))?,
            points: mean_overshoot,
            x_axis: "delta_fraction",
            y_axis: "mean_overshoot",
            alpha_unit: "dimensionless",
        },
    })
}

/// Deterministic error selection from a parallel evaluation: the lowest
/// failing index wins, independent of scheduling.
fn first_err<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}
