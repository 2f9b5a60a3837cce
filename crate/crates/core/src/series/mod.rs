//! Price-series representation, tick-data ingestion and synthetic paths.
//!
//! A [`PriceSeries`] is the single source both time paradigms read from:
//! equidistant resampling (physical time) and directional-change dissection
//! (intrinsic time). It is immutable after construction and safe to share
//! read-only across parallel analyses.

mod csv;
mod synth;

pub use csv::{ingest_ticks, write_ticks, ColumnRef, CsvFormat, PriceMode, TimeFormat};
pub use synth::{synth_brownian, SynthConfig, RNG_ALGORITHM};

use crate::error::{Error, Result};
use crate::real::Real;

/// One observation: a strictly positive price at a finite, non-negative
/// time (seconds since epoch, fractions allowed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tick<T> {
    time: T,
    price: T,
}

impl<T: Real> Tick<T> {
    pub fn new(time: T, price: T) -> Result<Self> {
        if !time.is_finite() || time < T::zero() {
            return Err(Error::InvalidTick {
                time: time.as_f64(),
                price: price.as_f64(),
                reason: "time must be finite and non-negative",
            });
        }
        if !price.is_finite() || price <= T::zero() {
            return Err(Error::InvalidTick {
                time: time.as_f64(),
                price: price.as_f64(),
                reason: "price must be finite and strictly positive",
            });
        }
        Ok(Self { time, price })
    }

    #[inline]
    pub fn time(&self) -> T {
        self.time
    }

    #[inline]
    pub fn price(&self) -> T {
        self.price
    }
}

/// An ordered, validated sequence of ticks.
///
/// Timestamps are non-decreasing; duplicates are legal (real feeds have
/// them) and their input order is preserved. Out-of-order input is
/// rejected rather than sorted: a regression in a tick feed is a data
/// quality signal the caller should see.
#[derive(Debug, Clone)]
pub struct PriceSeries<T> {
    ticks: Vec<Tick<T>>,
    label: String,
}

impl<T: Real> PriceSeries<T> {
    pub fn new(ticks: Vec<Tick<T>>, label: impl Into<String>) -> Result<Self> {
        if ticks.is_empty() {
            return Err(Error::EmptySeries);
        }
        for (index, pair) in ticks.windows(2).enumerate() {
            if pair[1].time < pair[0].time {
                return Err(Error::OutOfOrder {
                    index: index + 1,
                    prev: pair[0].time.as_f64(),
                    next: pair[1].time.as_f64(),
                });
            }
        }
        Ok(Self { ticks, label: label.into() })
    }

    #[inline]
    pub fn ticks(&self) -> &[Tick<T>] {
        &self.ticks
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    /// A series is never empty; this exists for clippy's sake.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &Tick<T> {
        &self.ticks[0]
    }

    pub fn last(&self) -> &Tick<T> {
        &self.ticks[self.ticks.len() - 1]
    }

    /// Time extent `last.time - first.time` in seconds.
    ///
    /// Errs on fewer than two ticks; a single observation has no extent.
    pub fn span(&self) -> Result<T> {
        if self.ticks.len() < 2 {
            return Err(Error::TooFewTicks { needed: 2, got: self.ticks.len() });
        }
        Ok(self.last().time - self.first().time)
    }
}
