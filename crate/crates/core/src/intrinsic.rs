//! The intrinsic-time clock: dissects a price series into alternating
//! directional changes and their overshoots.
//!
//! The clock is a streaming state machine over one relative threshold
//! `delta`. After an upward directional change it is in up mode and tracks
//! the running maximum; when the price falls at least `delta` relative to
//! that maximum, a downward change is confirmed, the mode flips, and the
//! stretch from the previous confirmation price to the maximum is recorded
//! as that segment's overshoot. Down mode is symmetric around the running
//! minimum. Before the first confirmation the clock is unseeded and tracks
//! both extremes; the first event fires in whichever direction first moves
//! `delta` away from the opposite running extreme, and carries no
//! overshoot since no directional change precedes it.
//!
//! Conventions, fixed here and relied on by the statistics downstream:
//!
//! * moves are relative: `(ext_max - p) / ext_max` resp.
//!   `(p - ext_min) / ext_min`; log moves are out of scope;
//! * the trigger is inclusive (`>= delta`) so discrete data behaves
//!   deterministically at the boundary;
//! * extremes update on strict inequality; an equal price is a no-op;
//! * overshoots are measured relative to the preceding confirmation
//!   price, making them dimensionless and comparable to `delta`;
//! * at most one event fires per tick: a single tick gapping across
//!   several reversals registers one event (a known limitation for very
//!   gappy data);
//! * the final, unconfirmed segment contributes no overshoot: only
//!   extremes certified by a subsequent directional change are used.
//!
//! Overshoots can be zero (a reversal directly following a confirmation)
//! even though the idealized law for them is a continuous exponential;
//! zeros are recorded as-is.
//!
//! A clock is a single-writer machine and cannot be shared mid-stream,
//! but any number of clocks (one per threshold) may run in parallel over
//! the same read-only [`PriceSeries`].

use std::fmt;
use std::io;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::{PriceSeries, Tick};

/// Direction of a confirmed directional change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Up => "up",
            Direction::Down => "down",
        })
    }
}

/// The relative reversal threshold, a dimensionless fraction in (0, 1).
#[derive(Debug, Clone, Copy)]
pub struct DcConfig<T> {
    delta: T,
}

impl<T: Real> DcConfig<T> {
    pub fn new(delta: T) -> Result<Self> {
        if !delta.is_finite() || delta <= T::zero() || delta >= T::one() {
            return Err(Error::InvalidThreshold { delta: delta.as_f64() });
        }
        Ok(Self { delta })
    }

    #[inline]
    pub fn delta(&self) -> T {
        self.delta
    }
}

/// One confirmed directional change.
///
/// `prev_extreme_price` is the running extreme the reversal was measured
/// from; `prev_overshoot` is the relative stretch of the segment that just
/// ended, absent only on the first event of a stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcEvent<T> {
    pub direction: Direction,
    pub confirm_time: T,
    pub confirm_price: T,
    pub prev_extreme_price: T,
    pub prev_overshoot: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Unseeded,
    Up,
    Down,
}

/// Streaming directional-change detector for a single threshold.
#[derive(Debug, Clone)]
pub struct DcClock<T> {
    config: DcConfig<T>,
    mode: Mode,
    ext_max: T,
    ext_min: T,
    last_dc_price: Option<T>,
    last_dc_time: Option<T>,
    last_time: Option<T>,
}

impl<T: Real> DcClock<T> {
    pub fn new(config: DcConfig<T>) -> Self {
        Self {
            config,
            mode: Mode::Unseeded,
            ext_max: T::nan(),
            ext_min: T::nan(),
            last_dc_price: None,
            last_dc_time: None,
            last_time: None,
        }
    }

    pub fn config(&self) -> DcConfig<T> {
        self.config
    }

    /// Time of the most recent confirmation, if any.
    pub fn last_dc_time(&self) -> Option<T> {
        self.last_dc_time
    }

    /// Feed one tick; returns the directional change it confirms, if any.
    ///
    /// Ticks must arrive in non-decreasing time order (duplicates are
    /// fine); a regression is an error and leaves the state untouched.
    pub fn step(&mut self, tick: &Tick<T>) -> Result<Option<DcEvent<T>>> {
        let time = tick.time();
        let price = tick.price();
        match self.last_time {
            Some(prev) if time < prev => {
                return Err(Error::TimeRegression { prev: prev.as_f64(), next: time.as_f64() })
            }
            Some(_) => {}
            None => {
                // first tick seeds both extremes and cannot confirm anything
                self.ext_max = price;
                self.ext_min = price;
                self.last_time = Some(time);
                return Ok(None);
            }
        }
        self.last_time = Some(time);

        let delta = self.config.delta;
        let event = match self.mode {
            Mode::Unseeded => {
                if price > self.ext_max {
                    self.ext_max = price;
                }
                if price < self.ext_min {
                    self.ext_min = price;
                }
                // both conditions cannot hold at once: the range between
                // the running extremes stays below delta until a first
                // event fires
                if (self.ext_max - price) / self.ext_max >= delta {
                    let extreme = self.ext_max;
                    Some(self.confirm(Direction::Down, time, price, extreme))
                } else if (price - self.ext_min) / self.ext_min >= delta {
                    let extreme = self.ext_min;
                    Some(self.confirm(Direction::Up, time, price, extreme))
                } else {
                    None
                }
            }
            Mode::Up => {
                if price > self.ext_max {
                    self.ext_max = price;
                    None
                } else if (self.ext_max - price) / self.ext_max >= delta {
                    let extreme = self.ext_max;
                    Some(self.confirm(Direction::Down, time, price, extreme))
                } else {
                    None
                }
            }
            Mode::Down => {
                if price < self.ext_min {
                    self.ext_min = price;
                    None
                } else if (price - self.ext_min) / self.ext_min >= delta {
                    let extreme = self.ext_min;
                    Some(self.confirm(Direction::Up, time, price, extreme))
                } else {
                    None
                }
            }
        };
        Ok(event)
    }

    fn confirm(&mut self, direction: Direction, time: T, price: T, extreme: T) -> DcEvent<T> {
        let prev_overshoot = self.last_dc_price.map(|dc| match direction {
            // the segment that just ended ran opposite to this event
            Direction::Down => (extreme - dc) / dc,
            Direction::Up => (dc - extreme) / dc,
        });
        self.mode = match direction {
            Direction::Up => Mode::Up,
            Direction::Down => Mode::Down,
        };
        self.ext_max = price;
        self.ext_min = price;
        self.last_dc_price = Some(price);
        self.last_dc_time = Some(time);
        DcEvent { direction, confirm_time: time, confirm_price: price, prev_extreme_price: extreme, prev_overshoot }
    }
}

/// A full dissection of one series at one threshold: the event stream and
/// the overshoots of all completed segments (one per event after the
/// first).
#[derive(Debug, Clone)]
pub struct Dissection<T> {
    delta: T,
    events: Vec<DcEvent<T>>,
    overshoots: Vec<T>,
}

impl<T: Real> Dissection<T> {
    #[inline]
    pub fn delta(&self) -> T {
        self.delta
    }

    #[inline]
    pub fn events(&self) -> &[DcEvent<T>] {
        &self.events
    }

    #[inline]
    pub fn overshoots(&self) -> &[T] {
        &self.overshoots
    }

    /// Number of directional changes, `N(delta, T)`.
    #[inline]
    pub fn n_dc(&self) -> usize {
        self.events.len()
    }
}

/// Run the clock over a whole series.
pub fn dissect<T: Real>(series: &PriceSeries<T>, delta: T) -> Result<Dissection<T>> {
    let mut clock = DcClock::new(DcConfig::new(delta)?);
    let mut events = Vec::new();
    let mut overshoots = Vec::new();
    for tick in series.ticks() {
        if let Some(event) = clock.step(tick)? {
            if let Some(os) = event.prev_overshoot {
                overshoots.push(os);
            }
            events.push(event);
        }
    }
    Ok(Dissection { delta, events, overshoots })
}

/// Summary of a dissection's overshoots.
///
/// `var_os` is the threshold-offset second moment `mean((os - delta)^2)`,
/// not the mean-centered sample variance; the two differ whenever the
/// mean overshoot deviates from `delta`. Both statistics are absent when
/// no segment has completed.
#[derive(Debug, Clone, Copy)]
pub struct OvershootStats<T> {
    pub mean_os: Option<T>,
    pub var_os: Option<T>,
    pub n_dc: usize,
}

pub fn overshoot_stats<T: Real>(dissection: &Dissection<T>) -> OvershootStats<T> {
    let os = dissection.overshoots();
    if os.is_empty() {
        return OvershootStats { mean_os: None, var_os: None, n_dc: dissection.n_dc() };
    }
    let n = T::of_usize(os.len());
    let delta = dissection.delta();
    let mean = os.iter().fold(T::zero(), |a, &x| a + x) / n;
    let var = os.iter().fold(T::zero(), |a, &x| {
        let d = x - delta;
        a + d * d
    }) / n;
    OvershootStats { mean_os: Some(mean), var_os: Some(var), n_dc: dissection.n_dc() }
}

/// Kolmogorov-Smirnov distance between `samples` and the exponential
/// distribution with the given `mean`.
pub fn exp_ks_distance<T: Real>(samples: &[T], mean: T) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::TooFewOvershoots { needed: 1, got: 0 });
    }
    if !mean.is_finite() || mean <= T::zero() {
        return Err(Error::InvalidArgument {
            name: "mean",
            value: mean.as_f64(),
            requirement: "positive and finite",
        });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("overshoots are finite"));
    let n = T::of_usize(sorted.len());
    let mut distance = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = T::one() - (-x / mean).exp();
        let above = T::of_usize(i + 1) / n - cdf;
        let below = cdf - T::of_usize(i) / n;
        distance = distance.max(above).max(below);
    }
    Ok(distance)
}

/// KS distance of the dissection's overshoots against an exponential law
/// with mean `delta`. Purely diagnostic: no pass/fail threshold is baked
/// in. Needs at least 100 overshoots to be meaningful.
pub fn overshoot_exp_check<T: Real>(dissection: &Dissection<T>) -> Result<T> {
    const MIN_SAMPLES: usize = 100;
    let got = dissection.overshoots().len();
    if got < MIN_SAMPLES {
        return Err(Error::TooFewOvershoots { needed: MIN_SAMPLES, got });
    }
    exp_ks_distance(dissection.overshoots(), dissection.delta())
}

/// Export the event log as CSV with columns
/// `confirm_time,direction,confirm_price,prev_extreme_price,prev_overshoot`
/// (the overshoot field is empty on the first event).
pub fn write_events<T: Real, W: io::Write>(mut writer: W, dissection: &Dissection<T>) -> Result<()> {
    writeln!(writer, "confirm_time,direction,confirm_price,prev_extreme_price,prev_overshoot")?;
    for event in dissection.events() {
        write!(
            writer,
            "{},{},{},{},",
            event.confirm_time, event.direction, event.confirm_price, event.prev_extreme_price
        )?;
        match event.prev_overshoot {
            Some(os) => writeln!(writer, "{os}")?,
            None => writeln!(writer)?,
        }
    }
    Ok(())
}
