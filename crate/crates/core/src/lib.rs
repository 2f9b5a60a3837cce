//! Kairos links the two clocks a price series can be read under: physical
//! time (equidistant sampling, squared returns) and intrinsic time (an
//! event clock that ticks on directional changes of relative size
//! `delta`, each followed by a variable overshoot).
//!
//! The pipeline, bottom to top:
//!
//! * [`series`] — tick representation, CSV ingestion, seeded Brownian
//!   synthesis;
//! * [`intrinsic`] — the streaming directional-change clock and overshoot
//!   statistics;
//! * [`physical`] — equidistant resampling and mean squared returns;
//! * [`scaling`] — log grids and power-law fits `f(x) = alpha * x^E` for
//!   the four scaling laws;
//! * [`bridge`] — the invariants `c_physical = <r(dt)^2>/dt` and
//!   `c_intrinsic = mean((os-delta)^2) * N/span`, their profile over a
//!   threshold grid, the correction factor `lambda`, and the
//!   volatility/liquidity activity decomposition.
//!
//! Everything is generic over the scalar type via [`Real`] (`f32` or
//! `f64`); the `*64` aliases below are the working default.
//!
//! ```
//! use kairos::prelude::*;
//!
//! let series = synth_brownian(&SynthConfig::new(2e-3f64, 1.0, 8000, 42)).unwrap();
//! let dissection = dissect(&series, 0.004).unwrap();
//! assert!(dissection.n_dc() > 0);
//! let check = bridge_check(&series, 30.0, 0.004).unwrap();
//! assert!(check.rel_gap < 1.0);
//! ```

pub mod bridge;
pub mod error;
pub mod intrinsic;
pub mod physical;
pub mod real;
pub mod scaling;
pub mod series;
mod stats;

pub use error::{Error, Result};
pub use real::Real;

pub use bridge::{
    bm_theoretical, bridge_check, c_intrinsic, c_physical, decompose, estimate_lambda,
    invariant_profile, ActivityWindow, BmTheory, BridgeCheck, InvariantProfile, LambdaEstimate,
};
pub use intrinsic::{
    dissect, exp_ks_distance, overshoot_exp_check, overshoot_stats, write_events, DcClock,
    DcConfig, DcEvent, Direction, Dissection, OvershootStats,
};
pub use physical::{sample_returns, ReturnSample};
pub use scaling::{
    fit_power_law, log_grid, scaling_suite, write_law_points, LawEstimate, LogGrid, PowerLawFit,
    ScalingReport,
};
pub use series::{
    ingest_ticks, synth_brownian, write_ticks, ColumnRef, CsvFormat, PriceMode, PriceSeries,
    SynthConfig, Tick, TimeFormat, RNG_ALGORITHM,
};

/// One-stop import for applications.
pub mod prelude {
    pub use crate::bridge::{
        bm_theoretical, bridge_check, c_intrinsic, c_physical, decompose, estimate_lambda,
        invariant_profile,
    };
    pub use crate::intrinsic::{dissect, overshoot_exp_check, overshoot_stats};
    pub use crate::physical::sample_returns;
    pub use crate::scaling::{fit_power_law, log_grid, scaling_suite, LogGrid};
    pub use crate::series::{ingest_ticks, synth_brownian, write_ticks, SynthConfig};
    pub use crate::{Error, Real, Result};
}

// Concrete instantiations; `f64` is what the CLI and most tests use.
pub type Tick64 = series::Tick<f64>;
pub type PriceSeries64 = series::PriceSeries<f64>;
pub type Dissection64 = intrinsic::Dissection<f64>;
pub type ReturnSample64 = physical::ReturnSample<f64>;
pub type ScalingReport64 = scaling::ScalingReport<f64>;
pub type InvariantProfile64 = bridge::InvariantProfile<f64>;

pub type Tick32 = series::Tick<f32>;
pub type PriceSeries32 = series::PriceSeries<f32>;
pub type Dissection32 = intrinsic::Dissection<f32>;
pub type ReturnSample32 = physical::ReturnSample<f32>;
pub type ScalingReport32 = scaling::ScalingReport<f32>;
pub type InvariantProfile32 = bridge::InvariantProfile<f32>;
