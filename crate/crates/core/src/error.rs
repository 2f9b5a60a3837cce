use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong across the pipeline, from ingestion to the
/// bridge statistics. Scalar payloads are reported as `f64` regardless of
/// the series' scalar type.
#[derive(Debug, Error)]
pub enum Error {
    // --- series construction ---
    #[error("invalid tick (time={time}, price={price}): {reason}")]
    InvalidTick { time: f64, price: f64, reason: &'static str },
    #[error("price series must contain at least one tick")]
    EmptySeries,
    #[error("timestamps must be non-decreasing: tick {index} has time {next} after {prev}")]
    OutOfOrder { index: usize, prev: f64, next: f64 },
    #[error("operation needs at least {needed} ticks, series has {got}")]
    TooFewTicks { needed: usize, got: usize },
    #[error("series span is zero; analysis needs a positive time extent")]
    ZeroSpan,

    // --- synthesis ---
    #[error("invalid synthesis config: {reason}")]
    InvalidSynthConfig { reason: String },
    #[error("synthetic price became non-positive at step {step}; lower sigma or raise p0")]
    NonPositiveSynthPrice { step: usize },

    // --- CSV ingestion ---
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row at line {line}: {reason}")]
    Row { line: u64, reason: String },
    #[error("column {column:?} not found in CSV input")]
    MissingColumn { column: String },
    #[error("input contains no data rows")]
    EmptyInput,

    // --- intrinsic time ---
    #[error("directional-change threshold must satisfy 0 < delta < 1, got {delta}")]
    InvalidThreshold { delta: f64 },
    #[error("tick time {next} regresses behind previously fed {prev}")]
    TimeRegression { prev: f64, next: f64 },
    #[error("distribution check needs at least {needed} overshoots, got {got}")]
    TooFewOvershoots { needed: usize, got: usize },
    #[error("operation needs at least {needed} directional changes, got {got}")]
    TooFewEvents { needed: usize, got: usize },

    // --- physical time ---
    #[error("sampling interval must be positive and finite, got {dt}")]
    InvalidSamplingInterval { dt: f64 },
    #[error("series span {span} is shorter than the sampling interval {dt}")]
    SpanTooShort { span: f64, dt: f64 },
    #[error("return sample is empty")]
    EmptySample,

    // --- scaling ---
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },
    #[error("power-law fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("power-law fit needs positive coordinates: point {index} is ({x}, {y})")]
    NonPositivePoint { index: usize, x: f64, y: f64 },
    #[error("power-law fit needs at least two distinct x values")]
    DegenerateAbscissa,
    #[error("{law} law has no observations at grid point {index} (x={x})")]
    EmptyGridPoint { law: &'static str, index: usize, x: f64 },
    #[error("fitting {law} law: {source}")]
    LawFit {
        law: &'static str,
        #[source]
        source: Box<Error>,
    },

    // --- bridge ---
    #[error("grids must have equal length: {dt_len} sampling intervals vs {delta_len} thresholds")]
    GridLengthMismatch { dt_len: usize, delta_len: usize },
    #[error("at grid index {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("invariant profile is empty")]
    EmptyProfile,
    #[error("physical-time invariant at index {index} is not positive")]
    NonPositiveInvariant { index: usize },
    #[error("window of {window} s does not fit the series span of {span} s")]
    InvalidWindow { window: f64, span: f64 },
    #[error("{name} must be {requirement}, got {value}")]
    InvalidArgument { name: &'static str, value: f64, requirement: &'static str },

    // --- export ---
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_index(index: usize) -> impl FnOnce(Error) -> Error {
        move |source| Error::AtIndex { index, source: Box::new(source) }
    }

    pub(crate) fn law_fit(law: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::LawFit { law, source: Box::new(source) }
    }
}
