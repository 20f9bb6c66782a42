//! Error types shared by all simulation primitives.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the simulation primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// LFSR seed is zero within the register width.
    #[error("LFSR seed must be nonzero within the register width")]
    InvalidSeed,

    /// LFSR feedback polynomial is empty or malformed.
    #[error("invalid LFSR polynomial: {0}")]
    InvalidPolynomial(String),

    /// Bit pattern violates its construction rules (empty, non-binary, bad rate).
    #[error("invalid bit pattern: {0}")]
    InvalidPattern(String),

    /// Inputs that must agree in length or rate do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A requested time exceeds the programmable placement range.
    #[error("requested {requested} ps exceeds the {range} ps range")]
    RangeExceeded { requested: f64, range: f64 },

    /// Multiplexer fan-in other than the supported 2 or 8.
    #[error("unsupported mux fan-in {0}; supported fan-ins are 2 and 8")]
    UnsupportedFanIn(usize),

    /// Edge times would reorder or coincide, which a real mux stage cannot produce cleanly.
    #[error("edge collision: {0}")]
    EdgeCollision(String),

    /// Sample interval too coarse to resolve the configured transition times.
    #[error("sample interval {dt} ps exceeds the {limit} ps limit for the configured transitions")]
    ResolutionTooCoarse { dt: f64, limit: f64 },

    /// Logic level configuration with high at or below low.
    #[error("invalid logic levels: {0}")]
    InvalidLevels(String),

    /// A time outside the span covered by a waveform.
    #[error("time {t} ps outside waveform span [{start}, {end}] ps")]
    OutOfRange { t: f64, start: f64, end: f64 },

    /// Strobe time off the programmable strobe grid.
    #[error("strobe time {t} ps is not a multiple of the {resolution} ps strobe grid")]
    QuantizationError { t: f64, resolution: f64 },

    /// Not enough signal content to compute the requested measurement.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Level histogram is not bimodal, so logic levels cannot be extracted.
    #[error("level histogram is not bimodal; cannot resolve logic levels")]
    LevelsUnresolved,

    /// Negative delay request.
    #[error("invalid delay {0} ps: delays must be non-negative")]
    InvalidDelay(f64),

    /// Malformed timing or sampler program parameters.
    #[error("invalid program: {0}")]
    InvalidProgram(String),
}
