use thiserror::Error;

/// Errors reported by parameter validation and the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid market bounds (v_min={v_min}, v_max={v_max}): need -1 < v_min < 0 < v_max, both finite")]
    InvalidBounds { v_min: f64, v_max: f64 },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("return at index {index} is not finite")]
    NonFiniteReturn { index: usize },

    #[error("return {value} at index {index} is outside the admissible range [{v_min}, {v_max}]")]
    InadmissibleReturn {
        index: usize,
        value: f64,
        v_min: f64,
        v_max: f64,
    },

    #[error("horizon {requested} exceeds the {kind} cap of {cap}")]
    HorizonCap {
        requested: usize,
        cap: usize,
        kind: &'static str,
    },

    #[error("path length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("mask {mask:#x} does not fit a horizon of {horizon}")]
    MaskTooWide { mask: u128, horizon: usize },

    #[error("grid point {value} is outside the open interval ({lo}, {hi})")]
    GridPointOutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("need at least {min} gain samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("gain {alpha} is outside the required range {range}")]
    GainOutOfRange { alpha: f64, range: String },
}

impl Error {
    /// True for refusals caused by a horizon/size cap rather than bad input.
    pub fn is_cap_refusal(&self) -> bool {
        matches!(self, Error::HorizonCap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
