//! Positivity analysis for a delayed-feedback trading state recursion.
//!
//! A trader holds an account `X(k)` and stakes `u(k) = alpha (1 + v(k-1)) X(k-1)`
//! on the next return, so the account evolves as
//! `X(k+1) = X(k) + u(k) v(k)` from `X(0) = X(1) = x0 > 0`, with returns
//! confined to `[v_min, v_max]`, `-1 < v_min < 0 < v_max`. The question this
//! crate answers is for which gains `alpha` the account stays strictly
//! positive on every admissible return path, and what happens when it does
//! not.
//!
//! The crate is organized around that question:
//!
//! - [`model`]: the recursion itself, trajectories, extreme paths.
//! - [`thresholds`]: the critical gains (sufficiency, necessity, and the
//!   horizon-2/3 caps) and their ordering.
//! - [`closed_form`]: the spectral solution along the distinguished path
//!   `v_max, v_min, v_min, ...`, its oscillation classes, and decay rates.
//! - [`search`]: exhaustive and sampled verification over the `2^N` extreme
//!   paths, gap scans, and bisection for the positivity boundary.
//! - [`exact`]: the same verification in exact rational arithmetic, used to
//!   adjudicate borderline float verdicts.
//! - [`multi`]: several assets trading against one account.
//!
//! Verification results carry the examined-path count, the minimum state
//! with an attaining path, and a borderline flag whenever a float verdict
//! came within rounding distance of zero. All search entry points are
//! deterministic: results are independent of thread count, and sampled
//! modes are reproducible from their seed.

pub mod closed_form;
pub mod error;
pub mod exact;
pub mod model;
pub mod multi;
mod numeric;
pub mod search;
pub mod thresholds;

pub use error::{Error, Result};
pub use model::{
    decode_extreme, distinguished_path, simulate, ExtremePath, MarketBounds, Path,
    PositivityVerdict, TradingParams, Trajectory, BORDERLINE_REL, MASK_BITS,
};
pub use numeric::Scalar;
pub use thresholds::{
    classify, compute_thresholds, threshold_surface, GainClass, Regime, SurfaceRow, ThresholdSet,
};
pub use closed_form::{
    asymptote_check, closed_form_state, distinguished_trajectory, oscillation_report,
    spectral_data, ClosedFormEvaluator, DecaySummary, DistinguishedPathClass, OscillationReport,
    Polar, SignFailureSearch, SpectralData, SpectralForm,
};
pub use search::{
    alpha_max_bisect, gap_scan, min_state, observation_check, stage_minima, verify_exhaustive,
    verify_exhaustive_with, verify_sampled, AlphaMaxEstimate, AlphaMaxOutcome, GapRow, GapScan,
    MinState, ObservationOutcome, ObservationReport, SearchConfig, StageMinimum, TestedGain,
    Verification, VerificationResult, VerifyMode, Witness, DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_SPLIT_DEPTH, SAMPLED_HORIZON_CAP,
};
pub use exact::{
    decode_extreme_exact, distinguished_exact, parse_rational, rational_to_f64,
    rational_to_string, simulate_exact, singular_gain, singular_state, verify_exhaustive_exact,
    verify_exhaustive_exact_with, ExactTrajectory, RationalParams, EXACT_HORIZON_CAP,
};
pub use multi::{
    oscillation_condition, simulate_multi, verify_extremes_multi, AssetSpec, MultiAssetParams,
    MultiExtremePath, MultiMinState, MultiVerification, MultiWitness, OscillationCondition,
    DEFAULT_MULTI_EXHAUSTIVE_CAP,
};
