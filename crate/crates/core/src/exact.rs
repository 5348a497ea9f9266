//! Exact rational oracle.
//!
//! Re-runs the state recursion and the extreme-path verification in
//! `BigRational` arithmetic, where every comparison against zero is exact.
//! This is the adjudicator for float verdicts flagged as borderline, at the
//! cost of a much lower horizon cap.

use crate::error::{Error, Result};
use crate::model::{self, ExtremePath};
use crate::search::{verify_exhaustive_generic, SearchConfig, Verification, DEFAULT_SPLIT_DEPTH};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

/// Horizon cap for exact exhaustive verification; rational arithmetic makes
/// each node far more expensive than a float multiply-add.
pub const EXACT_HORIZON_CAP: usize = 16;

/// Model parameters as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalParams {
    alpha: BigRational,
    x0: BigRational,
    v_min: BigRational,
    v_max: BigRational,
}

impl RationalParams {
    pub fn new(
        alpha: BigRational,
        x0: BigRational,
        v_min: BigRational,
        v_max: BigRational,
    ) -> Result<Self> {
        let minus_one = -BigRational::one();
        if !(v_min > minus_one && v_min < BigRational::zero() && v_max > BigRational::zero()) {
            return Err(Error::InvalidBounds {
                v_min: v_min.to_f64().unwrap_or(f64::NAN),
                v_max: v_max.to_f64().unwrap_or(f64::NAN),
            });
        }
        if alpha < BigRational::zero() {
            return Err(Error::InvalidParameter {
                reason: format!("alpha={alpha} must be >= 0"),
            });
        }
        if x0 <= BigRational::zero() {
            return Err(Error::InvalidParameter {
                reason: format!("x0={x0} must be > 0"),
            });
        }
        Ok(Self { alpha, x0, v_min, v_max })
    }

    /// Parses all four parameters from `p/q` or decimal strings.
    pub fn from_strs(alpha: &str, x0: &str, v_min: &str, v_max: &str) -> Result<Self> {
        Self::new(
            parse_rational(alpha)?,
            parse_rational(x0)?,
            parse_rational(v_min)?,
            parse_rational(v_max)?,
        )
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn x0(&self) -> &BigRational {
        &self.x0
    }

    pub fn v_min(&self) -> &BigRational {
        &self.v_min
    }

    pub fn v_max(&self) -> &BigRational {
        &self.v_max
    }

    /// Nearest float parameters, for cross-checking the two modes.
    pub fn approx(&self) -> Result<model::TradingParams> {
        let cast = |r: &BigRational, name: &str| -> Result<f64> {
            r.to_f64().ok_or_else(|| Error::InvalidParameter {
                reason: format!("{name}={r} does not fit in an f64"),
            })
        };
        let bounds = model::MarketBounds::new(
            cast(&self.v_min, "v_min")?,
            cast(&self.v_max, "v_max")?,
        )?;
        model::TradingParams::new(cast(&self.alpha, "alpha")?, cast(&self.x0, "x0")?, bounds)
    }
}

/// Parses `p/q`, a plain integer, or a decimal such as `-0.54` into an exact
/// rational. Scientific notation is not accepted.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let raw = s.trim();
    let invalid = || Error::InvalidParameter {
        reason: format!("cannot parse {raw:?} as a rational; use p/q or a decimal"),
    };
    if raw.is_empty() {
        return Err(invalid());
    }
    if let Some((num, den)) = raw.split_once('/') {
        let p = BigInt::from_str(num.trim()).map_err(|_| invalid())?;
        let q = BigInt::from_str(den.trim()).map_err(|_| invalid())?;
        if q.is_zero() {
            return Err(Error::InvalidParameter {
                reason: format!("zero denominator in {raw:?}"),
            });
        }
        return Ok(BigRational::new(p, q));
    }
    let (sign, body) = match raw.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, raw.strip_prefix('+').unwrap_or(raw)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(invalid());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = if digits.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str(&digits).map_err(|_| invalid())?
    };
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(BigInt::from(sign) * numer, denom))
}

/// Exact trajectory along a fixed return path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTrajectory {
    /// `X(0), ..., X(N)`.
    pub states: Vec<BigRational>,
    /// `u(0), ..., u(N-1)`; `u(0) = 0` by convention.
    pub controls: Vec<BigRational>,
    pub first_nonpositive: Option<usize>,
}

impl ExactTrajectory {
    pub fn all_positive(&self) -> bool {
        self.first_nonpositive.is_none()
    }
}

/// Runs the recursion exactly; returns must satisfy `v_min <= v <= v_max`.
pub fn simulate_exact(params: &RationalParams, returns: &[BigRational]) -> Result<ExactTrajectory> {
    for (index, v) in returns.iter().enumerate() {
        if *v < params.v_min || *v > params.v_max {
            return Err(Error::InadmissibleReturn {
                index,
                value: v.to_f64().unwrap_or(f64::NAN),
                v_min: params.v_min.to_f64().unwrap_or(f64::NAN),
                v_max: params.v_max.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let (states, controls) = model::run_recursion(&params.alpha, &params.x0, returns);
    let first_nonpositive = model::first_nonpositive_index(&states);
    Ok(ExactTrajectory { states, controls, first_nonpositive })
}

/// Decodes an extreme-path mask into exact returns.
pub fn decode_extreme_exact(path: &ExtremePath, params: &RationalParams) -> Vec<BigRational> {
    (0..path.horizon())
        .map(|k| {
            if path.is_max(k) {
                params.v_max.clone()
            } else {
                params.v_min.clone()
            }
        })
        .collect()
}

/// The distinguished path `v_max, v_min, v_min, ...` as exact returns.
pub fn distinguished_exact(params: &RationalParams, horizon: usize) -> Vec<BigRational> {
    decode_extreme_exact(&ExtremePath::distinguished(horizon), params)
}

/// Exact exhaustive verification over all `2^N` extreme paths.
///
/// Every comparison is exact, so the result carries no borderline flag and
/// needs no further adjudication.
pub fn verify_exhaustive_exact(
    params: &RationalParams,
    n: usize,
) -> Result<Verification<BigRational>> {
    verify_exhaustive_exact_with(
        params,
        n,
        &SearchConfig {
            horizon_cap: EXACT_HORIZON_CAP,
            split_depth: DEFAULT_SPLIT_DEPTH,
        },
    )
}

pub fn verify_exhaustive_exact_with(
    params: &RationalParams,
    n: usize,
    cfg: &SearchConfig,
) -> Result<Verification<BigRational>> {
    verify_exhaustive_generic(
        &params.alpha,
        &params.x0,
        &params.v_min,
        &params.v_max,
        n,
        cfg,
        "exact",
        None,
    )
}

/// The singular gain `1 / (4 |v_min| (1 + v_min))`, exactly.
pub fn singular_gain(v_min: &BigRational) -> BigRational {
    let four = BigRational::from(BigInt::from(4));
    BigRational::one() / (four * v_min.abs() * (BigRational::one() + v_min))
}

/// Exact distinguished-path state at the singular gain: for `k >= 2`,
/// `X(k) = x0 ((1 - v_max + 2 v_min) k + 1 + v_max) / ((1 + v_min) 2^k)`.
pub fn singular_state(
    x0: &BigRational,
    v_min: &BigRational,
    v_max: &BigRational,
    k: usize,
) -> BigRational {
    if k <= 1 {
        return x0.clone();
    }
    let one = BigRational::one();
    let two = BigRational::from(BigInt::from(2));
    let kq = BigRational::from(BigInt::from(k as u64));
    let linear = (&one - v_max + &two * v_min) * kq + &one + v_max;
    let pow2 = BigRational::from(BigInt::from(2u32).pow(k as u32));
    x0 * linear / ((one + v_min) * pow2)
}

/// Lowest-terms `p/q` rendering (integer when `q = 1`).
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest-float view of an exact rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
