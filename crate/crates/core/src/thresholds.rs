//! Gain thresholds separating guaranteed positivity from guaranteed failure.
//!
//! For bounds `(v_min, v_max)` the sufficiency threshold `alpha_minus`
//! guarantees all-time positivity below it, and the necessity threshold
//! `alpha_plus` guarantees a sign failure along the distinguished path above
//! it. The two leave an open gap `[alpha_minus, alpha_plus]`. Which formula
//! supplies `alpha_plus` depends on how `v_max` compares to `1 + 2 v_min`.

use crate::error::Result;
use crate::model::{MarketBounds, TradingParams};
use serde::Serialize;

/// Which branch supplies the necessity threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `v_max > 1 + 2 v_min`: alpha_plus = alpha_star.
    Star,
    /// `v_max <= 1 + 2 v_min`: alpha_plus = alpha_s.
    Singular,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Star => write!(f, "star"),
            Regime::Singular => write!(f, "singular"),
        }
    }
}

/// All gain thresholds for one pair of market bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdSet {
    pub v_min: f64,
    pub v_max: f64,
    /// `v_max - (1 + 2 v_min)`; positive in the star regime.
    pub discriminant: f64,
    pub regime: Regime,
    /// Sufficiency threshold `1 / (1 + v_max)`.
    pub alpha_minus: f64,
    /// Singular gain `1 / (4 |v_min| (1 + v_min))`.
    pub alpha_s: f64,
    /// Star threshold `(v_max - v_min) / (|v_min| (1 + v_max)^2)`.
    pub alpha_star: f64,
    /// Necessity threshold: `alpha_star` or `alpha_s` per regime.
    pub alpha_plus: f64,
    /// Largest gain keeping every 2-step trajectory positive.
    pub alpha_max2: f64,
    /// Largest gain keeping every 3-step trajectory positive.
    pub alpha_max3: f64,
}

/// Where a gain sits relative to the sufficiency/necessity thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GainClass {
    /// `alpha < alpha_minus`: positivity is guaranteed.
    BelowSufficient,
    /// `alpha_minus <= alpha <= alpha_plus`: the undecided gap (both
    /// endpoints included).
    InGap,
    /// `alpha > alpha_plus`: the distinguished path eventually fails.
    AboveNecessary,
}

/// Evaluates every threshold for the given bounds.
pub fn compute_thresholds(bounds: &MarketBounds) -> ThresholdSet {
    let v_min = bounds.v_min();
    let v_max = bounds.v_max();
    let abs_v_min = -v_min;
    let discriminant = bounds.regime_discriminant();
    let regime = if discriminant > 0.0 { Regime::Star } else { Regime::Singular };
    let alpha_minus = 1.0 / (1.0 + v_max);
    let alpha_s = 1.0 / (4.0 * abs_v_min * (1.0 + v_min));
    let alpha_star = (v_max - v_min) / (abs_v_min * (1.0 + v_max) * (1.0 + v_max));
    let alpha_plus = match regime {
        Regime::Star => alpha_star,
        Regime::Singular => alpha_s,
    };
    let alpha_max2 = 1.0 / (abs_v_min * (1.0 + v_max));
    let alpha_max3 = 1.0 / (abs_v_min * (2.0 + v_max + v_min));
    ThresholdSet {
        v_min,
        v_max,
        discriminant,
        regime,
        alpha_minus,
        alpha_s,
        alpha_star,
        alpha_plus,
        alpha_max2,
        alpha_max3,
    }
}

/// Places the gain of `params` relative to the thresholds of its bounds.
pub fn classify(params: &TradingParams) -> GainClass {
    let t = compute_thresholds(params.bounds());
    let alpha = params.alpha();
    if alpha < t.alpha_minus {
        GainClass::BelowSufficient
    } else if alpha <= t.alpha_plus {
        GainClass::InGap
    } else {
        GainClass::AboveNecessary
    }
}

/// One row of a threshold surface table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub v_min: f64,
    pub v_max: f64,
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub regime: Regime,
}

/// Tabulates `(alpha_minus, alpha_plus, regime)` over a `v_min` grid at fixed
/// `v_max`. Every grid point must lie in the open interval `(-1, 0)`.
pub fn threshold_surface(v_max: f64, v_min_grid: &[f64]) -> Result<Vec<SurfaceRow>> {
    let mut rows = Vec::with_capacity(v_min_grid.len());
    for &v_min in v_min_grid {
        let bounds = MarketBounds::new(v_min, v_max)?;
        let t = compute_thresholds(&bounds);
        rows.push(SurfaceRow {
            v_min,
            v_max,
            alpha_minus: t.alpha_minus,
            alpha_plus: t.alpha_plus,
            regime: t.regime,
        });
    }
    Ok(rows)
}
