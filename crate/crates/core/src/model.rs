//! Problem instances and the delayed state recursion.
//!
//! A strategy invests `u(k) = alpha * (1 + v(k-1)) * X(k-1)` at stage `k` and
//! the account evolves as `X(k+1) = X(k) + u(k) * v(k)` with
//! `X(0) = X(1) = x0` and a zero stage-0 order. Returns `v(k)` live in
//! `[v_min, v_max]` with `-1 < v_min < 0 < v_max`.

use crate::error::{Error, Result};
use crate::numeric::Scalar;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Relative band (times `x0`) below which a float state's sign is treated as
/// undecidable; callers are expected to defer such cases to the exact mode.
pub const BORDERLINE_REL: f64 = 1e-12;

/// Widest horizon an extreme-path mask can encode.
pub const MASK_BITS: usize = 128;

/// Admissible one-period return bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarketBounds {
    v_min: f64,
    v_max: f64,
}

impl MarketBounds {
    pub fn new(v_min: f64, v_max: f64) -> Result<Self> {
        let ok = v_min.is_finite() && v_max.is_finite() && -1.0 < v_min && v_min < 0.0 && v_max > 0.0;
        if !ok {
            return Err(Error::InvalidBounds { v_min, v_max });
        }
        Ok(Self { v_min, v_max })
    }

    pub fn v_min(&self) -> f64 {
        self.v_min
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    /// Positive in the star regime (`v_max > 1 + 2 v_min`), negative or zero
    /// in the singular regime.
    pub fn regime_discriminant(&self) -> f64 {
        self.v_max - (1.0 + 2.0 * self.v_min)
    }

    pub fn contains(&self, v: f64) -> bool {
        v.is_finite() && self.v_min <= v && v <= self.v_max
    }
}

/// Feedback gain, initial account value, and market bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradingParams {
    alpha: f64,
    x0: f64,
    bounds: MarketBounds,
}

impl TradingParams {
    pub fn new(alpha: f64, x0: f64, bounds: MarketBounds) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("gain alpha={alpha} must be finite and >= 0"),
            });
        }
        if !x0.is_finite() || x0 <= 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("initial account x0={x0} must be finite and > 0"),
            });
        }
        Ok(Self { alpha, x0, bounds })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn bounds(&self) -> &MarketBounds {
        &self.bounds
    }
}

/// A finite sequence of one-period returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    returns: Vec<f64>,
}

impl Path {
    pub fn new(returns: Vec<f64>) -> Self {
        Self { returns }
    }

    pub fn returns(&self) -> &[f64] {
        &self.returns
    }

    pub fn horizon(&self) -> usize {
        self.returns.len()
    }

    /// Checks every entry is finite and inside `[v_min, v_max]`.
    pub fn admissible_for(&self, bounds: &MarketBounds) -> Result<()> {
        for (index, &value) in self.returns.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteReturn { index });
            }
            if !bounds.contains(value) {
                return Err(Error::InadmissibleReturn {
                    index,
                    value,
                    v_min: bounds.v_min,
                    v_max: bounds.v_max,
                });
            }
        }
        Ok(())
    }
}

impl From<Vec<f64>> for Path {
    fn from(returns: Vec<f64>) -> Self {
        Self::new(returns)
    }
}

/// A vertex of the return hypercube, encoded as a bitmask: bit `k` set means
/// `v(k) = v_max`, clear means `v(k) = v_min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtremePath {
    mask: u128,
    horizon: usize,
}

impl ExtremePath {
    pub fn new(mask: u128, horizon: usize) -> Result<Self> {
        if horizon > MASK_BITS {
            return Err(Error::HorizonCap {
                requested: horizon,
                cap: MASK_BITS,
                kind: "extreme-path mask",
            });
        }
        if horizon < MASK_BITS && (mask >> horizon) != 0 {
            return Err(Error::MaskTooWide { mask, horizon });
        }
        Ok(Self { mask, horizon })
    }

    /// `v_max` first, `v_min` forever after; the empty path at horizon 0.
    pub fn distinguished(horizon: usize) -> Self {
        let mask = if horizon == 0 { 0 } else { 1 };
        Self { mask, horizon }
    }

    pub fn all_min(horizon: usize) -> Self {
        Self { mask: 0, horizon }
    }

    pub fn all_max(horizon: usize) -> Self {
        let mask = mask_for_width(horizon);
        Self { mask, horizon }
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn is_max(&self, k: usize) -> bool {
        debug_assert!(k < self.horizon);
        (self.mask >> k) & 1 == 1
    }

    pub fn mask_hex(&self) -> String {
        format!("{:#x}", self.mask)
    }

    pub fn decode(&self, bounds: &MarketBounds) -> Path {
        let returns = (0..self.horizon)
            .map(|k| if self.is_max(k) { bounds.v_max } else { bounds.v_min })
            .collect();
        Path::new(returns)
    }

    /// Inverse of [`decode`](Self::decode); `None` if some entry is not an
    /// exact bound value.
    pub fn encode(path: &Path, bounds: &MarketBounds) -> Option<Self> {
        if path.horizon() > MASK_BITS {
            return None;
        }
        let mut mask = 0u128;
        for (k, &v) in path.returns().iter().enumerate() {
            if v == bounds.v_max {
                mask |= 1 << k;
            } else if v != bounds.v_min {
                return None;
            }
        }
        Some(Self {
            mask,
            horizon: path.horizon(),
        })
    }
}

impl Serialize for ExtremePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ExtremePath", 2)?;
        st.serialize_field("mask", &self.mask_hex())?;
        st.serialize_field("horizon", &self.horizon)?;
        st.end()
    }
}

pub(crate) fn mask_for_width(width: usize) -> u128 {
    debug_assert!(width <= MASK_BITS);
    if width == MASK_BITS {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

/// The return path that maximizes the first order and then works against it:
/// `v_max` once, `v_min` thereafter.
pub fn distinguished_path(bounds: &MarketBounds, horizon: usize) -> Path {
    let mut returns = vec![bounds.v_min; horizon];
    if horizon > 0 {
        returns[0] = bounds.v_max;
    }
    Path::new(returns)
}

/// Decodes an extreme-path mask into a concrete return path.
pub fn decode_extreme(extreme: &ExtremePath, bounds: &MarketBounds) -> Path {
    extreme.decode(bounds)
}

/// States, orders, and leverage along one return path.
///
/// `states` holds `X(0..=N)`, `controls` holds `u(0..N-1)` (so `controls[0]`
/// is the forced zero stage-0 order), and `leverage[k] = u(k) / X(k)` where
/// the state is nonzero. A horizon-0 path yields the single state `X(0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub states: Vec<f64>,
    pub controls: Vec<f64>,
    pub leverage: Vec<Option<f64>>,
    /// Smallest `k` with `X(k) <= 0`, if any. Simulation always continues to
    /// the full horizon; bankruptcy is recorded, not enforced.
    pub first_nonpositive: Option<usize>,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.states.len().saturating_sub(1)
    }

    pub fn all_positive(&self) -> bool {
        self.first_nonpositive.is_none()
    }

    /// Three-way sign call with the borderline band around zero.
    pub fn verdict(&self) -> PositivityVerdict {
        let band = BORDERLINE_REL * self.states[0];
        for (k, &x) in self.states.iter().enumerate() {
            if x.abs() < band {
                return PositivityVerdict::Indeterminate { stage: k };
            }
            if x < 0.0 {
                return PositivityVerdict::Nonpositive { stage: k };
            }
        }
        PositivityVerdict::Positive
    }
}

/// Outcome of a float-mode positivity check on one trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PositivityVerdict {
    Positive,
    Nonpositive { stage: usize },
    /// The deciding state is within the borderline band of zero; float
    /// arithmetic cannot be trusted to call the sign.
    Indeterminate { stage: usize },
}

/// Runs the state recursion along `path`.
///
/// Rejects non-finite returns and entries outside the market bounds. The
/// trajectory is linear in `x0` and is computed to the full horizon even if
/// the account goes nonpositive on the way.
pub fn simulate(params: &TradingParams, path: &Path) -> Result<Trajectory> {
    path.admissible_for(params.bounds())?;
    let (states, controls) = run_recursion(&params.alpha(), &params.x0(), path.returns());
    let leverage = controls
        .iter()
        .zip(&states)
        .map(|(u, x)| if *x == 0.0 { None } else { Some(u / x) })
        .collect();
    let first_nonpositive = first_nonpositive_index(&states);
    Ok(Trajectory {
        states,
        controls,
        leverage,
        first_nonpositive,
    })
}

/// Stage-k order given the previous return and the delayed state.
#[inline]
pub(crate) fn control<T: Scalar>(alpha: &T, v_prev: &T, x_prev: &T) -> T {
    alpha.clone() * (T::one() + v_prev.clone()) * x_prev.clone()
}

/// One step of the account recursion.
#[inline]
pub(crate) fn advance<T: Scalar>(x_cur: &T, u: &T, v: &T) -> T {
    x_cur.clone() + u.clone() * v.clone()
}

/// Full recursion over any scalar type; returns `(states, controls)`.
pub(crate) fn run_recursion<T: Scalar>(alpha: &T, x0: &T, returns: &[T]) -> (Vec<T>, Vec<T>) {
    let n = returns.len();
    let mut states = Vec::with_capacity(n + 1);
    let mut controls = Vec::with_capacity(n);
    states.push(x0.clone());
    if n == 0 {
        return (states, controls);
    }
    states.push(x0.clone());
    controls.push(T::zero());
    for k in 1..n {
        let u = control(alpha, &returns[k - 1], &states[k - 1]);
        let x_next = advance(&states[k], &u, &returns[k]);
        controls.push(u);
        states.push(x_next);
    }
    (states, controls)
}

pub(crate) fn first_nonpositive_index<T: Scalar>(states: &[T]) -> Option<usize> {
    states.iter().position(|x| *x <= T::zero())
}
