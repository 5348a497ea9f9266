//! Several assets traded against one account.
//!
//! Each asset `i` carries its own gain and return bounds; the account
//! aggregates the stage gains: `X(k+1) = X(k) + sum_i u_i(k) v_i(k)` with
//! `u_i(k) = alpha_i (1 + v_i(k-1)) X(k-1)`. With one asset this reduces to
//! the scalar model bit for bit, because the inner loop folds products in
//! the same order the scalar update multiplies them.

use crate::error::{Error, Result};
use crate::model::{
    self, control, mask_for_width, MarketBounds, Trajectory, TradingParams, BORDERLINE_REL,
    MASK_BITS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::search::{VerifyMode, SAMPLE_CHUNK};

/// Default cap on `assets * horizon` for exhaustive vertex enumeration.
pub const DEFAULT_MULTI_EXHAUSTIVE_CAP: usize = 24;

/// One asset's gain and admissible return bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssetSpec {
    alpha: f64,
    #[serde(flatten)]
    bounds: MarketBounds,
}

impl AssetSpec {
    pub fn new(alpha: f64, bounds: MarketBounds) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("alpha={alpha} must be finite and >= 0"),
            });
        }
        Ok(Self { alpha, bounds })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn bounds(&self) -> &MarketBounds {
        &self.bounds
    }
}

/// A portfolio of assets sharing one account.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiAssetParams {
    assets: Vec<AssetSpec>,
    x0: f64,
}

impl MultiAssetParams {
    pub fn new(assets: Vec<AssetSpec>, x0: f64) -> Result<Self> {
        if assets.is_empty() {
            return Err(Error::InvalidParameter {
                reason: "at least one asset is required".into(),
            });
        }
        if !x0.is_finite() || x0 <= 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("x0={x0} must be finite and > 0"),
            });
        }
        Ok(Self { assets, x0 })
    }

    /// A single-asset portfolio equivalent to the scalar parameters.
    pub fn from_scalar(params: &TradingParams) -> Self {
        Self {
            assets: vec![AssetSpec {
                alpha: params.alpha(),
                bounds: *params.bounds(),
            }],
            x0: params.x0(),
        }
    }

    pub fn assets(&self) -> &[AssetSpec] {
        &self.assets
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }
}

/// Runs the portfolio recursion. `returns[k][i]` is asset `i`'s return at
/// time `k`; every row must have one entry per asset.
pub fn simulate_multi(params: &MultiAssetParams, returns: &[Vec<f64>]) -> Result<Trajectory> {
    let m = params.assets.len();
    for (k, row) in returns.iter().enumerate() {
        if row.len() != m {
            return Err(Error::LengthMismatch { expected: m, got: row.len() });
        }
        for (i, (&v, asset)) in row.iter().zip(&params.assets).enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteReturn { index: k * m + i });
            }
            if !asset.bounds.contains(v) {
                return Err(Error::InadmissibleReturn {
                    index: k * m + i,
                    value: v,
                    v_min: asset.bounds.v_min(),
                    v_max: asset.bounds.v_max(),
                });
            }
        }
    }
    let n = returns.len();
    let x0 = params.x0;
    let mut states = Vec::with_capacity(n + 1);
    let mut controls = Vec::with_capacity(n.max(1));
    states.push(x0);
    if n == 0 {
        return Ok(finish(states, controls));
    }
    states.push(x0);
    controls.push(0.0);
    for k in 1..n {
        let x_prev = states[k - 1];
        let x_cur = states[k];
        // Fold the per-asset stakes and gains in asset order; with one asset
        // this is exactly the scalar u * v.
        let mut total_u = 0.0;
        let mut gain = 0.0;
        for (i, asset) in params.assets.iter().enumerate() {
            let u = control(&asset.alpha, &returns[k - 1][i], &x_prev);
            let term = u * returns[k][i];
            if i == 0 {
                total_u = u;
                gain = term;
            } else {
                total_u += u;
                gain += term;
            }
        }
        states.push(x_cur + gain);
        controls.push(total_u);
    }
    Ok(finish(states, controls))
}

fn finish(states: Vec<f64>, controls: Vec<f64>) -> Trajectory {
    let leverage = states
        .iter()
        .take(controls.len())
        .zip(&controls)
        .map(|(&x, &u)| if x == 0.0 { None } else { Some(u / x) })
        .collect();
    let first_nonpositive = model::first_nonpositive_index(&states);
    Trajectory {
        states,
        controls,
        leverage,
        first_nonpositive,
    }
}

/// The oscillation test `4 sum_i alpha_i (1 + v_min_i) |v_min_i| > 1`.
///
/// `theta = 1 - lhs` generalizes the scalar discriminant: the condition
/// holds exactly when `theta < 0`, where the distinguished-path dynamics
/// turn oscillatory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationCondition {
    pub holds: bool,
    pub lhs: f64,
    pub theta: f64,
}

pub fn oscillation_condition(params: &MultiAssetParams) -> OscillationCondition {
    let lhs: f64 = params
        .assets
        .iter()
        .map(|a| 4.0 * a.alpha * (1.0 + a.bounds.v_min()) * a.bounds.v_min().abs())
        .sum();
    OscillationCondition {
        holds: lhs > 1.0,
        lhs,
        theta: 1.0 - lhs,
    }
}

/// A vertex of the portfolio return hypercube: bit `k * m + i` set means
/// asset `i` takes `v_max_i` at time `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiExtremePath {
    mask: u128,
    horizon: usize,
    assets: usize,
}

impl MultiExtremePath {
    pub fn new(mask: u128, horizon: usize, assets: usize) -> Result<Self> {
        let bits = horizon * assets;
        if bits > MASK_BITS {
            return Err(Error::HorizonCap {
                requested: bits,
                cap: MASK_BITS,
                kind: "multi-mask",
            });
        }
        if mask & !mask_for_width(bits) != 0 {
            return Err(Error::MaskTooWide { mask, horizon: bits });
        }
        Ok(Self { mask, horizon, assets })
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn assets(&self) -> usize {
        self.assets
    }

    pub fn is_max(&self, k: usize, i: usize) -> bool {
        (self.mask >> (k * self.assets + i)) & 1 == 1
    }

    /// Every asset at `v_max` at time 0, then every asset at `v_min`.
    pub fn all_distinguished(horizon: usize, assets: usize) -> Self {
        let mask = if horizon == 0 {
            0
        } else {
            mask_for_width(assets)
        };
        Self { mask, horizon, assets }
    }

    pub fn all_min(horizon: usize, assets: usize) -> Self {
        Self { mask: 0, horizon, assets }
    }

    pub fn all_max(horizon: usize, assets: usize) -> Self {
        Self {
            mask: mask_for_width(horizon * assets),
            horizon,
            assets,
        }
    }

    /// Expands the mask into per-time rows of returns.
    pub fn decode(&self, params: &MultiAssetParams) -> Vec<Vec<f64>> {
        (0..self.horizon)
            .map(|k| {
                params
                    .assets
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        if self.is_max(k, i) {
                            a.bounds.v_max()
                        } else {
                            a.bounds.v_min()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn mask_hex(&self) -> String {
        format!("{:#x}", self.mask)
    }
}

impl Serialize for MultiExtremePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("MultiExtremePath", 3)?;
        s.serialize_field("mask", &self.mask_hex())?;
        s.serialize_field("horizon", &self.horizon)?;
        s.serialize_field("assets", &self.assets)?;
        s.end()
    }
}

/// A failing portfolio vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiWitness {
    pub path: MultiExtremePath,
    pub stage: usize,
    pub value: f64,
}

/// Minimum state over the examined vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiMinState {
    pub value: f64,
    pub path: MultiExtremePath,
    pub stage: usize,
}

/// Outcome of a portfolio vertex verification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiVerification {
    pub horizon: usize,
    pub assets: usize,
    pub mode: VerifyMode,
    pub all_positive: bool,
    /// First failure in scan order: exhaustive mode scans masks in
    /// ascending order, sampled mode scans forced vertices then draws.
    pub witness: Option<MultiWitness>,
    pub min_state: MultiMinState,
    pub min_abs_state: f64,
    pub borderline: bool,
    pub paths_examined: u64,
}

struct Flat {
    witness: Option<(u128, usize, f64)>,
    min: (f64, u128, usize),
    min_abs: f64,
}

impl Flat {
    fn new() -> Self {
        Self {
            witness: None,
            min: (f64::INFINITY, 0, 0),
            min_abs: f64::INFINITY,
        }
    }

    /// Scans one vertex, stopping at its first nonpositive state.
    fn scan(
        &mut self,
        assets: &[AssetSpec],
        x0: f64,
        n: usize,
        mask: u128,
    ) {
        let m = assets.len();
        let at = |k: usize, i: usize| -> f64 {
            if (mask >> (k * m + i)) & 1 == 1 {
                assets[i].bounds.v_max()
            } else {
                assets[i].bounds.v_min()
            }
        };
        self.record(x0, mask, 0);
        if n == 0 {
            return;
        }
        self.record(x0, mask, 1);
        let mut x_prev = x0;
        let mut x_cur = x0;
        for k in 1..n {
            let mut gain = 0.0;
            for i in 0..m {
                let u = control(&assets[i].alpha, &at(k - 1, i), &x_prev);
                let term = u * at(k, i);
                if i == 0 {
                    gain = term;
                } else {
                    gain += term;
                }
            }
            let x_next = x_cur + gain;
            self.record(x_next, mask, k + 1);
            if x_next <= 0.0 {
                if self.witness.is_none() {
                    self.witness = Some((mask, k + 1, x_next));
                }
                return;
            }
            x_prev = x_cur;
            x_cur = x_next;
        }
    }

    fn record(&mut self, value: f64, mask: u128, stage: usize) {
        let abs = value.abs();
        if abs < self.min_abs {
            self.min_abs = abs;
        }
        if value < self.min.0 {
            self.min = (value, mask, stage);
        }
    }

    /// Order-preserving fold: `self` was scanned first and wins ties.
    fn fold(mut self, other: Self) -> Self {
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        if other.min.0 < self.min.0 {
            self.min = other.min;
        }
        if other.min_abs < self.min_abs {
            self.min_abs = other.min_abs;
        }
        self
    }
}

/// Verifies positivity over portfolio return vertices.
///
/// Exhaustive when `assets * horizon <= cap` (ascending mask order,
/// `2^(m n)` vertices), sampled otherwise with the same forced-path and
/// fixed-block determinism scheme as the scalar sampler. `mode` requests
/// sampling explicitly; exhaustive requests over the cap are refused.
pub fn verify_extremes_multi(
    params: &MultiAssetParams,
    n: usize,
    mode: VerifyMode,
    cap: usize,
) -> Result<MultiVerification> {
    let m = params.assets.len();
    let bits = n * m;
    if bits > MASK_BITS {
        return Err(Error::HorizonCap {
            requested: bits,
            cap: MASK_BITS,
            kind: "multi-mask",
        });
    }
    let x0 = params.x0;
    match mode {
        VerifyMode::Exhaustive => {
            if bits > cap {
                return Err(Error::HorizonCap {
                    requested: bits,
                    cap,
                    kind: "multi-exhaustive",
                });
            }
            let total: u64 = 1u64 << bits;
            let blocks = total.div_ceil(SAMPLE_CHUNK);
            let flat = (0..blocks)
                .into_par_iter()
                .map(|block| {
                    let lo = block * SAMPLE_CHUNK;
                    let hi = (lo + SAMPLE_CHUNK).min(total);
                    let mut f = Flat::new();
                    for mask in lo..hi {
                        f.scan(&params.assets, x0, n, mask as u128);
                    }
                    f
                })
                .reduce(Flat::new, Flat::fold);
            Ok(to_multi_verification(flat, params, n, mode, total))
        }
        VerifyMode::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::TooFewSamples { min: 1, got: 0 });
            }
            let width = mask_for_width(bits);
            let mut flat = Flat::new();
            for forced in [
                MultiExtremePath::all_distinguished(n, m).mask(),
                MultiExtremePath::all_min(n, m).mask(),
                MultiExtremePath::all_max(n, m).mask(),
            ] {
                flat.scan(&params.assets, x0, n, forced);
            }
            let blocks = count.div_ceil(SAMPLE_CHUNK);
            let drawn = (0..blocks)
                .into_par_iter()
                .map(|block| {
                    let size = SAMPLE_CHUNK.min(count - block * SAMPLE_CHUNK);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(block + 1);
                    let mut f = Flat::new();
                    for _ in 0..size {
                        let mask = rng.gen::<u128>() & width;
                        f.scan(&params.assets, x0, n, mask);
                    }
                    f
                })
                .collect::<Vec<_>>();
            for block in drawn {
                flat = flat.fold(block);
            }
            Ok(to_multi_verification(flat, params, n, mode, count + 3))
        }
    }
}

fn to_multi_verification(
    flat: Flat,
    params: &MultiAssetParams,
    n: usize,
    mode: VerifyMode,
    examined: u64,
) -> MultiVerification {
    let m = params.assets.len();
    let path_of = |mask: u128| MultiExtremePath {
        mask,
        horizon: n,
        assets: m,
    };
    let witness = flat.witness.map(|(mask, stage, value)| MultiWitness {
        path: path_of(mask),
        stage,
        value,
    });
    MultiVerification {
        horizon: n,
        assets: m,
        mode,
        all_positive: witness.is_none(),
        witness,
        min_state: MultiMinState {
            value: flat.min.0,
            path: path_of(flat.min.1),
            stage: flat.min.2,
        },
        min_abs_state: flat.min_abs,
        borderline: flat.min_abs < BORDERLINE_REL * params.x0,
        paths_examined: examined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{decode_extreme, simulate, ExtremePath};
    use crate::search::verify_exhaustive;
    use crate::thresholds::compute_thresholds;

    fn scalar(alpha: f64, v_min: f64, v_max: f64) -> TradingParams {
        TradingParams::new(alpha, 1.0, MarketBounds::new(v_min, v_max).unwrap()).unwrap()
    }

    #[test]
    fn single_asset_reduces_to_scalar_bitwise() {
        let p = scalar(0.57, -0.8, 0.9);
        let mp = MultiAssetParams::from_scalar(&p);
        for mask in [0u128, 1, 0b1011, 0b110101, (1 << 12) - 1] {
            let path = ExtremePath::new(mask, 12).unwrap();
            let scalar_t = simulate(&p, &decode_extreme(&path, p.bounds())).unwrap();
            let rows: Vec<Vec<f64>> = decode_extreme(&path, p.bounds())
                .returns()
                .iter()
                .map(|&v| vec![v])
                .collect();
            let multi_t = simulate_multi(&mp, &rows).unwrap();
            assert_eq!(scalar_t.states.len(), multi_t.states.len());
            for (a, b) in scalar_t.states.iter().zip(&multi_t.states) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            for (a, b) in scalar_t.controls.iter().zip(&multi_t.controls) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            assert_eq!(scalar_t.first_nonpositive, multi_t.first_nonpositive);
        }
    }

    #[test]
    fn single_asset_verification_matches_scalar_verdict() {
        for alpha in [0.3, 0.54, 0.6579, 0.7] {
            let p = scalar(alpha, -0.8, 0.9);
            let mp = MultiAssetParams::from_scalar(&p);
            let s = verify_exhaustive(&p, 11).unwrap();
            let m = verify_extremes_multi(&mp, 11, VerifyMode::Exhaustive, 24).unwrap();
            assert_eq!(s.all_positive, m.all_positive, "alpha={alpha}");
            assert_eq!(s.witness.is_some(), m.witness.is_some());
            if s.all_positive {
                // Without a witness both modes examine every vertex, so the
                // minima are the same float computations and agree bitwise.
                assert_eq!(s.min_state.value.to_bits(), m.min_state.value.to_bits());
                assert_eq!(s.paths_examined, m.paths_examined);
            } else {
                // With a witness the scalar walk prunes whole subtrees while
                // the flat scan visits every mask, so only the verdict and
                // the failure sign are comparable.
                assert!(s.witness.as_ref().unwrap().value <= 0.0);
                assert!(m.witness.as_ref().unwrap().value <= 0.0);
            }
        }
    }

    #[test]
    fn oscillation_condition_matches_scalar_threshold() {
        let bounds = MarketBounds::new(-0.8, 0.9).unwrap();
        let t = compute_thresholds(&bounds);
        for (alpha, expect) in [
            (t.alpha_s * 0.999, false),
            (t.alpha_s * 1.001, true),
            (0.1, false),
            (3.0, true),
        ] {
            let mp = MultiAssetParams::from_scalar(&scalar(alpha, -0.8, 0.9));
            let c = oscillation_condition(&mp);
            assert_eq!(c.holds, expect, "alpha={alpha}");
            assert_eq!(c.holds, c.theta < 0.0);
        }
    }

    #[test]
    fn two_assets_diversify_the_worst_case() {
        // Two half-size positions in independent assets cannot do worse than
        // the worst single asset at the same joint horizon.
        let b = MarketBounds::new(-0.5, 0.5).unwrap();
        let assets = vec![
            AssetSpec::new(0.4, b).unwrap(),
            AssetSpec::new(0.4, b).unwrap(),
        ];
        let mp = MultiAssetParams::new(assets, 1.0).unwrap();
        let r = verify_extremes_multi(&mp, 8, VerifyMode::Exhaustive, 24).unwrap();
        assert_eq!(r.paths_examined, 1 << 16);
        assert_eq!(r.assets, 2);
        // The all-max vertex grows, the all-min vertex decays; the minimum
        // is attained somewhere mixed and is reproducible.
        let path = r.min_state.path;
        let t = simulate_multi(&mp, &path.decode(&mp)).unwrap();
        assert_eq!(t.states[r.min_state.stage].to_bits(), r.min_state.value.to_bits());
    }

    #[test]
    fn sampled_multi_is_deterministic() {
        let b = MarketBounds::new(-0.4, 0.6).unwrap();
        let assets = vec![
            AssetSpec::new(0.9, b).unwrap(),
            AssetSpec::new(0.7, MarketBounds::new(-0.6, 0.3).unwrap()).unwrap(),
        ];
        let mp = MultiAssetParams::new(assets, 2.0).unwrap();
        let mode = VerifyMode::Sampled { count: 700, seed: 11 };
        let a = verify_extremes_multi(&mp, 40, mode, 24).unwrap();
        let b2 = verify_extremes_multi(&mp, 40, mode, 24).unwrap();
        assert_eq!(a, b2);
        assert_eq!(a.paths_examined, 703);
    }

    #[test]
    fn exhaustive_cap_and_mask_width_are_enforced() {
        let b = MarketBounds::new(-0.5, 0.5).unwrap();
        let mp = MultiAssetParams::new(
            vec![AssetSpec::new(0.1, b).unwrap(); 5],
            1.0,
        )
        .unwrap();
        // 5 assets * 5 stages = 25 bits > 24.
        let err = verify_extremes_multi(&mp, 5, VerifyMode::Exhaustive, 24).unwrap_err();
        assert!(err.is_cap_refusal());
        // 5 assets * 26 stages = 130 bits > 128 even for sampling.
        let err = verify_extremes_multi(
            &mp,
            26,
            VerifyMode::Sampled { count: 10, seed: 0 },
            24,
        )
        .unwrap_err();
        assert!(err.is_cap_refusal());
    }

    #[test]
    fn row_length_mismatch_is_rejected() {
        let b = MarketBounds::new(-0.5, 0.5).unwrap();
        let mp = MultiAssetParams::new(
            vec![AssetSpec::new(0.1, b).unwrap(); 2],
            1.0,
        )
        .unwrap();
        assert!(simulate_multi(&mp, &[vec![0.1]]).is_err());
        assert!(simulate_multi(&mp, &[vec![0.1, 0.2, 0.3]]).is_err());
        assert!(simulate_multi(&mp, &[vec![0.1, 0.9]]).is_err());
    }

    #[test]
    fn serialization_uses_hex_masks() {
        let p = MultiExtremePath::new(0b1011, 2, 2).unwrap();
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["mask"], "0xb");
        assert_eq!(json["assets"], 2);
    }
}
