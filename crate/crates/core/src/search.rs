//! Positivity verification over the extreme-path tree.
//!
//! The account at stage `k` is multilinear in the returns, so its minimum
//! over all admissible paths of length `N` is attained at a vertex of the
//! return hypercube. Exhaustive mode walks the binary tree of those vertices
//! depth first, sharing prefix states; sampled mode draws vertices at random
//! for horizons where `2^N` is out of reach.
//!
//! Determinism contract: results depend only on the inputs, never on thread
//! count or scheduling. The tree walk forks with `rayon::join` and merges
//! child results in branch order (`v_min` before `v_max`), discarding the
//! right child entirely when the left one already holds a witness, which
//! reproduces the sequential short-circuit exactly. Sampled mode draws each
//! fixed-size block of masks from its own seeded stream.

use crate::error::{Error, Result};
use crate::model::{
    self, advance, control, mask_for_width, ExtremePath, MarketBounds, TradingParams,
    BORDERLINE_REL,
};
use crate::numeric::{abs_of, Scalar};
use crate::thresholds::{compute_thresholds, ThresholdSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Default horizon cap for exhaustive enumeration (`2^30` vertices).
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 30;

/// Depth above which the tree walk forks into parallel subtrees.
pub const DEFAULT_SPLIT_DEPTH: usize = 8;

/// Widest horizon sampled mode can encode in a mask.
pub const SAMPLED_HORIZON_CAP: usize = model::MASK_BITS;

/// Number of sampled masks drawn from one RNG stream; the fixed work-unit
/// size that keeps sampling independent of thread count.
pub const SAMPLE_CHUNK: u64 = 4096;

/// Tunables for exhaustive verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub horizon_cap: usize,
    pub split_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            horizon_cap: DEFAULT_EXHAUSTIVE_CAP,
            split_depth: DEFAULT_SPLIT_DEPTH,
        }
    }
}

/// How a verification examined the path space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// A failing extreme path: re-simulating it reproduces a state `<= 0` at the
/// recorded stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness<T> {
    pub path: ExtremePath,
    pub stage: usize,
    pub value: T,
}

/// Minimum state over the examined paths, with one attaining vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinState<T> {
    pub value: T,
    pub path: ExtremePath,
    pub stage: usize,
}

/// Outcome of a positivity verification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification<T> {
    pub horizon: usize,
    pub mode: VerifyMode,
    /// Every examined state was strictly positive.
    pub all_positive: bool,
    /// Lexicographically first failure in exhaustive mode (`v_min` branch
    /// before `v_max`); first failure in draw order in sampled mode.
    pub witness: Option<Witness<T>>,
    pub min_state: MinState<T>,
    /// Smallest `|X(k)|` seen; near-zero values mean the float verdict is
    /// not trustworthy.
    pub min_abs_state: T,
    /// Float mode only: some examined state was inside the borderline band,
    /// so `all_positive` should be adjudicated by the exact oracle.
    pub borderline: bool,
    pub paths_examined: u64,
}

pub type VerificationResult = Verification<f64>;

/// Per-stage minimum over all `2^N` vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageMinimum {
    pub stage: usize,
    pub value: f64,
    pub path: ExtremePath,
}

struct Ctx<'a, T> {
    alpha: &'a T,
    vmin: &'a T,
    vmax: &'a T,
    n: usize,
    split_depth: usize,
    prune: bool,
}

struct RawWitness<T> {
    mask: u128,
    stage: usize,
    value: T,
}

struct Acc<T> {
    witness: Option<RawWitness<T>>,
    /// Per-stage minima as `(value, mask)`; index = stage.
    minima: Vec<Option<(T, u128)>>,
    min_abs: Option<T>,
    decided: u64,
}

impl<T: Scalar> Acc<T> {
    fn new(n: usize) -> Self {
        Self {
            witness: None,
            minima: vec![None; n + 1],
            min_abs: None,
            decided: 0,
        }
    }

    fn record(&mut self, stage: usize, value: &T, mask: u128) {
        let abs = abs_of(value);
        if self.min_abs.as_ref().map_or(true, |cur| abs < *cur) {
            self.min_abs = Some(abs);
        }
        let slot = &mut self.minima[stage];
        let better = match slot {
            None => true,
            Some((cur, _)) => *value < *cur,
        };
        if better {
            *slot = Some((value.clone(), mask));
        }
    }

    /// Branch-order merge: `self` is the `v_min` side and wins ties; a
    /// witness on the `v_min` side discards the `v_max` side entirely,
    /// exactly as a sequential walk would never have entered it.
    fn merge(self, other: Self) -> Self {
        if self.witness.is_some() {
            return self;
        }
        self.fold(other)
    }

    /// Order-preserving fold without the short-circuit: both sides were
    /// genuinely examined (sampled mode), so both contribute minima; the
    /// earlier witness wins.
    fn fold(mut self, other: Self) -> Self {
        for (slot, theirs) in self.minima.iter_mut().zip(other.minima) {
            if let Some((value, mask)) = theirs {
                let better = match slot {
                    None => true,
                    Some((cur, _)) => value < *cur,
                };
                if better {
                    *slot = Some((value, mask));
                }
            }
        }
        if let Some(abs) = other.min_abs {
            if self.min_abs.as_ref().map_or(true, |cur| abs < *cur) {
                self.min_abs = Some(abs);
            }
        }
        self.decided += other.decided;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self
    }
}

fn paths_below(n: usize, stage: usize) -> u64 {
    1u64 << (n - stage).min(63)
}

/// Sequential walk below the parallel split. Returns true when a witness was
/// found and the caller must stop.
fn dfs_seq<T: Scalar>(
    ctx: &Ctx<'_, T>,
    depth: usize,
    mask: u128,
    x_prev: &T,
    x_cur: &T,
    v_prev: &T,
    acc: &mut Acc<T>,
) -> bool {
    if depth == ctx.n {
        acc.decided += 1;
        return false;
    }
    let u = control(ctx.alpha, v_prev, x_prev);
    for is_max in [false, true] {
        let v = if is_max { ctx.vmax } else { ctx.vmin };
        let x_next = advance(x_cur, &u, v);
        let child_mask = mask | (u128::from(is_max) << depth);
        let stage = depth + 1;
        acc.record(stage, &x_next, child_mask);
        if ctx.prune && x_next <= T::zero() {
            acc.decided += paths_below(ctx.n, stage);
            acc.witness = Some(RawWitness {
                mask: child_mask,
                stage,
                value: x_next,
            });
            return true;
        }
        if dfs_seq(ctx, depth + 1, child_mask, x_cur, &x_next, v, acc) {
            return true;
        }
    }
    false
}

/// Forking walk above the split depth.
fn dfs_node<T: Scalar>(
    ctx: &Ctx<'_, T>,
    depth: usize,
    mask: u128,
    x_prev: &T,
    x_cur: &T,
    v_prev: &T,
) -> Acc<T> {
    if depth >= ctx.split_depth || depth >= ctx.n {
        let mut acc = Acc::new(ctx.n);
        dfs_seq(ctx, depth, mask, x_prev, x_cur, v_prev, &mut acc);
        return acc;
    }
    let u = control(ctx.alpha, v_prev, x_prev);
    let child = |is_max: bool| -> Acc<T> {
        let v = if is_max { ctx.vmax } else { ctx.vmin };
        let x_next = advance(x_cur, &u, v);
        let child_mask = mask | (u128::from(is_max) << depth);
        let stage = depth + 1;
        let mut acc;
        if ctx.prune && x_next <= T::zero() {
            acc = Acc::new(ctx.n);
            acc.decided = paths_below(ctx.n, stage);
            acc.witness = Some(RawWitness {
                mask: child_mask,
                stage,
                value: x_next.clone(),
            });
        } else {
            acc = dfs_node(ctx, depth + 1, child_mask, x_cur, &x_next, v);
        }
        acc.record(stage, &x_next, child_mask);
        acc
    };
    let (a, b) = rayon::join(|| child(false), || child(true));
    a.merge(b)
}

/// Walks the whole tree; `prune` enables the witness short-circuit.
fn explore<T: Scalar>(
    alpha: &T,
    x0: &T,
    vmin: &T,
    vmax: &T,
    n: usize,
    split_depth: usize,
    prune: bool,
) -> Acc<T> {
    let mut base = Acc::new(n);
    base.record(0, x0, 0);
    if n == 0 {
        base.decided = 1;
        return base;
    }
    base.record(1, x0, 0);
    let ctx = Ctx { alpha, vmin, vmax, n, split_depth, prune };
    let run_child = |is_max: bool| -> Acc<T> {
        let v = if is_max { vmax } else { vmin };
        dfs_node(&ctx, 1, u128::from(is_max), x0, x0, v)
    };
    let combined = if split_depth >= 1 && n >= 2 {
        let (a, b) = rayon::join(|| run_child(false), || run_child(true));
        a.merge(b)
    } else {
        let a = run_child(false);
        if a.witness.is_some() {
            a
        } else {
            let b = run_child(true);
            a.merge(b)
        }
    };
    base.merge(combined)
}

fn min_over_stages<T: Scalar>(acc: &Acc<T>, n: usize) -> (T, u128, usize) {
    let mut best: Option<(T, u128, usize)> = None;
    for (stage, slot) in acc.minima.iter().enumerate().take(n + 1) {
        if let Some((value, mask)) = slot {
            let better = match &best {
                None => true,
                Some((cur, _, _)) => *value < *cur,
            };
            if better {
                best = Some((value.clone(), *mask, stage));
            }
        }
    }
    best.expect("stage 0 is always recorded")
}

fn acc_to_verification<T: Scalar>(
    acc: Acc<T>,
    n: usize,
    mode: VerifyMode,
    borderline_band: Option<&T>,
) -> Verification<T> {
    let (value, mask, stage) = min_over_stages(&acc, n);
    let min_abs = acc.min_abs.clone().expect("stage 0 is always recorded");
    let borderline = borderline_band.map_or(false, |band| min_abs < *band);
    let witness = acc.witness.as_ref().map(|w| Witness {
        path: ExtremePath::new(w.mask, n).expect("prefix mask fits the horizon"),
        stage: w.stage,
        value: w.value.clone(),
    });
    Verification {
        horizon: n,
        mode,
        all_positive: witness.is_none(),
        witness,
        min_state: MinState {
            value,
            path: ExtremePath::new(mask, n).expect("mask fits the horizon"),
            stage,
        },
        min_abs_state: min_abs,
        borderline,
        paths_examined: acc.decided,
    }
}

/// Exhaustive verification shared by the float and exact modes.
pub(crate) fn verify_exhaustive_generic<T: Scalar>(
    alpha: &T,
    x0: &T,
    vmin: &T,
    vmax: &T,
    n: usize,
    cfg: &SearchConfig,
    cap_kind: &'static str,
    borderline_band: Option<&T>,
) -> Result<Verification<T>> {
    if n > cfg.horizon_cap {
        return Err(Error::HorizonCap {
            requested: n,
            cap: cfg.horizon_cap,
            kind: cap_kind,
        });
    }
    let acc = explore(alpha, x0, vmin, vmax, n, cfg.split_depth, true);
    Ok(acc_to_verification(acc, n, VerifyMode::Exhaustive, borderline_band))
}

/// Checks all `2^N` extreme paths with the default configuration.
pub fn verify_exhaustive(params: &TradingParams, n: usize) -> Result<VerificationResult> {
    verify_exhaustive_with(params, n, &SearchConfig::default())
}

/// Checks all `2^N` extreme paths, pruning any subtree whose prefix already
/// went nonpositive. The witness is the lexicographically first failure.
pub fn verify_exhaustive_with(
    params: &TradingParams,
    n: usize,
    cfg: &SearchConfig,
) -> Result<VerificationResult> {
    let band = BORDERLINE_REL * params.x0();
    verify_exhaustive_generic(
        &params.alpha(),
        &params.x0(),
        &params.bounds().v_min(),
        &params.bounds().v_max(),
        n,
        cfg,
        "exhaustive",
        Some(&band),
    )
}

/// Exact minimum of `X(v, k)` over all vertices and stages `k <= N`.
///
/// Unlike [`verify_exhaustive`], the tree is traversed in full, so the
/// minimum is global even when some prefix goes nonpositive.
pub fn min_state(params: &TradingParams, n: usize) -> Result<MinState<f64>> {
    min_state_with(params, n, &SearchConfig::default())
}

pub fn min_state_with(params: &TradingParams, n: usize, cfg: &SearchConfig) -> Result<MinState<f64>> {
    let minima = stage_minima_with(params, n, cfg)?;
    let mut best = &minima[0];
    for entry in &minima {
        if entry.value < best.value {
            best = entry;
        }
    }
    Ok(MinState {
        value: best.value,
        path: best.path,
        stage: best.stage,
    })
}

/// Per-stage minima over all `2^N` vertices (full traversal).
pub fn stage_minima(params: &TradingParams, n: usize) -> Result<Vec<StageMinimum>> {
    stage_minima_with(params, n, &SearchConfig::default())
}

pub fn stage_minima_with(
    params: &TradingParams,
    n: usize,
    cfg: &SearchConfig,
) -> Result<Vec<StageMinimum>> {
    if n > cfg.horizon_cap {
        return Err(Error::HorizonCap {
            requested: n,
            cap: cfg.horizon_cap,
            kind: "exhaustive",
        });
    }
    let acc = explore(
        &params.alpha(),
        &params.x0(),
        &params.bounds().v_min(),
        &params.bounds().v_max(),
        n,
        cfg.split_depth,
        false,
    );
    Ok(acc
        .minima
        .into_iter()
        .enumerate()
        .map(|(stage, slot)| {
            let (value, mask) = slot.expect("full traversal fills every stage");
            StageMinimum {
                stage,
                value,
                path: ExtremePath::new(mask, n).expect("mask fits the horizon"),
            }
        })
        .collect())
}

/// Scans one vertex mask, recording states until the first nonpositive one.
fn scan_mask(
    alpha: f64,
    x0: f64,
    vmin: f64,
    vmax: f64,
    n: usize,
    mask: u128,
    acc: &mut Acc<f64>,
) {
    acc.record(0, &x0, mask);
    acc.decided += 1;
    if n == 0 {
        return;
    }
    acc.record(1, &x0, mask);
    let mut x_prev = x0;
    let mut x_cur = x0;
    let mut v_prev = if mask & 1 == 1 { vmax } else { vmin };
    for stage in 2..=n {
        let v = if (mask >> (stage - 1)) & 1 == 1 { vmax } else { vmin };
        let u = control(&alpha, &v_prev, &x_prev);
        let x_next = advance(&x_cur, &u, &v);
        acc.record(stage, &x_next, mask);
        if x_next <= 0.0 {
            if acc.witness.is_none() {
                acc.witness = Some(RawWitness {
                    mask,
                    stage,
                    value: x_next,
                });
            }
            return;
        }
        x_prev = x_cur;
        x_cur = x_next;
        v_prev = v;
    }
}

/// Randomized verification for horizons beyond exhaustive reach.
///
/// Draws `count` vertices uniformly and always force-includes the
/// distinguished path, all-`v_min`, and all-`v_max`. Masks are drawn in
/// fixed-size blocks, block `j` from `ChaCha8` stream `j + 1` of the master
/// seed, so results do not depend on thread count. The witness is the first
/// failure in scan order (forced paths first, then draws in block order).
pub fn verify_sampled(
    params: &TradingParams,
    n: usize,
    count: u64,
    seed: u64,
) -> Result<VerificationResult> {
    if n > SAMPLED_HORIZON_CAP {
        return Err(Error::HorizonCap {
            requested: n,
            cap: SAMPLED_HORIZON_CAP,
            kind: "sampled",
        });
    }
    if count == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    let alpha = params.alpha();
    let x0 = params.x0();
    let vmin = params.bounds().v_min();
    let vmax = params.bounds().v_max();
    let width = mask_for_width(n);

    let mut acc = Acc::new(n);
    for forced in [
        ExtremePath::distinguished(n).mask(),
        ExtremePath::all_min(n).mask(),
        ExtremePath::all_max(n).mask(),
    ] {
        scan_mask(alpha, x0, vmin, vmax, n, forced, &mut acc);
    }

    let blocks = count.div_ceil(SAMPLE_CHUNK);
    let outcomes: Vec<Acc<f64>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let size = SAMPLE_CHUNK.min(count - block * SAMPLE_CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block + 1);
            let mut block_acc = Acc::new(n);
            for _ in 0..size {
                let mask = rng.gen::<u128>() & width;
                scan_mask(alpha, x0, vmin, vmax, n, mask, &mut block_acc);
            }
            block_acc
        })
        .collect();
    for block_acc in outcomes {
        acc = acc.fold(block_acc);
    }
    let band = BORDERLINE_REL * x0;
    Ok(acc_to_verification(
        acc,
        n,
        VerifyMode::Sampled { count, seed },
        Some(&band),
    ))
}

/// One gain sample of a gap scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub alpha: f64,
    pub all_positive: bool,
    pub borderline: bool,
    pub min_value: f64,
    pub min_path: ExtremePath,
    pub min_stage: usize,
    pub paths_examined: u64,
}

/// Positivity verdicts across the gap `[alpha_minus, alpha_plus]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapScan {
    pub thresholds: ThresholdSet,
    pub horizon: usize,
    pub mode: VerifyMode,
    pub rows: Vec<GapRow>,
}

/// Verifies positivity on an inclusive, equally spaced gain grid spanning
/// the gap. In sampled mode row `i` uses seed `seed + i`.
pub fn gap_scan(
    bounds: &MarketBounds,
    x0: f64,
    n: usize,
    n_alphas: usize,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<GapScan> {
    if n_alphas < 2 {
        return Err(Error::TooFewSamples { min: 2, got: n_alphas });
    }
    let t = compute_thresholds(bounds);
    let step = (t.alpha_plus - t.alpha_minus) / (n_alphas - 1) as f64;
    let mut rows = Vec::with_capacity(n_alphas);
    for i in 0..n_alphas {
        let alpha = if i + 1 == n_alphas {
            t.alpha_plus
        } else {
            t.alpha_minus + step * i as f64
        };
        let params = TradingParams::new(alpha, x0, *bounds)?;
        let result = match mode {
            VerifyMode::Exhaustive => verify_exhaustive_with(&params, n, cfg)?,
            VerifyMode::Sampled { count, seed } => {
                verify_sampled(&params, n, count, seed.wrapping_add(i as u64))?
            }
        };
        rows.push(GapRow {
            alpha,
            all_positive: result.all_positive,
            borderline: result.borderline,
            min_value: result.min_state.value,
            min_path: result.min_state.path,
            min_stage: result.min_state.stage,
            paths_examined: result.paths_examined,
        });
    }
    Ok(GapScan {
        thresholds: t,
        horizon: n,
        mode,
        rows,
    })
}

/// One bisection probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestedGain {
    pub alpha: f64,
    pub positive: bool,
}

/// Bracket `[lower, upper]` around the largest all-positive gain at a fixed
/// horizon, with the full audit trail of probes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaMaxEstimate {
    pub horizon: usize,
    pub lower: f64,
    pub upper: f64,
    pub tolerance: f64,
    pub tested: Vec<TestedGain>,
}

/// Bisection outcome; the bracket endpoints are sanity-checked first, and a
/// violation is reported instead of silently bisected over.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaMaxOutcome {
    Estimate(AlphaMaxEstimate),
    /// Positivity did not hold at the lower end or did hold at the upper
    /// end; the predicate is not the expected step function on this bracket.
    BracketAnomaly {
        horizon: usize,
        lower_end: TestedGain,
        upper_end: TestedGain,
        tested: Vec<TestedGain>,
    },
}

/// Bisects for the positivity boundary in `[alpha_minus, alpha_max2]`.
///
/// The predicate is "every extreme path stays strictly positive and clear of
/// the borderline band"; borderline runs count as failures so probes landing
/// exactly on the boundary cannot flip the bracket on rounding noise.
pub fn alpha_max_bisect(
    bounds: &MarketBounds,
    x0: f64,
    n: usize,
    tolerance: f64,
    cfg: &SearchConfig,
) -> Result<AlphaMaxOutcome> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter {
            reason: format!("tolerance={tolerance} must be finite and > 0"),
        });
    }
    let t = compute_thresholds(bounds);
    let mut tested = Vec::new();
    let probe = |alpha: f64, tested: &mut Vec<TestedGain>| -> Result<bool> {
        let params = TradingParams::new(alpha, x0, *bounds)?;
        let r = verify_exhaustive_with(&params, n, cfg)?;
        let positive = r.all_positive && !r.borderline;
        tested.push(TestedGain { alpha, positive });
        Ok(positive)
    };

    let mut lo = t.alpha_minus;
    let mut hi = t.alpha_max2;
    let lo_positive = probe(lo, &mut tested)?;
    let hi_positive = probe(hi, &mut tested)?;
    if !lo_positive || hi_positive {
        return Ok(AlphaMaxOutcome::BracketAnomaly {
            horizon: n,
            lower_end: TestedGain { alpha: lo, positive: lo_positive },
            upper_end: TestedGain { alpha: hi, positive: hi_positive },
            tested,
        });
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if probe(mid, &mut tested)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(AlphaMaxOutcome::Estimate(AlphaMaxEstimate {
        horizon: n,
        lower: lo,
        upper: hi,
        tolerance,
        tested,
    }))
}

/// Joint outcome of the distinguished-path check and the full verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationOutcome {
    /// Distinguished path positive and every examined path positive.
    BothHold,
    /// Distinguished path failed but the verification still passed; the
    /// implication is vacuously true.
    Vacuous,
    /// Both the distinguished path and the full verification failed.
    BothFail,
    /// Distinguished path positive yet some other path failed: a
    /// counterexample to using the distinguished path as a certificate.
    CounterexampleToObservation,
}

/// Tests the working hypothesis "if the distinguished path stays positive
/// through `N`, every admissible path does".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationReport {
    pub antecedent_holds: bool,
    pub distinguished_first_nonpositive: Option<usize>,
    pub verification: VerificationResult,
    pub outcome: ObservationOutcome,
}

pub fn observation_check(
    params: &TradingParams,
    n: usize,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<ObservationReport> {
    let path = model::distinguished_path(params.bounds(), n);
    let trajectory = model::simulate(params, &path)?;
    let antecedent_holds = trajectory.all_positive();
    let verification = match mode {
        VerifyMode::Exhaustive => verify_exhaustive_with(params, n, cfg)?,
        VerifyMode::Sampled { count, seed } => verify_sampled(params, n, count, seed)?,
    };
    let outcome = match (antecedent_holds, verification.all_positive) {
        (true, true) => ObservationOutcome::BothHold,
        (true, false) => ObservationOutcome::CounterexampleToObservation,
        (false, true) => ObservationOutcome::Vacuous,
        (false, false) => ObservationOutcome::BothFail,
    };
    Ok(ObservationReport {
        antecedent_holds,
        distinguished_first_nonpositive: trajectory.first_nonpositive,
        verification,
        outcome,
    })
}
