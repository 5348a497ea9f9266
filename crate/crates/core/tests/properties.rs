//! Property suites: invariants of the recursion, the thresholds, the closed
//! form, and the search machinery, checked over randomized inputs.

use num_complex::Complex64;
use positivity_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bounds_strategy() -> impl Strategy<Value = MarketBounds> {
    (-0.95f64..=-0.05, 0.05f64..=3.0)
        .prop_map(|(v_min, v_max)| MarketBounds::new(v_min, v_max).unwrap())
}

fn random_bounds(rng: &mut ChaCha8Rng) -> MarketBounds {
    let v_min = rng.gen_range(-0.95..-0.05);
    let v_max = rng.gen_range(0.05..3.0);
    MarketBounds::new(v_min, v_max).unwrap()
}

proptest! {
    /// `simulate` is a literal transcription of the recursion: recomputing
    /// the states and controls step by step reproduces it bit for bit.
    #[test]
    fn simulate_matches_direct_recursion(
        bounds in bounds_strategy(),
        alpha in 0.0f64..=2.0,
        x0 in 0.1f64..=10.0,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=40);
        let vs: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(bounds.v_min()..=bounds.v_max()))
            .collect();
        let params = TradingParams::new(alpha, x0, bounds).unwrap();
        let t = simulate(&params, &Path::new(vs.clone())).unwrap();

        let mut states = vec![x0];
        if n > 0 {
            states.push(x0);
            for k in 1..n {
                let u = alpha * (1.0 + vs[k - 1]) * states[k - 1];
                states.push(states[k] + u * vs[k]);
            }
        }
        prop_assert_eq!(t.states.len(), states.len());
        for (a, b) in t.states.iter().zip(&states) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        for (k, &u) in t.controls.iter().enumerate() {
            let expect = if k == 0 { 0.0 } else { alpha * (1.0 + vs[k - 1]) * states[k - 1] };
            prop_assert_eq!(u.to_bits(), expect.to_bits());
        }
    }

    /// Doubling the initial account doubles every state exactly: the
    /// recursion is linear in `x0` and powers of two are exact in floats.
    #[test]
    fn power_of_two_scale_equivariance(
        bounds in bounds_strategy(),
        alpha in 0.0f64..=2.0,
        j in -3i32..=3,
        path in prop::collection::vec(0u8..=1, 0..=30),
    ) {
        let scale = (2.0f64).powi(j);
        let vs: Vec<f64> = path
            .iter()
            .map(|&b| if b == 1 { bounds.v_max() } else { bounds.v_min() })
            .collect();
        let base = TradingParams::new(alpha, 1.0, bounds).unwrap();
        let scaled = TradingParams::new(alpha, scale, bounds).unwrap();
        let t0 = simulate(&base, &Path::new(vs.clone())).unwrap();
        let t1 = simulate(&scaled, &Path::new(vs)).unwrap();
        for (a, b) in t0.states.iter().zip(&t1.states) {
            prop_assert_eq!((a * scale).to_bits(), b.to_bits());
        }
        prop_assert_eq!(t0.first_nonpositive, t1.first_nonpositive);
    }

    /// While the account is positive the stake is long: `u(k) >= 0` and the
    /// leverage is nonnegative wherever defined.
    #[test]
    fn controls_are_long_while_solvent(
        bounds in bounds_strategy(),
        alpha in 0.0f64..=3.0,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=30);
        let vs: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(bounds.v_min()..=bounds.v_max()))
            .collect();
        let params = TradingParams::new(alpha, 1.0, bounds).unwrap();
        let t = simulate(&params, &Path::new(vs)).unwrap();
        for k in 0..t.controls.len() {
            let prefix_positive = t.states[..=k].iter().all(|&x| x > 0.0);
            if prefix_positive {
                prop_assert!(t.controls[k] >= 0.0, "u({k}) = {}", t.controls[k]);
                if let Some(l) = t.leverage[k] {
                    prop_assert!(l >= 0.0);
                }
            }
        }
    }

    /// The two eigenvalues solve the constant-tail characteristic equation
    /// `lambda^2 - lambda - alpha v_min (1 + v_min) = 0`.
    #[test]
    fn eigenvalues_solve_characteristic_equation(
        bounds in bounds_strategy(),
        frac in 0.05f64..=2.5,
    ) {
        let t = compute_thresholds(&bounds);
        let alpha = frac * t.alpha_s;
        let params = TradingParams::new(alpha, 1.0, bounds).unwrap();
        let s = spectral_data(&params);
        let c = Complex64::new(alpha * bounds.v_min() * (1.0 + bounds.v_min()), 0.0);
        for lambda in [s.lambda_plus, s.lambda_minus] {
            let residual = lambda * lambda - lambda - c;
            prop_assert!(residual.norm() < 1e-12, "residual {residual} at alpha {alpha}");
        }
        // theta is the discriminant of that quadratic, up to the factor 4.
        let disc = 1.0 + 4.0 * alpha * bounds.v_min() * (1.0 + bounds.v_min());
        prop_assert!((s.theta - disc).abs() < 1e-12);
    }
}

/// Threshold orderings hold on a broad sweep of bounds: the sufficiency
/// threshold sits strictly below the necessity threshold, which sits
/// strictly below the finite-horizon caps, and the star gain never exceeds
/// the singular gain.
#[test]
fn threshold_ordering_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7151);
    for trial in 0..10_000 {
        let bounds = random_bounds(&mut rng);
        let t = compute_thresholds(&bounds);
        let ctx = format!(
            "trial {trial}: bounds ({}, {})",
            bounds.v_min(),
            bounds.v_max()
        );
        assert!(t.alpha_minus > 0.0, "{ctx}");
        assert!(t.alpha_minus < t.alpha_plus, "{ctx}");
        assert!(t.alpha_plus < t.alpha_max3, "{ctx}");
        assert!(t.alpha_max3 < t.alpha_max2, "{ctx}");
        assert!(t.alpha_star <= t.alpha_s * (1.0 + 1e-12), "{ctx}");
        match t.regime {
            Regime::Star => {
                assert!(t.discriminant > 0.0, "{ctx}");
                assert_eq!(t.alpha_plus, t.alpha_star, "{ctx}");
            }
            Regime::Singular => {
                assert!(t.discriminant <= 0.0, "{ctx}");
                assert_eq!(t.alpha_plus, t.alpha_s, "{ctx}");
            }
        }
        // Classification is consistent with the thresholds.
        let at = |alpha: f64| classify(&TradingParams::new(alpha, 1.0, bounds).unwrap());
        assert_eq!(at(0.5 * t.alpha_minus), GainClass::BelowSufficient, "{ctx}");
        assert_eq!(
            at(0.5 * (t.alpha_minus + t.alpha_plus)),
            GainClass::InGap,
            "{ctx}"
        );
        assert_eq!(
            at(t.alpha_plus * (1.0 + 1e-9)),
            GainClass::AboveNecessary,
            "{ctx}"
        );
    }
}

/// On the regime boundary `v_max = 1 + 2 v_min` the star gain equals the
/// singular gain, and the necessity threshold moves continuously across it.
#[test]
fn regime_boundary_is_continuous() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7152);
    for _ in 0..2_000 {
        let v_min = rng.gen_range(-0.49..-0.05);
        let v_max = 1.0 + 2.0 * v_min;
        let t = compute_thresholds(&MarketBounds::new(v_min, v_max).unwrap());
        assert!(
            (t.alpha_star - t.alpha_s).abs() <= 1e-12 * t.alpha_s,
            "star {} vs singular {} at v_min {v_min}",
            t.alpha_star,
            t.alpha_s
        );
        // Crossing the boundary moves alpha_plus by O(epsilon), not by a jump.
        let eps = 1e-9;
        let above = compute_thresholds(&MarketBounds::new(v_min, v_max + eps).unwrap());
        let below = compute_thresholds(&MarketBounds::new(v_min, v_max - eps).unwrap());
        assert!(
            (above.alpha_plus - below.alpha_plus).abs() < 1e-6,
            "jump at v_min {v_min}: {} vs {}",
            above.alpha_plus,
            below.alpha_plus
        );
    }
}

/// The tree walk agrees bit for bit with a flat enumeration of all `2^N`
/// vertices, including the identity of the per-stage minimizers and of the
/// lexicographically first witness.
#[test]
fn tree_walk_matches_flat_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7153);
    for trial in 0..40 {
        let bounds = random_bounds(&mut rng);
        let t = compute_thresholds(&bounds);
        // Spread gains from clearly safe to clearly failing.
        let alpha = t.alpha_minus * rng.gen_range(0.2..3.0);
        let n = rng.gen_range(2..=10);
        let params = TradingParams::new(alpha, 1.0, bounds).unwrap();
        let ctx = format!(
            "trial {trial}: alpha {alpha} bounds ({}, {}) n {n}",
            bounds.v_min(),
            bounds.v_max()
        );

        // Flat oracle in the walk's lexicographic order: bit-reversed
        // ascending masks, each path scanned stage by stage.
        let mut minima: Vec<Option<(f64, u128)>> = vec![None; n + 1];
        let mut first_witness: Option<(u128, usize, f64)> = None;
        for i in 0u32..(1u32 << n) {
            let mask = (i.reverse_bits() >> (32 - n)) as u128;
            let path = decode_extreme(&ExtremePath::new(mask, n).unwrap(), &bounds);
            let tr = simulate(&params, &path).unwrap();
            for (stage, &x) in tr.states.iter().enumerate() {
                let better = match &minima[stage] {
                    None => true,
                    Some((cur, _)) => x < *cur,
                };
                if better {
                    minima[stage] = Some((x, mask));
                }
                if x <= 0.0 {
                    if first_witness.is_none() {
                        first_witness = Some((mask, stage, x));
                    }
                    break;
                }
            }
        }

        let v = verify_exhaustive(&params, n).unwrap();
        assert_eq!(v.all_positive, first_witness.is_none(), "{ctx}");
        match (&v.witness, &first_witness) {
            (Some(w), Some((mask, stage, x))) => {
                assert_eq!(w.path.mask(), *mask, "{ctx}");
                assert_eq!(w.stage, *stage, "{ctx}");
                assert_eq!(w.value.to_bits(), x.to_bits(), "{ctx}");
            }
            (None, None) => {
                // Without a witness the full traversal and the verification
                // examined the same set; minima must agree bitwise.
                let sm = stage_minima(&params, n).unwrap();
                for stage in 0..=n {
                    let (x, mask) = minima[stage].unwrap();
                    assert_eq!(sm[stage].value.to_bits(), x.to_bits(), "{ctx} stage {stage}");
                    if stage >= 2 {
                        assert_eq!(sm[stage].path.mask(), mask, "{ctx} stage {stage}");
                    }
                }
                let m = min_state(&params, n).unwrap();
                assert_eq!(m.value.to_bits(), v.min_state.value.to_bits(), "{ctx}");
            }
            other => panic!("{ctx}: witness mismatch {other:?}"),
        }
    }
}

/// Sampled verification gives identical results from identical seeds, no
/// matter how many worker threads rayon has.
#[test]
fn sampling_is_thread_count_independent() {
    let bounds = MarketBounds::new(-0.6, 0.8).unwrap();
    let params = TradingParams::new(0.9, 1.0, bounds).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let v = verify_sampled(&params, 60, 9000, 1234).unwrap();
            let g = gap_scan(
                &bounds,
                1.0,
                40,
                5,
                VerifyMode::Sampled { count: 2000, seed: 99 },
                &SearchConfig::default(),
            )
            .unwrap();
            (v, g)
        })
    };
    let single = run(1);
    for threads in [2, 4] {
        assert_eq!(run(threads), single, "threads {threads}");
    }
}

/// The exhaustive walk is thread-count independent too, witness identity
/// included.
#[test]
fn exhaustive_walk_is_thread_count_independent() {
    let bounds = MarketBounds::new(-0.8, 0.9).unwrap();
    let params = TradingParams::new(0.66, 1.0, bounds).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| verify_exhaustive(&params, 16).unwrap())
    };
    let single = run(1);
    for threads in [2, 4] {
        assert_eq!(run(threads), single, "threads {threads}");
    }
}

/// Above the necessity threshold the distinguished path's closed form
/// predicts a sign failure at a finite stage; exhaustive verification at
/// that horizon must refute positivity.
#[test]
fn gains_above_necessity_fail_at_the_predicted_horizon() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7154);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < 25 && attempts < 4_000 {
        attempts += 1;
        let bounds = random_bounds(&mut rng);
        let t = compute_thresholds(&bounds);
        let alpha = t.alpha_plus * rng.gen_range(1.02..1.6);
        let params = TradingParams::new(alpha, 1.0, bounds).unwrap();
        let report = oscillation_report(&params);
        let stage = match report.sign_failure {
            SignFailureSearch::FoundAt { stage } if stage <= 18 => stage,
            _ => continue,
        };
        accepted += 1;
        let v = verify_exhaustive(&params, stage).unwrap();
        assert!(
            !v.all_positive,
            "alpha {alpha} bounds ({}, {}) predicted failure at {stage}",
            bounds.v_min(),
            bounds.v_max()
        );
        assert!(v.witness.unwrap().stage <= stage);
    }
    assert_eq!(accepted, 25, "only {accepted} acceptable draws in {attempts}");
}

/// Below the necessity threshold the distinguished path stays positive at
/// every horizon: strictly so while the closed form is representable, and
/// nonnegative once it underflows toward zero.
#[test]
fn below_necessity_the_distinguished_path_never_fails() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7155);
    let mut small_gain = 0;
    let mut narrow_bounds = 0;
    while small_gain + narrow_bounds < 60 {
        let (params, expect_narrow) = if rng.gen_bool(0.5) {
            // Small gain: alpha strictly below alpha_star.
            let bounds = random_bounds(&mut rng);
            let t = compute_thresholds(&bounds);
            (
                TradingParams::new(t.alpha_star * rng.gen_range(0.05..0.98), 1.0, bounds).unwrap(),
                false,
            )
        } else {
            // Narrow bounds: singular regime with alpha in (alpha_star, alpha_s).
            let v_min = rng.gen_range(-0.45..-0.05);
            let hi = 1.0 + 2.0 * v_min;
            let v_max = rng.gen_range(0.02 * hi..0.95 * hi);
            let bounds = MarketBounds::new(v_min, v_max).unwrap();
            let t = compute_thresholds(&bounds);
            let alpha = t.alpha_star + (t.alpha_s - t.alpha_star) * rng.gen_range(0.05..0.95);
            (TradingParams::new(alpha, 1.0, bounds).unwrap(), true)
        };
        let report = oscillation_report(&params);
        if expect_narrow {
            assert_eq!(report.class, DistinguishedPathClass::PositiveNarrowBounds);
            narrow_bounds += 1;
        } else {
            assert_eq!(report.class, DistinguishedPathClass::PositiveSmallGain);
            small_gain += 1;
        }
        assert_eq!(report.sign_failure, SignFailureSearch::NotExpected);
        let e = ClosedFormEvaluator::new(&params);
        for k in 2..=3_000 {
            let x = e.state_at(k);
            if x.abs() < 1e-250 {
                // Beyond float resolution; only the sign is meaningful.
                assert!(x >= 0.0, "k {k}");
                break;
            }
            assert!(x > 0.0, "k {k}, x {x}, alpha {}", params.alpha());
        }
    }
}

/// Multilinearity: the state is linear in each return separately, so
/// interior paths can never undercut the extreme-path minimum.
#[test]
fn interior_paths_respect_extreme_minima() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7156);
    let n = 8;
    for _ in 0..20 {
        let bounds = random_bounds(&mut rng);
        let t = compute_thresholds(&bounds);
        let alpha = t.alpha_max2 * rng.gen_range(0.1..1.1);
        let params = TradingParams::new(alpha, 1.0, bounds).unwrap();
        let minima = stage_minima(&params, n).unwrap();
        for _ in 0..50 {
            let vs: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(bounds.v_min()..=bounds.v_max()))
                .collect();
            let tr = simulate(&params, &Path::new(vs)).unwrap();
            for (stage, &x) in tr.states.iter().enumerate() {
                assert!(
                    x >= minima[stage].value - 1e-9,
                    "stage {stage}: interior {x} under extreme min {}",
                    minima[stage].value
                );
            }
        }
    }
}

/// Float and exact verification agree on every instance whose float verdict
/// is not borderline.
#[test]
fn float_and_exact_verdicts_agree_off_the_borderline() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7157);
    for trial in 0..30 {
        let b = rng.gen_range(5u32..60);
        let a = rng.gen_range(1..b);
        let q = rng.gen_range(2u32..40);
        let p = rng.gen_range(1..3 * q);
        let d = rng.gen_range(1u32..20);
        let c = rng.gen_range(1..=4 * d);
        let params = RationalParams::from_strs(
            &format!("{p}/{q}"),
            "1",
            &format!("-{a}/{b}"),
            &format!("{c}/{d}"),
        )
        .unwrap();
        let n = rng.gen_range(2..=10);
        let exact = verify_exhaustive_exact(&params, n).unwrap();
        let float = verify_exhaustive(&params.approx().unwrap(), n).unwrap();
        if float.borderline {
            continue;
        }
        assert_eq!(
            exact.all_positive, float.all_positive,
            "trial {trial}: alpha {p}/{q} bounds (-{a}/{b}, {c}/{d}) n {n}"
        );
    }
}

/// One-asset portfolios reproduce the scalar model bit for bit on random
/// vertex paths, and the portfolio oscillation test reduces to the scalar
/// singular-gain comparison.
#[test]
fn single_asset_portfolio_is_the_scalar_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7158);
    for _ in 0..10 {
        let bounds = random_bounds(&mut rng);
        let t = compute_thresholds(&bounds);
        let alpha = t.alpha_s * rng.gen_range(0.2..1.8);
        if (alpha / t.alpha_s - 1.0).abs() < 1e-3 {
            continue;
        }
        let params = TradingParams::new(alpha, 1.0, bounds).unwrap();
        let mp = MultiAssetParams::from_scalar(&params);
        let n = 20;
        for _ in 0..50 {
            let mask = rng.gen::<u128>() & ((1 << n) - 1);
            let path = decode_extreme(&ExtremePath::new(mask, n).unwrap(), &bounds);
            let scalar_t = simulate(&params, &path).unwrap();
            let rows: Vec<Vec<f64>> = path.returns().iter().map(|&v| vec![v]).collect();
            let multi_t = simulate_multi(&mp, &rows).unwrap();
            for (a, b) in scalar_t.states.iter().zip(&multi_t.states) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            assert_eq!(scalar_t.first_nonpositive, multi_t.first_nonpositive);
        }
        let c = oscillation_condition(&mp);
        assert_eq!(c.holds, alpha > t.alpha_s, "alpha {alpha} vs {}", t.alpha_s);
        assert!((c.theta - spectral_data(&params).theta).abs() < 1e-12);
    }
}
