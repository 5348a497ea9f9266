//! Closed-form evaluation of the account along the distinguished path.
//!
//! With `v = (v_max, v_min, v_min, ...)` the recursion becomes linear with
//! constant coefficients from stage 2 on, so `X(k)` splits over the
//! eigenvalues `lambda = (1 +- sqrt(theta)) / 2` of the companion matrix,
//! where `theta = 4 alpha v_min (1 + v_min) + 1`. The sign of `theta` decides
//! everything: real spectrum, a double root at `theta = 0`, or a conjugate
//! pair that makes the account oscillate.

use crate::error::{Error, Result};
use crate::model::{distinguished_path, simulate, TradingParams};
use crate::thresholds::compute_thresholds;
use num_complex::Complex64;
use serde::Serialize;

/// Half-width of the `theta` band treated as an exact double root. Inside it
/// the generic formula divides by a vanishing `sqrt(theta)`, so the singular
/// form is used instead.
pub const SINGULAR_THETA_BAND: f64 = 1e-12;

/// Stage cap for the first-sign-failure search.
pub const SIGN_SEARCH_CAP: usize = 1_000_000;

/// Relative bound on the imaginary residue tolerated when the oscillatory
/// branch is evaluated in complex arithmetic.
pub const IMAGINARY_RESIDUE_REL: f64 = 1e-9;

/// Which closed-form branch applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralForm {
    /// `theta > 0`: two distinct real eigenvalues.
    GenericReal,
    /// `|theta| < SINGULAR_THETA_BAND`: double eigenvalue 1/2.
    Singular,
    /// `theta < 0`: complex conjugate pair.
    Oscillatory,
}

/// Polar form of the complex eigenvalues in the oscillatory branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Polar {
    /// Modulus `sqrt(1 - theta) / 2`.
    pub r: f64,
    /// Angle `arctan(sqrt(-theta))`, in `(0, pi/2)`.
    pub omega: f64,
}

/// Eigenstructure of the constant-coefficient tail of the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralData {
    pub theta: f64,
    /// Residue weight `q = 2 alpha (v_max + 1) v_min + 1`.
    pub q: f64,
    pub form: SpectralForm,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub g_plus: Complex64,
    pub g_minus: Complex64,
    pub polar: Option<Polar>,
}

/// Computes the spectral data for the distinguished-path tail.
pub fn spectral_data(params: &TradingParams) -> SpectralData {
    let alpha = params.alpha();
    let v_min = params.bounds().v_min();
    let v_max = params.bounds().v_max();
    let theta = 4.0 * alpha * v_min * (1.0 + v_min) + 1.0;
    let q = 2.0 * alpha * (v_max + 1.0) * v_min + 1.0;
    if theta.abs() < SINGULAR_THETA_BAND {
        SpectralData {
            theta,
            q,
            form: SpectralForm::Singular,
            lambda_plus: Complex64::new(0.5, 0.0),
            lambda_minus: Complex64::new(0.5, 0.0),
            g_plus: Complex64::new(q, 0.0),
            g_minus: Complex64::new(-q, 0.0),
            polar: None,
        }
    } else if theta > 0.0 {
        let s = theta.sqrt();
        SpectralData {
            theta,
            q,
            form: SpectralForm::GenericReal,
            lambda_plus: Complex64::new((1.0 + s) / 2.0, 0.0),
            lambda_minus: Complex64::new((1.0 - s) / 2.0, 0.0),
            g_plus: Complex64::new(s + q, 0.0),
            g_minus: Complex64::new(s - q, 0.0),
            polar: None,
        }
    } else {
        let s = (-theta).sqrt();
        SpectralData {
            theta,
            q,
            form: SpectralForm::Oscillatory,
            lambda_plus: Complex64::new(0.5, s / 2.0),
            lambda_minus: Complex64::new(0.5, -s / 2.0),
            g_plus: Complex64::new(q, s),
            g_minus: Complex64::new(-q, s),
            polar: Some(Polar {
                r: (1.0 - theta).sqrt() / 2.0,
                omega: s.atan(),
            }),
        }
    }
}

/// Closed-form evaluator for `X(v*, k)`, built once per parameter set.
#[derive(Debug, Clone)]
pub struct ClosedFormEvaluator {
    x0: f64,
    spectral: SpectralData,
    // Singular-branch coefficients: X(k) = 2^-k * x0 * (a k + b) / c.
    singular_a: f64,
    singular_b: f64,
    singular_c: f64,
}

impl ClosedFormEvaluator {
    pub fn new(params: &TradingParams) -> Self {
        let v_min = params.bounds().v_min();
        let v_max = params.bounds().v_max();
        Self {
            x0: params.x0(),
            spectral: spectral_data(params),
            singular_a: 1.0 - v_max + 2.0 * v_min,
            singular_b: 1.0 + v_max,
            singular_c: 1.0 + v_min,
        }
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    /// `X(v*, k)`; stages 0 and 1 are the initial condition.
    pub fn state_at(&self, k: usize) -> f64 {
        if k <= 1 {
            return self.x0;
        }
        let exp = (k - 1) as i32;
        match self.spectral.form {
            SpectralForm::Singular => {
                0.5f64.powi(k as i32) * self.x0 * (self.singular_a * k as f64 + self.singular_b)
                    / self.singular_c
            }
            SpectralForm::GenericReal => {
                let s = self.spectral.theta.sqrt();
                let lp = self.spectral.lambda_plus.re;
                let lm = self.spectral.lambda_minus.re;
                let gp = self.spectral.g_plus.re;
                let gm = self.spectral.g_minus.re;
                self.x0 / (2.0 * s) * (lp.powi(exp) * gp + lm.powi(exp) * gm)
            }
            SpectralForm::Oscillatory => {
                // Evaluate the generic formula in complex arithmetic; the two
                // terms are conjugate, so the residue must be numerically zero.
                let sqrt_theta = Complex64::new(0.0, (-self.spectral.theta).sqrt());
                let z = self.spectral.lambda_plus.powi(exp) * self.spectral.g_plus
                    + self.spectral.lambda_minus.powi(exp) * self.spectral.g_minus;
                let x = Complex64::new(self.x0, 0.0) / (2.0 * sqrt_theta) * z;
                assert!(
                    x.im.abs() <= IMAGINARY_RESIDUE_REL * x.re.abs().max(f64::MIN_POSITIVE),
                    "imaginary residue {} on real state {}",
                    x.im,
                    x.re
                );
                x.re
            }
        }
    }
}

/// Evaluates `X(v*, k)` directly from the eigenstructure.
pub fn closed_form_state(params: &TradingParams, k: usize) -> f64 {
    ClosedFormEvaluator::new(params).state_at(k)
}

/// Long-run behaviour class of the distinguished-path account.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistinguishedPathClass {
    /// Gain above the singular gain: the account oscillates about zero.
    Oscillatory,
    /// Gain in `(alpha_star, alpha_s]` with wide bounds: positive at first,
    /// negative for all large stages.
    EventuallyNegative,
    /// Gain in `(alpha_star, alpha_s]` with narrow bounds
    /// (`v_max < 1 + 2 v_min`): positive at every stage.
    PositiveNarrowBounds,
    /// Gain at or below `alpha_star`: positive at every stage.
    PositiveSmallGain,
    /// Exactly on the regime boundary `v_max = 1 + 2 v_min` with the gain
    /// between the (coinciding) thresholds; kept distinct for transparency.
    RegimeBoundary,
}

/// Result of searching for the first negative closed-form state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignFailureSearch {
    /// The class predicts positivity; nothing to search for.
    NotExpected,
    /// First stage `k >= 2` with `X(v*, k) < 0`.
    FoundAt { stage: usize },
    /// No negative state up to the cap.
    NotFoundWithinCap { cap: usize },
}

/// Sign prediction for the distinguished path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationReport {
    pub class: DistinguishedPathClass,
    pub sign_failure: SignFailureSearch,
    /// Present only in the oscillatory class: one full cosine period in
    /// stages, an upper bound on the distance to the next sign change.
    pub period: Option<f64>,
}

/// Classifies the distinguished path and, where a sign failure is predicted,
/// searches for the first stage where the closed form goes negative.
pub fn oscillation_report(params: &TradingParams) -> OscillationReport {
    let t = compute_thresholds(params.bounds());
    let evaluator = ClosedFormEvaluator::new(params);
    let spectral = evaluator.spectral();
    let alpha = params.alpha();

    let class = if spectral.form == SpectralForm::Oscillatory {
        DistinguishedPathClass::Oscillatory
    } else if alpha <= t.alpha_star {
        DistinguishedPathClass::PositiveSmallGain
    } else if t.discriminant > 0.0 {
        DistinguishedPathClass::EventuallyNegative
    } else if t.discriminant < 0.0 {
        DistinguishedPathClass::PositiveNarrowBounds
    } else {
        DistinguishedPathClass::RegimeBoundary
    };

    let sign_failure = match class {
        DistinguishedPathClass::Oscillatory | DistinguishedPathClass::EventuallyNegative => {
            let mut found = None;
            for k in 2..=SIGN_SEARCH_CAP {
                if evaluator.state_at(k) < 0.0 {
                    found = Some(k);
                    break;
                }
            }
            match found {
                Some(stage) => SignFailureSearch::FoundAt { stage },
                None => SignFailureSearch::NotFoundWithinCap { cap: SIGN_SEARCH_CAP },
            }
        }
        _ => SignFailureSearch::NotExpected,
    };

    let period = spectral
        .polar
        .map(|p| std::f64::consts::TAU / p.omega)
        .filter(|_| class == DistinguishedPathClass::Oscillatory);

    OscillationReport { class, sign_failure, period }
}

/// Decay summary for a contracting spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecaySummary {
    /// Dominant eigenvalue modulus; the geometric decay rate.
    pub rate: f64,
    /// Both eigenvalue moduli are strictly below one.
    pub contracting: bool,
    /// Stage from which `|X(v*, k)|` is nonincreasing through `k_max`.
    pub monotone_from: usize,
    pub k_max: usize,
    pub value_at_k_max: f64,
}

/// Confirms that for `0 < alpha < alpha_s` the distinguished-path account
/// contracts to zero: `|lambda| < 1` and `|X(v*, k)|` is eventually monotone
/// decreasing over the scanned range.
pub fn asymptote_check(params: &TradingParams, k_max: usize) -> Result<DecaySummary> {
    let t = compute_thresholds(params.bounds());
    let alpha = params.alpha();
    if alpha <= 0.0 || alpha >= t.alpha_s {
        return Err(Error::GainOutOfRange {
            alpha,
            range: format!("(0, {})", t.alpha_s),
        });
    }
    if k_max < 2 {
        return Err(Error::InvalidParameter {
            reason: format!("k_max={k_max} must be at least 2"),
        });
    }
    let evaluator = ClosedFormEvaluator::new(params);
    let spectral = evaluator.spectral();
    let rate = spectral.lambda_plus.norm();
    let contracting = rate < 1.0 && spectral.lambda_minus.norm() < 1.0;

    let magnitudes: Vec<f64> = (0..=k_max).map(|k| evaluator.state_at(k).abs()).collect();
    let mut monotone_from = 0;
    for k in 1..=k_max {
        if magnitudes[k] > magnitudes[k - 1] {
            monotone_from = k;
        }
    }
    Ok(DecaySummary {
        rate,
        contracting,
        monotone_from,
        k_max,
        value_at_k_max: evaluator.state_at(k_max),
    })
}

/// Recursion cross-check used by tests: simulate the distinguished path.
pub fn distinguished_trajectory(params: &TradingParams, horizon: usize) -> crate::model::Trajectory {
    let path = distinguished_path(params.bounds(), horizon);
    simulate(params, &path).expect("distinguished path is always admissible")
}
