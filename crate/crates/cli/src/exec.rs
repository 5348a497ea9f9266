//! Command execution and rendering to JSON result objects or CSV bodies.

use num_rational::BigRational;
use num_traits::Zero;
use positivity_core::{
    alpha_max_bisect, compute_thresholds, decode_extreme, decode_extreme_exact,
    distinguished_exact, distinguished_path, gap_scan, oscillation_condition, oscillation_report,
    parse_rational, rational_to_f64, rational_to_string, simulate, simulate_exact, simulate_multi,
    threshold_surface, verify_exhaustive_exact_with, verify_exhaustive_with, verify_sampled,
    AlphaMaxOutcome, AssetSpec, ClosedFormEvaluator, Error, ExactTrajectory, ExtremePath,
    MarketBounds, MultiAssetParams, Path, RationalParams, Result, SearchConfig, TradingParams,
    Trajectory, Verification, VerifyMode,
};
use serde_json::{json, Value};

use crate::cmds::{grid_points, FormatArg, ModeSpec, Num, PathSource, Resolved};

/// Rendered result payload, before the metadata envelope is attached.
#[derive(Debug)]
pub enum Body {
    Json(Value),
    Csv(String),
}

/// A completed run: the payload plus the process exit code (0, or 3 when a
/// fail-on flag observed the condition it watches for).
#[derive(Debug)]
pub struct Outcome {
    pub body: Body,
    pub exit: i32,
}

/// Largest horizon accepted by the figure-2 fan (2^N trajectories).
pub const FIGURE2_HORIZON_CAP: usize = 16;

impl From<ModeSpec> for VerifyMode {
    fn from(mode: ModeSpec) -> Self {
        match mode {
            ModeSpec::Exhaustive => VerifyMode::Exhaustive,
            ModeSpec::Sampled { count, seed } => VerifyMode::Sampled { count, seed },
        }
    }
}

/// Runs a resolved command and renders its payload.
pub fn execute(resolved: &Resolved, render: FormatArg) -> Result<Outcome> {
    match resolved {
        Resolved::Thresholds { v_min, v_max } => {
            let t = compute_thresholds(&MarketBounds::new(*v_min, *v_max)?);
            let value = to_value(&t);
            let body = match render {
                FormatArg::Json => Body::Json(value),
                FormatArg::Csv => Body::Csv(one_row_csv(
                    &[
                        "v_min",
                        "v_max",
                        "discriminant",
                        "regime",
                        "alpha_minus",
                        "alpha_s",
                        "alpha_star",
                        "alpha_plus",
                        "alpha_max2",
                        "alpha_max3",
                    ],
                    &value,
                )),
            };
            Ok(Outcome { body, exit: 0 })
        }
        Resolved::Simulate {
            exact,
            alpha,
            x0,
            v_min,
            v_max,
            source,
            fail_on_bankruptcy,
        } => {
            if *exact {
                let params = rational_params(alpha, x0, v_min, v_max)?;
                let returns = exact_returns(source, &params)?;
                let traj = simulate_exact(&params, &returns)?;
                let exit = i32::from(*fail_on_bankruptcy && traj.first_nonpositive.is_some()) * 3;
                let body = match render {
                    FormatArg::Json => Body::Json(exact_trajectory_json(&traj)),
                    FormatArg::Csv => Body::Csv(exact_trajectory_csv(&traj)),
                };
                Ok(Outcome { body, exit })
            } else {
                let params = trading_params(alpha, x0, v_min, v_max)?;
                let path = float_path(source, params.bounds())?;
                let traj = simulate(&params, &path)?;
                let exit = i32::from(*fail_on_bankruptcy && traj.first_nonpositive.is_some()) * 3;
                let body = match render {
                    FormatArg::Json => Body::Json(json!({
                        "trajectory": to_value(&traj),
                        "verdict": to_value(&traj.verdict()),
                    })),
                    FormatArg::Csv => Body::Csv(trajectory_csv(&traj)),
                };
                Ok(Outcome { body, exit })
            }
        }
        Resolved::Verify {
            exact,
            alpha,
            x0,
            v_min,
            v_max,
            horizon,
            mode,
            cap,
            split_depth,
            fail_on_violation,
        } => {
            let cfg = SearchConfig {
                horizon_cap: *cap,
                split_depth: *split_depth,
            };
            if *exact {
                let params = rational_params(alpha, x0, v_min, v_max)?;
                let ver = verify_exhaustive_exact_with(&params, *horizon, &cfg)?;
                let exit = i32::from(*fail_on_violation && !ver.all_positive) * 3;
                let value = exact_verification_json(&ver);
                let body = match render {
                    FormatArg::Json => Body::Json(value),
                    FormatArg::Csv => Body::Csv(verification_csv(&value)),
                };
                Ok(Outcome { body, exit })
            } else {
                let params = trading_params(alpha, x0, v_min, v_max)?;
                let ver = match mode {
                    ModeSpec::Exhaustive => verify_exhaustive_with(&params, *horizon, &cfg)?,
                    ModeSpec::Sampled { count, seed } => {
                        verify_sampled(&params, *horizon, *count, *seed)?
                    }
                };
                let exit = i32::from(*fail_on_violation && !ver.all_positive) * 3;
                let value = to_value(&ver);
                let body = match render {
                    FormatArg::Json => Body::Json(value),
                    FormatArg::Csv => Body::Csv(verification_csv(&value)),
                };
                Ok(Outcome { body, exit })
            }
        }
        Resolved::GapScan {
            v_min,
            v_max,
            x0,
            horizon,
            alphas,
            mode,
            cap,
            split_depth,
        } => {
            let bounds = MarketBounds::new(*v_min, *v_max)?;
            let cfg = SearchConfig {
                horizon_cap: *cap,
                split_depth: *split_depth,
            };
            let scan = gap_scan(&bounds, *x0, *horizon, *alphas, (*mode).into(), &cfg)?;
            let value = to_value(&scan);
            let body = match render {
                FormatArg::Json => Body::Json(value),
                FormatArg::Csv => {
                    let mut out = csv_line(&[
                        "alpha",
                        "all_positive",
                        "borderline",
                        "min_value",
                        "min_stage",
                        "min_mask",
                        "paths_examined",
                    ]);
                    for row in value["rows"].as_array().expect("rows array") {
                        out.push_str(&csv_line(&[
                            &value_cell(&row["alpha"]),
                            &value_cell(&row["all_positive"]),
                            &value_cell(&row["borderline"]),
                            &value_cell(&row["min_value"]),
                            &value_cell(&row["min_stage"]),
                            &value_cell(&row["min_path"]["mask"]),
                            &value_cell(&row["paths_examined"]),
                        ]));
                    }
                    Body::Csv(out)
                }
            };
            Ok(Outcome { body, exit: 0 })
        }
        Resolved::Figure2 {
            alpha,
            v_min,
            v_max,
            x0,
            horizon,
        } => {
            if *horizon > FIGURE2_HORIZON_CAP {
                return Err(Error::HorizonCap {
                    requested: *horizon,
                    cap: FIGURE2_HORIZON_CAP,
                    kind: "figure2",
                });
            }
            let bounds = MarketBounds::new(*v_min, *v_max)?;
            let params = TradingParams::new(*alpha, *x0, bounds)?;
            let mut trajectories = Vec::with_capacity(1usize << horizon);
            for mask in 0..(1u128 << horizon) {
                let extreme = ExtremePath::new(mask, *horizon)?;
                let traj = simulate(&params, &decode_extreme(&extreme, &bounds))?;
                trajectories.push((extreme.mask_hex(), traj.states));
            }
            let body = match render {
                FormatArg::Json => Body::Json(json!({
                    "alpha": alpha,
                    "horizon": horizon,
                    "trajectories": trajectories
                        .iter()
                        .map(|(mask, states)| json!({ "mask": mask, "states": states }))
                        .collect::<Vec<_>>(),
                })),
                FormatArg::Csv => {
                    let mut out = csv_line(&["mask", "k", "x"]);
                    for (mask, states) in &trajectories {
                        for (k, x) in states.iter().enumerate() {
                            out.push_str(&csv_line(&[mask, &k.to_string(), &fmt_f64(*x)]));
                        }
                    }
                    Body::Csv(out)
                }
            };
            Ok(Outcome { body, exit: 0 })
        }
        Resolved::AlphaMax {
            v_min,
            v_max,
            x0,
            horizon,
            tolerance,
            cap,
            split_depth,
        } => {
            let bounds = MarketBounds::new(*v_min, *v_max)?;
            let cfg = SearchConfig {
                horizon_cap: *cap,
                split_depth: *split_depth,
            };
            let outcome = alpha_max_bisect(&bounds, *x0, *horizon, *tolerance, &cfg)?;
            let value = to_value(&outcome);
            let body = match render {
                FormatArg::Json => Body::Json(value),
                FormatArg::Csv => {
                    let mut out = csv_line(&[
                        "kind",
                        "horizon",
                        "lower",
                        "upper",
                        "tolerance",
                        "probes",
                    ]);
                    let row = match &outcome {
                        AlphaMaxOutcome::Estimate(e) => [
                            "estimate".to_string(),
                            e.horizon.to_string(),
                            fmt_f64(e.lower),
                            fmt_f64(e.upper),
                            fmt_f64(e.tolerance),
                            e.tested.len().to_string(),
                        ],
                        AlphaMaxOutcome::BracketAnomaly {
                            horizon,
                            lower_end,
                            upper_end,
                            tested,
                        } => [
                            "bracket_anomaly".to_string(),
                            horizon.to_string(),
                            fmt_f64(lower_end.alpha),
                            fmt_f64(upper_end.alpha),
                            String::new(),
                            tested.len().to_string(),
                        ],
                    };
                    out.push_str(&csv_line(&row.iter().map(String::as_str).collect::<Vec<_>>()));
                    Body::Csv(out)
                }
            };
            Ok(Outcome { body, exit: 0 })
        }
        Resolved::Surface { v_max, grid } => {
            let points = grid_points(grid)?;
            let rows = threshold_surface(*v_max, &points)?;
            let value = to_value(&rows);
            let body = match render {
                FormatArg::Json => Body::Json(json!({ "v_max": v_max, "rows": value })),
                FormatArg::Csv => {
                    let mut out =
                        csv_line(&["v_min", "v_max", "alpha_minus", "alpha_plus", "regime"]);
                    for row in value.as_array().expect("rows array") {
                        out.push_str(&csv_line(&[
                            &value_cell(&row["v_min"]),
                            &value_cell(&row["v_max"]),
                            &value_cell(&row["alpha_minus"]),
                            &value_cell(&row["alpha_plus"]),
                            &value_cell(&row["regime"]),
                        ]));
                    }
                    Body::Csv(out)
                }
            };
            Ok(Outcome { body, exit: 0 })
        }
        Resolved::ClosedForm {
            alpha,
            x0,
            v_min,
            v_max,
            k_max,
        } => {
            let params = TradingParams::new(*alpha, *x0, MarketBounds::new(*v_min, *v_max)?)?;
            let evaluator = ClosedFormEvaluator::new(&params);
            let states: Vec<f64> = (0..=*k_max).map(|k| evaluator.state_at(k)).collect();
            let body = match render {
                FormatArg::Json => Body::Json(json!({
                    "spectral": to_value(evaluator.spectral()),
                    "report": to_value(&oscillation_report(&params)),
                    "states": states,
                })),
                FormatArg::Csv => {
                    let mut out = csv_line(&["k", "x"]);
                    for (k, x) in states.iter().enumerate() {
                        out.push_str(&csv_line(&[&k.to_string(), &fmt_f64(*x)]));
                    }
                    Body::Csv(out)
                }
            };
            Ok(Outcome { body, exit: 0 })
        }
        Resolved::Multi {
            x0,
            assets,
            horizon,
            mode,
            cap,
            returns,
        } => {
            let specs = assets
                .iter()
                .map(|a| AssetSpec::new(a.alpha, MarketBounds::new(a.v_min, a.v_max)?))
                .collect::<Result<Vec<_>>>()?;
            let params = MultiAssetParams::new(specs, *x0)?;
            let oscillation = oscillation_condition(&params);
            let verification = verify_extremes(&params, *horizon, *mode, *cap)?;
            let trajectory = match returns {
                None => None,
                Some(rows) => Some(simulate_multi(&params, rows)?),
            };
            let value = json!({
                "oscillation": to_value(&oscillation),
                "verification": to_value(&verification),
                "trajectory": trajectory.as_ref().map(to_value),
            });
            let body = match render {
                FormatArg::Json => Body::Json(value),
                FormatArg::Csv => {
                    let v = &value["verification"];
                    let o = &value["oscillation"];
                    let mut out = csv_line(&[
                        "horizon",
                        "assets",
                        "mode",
                        "all_positive",
                        "borderline",
                        "min_value",
                        "min_stage",
                        "min_mask",
                        "min_abs_state",
                        "paths_examined",
                        "oscillation_lhs",
                        "oscillation_holds",
                        "theta",
                    ]);
                    out.push_str(&csv_line(&[
                        &value_cell(&v["horizon"]),
                        &value_cell(&v["assets"]),
                        &value_cell(&v["mode"]["kind"]),
                        &value_cell(&v["all_positive"]),
                        &value_cell(&v["borderline"]),
                        &value_cell(&v["min_state"]["value"]),
                        &value_cell(&v["min_state"]["stage"]),
                        &value_cell(&v["min_state"]["path"]["mask"]),
                        &value_cell(&v["min_abs_state"]),
                        &value_cell(&v["paths_examined"]),
                        &value_cell(&o["lhs"]),
                        &value_cell(&o["holds"]),
                        &value_cell(&o["theta"]),
                    ]));
                    Body::Csv(out)
                }
            };
            Ok(Outcome { body, exit: 0 })
        }
    }
}

fn verify_extremes(
    params: &MultiAssetParams,
    horizon: usize,
    mode: ModeSpec,
    cap: usize,
) -> Result<positivity_core::MultiVerification> {
    positivity_core::verify_extremes_multi(params, horizon, mode.into(), cap)
}

fn trading_params(alpha: &Num, x0: &Num, v_min: &Num, v_max: &Num) -> Result<TradingParams> {
    TradingParams::new(
        alpha.as_f64()?,
        x0.as_f64()?,
        MarketBounds::new(v_min.as_f64()?, v_max.as_f64()?)?,
    )
}

fn rational_params(alpha: &Num, x0: &Num, v_min: &Num, v_max: &Num) -> Result<RationalParams> {
    RationalParams::from_strs(alpha.as_str()?, x0.as_str()?, v_min.as_str()?, v_max.as_str()?)
}

fn float_path(source: &PathSource, bounds: &MarketBounds) -> Result<Path> {
    match source {
        PathSource::Explicit(vals) => {
            let returns = vals.iter().map(Num::as_f64).collect::<Result<Vec<_>>>()?;
            Ok(Path::new(returns))
        }
        PathSource::Distinguished(n) => Ok(distinguished_path(bounds, *n)),
        PathSource::Extreme { mask, horizon } => Ok(decode_extreme(
            &ExtremePath::new(*mask, *horizon)?,
            bounds,
        )),
    }
}

fn exact_returns(source: &PathSource, params: &RationalParams) -> Result<Vec<BigRational>> {
    match source {
        PathSource::Explicit(vals) => vals
            .iter()
            .map(|v| parse_rational(v.as_str()?))
            .collect(),
        PathSource::Distinguished(n) => Ok(distinguished_exact(params, *n)),
        PathSource::Extreme { mask, horizon } => Ok(decode_extreme_exact(
            &ExtremePath::new(*mask, *horizon)?,
            params,
        )),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result types serialize to JSON")
}

/// Formats a float with the shortest digits that round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// RFC-4180-style quoting: cells with commas, quotes, or line breaks are
/// quoted, with embedded quotes doubled.
pub fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_line(cells: &[&str]) -> String {
    let mut line = cells.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Renders one JSON scalar as a CSV cell; null becomes the empty cell.
fn value_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => panic!("non-scalar CSV cell: {other}"),
    }
}

fn one_row_csv(header: &[&str], value: &Value) -> String {
    let mut out = csv_line(header);
    let cells: Vec<String> = header.iter().map(|k| value_cell(&value[*k])).collect();
    out.push_str(&csv_line(&cells.iter().map(String::as_str).collect::<Vec<_>>()));
    out
}

fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = csv_line(&["k", "x", "u", "leverage"]);
    for (k, x) in traj.states.iter().enumerate() {
        let u = traj.controls.get(k).map(|u| fmt_f64(*u)).unwrap_or_default();
        let lev = traj
            .leverage
            .get(k)
            .and_then(|l| l.map(fmt_f64))
            .unwrap_or_default();
        out.push_str(&csv_line(&[&k.to_string(), &fmt_f64(*x), &u, &lev]));
    }
    out
}

fn exact_leverage(traj: &ExactTrajectory) -> Vec<Option<BigRational>> {
    traj.controls
        .iter()
        .zip(traj.states.iter())
        .map(|(u, x)| {
            if x.is_zero() {
                None
            } else {
                Some(u / x)
            }
        })
        .collect()
}

fn exact_trajectory_csv(traj: &ExactTrajectory) -> String {
    let leverage = exact_leverage(traj);
    let mut out = csv_line(&["k", "x", "u", "leverage"]);
    for (k, x) in traj.states.iter().enumerate() {
        let u = traj
            .controls
            .get(k)
            .map(rational_to_string)
            .unwrap_or_default();
        let lev = leverage
            .get(k)
            .and_then(|l| l.as_ref().map(rational_to_string))
            .unwrap_or_default();
        out.push_str(&csv_line(&[&k.to_string(), &rational_to_string(x), &u, &lev]));
    }
    out
}

fn exact_trajectory_json(traj: &ExactTrajectory) -> Value {
    let leverage = exact_leverage(traj);
    let verdict = match traj.first_nonpositive {
        None => json!({ "kind": "positive" }),
        Some(stage) => json!({ "kind": "nonpositive", "stage": stage }),
    };
    json!({
        "trajectory": {
            "states": traj.states.iter().map(rational_to_string).collect::<Vec<_>>(),
            "states_float": traj.states.iter().map(rational_to_f64).collect::<Vec<_>>(),
            "controls": traj.controls.iter().map(rational_to_string).collect::<Vec<_>>(),
            "leverage": leverage
                .iter()
                .map(|l| l.as_ref().map(rational_to_string))
                .collect::<Vec<_>>(),
            "first_nonpositive": traj.first_nonpositive,
        },
        "verdict": verdict,
    })
}

/// Mirrors the float verification JSON shape, with exact values as rational
/// strings plus `_float` companions.
fn exact_verification_json(ver: &Verification<BigRational>) -> Value {
    json!({
        "horizon": ver.horizon,
        "mode": { "kind": "exhaustive" },
        "all_positive": ver.all_positive,
        "witness": ver.witness.as_ref().map(|w| json!({
            "path": to_value(&w.path),
            "stage": w.stage,
            "value": rational_to_string(&w.value),
            "value_float": rational_to_f64(&w.value),
        })),
        "min_state": {
            "value": rational_to_string(&ver.min_state.value),
            "value_float": rational_to_f64(&ver.min_state.value),
            "path": to_value(&ver.min_state.path),
            "stage": ver.min_state.stage,
        },
        "min_abs_state": rational_to_string(&ver.min_abs_state),
        "min_abs_state_float": rational_to_f64(&ver.min_abs_state),
        "borderline": false,
        "paths_examined": ver.paths_examined,
    })
}

/// One-row CSV for both float and exact verifications, driven by the JSON
/// rendering so the two modes share columns.
fn verification_csv(value: &Value) -> String {
    let mut out = csv_line(&[
        "horizon",
        "mode",
        "all_positive",
        "borderline",
        "min_value",
        "min_stage",
        "min_mask",
        "min_abs_state",
        "paths_examined",
        "witness_mask",
        "witness_stage",
        "witness_value",
    ]);
    let witness = &value["witness"];
    out.push_str(&csv_line(&[
        &value_cell(&value["horizon"]),
        &value_cell(&value["mode"]["kind"]),
        &value_cell(&value["all_positive"]),
        &value_cell(&value["borderline"]),
        &value_cell(&value["min_state"]["value"]),
        &value_cell(&value["min_state"]["stage"]),
        &value_cell(&value["min_state"]["path"]["mask"]),
        &value_cell(&value["min_abs_state"]),
        &value_cell(&value["paths_examined"]),
        &value_cell(&witness["path"]["mask"]),
        &value_cell(&witness["stage"]),
        &value_cell(&witness["value"]),
    ]));
    out
}

/// Maps a library error to the spec'd process exit code.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::HorizonCap { .. } => 2,
        _ => 1,
    }
}
