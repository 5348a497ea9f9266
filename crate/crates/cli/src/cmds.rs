//! Subcommand definitions, parameter resolution, and the replay round-trip.
//!
//! Every command resolves flags plus an optional JSON parameter file into a
//! [`Resolved`] value whose `to_params` / `from_params` pair is lossless:
//! the metadata object emitted with each run is sufficient to re-run it.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use positivity_core::{
    parse_rational, rational_to_string, Error, Result, DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_MULTI_EXHAUSTIVE_CAP, DEFAULT_SPLIT_DEPTH, EXACT_HORIZON_CAP,
};
use serde_json::{json, Map, Value};

/// Output rendering requested for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

impl FormatArg {
    pub fn name(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "json" => Ok(FormatArg::Json),
            "csv" => Ok(FormatArg::Csv),
            other => Err(invalid(format!("unknown output format {other:?}"))),
        }
    }
}

/// Path-space coverage requested for a verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Compute every gain threshold and the regime for one bounds pair.
    Thresholds(ThresholdsArgs),
    /// Simulate the state recursion along one return path.
    Simulate(SimulateArgs),
    /// Verify positivity over extreme return paths at a fixed gain.
    Verify(VerifyArgs),
    /// Verify positivity on a gain grid spanning [alpha_minus, alpha_plus].
    GapScan(GapScanArgs),
    /// Bracket the largest all-positive gain at a fixed horizon.
    Alphamax(AlphamaxArgs),
    /// Tabulate thresholds over a v_min grid at fixed v_max.
    Surface(SurfaceArgs),
    /// Evaluate the closed form of the distinguished-path state.
    ClosedForm(ClosedFormArgs),
    /// Analyze a multi-asset portfolio from a JSON parameter file.
    Multi(MultiArgs),
}

#[derive(Debug, Args)]
pub struct ThresholdsArgs {
    /// Worst-case return, in (-1, 0).
    #[arg(long, allow_hyphen_values = true)]
    pub vmin: Option<f64>,
    /// Best-case return, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub vmax: Option<f64>,
    /// JSON parameter file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Output format (default: json).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Feedback gain; a rational like 27/50 in --exact mode.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Initial capital (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Worst-case return, in (-1, 0).
    #[arg(long, allow_hyphen_values = true)]
    pub vmin: Option<String>,
    /// Best-case return, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub vmax: Option<String>,
    /// JSON parameter file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Explicit return path v(0),v(1),...
    #[arg(long, allow_hyphen_values = true, value_name = "V0,V1,...")]
    pub path: Option<String>,
    /// Distinguished path (v_max, v_min, v_min, ...) of this horizon.
    #[arg(long, value_name = "N")]
    pub distinguished: Option<usize>,
    /// Extreme-path mask (hex like 0x1 or decimal); bit k set means v_max at time k.
    #[arg(long, value_name = "MASK")]
    pub extreme_mask: Option<String>,
    /// Horizon for --extreme-mask.
    #[arg(long, value_name = "N")]
    pub horizon: Option<usize>,
    /// Evaluate in exact rational arithmetic.
    #[arg(long)]
    pub exact: bool,
    /// Exit with code 3 if any state is <= 0.
    #[arg(long)]
    pub fail_on_bankruptcy: bool,
    /// Output format (default: csv).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Feedback gain; a rational like 27/50 in --exact mode.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Initial capital (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Worst-case return, in (-1, 0).
    #[arg(long, allow_hyphen_values = true)]
    pub vmin: Option<String>,
    /// Best-case return, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub vmax: Option<String>,
    /// JSON parameter file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Number of trading stages N.
    #[arg(long, value_name = "N")]
    pub horizon: usize,
    /// Path-space coverage (default: exhaustive).
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Sampled mode: number of random vertices to draw.
    #[arg(long, default_value_t = 4096)]
    pub count: u64,
    /// Sampled mode: RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exhaustive horizon cap override.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Tree depth above which subtrees run in parallel.
    #[arg(long)]
    pub split_depth: Option<usize>,
    /// Verify in exact rational arithmetic (exhaustive mode only).
    #[arg(long)]
    pub exact: bool,
    /// Exit with code 3 if positivity is violated.
    #[arg(long)]
    pub fail_on_violation: bool,
    /// Output format (default: json).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct GapScanArgs {
    /// Worst-case return, in (-1, 0).
    #[arg(long, allow_hyphen_values = true)]
    pub vmin: Option<f64>,
    /// Best-case return, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub vmax: Option<f64>,
    /// Initial capital (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// JSON parameter file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Number of trading stages N.
    #[arg(long, value_name = "N")]
    pub horizon: usize,
    /// Number of gain grid points (inclusive of both endpoints).
    #[arg(long, default_value_t = 100)]
    pub alphas: usize,
    /// Path-space coverage per grid point (default: exhaustive).
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Sampled mode: number of random vertices per grid point.
    #[arg(long, default_value_t = 4096)]
    pub count: u64,
    /// Sampled mode: master RNG seed (row i uses seed + i).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exhaustive horizon cap override.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Tree depth above which subtrees run in parallel.
    #[arg(long)]
    pub split_depth: Option<usize>,
    /// Emit every extreme-path trajectory at one gain as long-format rows.
    #[arg(long)]
    pub figure2: bool,
    /// Gain for --figure2.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Output format (default: csv).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct AlphamaxArgs {
    /// Worst-case return, in (-1, 0).
    #[arg(long, allow_hyphen_values = true)]
    pub vmin: Option<f64>,
    /// Best-case return, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub vmax: Option<f64>,
    /// Initial capital (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// JSON parameter file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Number of trading stages N.
    #[arg(long, value_name = "N")]
    pub horizon: usize,
    /// Bracket width at which bisection stops.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Exhaustive horizon cap override.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Tree depth above which subtrees run in parallel.
    #[arg(long)]
    pub split_depth: Option<usize>,
    /// Output format (default: json).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Best-case return, > 0, fixed across the grid.
    #[arg(long)]
    pub vmax: f64,
    /// v_min grid as start:stop:step, e.g. -0.95:-0.05:0.05.
    #[arg(long, allow_hyphen_values = true, value_name = "START:STOP:STEP")]
    pub vmin_grid: String,
    /// Output format (default: csv).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct ClosedFormArgs {
    /// Feedback gain.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Initial capital (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Worst-case return, in (-1, 0).
    #[arg(long, allow_hyphen_values = true)]
    pub vmin: Option<f64>,
    /// Best-case return, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub vmax: Option<f64>,
    /// JSON parameter file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Largest stage to evaluate (rows k = 0..=kmax).
    #[arg(long, default_value_t = 50)]
    pub kmax: usize,
    /// Output format (default: csv).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct MultiArgs {
    /// Portfolio JSON file: {"x0": .., "assets": [{"alpha","v_min","v_max"}, ..]}.
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    /// Number of trading stages N.
    #[arg(long, value_name = "N")]
    pub horizon: usize,
    /// Vertex coverage (default: exhaustive).
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Sampled mode: number of random vertices to draw.
    #[arg(long, default_value_t = 4096)]
    pub count: u64,
    /// Sampled mode: RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exhaustive mask-bit cap override (assets * horizon).
    #[arg(long)]
    pub cap: Option<usize>,
    /// JSON file with a returns matrix [[v_1(0),..,v_m(0)], ..]; adds a trajectory.
    #[arg(long, value_name = "FILE")]
    pub returns: Option<PathBuf>,
    /// Output format (default: json).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

/// One numeric parameter, carried as a float or as a canonical rational string.
#[derive(Debug, Clone, PartialEq)]
pub enum Num {
    Float(f64),
    Rational(String),
}

impl Num {
    pub fn to_json(&self) -> Value {
        match self {
            Num::Float(f) => json!(f),
            Num::Rational(s) => json!(s),
        }
    }

    pub fn as_f64(&self) -> Result<f64> {
        match self {
            Num::Float(f) => Ok(*f),
            Num::Rational(s) => Err(invalid(format!(
                "rational parameter {s:?} supplied without --exact"
            ))),
        }
    }

    pub fn as_str(&self) -> Result<&str> {
        match self {
            Num::Rational(s) => Ok(s),
            Num::Float(f) => Err(invalid(format!(
                "float parameter {f} supplied in exact mode"
            ))),
        }
    }
}

/// How the simulated return path is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum PathSource {
    Explicit(Vec<Num>),
    Distinguished(usize),
    Extreme { mask: u128, horizon: usize },
}

/// Coverage mode with its sampling configuration resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSpec {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

impl ModeSpec {
    pub fn seed(&self) -> Option<u64> {
        match self {
            ModeSpec::Exhaustive => None,
            ModeSpec::Sampled { seed, .. } => Some(*seed),
        }
    }
}

/// v_min grid specification for the threshold surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// A fully resolved command: flags and parameter files merged, exact-mode
/// rationals canonicalized. `to_params` / `from_params` round-trip this.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolved {
    Thresholds {
        v_min: f64,
        v_max: f64,
    },
    Simulate {
        exact: bool,
        alpha: Num,
        x0: Num,
        v_min: Num,
        v_max: Num,
        source: PathSource,
        fail_on_bankruptcy: bool,
    },
    Verify {
        exact: bool,
        alpha: Num,
        x0: Num,
        v_min: Num,
        v_max: Num,
        horizon: usize,
        mode: ModeSpec,
        cap: usize,
        split_depth: usize,
        fail_on_violation: bool,
    },
    GapScan {
        v_min: f64,
        v_max: f64,
        x0: f64,
        horizon: usize,
        alphas: usize,
        mode: ModeSpec,
        cap: usize,
        split_depth: usize,
    },
    Figure2 {
        alpha: f64,
        v_min: f64,
        v_max: f64,
        x0: f64,
        horizon: usize,
    },
    AlphaMax {
        v_min: f64,
        v_max: f64,
        x0: f64,
        horizon: usize,
        tolerance: f64,
        cap: usize,
        split_depth: usize,
    },
    Surface {
        v_max: f64,
        grid: GridSpec,
    },
    ClosedForm {
        alpha: f64,
        x0: f64,
        v_min: f64,
        v_max: f64,
        k_max: usize,
    },
    Multi {
        x0: f64,
        assets: Vec<MultiAssetSpec>,
        horizon: usize,
        mode: ModeSpec,
        cap: usize,
        returns: Option<Vec<Vec<f64>>>,
    },
}

/// One portfolio asset as read from the multi parameter file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiAssetSpec {
    pub alpha: f64,
    pub v_min: f64,
    pub v_max: f64,
}

pub fn invalid(reason: String) -> Error {
    Error::InvalidParameter { reason }
}

/// Command name used in metadata and replay dispatch.
impl Resolved {
    pub fn command_name(&self) -> &'static str {
        match self {
            Resolved::Thresholds { .. } => "thresholds",
            Resolved::Simulate { .. } => "simulate",
            Resolved::Verify { .. } => "verify",
            Resolved::GapScan { .. } | Resolved::Figure2 { .. } => "gap-scan",
            Resolved::AlphaMax { .. } => "alphamax",
            Resolved::Surface { .. } => "surface",
            Resolved::ClosedForm { .. } => "closed-form",
            Resolved::Multi { .. } => "multi",
        }
    }

    pub fn default_format(&self) -> FormatArg {
        match self {
            Resolved::Thresholds { .. }
            | Resolved::Verify { .. }
            | Resolved::AlphaMax { .. }
            | Resolved::Multi { .. } => FormatArg::Json,
            Resolved::Simulate { .. }
            | Resolved::GapScan { .. }
            | Resolved::Figure2 { .. }
            | Resolved::Surface { .. }
            | Resolved::ClosedForm { .. } => FormatArg::Csv,
        }
    }

    pub fn numeric_mode(&self) -> &'static str {
        match self {
            Resolved::Simulate { exact: true, .. } | Resolved::Verify { exact: true, .. } => {
                "exact"
            }
            _ => "float",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Resolved::Verify { mode, .. }
            | Resolved::GapScan { mode, .. }
            | Resolved::Multi { mode, .. } => mode.seed(),
            _ => None,
        }
    }

    /// Full resolved parameters as a JSON object; the replay source of truth.
    pub fn to_params(&self) -> Value {
        match self {
            Resolved::Thresholds { v_min, v_max } => json!({
                "v_min": v_min,
                "v_max": v_max,
            }),
            Resolved::Simulate {
                exact,
                alpha,
                x0,
                v_min,
                v_max,
                source,
                fail_on_bankruptcy,
            } => {
                let path = match source {
                    PathSource::Explicit(vals) => json!({
                        "kind": "explicit",
                        "returns": vals.iter().map(Num::to_json).collect::<Vec<_>>(),
                    }),
                    PathSource::Distinguished(n) => json!({
                        "kind": "distinguished",
                        "horizon": n,
                    }),
                    PathSource::Extreme { mask, horizon } => json!({
                        "kind": "extreme",
                        "mask": format!("{mask:#x}"),
                        "horizon": horizon,
                    }),
                };
                json!({
                    "alpha": alpha.to_json(),
                    "x0": x0.to_json(),
                    "v_min": v_min.to_json(),
                    "v_max": v_max.to_json(),
                    "path": path,
                    "exact": exact,
                    "fail_on_bankruptcy": fail_on_bankruptcy,
                })
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
                let mut obj = base_mode_params(mode);
                obj.insert("alpha".into(), alpha.to_json());
                obj.insert("x0".into(), x0.to_json());
                obj.insert("v_min".into(), v_min.to_json());
                obj.insert("v_max".into(), v_max.to_json());
                obj.insert("horizon".into(), json!(horizon));
                obj.insert("cap".into(), json!(cap));
                obj.insert("split_depth".into(), json!(split_depth));
                obj.insert("exact".into(), json!(exact));
                obj.insert("fail_on_violation".into(), json!(fail_on_violation));
                Value::Object(obj)
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
                let mut obj = base_mode_params(mode);
                obj.insert("v_min".into(), json!(v_min));
                obj.insert("v_max".into(), json!(v_max));
                obj.insert("x0".into(), json!(x0));
                obj.insert("horizon".into(), json!(horizon));
                obj.insert("alphas".into(), json!(alphas));
                obj.insert("cap".into(), json!(cap));
                obj.insert("split_depth".into(), json!(split_depth));
                obj.insert("figure2".into(), json!(false));
                Value::Object(obj)
            }
            Resolved::Figure2 {
                alpha,
                v_min,
                v_max,
                x0,
                horizon,
            } => json!({
                "figure2": true,
                "alpha": alpha,
                "v_min": v_min,
                "v_max": v_max,
                "x0": x0,
                "horizon": horizon,
            }),
            Resolved::AlphaMax {
                v_min,
                v_max,
                x0,
                horizon,
                tolerance,
                cap,
                split_depth,
            } => json!({
                "v_min": v_min,
                "v_max": v_max,
                "x0": x0,
                "horizon": horizon,
                "tolerance": tolerance,
                "cap": cap,
                "split_depth": split_depth,
            }),
            Resolved::Surface { v_max, grid } => json!({
                "v_max": v_max,
                "grid": {
                    "start": grid.start,
                    "stop": grid.stop,
                    "step": grid.step,
                },
            }),
            Resolved::ClosedForm {
                alpha,
                x0,
                v_min,
                v_max,
                k_max,
            } => json!({
                "alpha": alpha,
                "x0": x0,
                "v_min": v_min,
                "v_max": v_max,
                "k_max": k_max,
            }),
            Resolved::Multi {
                x0,
                assets,
                horizon,
                mode,
                cap,
                returns,
            } => {
                let mut obj = base_mode_params(mode);
                obj.insert("x0".into(), json!(x0));
                obj.insert(
                    "assets".into(),
                    json!(assets
                        .iter()
                        .map(|a| json!({
                            "alpha": a.alpha,
                            "v_min": a.v_min,
                            "v_max": a.v_max,
                        }))
                        .collect::<Vec<_>>()),
                );
                obj.insert("horizon".into(), json!(horizon));
                obj.insert("cap".into(), json!(cap));
                obj.insert(
                    "returns".into(),
                    match returns {
                        Some(rows) => json!(rows),
                        None => Value::Null,
                    },
                );
                Value::Object(obj)
            }
        }
    }

    /// Rebuilds a resolved command from a stored metadata params object.
    pub fn from_params(command: &str, params: &Value) -> Result<Self> {
        let obj = params
            .as_object()
            .ok_or_else(|| invalid("metadata params is not an object".into()))?;
        match command {
            "thresholds" => Ok(Resolved::Thresholds {
                v_min: get_f64(obj, "v_min")?,
                v_max: get_f64(obj, "v_max")?,
            }),
            "simulate" => {
                let exact = get_bool(obj, "exact")?;
                let source = {
                    let path = obj
                        .get("path")
                        .and_then(Value::as_object)
                        .ok_or_else(|| invalid("missing path object in params".into()))?;
                    match path.get("kind").and_then(Value::as_str) {
                        Some("explicit") => {
                            let vals = path
                                .get("returns")
                                .and_then(Value::as_array)
                                .ok_or_else(|| invalid("explicit path lacks returns".into()))?;
                            PathSource::Explicit(
                                vals.iter()
                                    .map(|v| num_from_value(v, exact, "path entry"))
                                    .collect::<Result<Vec<_>>>()?,
                            )
                        }
                        Some("distinguished") => {
                            PathSource::Distinguished(get_usize(path, "horizon")?)
                        }
                        Some("extreme") => PathSource::Extreme {
                            mask: parse_mask(
                                path.get("mask")
                                    .and_then(Value::as_str)
                                    .ok_or_else(|| invalid("extreme path lacks mask".into()))?,
                            )?,
                            horizon: get_usize(path, "horizon")?,
                        },
                        other => {
                            return Err(invalid(format!("unknown path kind {other:?}")));
                        }
                    }
                };
                Ok(Resolved::Simulate {
                    exact,
                    alpha: num_from_key(obj, "alpha", exact)?,
                    x0: num_from_key(obj, "x0", exact)?,
                    v_min: num_from_key(obj, "v_min", exact)?,
                    v_max: num_from_key(obj, "v_max", exact)?,
                    source,
                    fail_on_bankruptcy: get_bool(obj, "fail_on_bankruptcy")?,
                })
            }
            "verify" => {
                let exact = get_bool(obj, "exact")?;
                Ok(Resolved::Verify {
                    exact,
                    alpha: num_from_key(obj, "alpha", exact)?,
                    x0: num_from_key(obj, "x0", exact)?,
                    v_min: num_from_key(obj, "v_min", exact)?,
                    v_max: num_from_key(obj, "v_max", exact)?,
                    horizon: get_usize(obj, "horizon")?,
                    mode: mode_from_params(obj)?,
                    cap: get_usize(obj, "cap")?,
                    split_depth: get_usize(obj, "split_depth")?,
                    fail_on_violation: get_bool(obj, "fail_on_violation")?,
                })
            }
            "gap-scan" => {
                if obj.get("figure2").and_then(Value::as_bool) == Some(true) {
                    Ok(Resolved::Figure2 {
                        alpha: get_f64(obj, "alpha")?,
                        v_min: get_f64(obj, "v_min")?,
                        v_max: get_f64(obj, "v_max")?,
                        x0: get_f64(obj, "x0")?,
                        horizon: get_usize(obj, "horizon")?,
                    })
                } else {
                    Ok(Resolved::GapScan {
                        v_min: get_f64(obj, "v_min")?,
                        v_max: get_f64(obj, "v_max")?,
                        x0: get_f64(obj, "x0")?,
                        horizon: get_usize(obj, "horizon")?,
                        alphas: get_usize(obj, "alphas")?,
                        mode: mode_from_params(obj)?,
                        cap: get_usize(obj, "cap")?,
                        split_depth: get_usize(obj, "split_depth")?,
                    })
                }
            }
            "alphamax" => Ok(Resolved::AlphaMax {
                v_min: get_f64(obj, "v_min")?,
                v_max: get_f64(obj, "v_max")?,
                x0: get_f64(obj, "x0")?,
                horizon: get_usize(obj, "horizon")?,
                tolerance: get_f64(obj, "tolerance")?,
                cap: get_usize(obj, "cap")?,
                split_depth: get_usize(obj, "split_depth")?,
            }),
            "surface" => {
                let grid = obj
                    .get("grid")
                    .and_then(Value::as_object)
                    .ok_or_else(|| invalid("missing grid object in params".into()))?;
                Ok(Resolved::Surface {
                    v_max: get_f64(obj, "v_max")?,
                    grid: GridSpec {
                        start: get_f64(grid, "start")?,
                        stop: get_f64(grid, "stop")?,
                        step: get_f64(grid, "step")?,
                    },
                })
            }
            "closed-form" => Ok(Resolved::ClosedForm {
                alpha: get_f64(obj, "alpha")?,
                x0: get_f64(obj, "x0")?,
                v_min: get_f64(obj, "v_min")?,
                v_max: get_f64(obj, "v_max")?,
                k_max: get_usize(obj, "k_max")?,
            }),
            "multi" => {
                let assets = obj
                    .get("assets")
                    .and_then(Value::as_array)
                    .ok_or_else(|| invalid("missing assets array in params".into()))?
                    .iter()
                    .map(|a| {
                        let a = a
                            .as_object()
                            .ok_or_else(|| invalid("asset entry is not an object".into()))?;
                        Ok(MultiAssetSpec {
                            alpha: get_f64(a, "alpha")?,
                            v_min: get_f64(a, "v_min")?,
                            v_max: get_f64(a, "v_max")?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let returns = match obj.get("returns") {
                    None | Some(Value::Null) => None,
                    Some(v) => Some(returns_matrix_from_value(v)?),
                };
                Ok(Resolved::Multi {
                    x0: get_f64(obj, "x0")?,
                    assets,
                    horizon: get_usize(obj, "horizon")?,
                    mode: mode_from_params(obj)?,
                    cap: get_usize(obj, "cap")?,
                    returns,
                })
            }
            other => Err(invalid(format!("unknown command {other:?} in metadata"))),
        }
    }
}

fn base_mode_params(mode: &ModeSpec) -> Map<String, Value> {
    let mut obj = Map::new();
    match mode {
        ModeSpec::Exhaustive => {
            obj.insert("mode".into(), json!("exhaustive"));
        }
        ModeSpec::Sampled { count, seed } => {
            obj.insert("mode".into(), json!("sampled"));
            obj.insert("count".into(), json!(count));
            obj.insert("seed".into(), json!(seed));
        }
    }
    obj
}

fn mode_from_params(obj: &Map<String, Value>) -> Result<ModeSpec> {
    match obj.get("mode").and_then(Value::as_str) {
        Some("exhaustive") => Ok(ModeSpec::Exhaustive),
        Some("sampled") => Ok(ModeSpec::Sampled {
            count: get_u64(obj, "count")?,
            seed: get_u64(obj, "seed")?,
        }),
        other => Err(invalid(format!("unknown mode {other:?} in metadata"))),
    }
}

fn get_f64(obj: &Map<String, Value>, key: &str) -> Result<f64> {
    obj.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| invalid(format!("missing or non-numeric {key:?} in params")))
}

fn get_u64(obj: &Map<String, Value>, key: &str) -> Result<u64> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| invalid(format!("missing or non-integer {key:?} in params")))
}

fn get_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    Ok(get_u64(obj, key)? as usize)
}

fn get_bool(obj: &Map<String, Value>, key: &str) -> Result<bool> {
    obj.get(key)
        .and_then(Value::as_bool)
        .ok_or_else(|| invalid(format!("missing or non-boolean {key:?} in params")))
}

fn num_from_key(obj: &Map<String, Value>, key: &str, exact: bool) -> Result<Num> {
    let v = obj
        .get(key)
        .ok_or_else(|| invalid(format!("missing {key:?} in params")))?;
    num_from_value(v, exact, key)
}

fn num_from_value(v: &Value, exact: bool, what: &str) -> Result<Num> {
    if exact {
        match v {
            Value::String(s) => Ok(Num::Rational(canonical_rational(s)?)),
            Value::Number(n) => Ok(Num::Rational(canonical_rational(&n.to_string())?)),
            _ => Err(invalid(format!("{what} is not a rational string"))),
        }
    } else {
        match v {
            Value::Number(n) => n
                .as_f64()
                .map(Num::Float)
                .ok_or_else(|| invalid(format!("{what} is not representable as f64"))),
            Value::String(s) => parse_f64(s, what).map(Num::Float),
            _ => Err(invalid(format!("{what} is not a number"))),
        }
    }
}

/// Parses and re-renders a rational so metadata holds one canonical spelling.
pub fn canonical_rational(s: &str) -> Result<String> {
    Ok(rational_to_string(&parse_rational(s)?))
}

pub fn parse_f64(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{what} {s:?} is not a number")))?;
    if !v.is_finite() {
        return Err(invalid(format!("{what} {s:?} is not finite")));
    }
    Ok(v)
}

/// Parses an extreme-path mask given as 0x-prefixed hex or as decimal.
pub fn parse_mask(s: &str) -> Result<u128> {
    let t = s.trim();
    let parsed = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u128::from_str_radix(hex, 16)
    } else {
        t.parse::<u128>()
    };
    parsed.map_err(|_| invalid(format!("mask {s:?} is not a valid unsigned integer")))
}

/// Expands start:stop:step into grid points, inclusive of the stop endpoint
/// up to a half-step tolerance.
pub fn grid_points(grid: &GridSpec) -> Result<Vec<f64>> {
    let GridSpec { start, stop, step } = *grid;
    for v in [start, stop, step] {
        if !v.is_finite() {
            return Err(invalid("grid endpoints and step must be finite".into()));
        }
    }
    if step == 0.0 || (stop - start) * step < 0.0 {
        return Err(invalid(format!(
            "grid step {step} does not move {start} toward {stop}"
        )));
    }
    let span = ((stop - start) / step + 0.5 * f64::EPSILON.sqrt()).floor();
    if span < 0.0 || span > 1e6 {
        return Err(invalid(format!(
            "grid {start}:{stop}:{step} has too many points"
        )));
    }
    let count = span as usize + 1;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

pub fn parse_grid_spec(s: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(invalid(format!(
            "grid {s:?} must have the form start:stop:step"
        )));
    }
    Ok(GridSpec {
        start: parse_f64(parts[0], "grid start")?,
        stop: parse_f64(parts[1], "grid stop")?,
        step: parse_f64(parts[2], "grid step")?,
    })
}

fn returns_matrix_from_value(v: &Value) -> Result<Vec<Vec<f64>>> {
    v.as_array()
        .ok_or_else(|| invalid("returns matrix is not an array".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| invalid("returns row is not an array".into()))?
                .iter()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| invalid("returns entry is not a number".into()))
                })
                .collect()
        })
        .collect()
}

/// Reads a scalar-command JSON parameter file; only the four model
/// parameters are accepted, and flags override file values.
struct FileParams {
    alpha: Option<Value>,
    x0: Option<Value>,
    v_min: Option<Value>,
    v_max: Option<Value>,
}

fn load_file_params(path: Option<&PathBuf>) -> Result<FileParams> {
    let mut fp = FileParams {
        alpha: None,
        x0: None,
        v_min: None,
        v_max: None,
    };
    let Some(path) = path else { return Ok(fp) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| invalid(format!("invalid JSON in {}: {e}", path.display())))?;
    let obj = value
        .as_object()
        .ok_or_else(|| invalid(format!("{} is not a JSON object", path.display())))?;
    for (key, val) in obj {
        match key.as_str() {
            "alpha" => fp.alpha = Some(val.clone()),
            "x0" => fp.x0 = Some(val.clone()),
            "v_min" => fp.v_min = Some(val.clone()),
            "v_max" => fp.v_max = Some(val.clone()),
            other => {
                return Err(invalid(format!(
                    "unknown key {other:?} in {} (expected alpha, x0, v_min, v_max)",
                    path.display()
                )));
            }
        }
    }
    Ok(fp)
}

fn resolve_f64(
    flag: Option<f64>,
    file: Option<&Value>,
    name: &str,
    default: Option<f64>,
) -> Result<f64> {
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Some(v) = file {
        return num_from_value(v, false, name)?.as_f64();
    }
    default.ok_or_else(|| invalid(format!("missing required parameter --{name}")))
}

fn resolve_num(
    flag: Option<&String>,
    file: Option<&Value>,
    name: &str,
    exact: bool,
    default: Option<&str>,
) -> Result<Num> {
    let from_str = |s: &str| -> Result<Num> {
        if exact {
            Ok(Num::Rational(canonical_rational(s)?))
        } else {
            Ok(Num::Float(parse_f64(s, name)?))
        }
    };
    if let Some(s) = flag {
        return from_str(s);
    }
    if let Some(v) = file {
        return num_from_value(v, exact, name);
    }
    match default {
        Some(s) => from_str(s),
        None => Err(invalid(format!("missing required parameter --{name}"))),
    }
}

fn resolve_mode(mode: ModeArg, count: u64, seed: u64) -> ModeSpec {
    match mode {
        ModeArg::Exhaustive => ModeSpec::Exhaustive,
        ModeArg::Sampled => ModeSpec::Sampled { count, seed },
    }
}

/// Merges flags and parameter files into a resolved command, and picks the
/// effective output format.
pub fn resolve(command: Commands) -> Result<(Resolved, FormatArg)> {
    match command {
        Commands::Thresholds(a) => {
            let fp = load_file_params(a.params.as_ref())?;
            let resolved = Resolved::Thresholds {
                v_min: resolve_f64(a.vmin, fp.v_min.as_ref(), "vmin", None)?,
                v_max: resolve_f64(a.vmax, fp.v_max.as_ref(), "vmax", None)?,
            };
            let format = a.format.unwrap_or_else(|| resolved.default_format());
            Ok((resolved, format))
        }
        Commands::Simulate(a) => {
            let fp = load_file_params(a.params.as_ref())?;
            let exact = a.exact;
            let source = match (&a.path, a.distinguished, &a.extreme_mask) {
                (Some(list), None, None) => {
                    if a.horizon.is_some() {
                        return Err(invalid("--horizon only applies to --extreme-mask".into()));
                    }
                    let vals = list
                        .split(',')
                        .map(|tok| {
                            if exact {
                                Ok(Num::Rational(canonical_rational(tok)?))
                            } else {
                                Ok(Num::Float(parse_f64(tok, "path entry")?))
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    PathSource::Explicit(vals)
                }
                (None, Some(n), None) => {
                    if a.horizon.is_some() {
                        return Err(invalid("--horizon only applies to --extreme-mask".into()));
                    }
                    PathSource::Distinguished(n)
                }
                (None, None, Some(mask)) => {
                    let horizon = a.horizon.ok_or_else(|| {
                        invalid("--extreme-mask requires --horizon".into())
                    })?;
                    PathSource::Extreme {
                        mask: parse_mask(mask)?,
                        horizon,
                    }
                }
                _ => {
                    return Err(invalid(
                        "exactly one of --path, --distinguished, --extreme-mask is required"
                            .into(),
                    ));
                }
            };
            let resolved = Resolved::Simulate {
                exact,
                alpha: resolve_num(a.alpha.as_ref(), fp.alpha.as_ref(), "alpha", exact, None)?,
                x0: resolve_num(a.x0.as_ref(), fp.x0.as_ref(), "x0", exact, Some("1"))?,
                v_min: resolve_num(a.vmin.as_ref(), fp.v_min.as_ref(), "vmin", exact, None)?,
                v_max: resolve_num(a.vmax.as_ref(), fp.v_max.as_ref(), "vmax", exact, None)?,
                source,
                fail_on_bankruptcy: a.fail_on_bankruptcy,
            };
            let format = a.format.unwrap_or_else(|| resolved.default_format());
            Ok((resolved, format))
        }
        Commands::Verify(a) => {
            let fp = load_file_params(a.params.as_ref())?;
            let exact = a.exact;
            let mode = resolve_mode(a.mode, a.count, a.seed);
            if exact && mode != ModeSpec::Exhaustive {
                return Err(invalid("--exact requires --mode exhaustive".into()));
            }
            let default_cap = if exact {
                EXACT_HORIZON_CAP
            } else {
                DEFAULT_EXHAUSTIVE_CAP
            };
            let resolved = Resolved::Verify {
                exact,
                alpha: resolve_num(a.alpha.as_ref(), fp.alpha.as_ref(), "alpha", exact, None)?,
                x0: resolve_num(a.x0.as_ref(), fp.x0.as_ref(), "x0", exact, Some("1"))?,
                v_min: resolve_num(a.vmin.as_ref(), fp.v_min.as_ref(), "vmin", exact, None)?,
                v_max: resolve_num(a.vmax.as_ref(), fp.v_max.as_ref(), "vmax", exact, None)?,
                horizon: a.horizon,
                mode,
                cap: a.cap.unwrap_or(default_cap),
                split_depth: a.split_depth.unwrap_or(DEFAULT_SPLIT_DEPTH),
                fail_on_violation: a.fail_on_violation,
            };
            let format = a.format.unwrap_or_else(|| resolved.default_format());
            Ok((resolved, format))
        }
        Commands::GapScan(a) => {
            let fp = load_file_params(a.params.as_ref())?;
            let v_min = resolve_f64(a.vmin, fp.v_min.as_ref(), "vmin", None)?;
            let v_max = resolve_f64(a.vmax, fp.v_max.as_ref(), "vmax", None)?;
            let x0 = resolve_f64(a.x0, fp.x0.as_ref(), "x0", Some(1.0))?;
            let resolved = if a.figure2 {
                let alpha = a
                    .alpha
                    .ok_or_else(|| invalid("--figure2 requires --alpha".into()))?;
                Resolved::Figure2 {
                    alpha,
                    v_min,
                    v_max,
                    x0,
                    horizon: a.horizon,
                }
            } else {
                if a.alpha.is_some() {
                    return Err(invalid("--alpha only applies with --figure2".into()));
                }
                Resolved::GapScan {
                    v_min,
                    v_max,
                    x0,
                    horizon: a.horizon,
                    alphas: a.alphas,
                    mode: resolve_mode(a.mode, a.count, a.seed),
                    cap: a.cap.unwrap_or(DEFAULT_EXHAUSTIVE_CAP),
                    split_depth: a.split_depth.unwrap_or(DEFAULT_SPLIT_DEPTH),
                }
            };
            let format = a.format.unwrap_or_else(|| resolved.default_format());
            Ok((resolved, format))
        }
        Commands::Alphamax(a) => {
            let fp = load_file_params(a.params.as_ref())?;
            let resolved = Resolved::AlphaMax {
                v_min: resolve_f64(a.vmin, fp.v_min.as_ref(), "vmin", None)?,
                v_max: resolve_f64(a.vmax, fp.v_max.as_ref(), "vmax", None)?,
                x0: resolve_f64(a.x0, fp.x0.as_ref(), "x0", Some(1.0))?,
                horizon: a.horizon,
                tolerance: a.tol,
                cap: a.cap.unwrap_or(DEFAULT_EXHAUSTIVE_CAP),
                split_depth: a.split_depth.unwrap_or(DEFAULT_SPLIT_DEPTH),
            };
            let format = a.format.unwrap_or_else(|| resolved.default_format());
            Ok((resolved, format))
        }
        Commands::Surface(a) => {
            let resolved = Resolved::Surface {
                v_max: a.vmax,
                grid: parse_grid_spec(&a.vmin_grid)?,
            };
            let format = a.format.unwrap_or_else(|| resolved.default_format());
            Ok((resolved, format))
        }
        Commands::ClosedForm(a) => {
            let fp = load_file_params(a.params.as_ref())?;
            let resolved = Resolved::ClosedForm {
                alpha: resolve_f64(a.alpha, fp.alpha.as_ref(), "alpha", None)?,
                x0: resolve_f64(a.x0, fp.x0.as_ref(), "x0", Some(1.0))?,
                v_min: resolve_f64(a.vmin, fp.v_min.as_ref(), "vmin", None)?,
                v_max: resolve_f64(a.vmax, fp.v_max.as_ref(), "vmax", None)?,
                k_max: a.kmax,
            };
            let format = a.format.unwrap_or_else(|| resolved.default_format());
            Ok((resolved, format))
        }
        Commands::Multi(a) => {
            let text = std::fs::read_to_string(&a.params)
                .map_err(|e| invalid(format!("cannot read {}: {e}", a.params.display())))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| invalid(format!("invalid JSON in {}: {e}", a.params.display())))?;
            let obj = value
                .as_object()
                .ok_or_else(|| invalid(format!("{} is not a JSON object", a.params.display())))?;
            for key in obj.keys() {
                if key != "x0" && key != "assets" {
                    return Err(invalid(format!(
                        "unknown key {key:?} in {} (expected x0, assets)",
                        a.params.display()
                    )));
                }
            }
            let assets = obj
                .get("assets")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid("portfolio file lacks an assets array".into()))?
                .iter()
                .map(|entry| {
                    let e = entry
                        .as_object()
                        .ok_or_else(|| invalid("asset entry is not an object".into()))?;
                    for key in e.keys() {
                        if key != "alpha" && key != "v_min" && key != "v_max" {
                            return Err(invalid(format!(
                                "unknown key {key:?} in asset entry (expected alpha, v_min, v_max)"
                            )));
                        }
                    }
                    Ok(MultiAssetSpec {
                        alpha: get_f64(e, "alpha")?,
                        v_min: get_f64(e, "v_min")?,
                        v_max: get_f64(e, "v_max")?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let returns = match &a.returns {
                None => None,
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
                    let value: Value = serde_json::from_str(&text)
                        .map_err(|e| invalid(format!("invalid JSON in {}: {e}", path.display())))?;
                    Some(returns_matrix_from_value(&value)?)
                }
            };
            let resolved = Resolved::Multi {
                x0: obj
                    .get("x0")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| invalid("portfolio file lacks a numeric x0".into()))?,
                assets,
                horizon: a.horizon,
                mode: resolve_mode(a.mode, a.count, a.seed),
                cap: a.cap.unwrap_or(DEFAULT_MULTI_EXHAUSTIVE_CAP),
                returns,
            };
            let format = a.format.unwrap_or_else(|| resolved.default_format());
            Ok((resolved, format))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_expands_inclusive_of_stop() {
        let g = GridSpec {
            start: -0.95,
            stop: -0.05,
            step: 0.05,
        };
        let pts = grid_points(&g).unwrap();
        assert_eq!(pts.len(), 19);
        assert_eq!(pts[0], -0.95);
        assert!((pts[18] + 0.05).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_step_away_from_stop() {
        let g = GridSpec {
            start: -0.1,
            stop: -0.9,
            step: 0.05,
        };
        assert!(grid_points(&g).is_err());
    }

    #[test]
    fn grid_spec_parses_three_fields() {
        let g = parse_grid_spec("-0.95:-0.05:0.05").unwrap();
        assert_eq!(g.start, -0.95);
        assert_eq!(g.stop, -0.05);
        assert_eq!(g.step, 0.05);
        assert!(parse_grid_spec("-0.95:-0.05").is_err());
    }

    #[test]
    fn mask_parses_hex_and_decimal() {
        assert_eq!(parse_mask("0x1").unwrap(), 1);
        assert_eq!(parse_mask("0X2a").unwrap(), 42);
        assert_eq!(parse_mask("42").unwrap(), 42);
        assert!(parse_mask("0xzz").is_err());
    }

    #[test]
    fn params_round_trip_through_json() {
        let commands = vec![
            Resolved::Thresholds {
                v_min: -0.8,
                v_max: 0.9,
            },
            Resolved::Simulate {
                exact: false,
                alpha: Num::Float(0.54),
                x0: Num::Float(1.0),
                v_min: Num::Float(-0.8),
                v_max: Num::Float(0.9),
                source: PathSource::Extreme {
                    mask: 0x2a,
                    horizon: 8,
                },
                fail_on_bankruptcy: true,
            },
            Resolved::Simulate {
                exact: true,
                alpha: Num::Rational("27/50".into()),
                x0: Num::Rational("1".into()),
                v_min: Num::Rational("-4/5".into()),
                v_max: Num::Rational("9/10".into()),
                source: PathSource::Explicit(vec![
                    Num::Rational("9/10".into()),
                    Num::Rational("-4/5".into()),
                ]),
                fail_on_bankruptcy: false,
            },
            Resolved::Verify {
                exact: false,
                alpha: Num::Float(0.54),
                x0: Num::Float(1.0),
                v_min: Num::Float(-0.8),
                v_max: Num::Float(0.9),
                horizon: 10,
                mode: ModeSpec::Sampled { count: 5000, seed: 7 },
                cap: 30,
                split_depth: 8,
                fail_on_violation: false,
            },
            Resolved::GapScan {
                v_min: -0.8,
                v_max: 0.9,
                x0: 1.0,
                horizon: 8,
                alphas: 25,
                mode: ModeSpec::Exhaustive,
                cap: 30,
                split_depth: 8,
            },
            Resolved::Figure2 {
                alpha: 0.54,
                v_min: -0.8,
                v_max: 0.9,
                x0: 1.0,
                horizon: 6,
            },
            Resolved::AlphaMax {
                v_min: -0.8,
                v_max: 0.9,
                x0: 1.0,
                horizon: 2,
                tolerance: 1e-6,
                cap: 30,
                split_depth: 8,
            },
            Resolved::Surface {
                v_max: 2.0,
                grid: GridSpec {
                    start: -0.95,
                    stop: -0.05,
                    step: 0.05,
                },
            },
            Resolved::ClosedForm {
                alpha: 0.54,
                x0: 1.0,
                v_min: -0.8,
                v_max: 0.9,
                k_max: 12,
            },
            Resolved::Multi {
                x0: 1.0,
                assets: vec![
                    MultiAssetSpec {
                        alpha: 0.4,
                        v_min: -0.5,
                        v_max: 0.5,
                    },
                    MultiAssetSpec {
                        alpha: 0.2,
                        v_min: -0.3,
                        v_max: 0.6,
                    },
                ],
                horizon: 4,
                mode: ModeSpec::Exhaustive,
                cap: 24,
                returns: Some(vec![vec![0.1, -0.2], vec![0.0, 0.3]]),
            },
        ];
        for cmd in commands {
            let params = cmd.to_params();
            let back = Resolved::from_params(cmd.command_name(), &params).unwrap();
            assert_eq!(back, cmd);
        }
    }

    #[test]
    fn canonical_rational_normalizes_decimals() {
        assert_eq!(canonical_rational("0.54").unwrap(), "27/50");
        assert_eq!(canonical_rational("-4/5").unwrap(), "-4/5");
        assert_eq!(canonical_rational("1").unwrap(), "1");
    }
}
