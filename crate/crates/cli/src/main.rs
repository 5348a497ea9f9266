//! Command-line front end for the positivity analysis library.
//!
//! Every run writes a metadata object (tool version, resolved parameters,
//! seed, numeric mode) alongside the result; `--replay` re-runs a stored
//! output file and reproduces it byte for byte. Exit codes: 0 = analysis
//! completed, 1 = validation error, 2 = cap refusal, 3 = a fail-on flag
//! observed its condition.

mod cmds;
mod exec;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use positivity_core::Result;
use serde_json::{json, Value};

use cmds::{invalid, Commands, FormatArg, Resolved};
use exec::Body;

#[derive(Debug, Parser)]
#[command(
    name = "positivity",
    version,
    about = "Positivity analysis for a delayed-feedback trading recursion"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Commands>,
    /// Re-run a stored output file and emit byte-identical output.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
    /// Write output to this file instead of stdout.
    #[arg(long, value_name = "FILE", global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel search (0 = library default); results do
    /// not depend on this.
    #[arg(long, value_name = "N", global = true, default_value_t = 0)]
    threads: usize,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors; anything else is a
            // validation failure under the exit-code contract.
            let code = i32::from(err.use_stderr());
            let _ = err.print();
            return code;
        }
    };
    if cli.threads > 0 {
        // Ignore a second initialization: the pool can only be set once per
        // process and the first setting wins.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let outcome = match (cli.command, &cli.replay) {
        (Some(_), Some(_)) => Err(invalid(
            "--replay cannot be combined with a subcommand".into(),
        )),
        (None, None) => Err(invalid(
            "a subcommand or --replay is required; see --help".into(),
        )),
        (Some(command), None) => run_command(command),
        (None, Some(path)) => run_replay(path),
    };
    match outcome {
        Ok((output, exit)) => {
            if let Some(path) = &cli.out {
                if let Err(err) = std::fs::write(path, &output) {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    return 1;
                }
            } else {
                print!("{output}");
                let _ = std::io::stdout().flush();
            }
            exit
        }
        Err(err) => {
            eprintln!("error: {err}");
            exec::exit_code_for(&err)
        }
    }
}

fn run_command(command: Commands) -> Result<(String, i32)> {
    let (resolved, format) = cmds::resolve(command)?;
    let outcome = exec::execute(&resolved, format)?;
    let meta = metadata_value(&resolved, format);
    Ok((render_output(&meta, outcome.body), outcome.exit))
}

/// Re-runs the command recorded in a stored output file. The stored metadata
/// is re-emitted verbatim, so a successful replay is byte-identical.
fn run_replay(path: &Path) -> Result<(String, i32)> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| invalid(format!("cannot read {}: {err}", path.display())))?;
    let meta = extract_metadata(&text)?;
    let command = meta
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid("metadata lacks a command name".into()))?;
    let format = FormatArg::from_name(
        meta.get("format")
            .and_then(Value::as_str)
            .ok_or_else(|| invalid("metadata lacks a format".into()))?,
    )?;
    let params = meta
        .get("params")
        .ok_or_else(|| invalid("metadata lacks params".into()))?;
    let resolved = Resolved::from_params(command, params)?;
    let outcome = exec::execute(&resolved, format)?;
    Ok((render_output(&meta, outcome.body), outcome.exit))
}

/// The reproducibility contract: everything needed to re-run lives here.
fn metadata_value(resolved: &Resolved, format: FormatArg) -> Value {
    json!({
        "command": resolved.command_name(),
        "format": format.name(),
        "numeric_mode": resolved.numeric_mode(),
        "params": resolved.to_params(),
        "seed": resolved.seed(),
        "tool": "positivity",
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn render_output(meta: &Value, body: Body) -> String {
    match body {
        Body::Json(result) => {
            let envelope = json!({ "metadata": meta, "result": result });
            let mut text =
                serde_json::to_string_pretty(&envelope).expect("envelope serializes to JSON");
            text.push('\n');
            text
        }
        Body::Csv(rows) => {
            let compact = serde_json::to_string(meta).expect("metadata serializes to JSON");
            format!("# metadata: {compact}\n{rows}")
        }
    }
}

/// Pulls the metadata object out of a stored run: either the `metadata` key
/// of a JSON envelope or the `# metadata:` comment line of a CSV.
fn extract_metadata(text: &str) -> Result<Value> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let envelope: Value = serde_json::from_str(trimmed)
            .map_err(|err| invalid(format!("stored file is not valid JSON: {err}")))?;
        envelope
            .get("metadata")
            .cloned()
            .ok_or_else(|| invalid("stored JSON has no metadata object".into()))
    } else {
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# metadata: ") {
                return serde_json::from_str(rest)
                    .map_err(|err| invalid(format!("stored metadata is not valid JSON: {err}")));
            }
        }
        Err(invalid("stored file has no metadata line".into()))
    }
}
