//! Command-line front end: `run` verification suites and `eval` expressions.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constraints::PhaseSpace;
use crate::dfra::DfraAlgebra;
use crate::error::{Error, Result};
use crate::suites::{self, CheckRecord, Params, Suite};
use crate::symcore::parse;

pub const REPORT_SCHEMA: &str = "dfra-report/1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "dfra",
    version,
    about = "Verification toolkit for the extended noncommutative phase space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// Quantum commutators of the operator algebra.
    Dfra,
    /// Canonical Poisson brackets of the extended phase space.
    Poisson,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run verification suites and emit a report.
    Run {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Parameter override `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Flat `key = value` file; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Normal-order an expression; `[a, b]` denotes the bracket.
    Eval {
        expression: String,
        #[arg(long = "dim", short = 'D', default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        relativistic: bool,
        #[arg(long, value_enum, default_value = "dfra")]
        table: TableKind,
    },
}

#[derive(Serialize)]
struct RecordOut<'a> {
    #[serde(flatten)]
    record: &'a CheckRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<f64>,
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    version: &'static str,
    suite: Suite,
    seed: u64,
    timestamp: u64,
    params: &'a Params,
    records: Vec<RecordOut<'a>>,
    summary: Summary,
}

/// Applies a flat `key = value` config; `#` starts a comment.
pub fn apply_config(params: &mut Params, text: &str) -> Result<()> {
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("config line {}: expected key = value", n + 1))
        })?;
        params.set(k.trim(), v.trim())?;
    }
    Ok(())
}

fn split_kv(s: &str) -> Result<(&str, &str)> {
    s.split_once('=')
        .ok_or_else(|| Error::InvalidArgument(format!("`--set {s}` is not key=value")))
}

pub fn render_json(suite: Suite, params: &Params, records: &[CheckRecord]) -> Result<String> {
    let passed = records.iter().filter(|r| r.passed).count();
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let report = Report {
        schema: REPORT_SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        suite,
        seed: params.seed,
        timestamp,
        params,
        records: records
            .iter()
            .map(|r| RecordOut {
                record: r,
                runtime_ms: params.timings.then_some(r.runtime.as_secs_f64() * 1e3),
            })
            .collect(),
        summary: Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
        },
    };
    let mut s = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render_text(params: &Params, records: &[CheckRecord]) -> String {
    let mut s = String::new();
    for r in records {
        let status = if r.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!(
            "{status} [{}] {}: residual {:.3e} (tolerance {:.1e}) <{}>",
            r.suite, r.name, r.residual, r.tolerance, r.reference
        ));
        if params.timings {
            s.push_str(&format!(" {:.1} ms", r.runtime.as_secs_f64() * 1e3));
        }
        if let Some(d) = &r.detail {
            s.push_str(&format!(" error: {d}"));
        }
        s.push('\n');
    }
    let passed = records.iter().filter(|r| r.passed).count();
    s.push_str(&format!("{passed}/{} checks passed\n", records.len()));
    s
}

/// Writes via a temporary sibling and a rename so readers never see a
/// partial report.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Evaluates `src` against the selected table and returns its normal form.
pub fn eval_expression(
    src: &str,
    dim: usize,
    relativistic: bool,
    table: TableKind,
) -> Result<String> {
    let e = match table {
        TableKind::Dfra => {
            let alg = DfraAlgebra::build(dim, relativistic)?;
            parse(src, Some(alg.table()))?
        }
        TableKind::Poisson => {
            let ps = PhaseSpace::new(dim, relativistic)?;
            ps.parse(src)?
        }
    };
    Ok(e.to_string())
}

fn run_command(
    suite: Suite,
    set: &[String],
    format: Format,
    out: Option<&Path>,
    seed: Option<u64>,
    samples: Option<usize>,
    config: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let mut params = Params::default();
    if let Some(path) = config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidArgument(format!("cannot read config {}: {e}", path.display()))
        })?;
        apply_config(&mut params, &text)?;
    }
    for kv in set {
        let (k, v) = split_kv(kv)?;
        params.set(k, v)?;
    }
    if let Some(s) = seed {
        params.seed = s;
    }
    if let Some(n) = samples {
        params.samples = n;
    }
    params.validate()?;
    let records = suites::run(suite, &params)?;
    let body = match format {
        Format::Json => render_json(suite, &params, &records)?,
        Format::Text => render_text(&params, &records),
    };
    match out {
        Some(p) => write_atomic(p, &body)
            .map_err(|e| Error::Io(format!("writing {}: {e}", p.display())))?,
        None => stdout.write_all(body.as_bytes())?,
    }
    let failed: Vec<&CheckRecord> = records.iter().filter(|r| !r.passed).collect();
    for r in &failed {
        writeln!(
            stderr,
            "failed: [{}] {} (residual {:e}, tolerance {:e})",
            r.suite, r.name, r.residual, r.tolerance
        )?;
    }
    Ok(if failed.is_empty() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

/// Full entry point; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run {
            suite,
            set,
            format,
            out,
            seed,
            samples,
            config,
        } => run_command(
            *suite,
            set,
            *format,
            out.as_deref(),
            *seed,
            *samples,
            config.as_deref(),
            stdout,
            stderr,
        ),
        Command::Eval {
            expression,
            dim,
            relativistic,
            table,
        } => eval_expression(expression, *dim, *relativistic, *table).and_then(|s| {
            writeln!(stdout, "{s}")?;
            Ok(EXIT_PASS)
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Io(_) | Error::Numerical(_) | Error::NonTerminating(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut full = vec!["dfra"];
        full.extend_from_slice(args);
        let code = main_with(full, &mut o, &mut e);
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn eval_examples() {
        assert_eq!(call(&["eval", "[x[1], x[2]]"]).1.trim(), "i*theta[1,2]");
        assert_eq!(call(&["eval", "[p[1], p[2]]"]).1.trim(), "0");
        assert_eq!(call(&["eval", "[x[1], pi[1,2]]"]).1.trim(), "-(1/2)i*p[2]");
        assert_eq!(
            call(&["eval", "--table", "poisson", "[x[1], p[1]]"])
                .1
                .trim(),
            "1"
        );
        let (code, _, err) = call(&["eval", "x[1] + * p[1]"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains('7'), "{err}");
        assert_eq!(call(&["eval", "q[1]"]).0, EXIT_USAGE);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["run", "--suite", "nope"]).0, EXIT_USAGE);
        assert_eq!(
            call(&["run", "--suite", "reps", "--set", "bogus=1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            call(&["run", "--suite", "reps", "--set", "trials"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_PASS);
    }

    #[test]
    fn config_precedence() {
        let mut p = Params::default();
        apply_config(&mut p, "# comment\ntrials = 7\nseed=9 # trailing\n\n").unwrap();
        assert_eq!((p.trials, p.seed), (7, 9));
        assert!(apply_config(&mut p, "nonsense").is_err());
        assert!(apply_config(&mut p, "colour = red").is_err());
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.cfg");
        std::fs::write(&cfg, "trials = 1\nseed = 5\n").unwrap();
        let out = dir.path().join("r.json");
        let (code, _, _) = call(&[
            "run",
            "--suite",
            "reps",
            "--format",
            "json",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "6",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_PASS);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["seed"], 6);
        assert_eq!(v["params"]["trials"], 1);
        assert_eq!(v["schema"], REPORT_SCHEMA);
        assert!(v["records"][0].get("runtime_ms").is_none());
    }

    #[test]
    fn text_report_lists_checks() {
        let (code, out, _) = call(&[
            "run",
            "--suite",
            "reps",
            "--set",
            "trials=2",
            "--set",
            "timings=true",
        ]);
        assert_eq!(code, EXIT_PASS);
        assert!(out
            .lines()
            .all(|l| l.starts_with("PASS") || l.ends_with("checks passed")));
        assert!(out.contains(" ms"));
    }
}
