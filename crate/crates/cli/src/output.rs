//! Reproducibility header, JSON rendering and exit-code classification.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use wmtc_core::Error as CoreError;
use wmtc_ope::OpeError;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

/// Environment variable naming the directory that relative `--out` paths resolve against.
pub const OUT_DIR_ENV: &str = "WMTC_OUT_DIR";

/// A failure that carries its own exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VALIDATION, kind: "validation", message: message.into() }
    }

    pub fn tolerance(message: impl Into<String>) -> Self {
        Failure { code: EXIT_TOLERANCE, kind: "tolerance", message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

fn classify_core(e: &CoreError) -> (i32, &'static str) {
    match e {
        CoreError::Unsupported(_) => (EXIT_UNSUPPORTED, "unsupported"),
        CoreError::Normalization { .. }
        | CoreError::Integrality { .. }
        | CoreError::Negativity { .. }
        | CoreError::ThetaTolerance { .. }
        | CoreError::TruncationBound { .. }
        | CoreError::NoVacuum(_) => (EXIT_TOLERANCE, "tolerance"),
        _ => (EXIT_VALIDATION, "validation"),
    }
}

/// Exit code and error kind for any error raised by a command.
pub fn classify(err: &anyhow::Error) -> (i32, &'static str) {
    for cause in err.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return (f.code, f.kind);
        }
        if let Some(e) = cause.downcast_ref::<CoreError>() {
            return classify_core(e);
        }
        if let Some(e) = cause.downcast_ref::<OpeError>() {
            return match e {
                OpeError::Core(c) => classify_core(c),
                OpeError::Unsupported(_) | OpeError::UnsupportedDepth(_) => (EXIT_UNSUPPORTED, "unsupported"),
                _ => (EXIT_VALIDATION, "validation"),
            };
        }
    }
    (1, "internal")
}

pub fn error_json(err: &anyhow::Error) -> (i32, Value) {
    let (code, kind) = classify(err);
    let chain: Vec<String> = err.chain().skip(1).map(|c| c.to_string()).collect();
    let body = json!({ "error": { "kind": kind, "exit_code": code, "message": err.to_string(), "causes": chain } });
    (code, body)
}

/// Config echo plus library version, embedded in every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
}

impl Header {
    pub fn new(command: &str, config: Value) -> Self {
        Header { tool: "wmtc", version: env!("CARGO_PKG_VERSION"), command: command.into(), config }
    }
}

/// Rounds to 12 significant digits so numeric artifacts are stable across summation orders.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [sig12(z.re), sig12(z.im)]
}

/// `"num/den"` with the denominator always present.
pub fn ratio_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes `text` to `out` (resolved against the output directory) or to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            let p = resolve_out(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            std::fs::write(&p, format!("{text}\n")).with_context(|| format!("writing {}", p.display()))
        }
        None => print_stdout(text),
    }
}

/// Prints a line, treating a closed pipe as success.
pub fn print_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.context("writing to stdout"),
    }
}

pub fn emit_json(out: Option<&Path>, value: &Value) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}
