use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use simplexforge::metric::{validate_metric, FiniteMetricSpace, MetricViolation};
use simplexforge::Rational;

pub const THREADS_ENV: &str = "SIMPLEXFORGE_THREADS";

/// Caps the rayon pool at `SIMPLEXFORGE_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV}={raw:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

/// Exit-code contract: 2 domain violation, 3 I/O or parse, 4 guard exceeded.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<simplexforge::Error>() {
            return err.exit_code() as u8;
        }
        if cause.is::<serde_json::Error>() || cause.is::<std::io::Error>() {
            return 3;
        }
    }
    2
}

#[derive(Deserialize)]
struct RawSpace {
    labels: Vec<String>,
    d: Vec<Vec<Rational>>,
    #[serde(default)]
    unit_bounded: bool,
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Parses a metric-space file without rejecting non-metrics.
pub fn read_space_unchecked(path: &Path) -> Result<std::result::Result<FiniteMetricSpace, MetricViolation>> {
    let raw: RawSpace =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(validate_metric(raw.labels, raw.d, raw.unit_bounded))
}

pub fn read_space(path: &Path) -> Result<FiniteMetricSpace> {
    Ok(read_space_unchecked(path)?.map_err(simplexforge::Error::from)?)
}

pub fn parse_rationals(list: &str) -> Result<Vec<Rational>> {
    list.split(',')
        .map(|p| p.trim().parse::<Rational>().map_err(anyhow::Error::from))
        .collect()
}

#[derive(Serialize)]
pub struct Report<C: Serialize, R: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: C,
    pub result: R,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<u128>,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(command: &'static str, config: C, result: R, passed: bool) -> Self {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config,
            result,
            passed,
            timings_ms: None,
        }
    }
}

/// Pretty JSON with a trailing newline, to `out` or stdout.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
