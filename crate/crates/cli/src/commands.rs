use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use simplexforge::codec::{
    build_blowup, build_scheme, cycle_depth, roundtrip, standard_functions, standard_phi, DetectMode, PhiParams, QRule,
    RoundtripOptions,
};
use simplexforge::metric::FiniteMetricSpace;
use simplexforge::sext::{build_stage, Enumeration};
use simplexforge::verify::{run_suite, RawPolytope, Suite, VerifyInput};
use simplexforge::Rational;

use crate::io::{self, emit, Report};
use crate::{Command, GeometryArgs, Kind, ModeArg, OutputArgs, SuiteArg};

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Validate { path, out } => validate(&path, &out),
        Command::Build {
            path,
            kind,
            geometry,
            out,
        } => build(&path, kind, &geometry, &out),
        Command::Verify { path, suite, seed, out } => verify(path.as_deref(), suite, seed, &out),
        Command::Roundtrip {
            path,
            against,
            geometry,
            mode,
            tolerance,
            seed,
            out,
        } => cmd_roundtrip(
            &path,
            against.as_deref(),
            &geometry,
            mode,
            tolerance.as_deref(),
            seed,
            &out,
        ),
    }
}

fn finish<C: Serialize, R: Serialize>(mut report: Report<C, R>, start: Instant, out: &OutputArgs) -> Result<u8> {
    if out.timings {
        report.timings_ms = Some(start.elapsed().as_millis());
    }
    emit(&report, out.out.as_deref())?;
    Ok(if report.passed { 0 } else { 2 })
}

#[derive(Serialize)]
struct PathConfig<'a> {
    path: &'a Path,
}

#[derive(Serialize)]
struct Validation {
    points: Option<usize>,
    unit_bounded: Option<bool>,
    violation: Option<simplexforge::metric::MetricViolation>,
    message: Option<String>,
}

fn validate(path: &Path, out: &OutputArgs) -> Result<u8> {
    let start = Instant::now();
    let result = match io::read_space_unchecked(path)? {
        Ok(x) => Validation {
            points: Some(x.len()),
            unit_bounded: Some(x.is_unit_bounded()),
            violation: None,
            message: None,
        },
        Err(v) => Validation {
            points: None,
            unit_bounded: None,
            message: Some(v.to_string()),
            violation: Some(v),
        },
    };
    let passed = result.violation.is_none();
    finish(Report::new("validate", PathConfig { path }, result, passed), start, out)
}

/// Parameters as given plus the values they resolved to.
#[derive(Serialize)]
struct GeometryConfig<'a> {
    path: &'a Path,
    kind: Option<&'static str>,
    depth: Option<usize>,
    coords: Option<usize>,
    widths: &'a str,
    q_rule: &'a str,
    enumeration: Option<&'a str>,
    n: Option<usize>,
    mode: Option<&'static str>,
    tolerance: Option<&'a str>,
    seed: Option<u64>,
    against: Option<&'a Path>,
    resolved: PhiParams,
}

struct Resolved {
    x: Arc<FiniteMetricSpace>,
    d: Enumeration,
    params: PhiParams,
    coords: usize,
}

fn resolve(path: &Path, g: &GeometryArgs) -> Result<Resolved> {
    let x = Arc::new(io::read_space(path)?);
    let d = match &g.enumeration {
        Some(list) => Enumeration::new(list.split(',').map(|l| l.trim().to_string()), &x)?,
        None => Enumeration::full(&x),
    };
    let widths = io::parse_rationals(&g.widths).context("--widths")?;
    let q_rule: QRule = g.q_rule.parse().context("--q-rule")?;
    let n = g.n.unwrap_or(d.len());
    let depth = match g.depth {
        Some(depth) => depth,
        None => {
            let prefix = Enumeration::new(d.labels()[..n.min(d.len())].iter().cloned(), &x)?;
            cycle_depth(&x, &prefix, &widths)?
        }
    };
    let coords = g.coords.unwrap_or(d.len());
    let params = PhiParams {
        n: Some(n),
        k: Some(coords),
        widths,
        depth,
        q_rule,
    };
    Ok(Resolved { x, d, params, coords })
}

fn geometry_config<'a>(path: &'a Path, g: &'a GeometryArgs, resolved: PhiParams) -> GeometryConfig<'a> {
    GeometryConfig {
        path,
        kind: None,
        depth: g.depth,
        coords: g.coords,
        widths: &g.widths,
        q_rule: &g.q_rule,
        enumeration: g.enumeration.as_deref(),
        n: g.n,
        mode: None,
        tolerance: None,
        seed: None,
        against: None,
        resolved,
    }
}

fn build(path: &Path, kind: Kind, g: &GeometryArgs, out: &OutputArgs) -> Result<u8> {
    let start = Instant::now();
    let r = resolve(path, g)?;
    let mut config = geometry_config(path, g, r.params.clone());
    let result = match kind {
        Kind::Sext => {
            config.kind = Some("sext");
            let f = standard_functions(&r.x, &r.d, r.coords)?;
            serde_json::to_value(build_stage(&r.x, &r.d, &f, r.params.n.unwrap_or(r.d.len()), r.coords)?)?
        }
        Kind::Blowup => {
            config.kind = Some("blowup");
            let f = standard_functions(&r.x, &r.d, r.coords)?;
            let stage = build_stage(&r.x, &r.d, &f, r.params.n.unwrap_or(r.d.len()), r.coords)?;
            // The scheme runs over the whole enumeration, so a short stage
            // surfaces scheme points it does not contain.
            let scheme = build_scheme(&r.x, &r.d, &r.params.widths, r.params.depth)?;
            serde_json::to_value(build_blowup(&stage, &scheme)?)?
        }
        Kind::Phi => {
            config.kind = Some("phi");
            serde_json::to_value(standard_phi(&r.x, &r.d, Some(r.coords), &r.params)?)?
        }
    };
    finish(Report::new("build", config, result, true), start, out)
}

#[derive(Serialize)]
struct VerifyConfig<'a> {
    path: Option<&'a Path>,
    suite: Suite,
    seed: u64,
}

fn verify_input(path: Option<&Path>) -> Result<VerifyInput> {
    let Some(path) = path else {
        return Ok(VerifyInput::Generated);
    };
    let value: serde_json::Value =
        serde_json::from_str(&io::read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    if value.get("vertices").is_some() {
        let raw: RawPolytope = serde_json::from_value(value).context("polytope file")?;
        Ok(VerifyInput::Polytope(raw))
    } else {
        Ok(VerifyInput::Space(io::read_space(path)?))
    }
}

fn verify(path: Option<&Path>, suite: SuiteArg, seed: u64, out: &OutputArgs) -> Result<u8> {
    let start = Instant::now();
    let suite = match suite {
        SuiteArg::Geometry => Suite::Geometry,
        SuiteArg::Cones => Suite::Cones,
        SuiteArg::Sext => Suite::Sext,
        SuiteArg::Codec => Suite::Codec,
        SuiteArg::All => Suite::All,
    };
    let input = verify_input(path)?;
    let reports = run_suite(suite, &input, seed);
    let passed = reports.iter().all(|r| r.passed);
    finish(
        Report::new("verify", VerifyConfig { path, suite, seed }, reports, passed),
        start,
        out,
    )
}

fn cmd_roundtrip(
    path: &Path,
    against: Option<&Path>,
    g: &GeometryArgs,
    mode: ModeArg,
    tolerance: Option<&str>,
    seed: u64,
    out: &OutputArgs,
) -> Result<u8> {
    let start = Instant::now();
    let r = resolve(path, g)?;
    let mode = match mode {
        ModeArg::Strict => DetectMode::Strict,
        ModeArg::Labeled => DetectMode::Labeled,
    };
    let neighborhood = tolerance
        .map(|t| t.parse::<Rational>())
        .transpose()
        .context("--tolerance")?;
    let opts = RoundtripOptions {
        params: r.params.clone(),
        coords: Some(r.coords),
        mode,
        neighborhood,
        seed,
        isometric_copy: true,
    };
    let other: Option<(Arc<FiniteMetricSpace>, Enumeration)> = match against {
        Some(p) => {
            let y = Arc::new(io::read_space(p)?);
            let dy = Enumeration::full(&y);
            Some((y, dy))
        }
        None => None,
    };
    let report = roundtrip(&r.x, &r.d, &opts, other.as_ref().map(|(y, dy)| (y, dy)))?;
    let mut config = geometry_config(path, g, r.params);
    config.mode = Some(match mode {
        DetectMode::Strict => "strict",
        DetectMode::Labeled => "labeled",
    });
    config.tolerance = tolerance;
    config.seed = Some(seed);
    config.against = against;
    let passed = report.passed;
    finish(Report::new("roundtrip", config, report, passed), start, out)
}
