use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod io;

/// Build, verify, decode and round-trip coded polytopes over finite metric
/// spaces, with exact rational arithmetic throughout.
#[derive(Debug, Parser)]
#[command(name = "simplexforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a metric-space file holds a metric.
    Validate {
        path: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a stage, blow-up or Φ polytope and print it as JSON.
    Build {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Phi)]
        kind: Kind,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run named invariant suites on a generated corpus or on one input file.
    Verify {
        path: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build Φ, decode every pair, and compare against an isometric copy.
    Roundtrip {
        path: PathBuf,
        /// A second space to compare against.
        #[arg(long)]
        against: Option<PathBuf>,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        /// Apex matching radius for the decoder (default: half the smallest
        /// base separation).
        #[arg(long)]
        tolerance: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Sext,
    Blowup,
    Phi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Geometry,
    Cones,
    Sext,
    Codec,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Strict,
    Labeled,
}

#[derive(Debug, Args)]
struct GeometryArgs {
    /// Scheme depth; defaults to one full cycle.
    #[arg(long)]
    depth: Option<usize>,
    /// Stage coordinates; defaults to the enumeration size.
    #[arg(long)]
    coords: Option<usize>,
    /// Dyadic window widths, comma separated.
    #[arg(long, default_value = "1/2,1/4,1/8")]
    widths: String,
    /// Window fractions for marker values, or `quartiles`.
    #[arg(long = "q-rule", default_value = "quartiles")]
    q_rule: String,
    /// Enumeration order, comma separated labels; defaults to file order.
    #[arg(long)]
    enumeration: Option<String>,
    /// Stage size; defaults to the enumeration size.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = io::configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(3);
    }
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(io::exit_code(&e))
        }
    }
}
