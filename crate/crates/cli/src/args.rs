use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fractal_dirac::DEFAULT_WORD_BUDGET;

#[derive(Debug, Parser)]
#[command(
    name = "fractal-dirac",
    version,
    about = "Spectral triples, traces and index pairings for self-similar cube fractals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension, components, traces and nonvanishing certificate in one report.
    Analyze(AnalyzeArgs),
    /// SVG of the first construction steps.
    Render(RenderArgs),
    /// Run the numerical self-checks and fail on any violation.
    Verify(VerifyArgs),
    /// Index pairing with a projection, or the nonvanishing certificate.
    Pairing(PairingArgs),
    /// Integrate a function against the self-similar Hausdorff measure.
    Integrate(IntegrateArgs),
}

/// Where the iterated function system comes from.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in system, e.g. cantor_dust(2), carpet, menger, rotation(0.5).
    #[arg(long)]
    pub preset: Option<String>,
    /// IFS description in JSON.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Run {
    /// Seed of the single generator behind every random choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of placed cubes a computation may visit.
    #[arg(long, env = "FRACTAL_DIRAC_BUDGET", default_value_t = DEFAULT_WORD_BUDGET)]
    pub budget: u64,
    /// Treat a loaded system as satisfying the open set condition.
    #[arg(long)]
    pub assume_osc: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// `-p` value: a number or `auto` for the similarity dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Auto,
    Value(f64),
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Exponent::Auto);
        }
        match s.parse::<f64>() {
            Ok(p) if p.is_finite() && p > 0.0 => Ok(Exponent::Value(p)),
            _ => Err(format!("expected a positive number or `auto`, got `{s}`")),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Auto => f.write_str("auto"),
            Exponent::Value(p) => write!(f, "{p}"),
        }
    }
}

impl Exponent {
    pub fn resolve(self, dim_s: f64) -> f64 {
        match self {
            Exponent::Auto => dim_s,
            Exponent::Value(p) => p,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// Exponent for the zeta values.
    #[arg(short = 'p', long = "exponent", default_value = "auto")]
    pub exponent: Exponent,
    #[command(flatten)]
    pub output: Output,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// SVG destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Picture width and height in pixels.
    #[arg(long, default_value_t = 600.0)]
    pub size: f64,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Largest cube dimension in the Clifford suite.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=10))]
    pub max_n: u32,
    #[command(flatten)]
    pub output: Output,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "FRACTAL_DIRAC_BUDGET", default_value_t = DEFAULT_WORD_BUDGET)]
    pub budget: u64,
    /// Negative control: flip one sign of G_3 before the unitarity check.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PairingArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// JSON projection: a list of boxes whose union is the support.
    #[arg(long, conflicts_with = "k")]
    pub projection: Option<PathBuf>,
    /// Use the indicator of [0, 3^-k] (one-dimensional systems).
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of trailing equal partial sums required for stabilization.
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[command(flatten)]
    pub output: Output,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Clone, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// Integrand: one, sum, prod, norm2 or x1, x2, ...
    #[arg(long, default_value = "x1")]
    pub function: Integrand,
    /// Exponent for the weighted functional.
    #[arg(short = 'p', long = "exponent", default_value = "auto")]
    pub exponent: Exponent,
    #[arg(long, value_enum, default_value_t = Mode::Deterministic)]
    pub mode: Mode,
    /// Chaos-game sample count.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[command(flatten)]
    pub output: Output,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Deterministic,
    ChaosGame,
    Both,
}

/// Closed-form integrands selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrand {
    One,
    Sum,
    Prod,
    Norm2,
    Coordinate(usize),
}

impl FromStr for Integrand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one" => Ok(Integrand::One),
            "sum" => Ok(Integrand::Sum),
            "prod" => Ok(Integrand::Prod),
            "norm2" => Ok(Integrand::Norm2),
            _ => s
                .strip_prefix('x')
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(Integrand::Coordinate)
                .ok_or_else(|| format!("unknown integrand `{s}`")),
        }
    }
}

impl fmt::Display for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integrand::One => f.write_str("one"),
            Integrand::Sum => f.write_str("sum"),
            Integrand::Prod => f.write_str("prod"),
            Integrand::Norm2 => f.write_str("norm2"),
            Integrand::Coordinate(k) => write!(f, "x{k}"),
        }
    }
}

impl Integrand {
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Integrand::One => 1.0,
            Integrand::Sum => x.iter().sum(),
            Integrand::Prod => x.iter().product(),
            Integrand::Norm2 => x.iter().map(|t| t * t).sum(),
            Integrand::Coordinate(k) => x[k - 1],
        }
    }
}
