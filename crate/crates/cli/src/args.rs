//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multispin::SpinMagnitude;

#[derive(Debug, Parser)]
#[command(name = "multispin", version, about = "Multipartite spin-J nonlocality criteria, figures and oracle checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimized CFRD ratio L/R against N for one spin magnitude.
    Fig2(Fig2Args),
    /// Squeezing of the two-mode BEC ground state against Ng/κ.
    Fig4(Fig4Args),
    /// BEC points in the (⟨J^X⟩/J, Δ²J^Z/J) plane with their depth of entanglement.
    Fig6(Fig6Args),
    /// C_J table and F_J curves.
    Bounds(BoundsArgs),
    /// GHZ MABK moments with optimized settings against every threshold.
    Mabk(MabkArgs),
    /// Optimized CFRD amplitudes for one N.
    Cfrd(CfrdArgs),
    /// Oracle maxima against analytic bounds; exits 2 on any disagreement.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Number of trusted sites: a named mode or an explicit count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TMode {
    /// `T = 0`.
    Bell,
    /// `T = 1`.
    Steer,
    /// `T = N`.
    Ent,
    Count(usize),
}

impl TMode {
    pub fn resolve(self, n: usize) -> Option<usize> {
        match self {
            TMode::Bell => Some(0),
            TMode::Steer => Some(1),
            TMode::Ent => Some(n),
            TMode::Count(t) => (t <= n).then_some(t),
        }
    }

    pub fn label(self) -> String {
        match self {
            TMode::Bell => "bell".into(),
            TMode::Steer => "steer".into(),
            TMode::Ent => "ent".into(),
            TMode::Count(t) => t.to_string(),
        }
    }
}

pub fn parse_t(s: &str) -> Result<TMode, String> {
    match s {
        "bell" => Ok(TMode::Bell),
        "steer" => Ok(TMode::Steer),
        "ent" => Ok(TMode::Ent),
        _ => s.parse().map(TMode::Count).map_err(|_| format!("expected bell, steer, ent or a count, got `{s}`")),
    }
}

/// Accepts `1/2`, `3/2`, `0.5`, `1`.
pub fn parse_spin(s: &str) -> Result<SpinMagnitude, String> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| format!("bad spin `{s}`"))?;
            let den: f64 = den.trim().parse().map_err(|_| format!("bad spin `{s}`"))?;
            num / den
        }
        None => s.trim().parse().map_err(|_| format!("bad spin `{s}`"))?,
    };
    SpinMagnitude::new(value).map_err(|_| format!("spin must be a positive half-integer, got `{s}`"))
}

#[derive(Clone, Debug, Args)]
pub struct Fig2Args {
    /// Spin per site: 1/2 or 1.
    #[arg(long, value_parser = parse_spin, default_value = "1/2")]
    pub j: SpinMagnitude,
    /// Largest N (≤ 20).
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Trusted sites; all of bell, steer and ent when absent.
    #[arg(long, value_parser = parse_t)]
    pub t: Option<TMode>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct Fig4Args {
    /// Number of atoms (≤ 5000).
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Largest Ng/κ.
    #[arg(long, default_value_t = 200.0)]
    pub g_max: f64,
    /// Grid points: 0 followed by a geometric ramp from 0.01 to g-max.
    #[arg(long, default_value_t = 60)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct Fig6Args {
    /// Comma-separated atom numbers (each ≤ 5000).
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 50, 100])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 200.0)]
    pub g_max: f64,
    #[arg(long, default_value_t = 60)]
    pub grid: usize,
    /// Samples per F_J curve in the depth bank.
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct BoundsArgs {
    /// Largest spin (≤ 4).
    #[arg(long, value_parser = parse_spin, default_value = "4")]
    pub j: SpinMagnitude,
    /// Samples per F_J curve.
    #[arg(long, default_value_t = multispin::DEFAULT_FJ_SAMPLES)]
    pub samples: usize,
    /// Points of the shared x grid the curves are reported on.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct MabkArgs {
    /// Largest N (≤ 20).
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Trusted sites; every T when absent.
    #[arg(long, value_parser = parse_t)]
    pub t: Option<TMode>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct CfrdArgs {
    /// Number of sites (2…20).
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Spin per site (≤ 4).
    #[arg(long, value_parser = parse_spin, default_value = "1/2")]
    pub j: SpinMagnitude,
    /// Trusted sites; every T when absent.
    #[arg(long, value_parser = parse_t)]
    pub t: Option<TMode>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    /// Largest N (2…8).
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Restrict the hybrid sweep to one T.
    #[arg(long, value_parser = parse_t)]
    pub t: Option<TMode>,
    /// Random states per spin in the C_J check.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = multispin::oracle::DEFAULT_SEED)]
    pub seed: u64,
    /// Scales the first analytic bound by 1.5 to exercise the failure path.
    #[arg(long, hide = true)]
    pub corrupt_bound: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}
