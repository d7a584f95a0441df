use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "schrodinger-lab",
    version,
    about = "Semidiscrete Schrödinger scheme experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conservative mixed-norm ratio on data concentrated near N/4.
    Blowup(BlowupArgs),
    /// Conservative scheme on spectrally filtered random data.
    Filter(FilterArgs),
    /// Viscous scheme on full-spectrum random data.
    Viscous(ViscousArgs),
    /// Exponent sequence and gap bounds for filtered data.
    Gaps(GapsArgs),
    /// Minimum pair ratio against the explicit floor.
    Pairbound(PairboundArgs),
    /// Solution snapshots and the discrete symbol.
    Simulate(SimulateArgs),
    /// Oracle-equivalence and proven-inequality suites.
    Selftest(SelftestArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Blowup(_) => "blowup",
            Command::Filter(_) => "filter",
            Command::Viscous(_) => "viscous",
            Command::Gaps(_) => "gaps",
            Command::Pairbound(_) => "pairbound",
            Command::Simulate(_) => "simulate",
            Command::Selftest(_) => "selftest",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Directory for CSV and summary files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct Tolerances {
    /// Allowed growth of per-N maxima over the two smallest N.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-growth",
        default_value_t = 1.3
    )]
    pub growth: f64,
    /// Allowed relative spread of per-N maxima for filtered data.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-spread",
        default_value_t = 0.30
    )]
    pub spread: f64,
    /// Half-width of the accepted slope window, relative to alpha/4.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-slope-window",
        default_value_t = 0.5
    )]
    pub slope_window: f64,
    /// Required ratio(N_max)/ratio(N_min) on the blow-up data.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-blowup-growth",
        default_value_t = 1.2
    )]
    pub blowup_growth: f64,
    /// Allowed max/min of the resonant phase constant across N.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-mechanism",
        default_value_t = 1.5
    )]
    pub mechanism: f64,
    /// Relative slack in the resonant lower bound.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-lower-bound",
        default_value_t = 1e-9
    )]
    pub lower_bound: f64,
    /// Relative slack in the gap inequality.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-gap",
        default_value_t = 1e-9
    )]
    pub gap: f64,
    /// Absolute slack below the pair-bound floor.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-pair",
        default_value_t = 1e-6
    )]
    pub pair: f64,
    /// Allowed viscous growth on the blow-up data.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-viscous-contrast",
        default_value_t = 1.1
    )]
    pub viscous_contrast: f64,
    /// Required conservative growth on the blow-up data.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-conservative-growth",
        default_value_t = 1.15
    )]
    pub conservative_growth: f64,
}

impl Tolerances {
    pub fn thresholds(&self) -> schrodinger_lab::experiments::Thresholds {
        schrodinger_lab::experiments::Thresholds {
            spread: self.spread,
            mechanism_spread: self.mechanism,
            growth: self.growth,
            slope_window: self.slope_window,
            blowup_growth: self.blowup_growth,
            gap_slack: self.gap,
            pair_slack: self.pair,
            lower_bound_slack: self.lower_bound,
            viscous_contrast: self.viscous_contrast,
            conservative_growth: self.conservative_growth,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BlowupArgs {
    #[arg(allow_negative_numbers = true, long, default_value_t = 0.3)]
    pub alpha: f64,
    #[arg(
        long = "N",
        value_delimiter = ',',
        default_value = "128,256,512,1024,2048,4096"
    )]
    pub ns: Vec<usize>,
    #[arg(allow_negative_numbers = true, long = "T", default_value_t = 1.0)]
    pub t_end: f64,
    #[command(flatten)]
    pub out: Output,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    #[arg(allow_negative_numbers = true, long, default_value_t = 0.2)]
    pub lambda: f64,
    /// Keep modes at distance >= epsilon*N from ±N/4 instead of |n| <= lambda*N.
    #[arg(allow_negative_numbers = true, long)]
    pub epsilon: Option<f64>,
    #[arg(long = "N", value_delimiter = ',', default_value = "128,256,512,1024")]
    pub ns: Vec<usize>,
    #[arg(allow_negative_numbers = true, long = "T", default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct ViscousArgs {
    /// Viscosity a = c*h.
    #[arg(
        allow_negative_numbers = true,
        long = "visc-c",
        conflicts_with = "visc_beta"
    )]
    pub visc_c: Option<f64>,
    /// Exploratory viscosity a = h^beta, beta > 1.
    #[arg(allow_negative_numbers = true, long = "visc-beta")]
    pub visc_beta: Option<f64>,
    /// Also run the blow-up datum through both schemes.
    #[arg(long = "blowup-data")]
    pub blowup_data: bool,
    /// Window exponent of the blow-up datum.
    #[arg(allow_negative_numbers = true, long, default_value_t = 0.3)]
    pub alpha: f64,
    #[arg(long = "N", value_delimiter = ',', default_value = "128,256,512,1024")]
    pub ns: Vec<usize>,
    #[arg(allow_negative_numbers = true, long = "T", default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct GapsArgs {
    #[arg(long = "N", value_delimiter = ',', default_value = "64,128,256,512")]
    pub ns: Vec<usize>,
    #[arg(allow_negative_numbers = true, long, default_value_t = 0.2)]
    pub lambda: f64,
    /// Single resonance level; writes the full profile (requires one N).
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<i64>,
    #[command(flatten)]
    pub out: Output,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct PairboundArgs {
    #[arg(long = "N", value_delimiter = ',', default_value = "64,128,256")]
    pub ns: Vec<usize>,
    /// Single level; all 0 <= r <= N/4 when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<i64>,
    #[command(flatten)]
    pub out: Output,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long = "N", default_value_t = 500)]
    pub n: usize,
    /// Window exponent of the blow-up datum; ignored with --seed.
    #[arg(allow_negative_numbers = true, long, default_value_t = 0.25)]
    pub alpha: f64,
    /// Use unit-norm full-spectrum random data with this seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Viscosity a = c*h; conservative when omitted.
    #[arg(allow_negative_numbers = true, long = "visc-c")]
    pub visc_c: Option<f64>,
    #[arg(allow_negative_numbers = true, long = "T", default_value_t = 0.0)]
    pub t_end: f64,
    /// Snapshots evenly spaced on [0, T].
    #[arg(long, default_value_t = 1)]
    pub frames: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Relative tolerance for analytic vs quadrature.
    #[arg(
        allow_negative_numbers = true,
        long = "tol-oracle",
        default_value_t = 1e-6
    )]
    pub oracle: f64,
    /// Random data sets per N in the oracle comparison.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
    #[command(flatten)]
    pub tol: Tolerances,
}
