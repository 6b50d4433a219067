use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pwalk_core::Memory;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "pwalk",
    version,
    about = "Random walks perturbed at the extrema of their memory window"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Simulate one trajectory; CSV columns step,position.
    Simulate(SimulateArgs),
    /// Exact speed, recurrence class and CLT variance of the window chain.
    Exact(ExactArgs),
    /// Exit-time table of the range process (infinite memory).
    Hitting(HittingArgs),
    /// Monte Carlo range times and top-exit frequencies (infinite memory).
    Range(RangeArgs),
    /// Coupled runs checking the monotone dominance constructions.
    Couple(CoupleArgs),
    /// Exhaustive comparison of the perturbed and cookie path laws.
    CookieCheck(CookieArgs),
    /// Empirical CLT: standardized endpoints against Normal(0, sigma^2).
    Clt(CltArgs),
    /// Speed as a function of the window length.
    Sweep(SweepArgs),
    /// Data behind the three figures (fig1.csv, fig2.csv, fig3.csv).
    FigData(FigArgs),
    /// Rerun the command recorded in a manifest.
    Replay(ReplayArgs),
}

/// `--L` value: a window length or `inf`.
pub fn parse_memory(s: &str) -> Result<Memory, String> {
    match s.trim() {
        "inf" | "infinite" => Ok(Memory::Infinite),
        v => match v.parse::<usize>() {
            Ok(l) if (1..=64).contains(&l) => Ok(Memory::Finite(l)),
            _ => Err(format!("L must be an integer in 1..=64 or \"inf\", got {v:?}")),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Bias {
    /// Step-up probability at a local maximum, in (0,1).
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    /// Step-up probability at a local minimum, in (0,1).
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (standard output when absent). The manifest is written
    /// next to it as `<out>.manifest.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub bias: Bias,
    /// Window length or "inf".
    #[arg(long = "L", value_parser = parse_memory)]
    pub l: Memory,
    #[arg(long, default_value_t = 1000)]
    pub steps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replica stream index.
    #[arg(long, default_value_t = 0)]
    pub replica: u64,
    /// Record every k-th position.
    #[arg(long, default_value_t = 1)]
    pub thin: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ExactArgs {
    #[command(flatten)]
    pub bias: Bias,
    #[arg(long = "L", value_parser = parse_memory)]
    pub l: Memory,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HittingArgs {
    #[command(flatten)]
    pub bias: Bias,
    /// Largest range value.
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    /// Must be "inf" (the range analysis is for infinite memory).
    #[arg(long = "L", value_parser = parse_memory, default_value = "inf")]
    pub l: Memory,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RangeArgs {
    #[command(flatten)]
    pub bias: Bias,
    /// Range target.
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    #[arg(long = "L", value_parser = parse_memory, default_value = "inf")]
    pub l: Memory,
    #[arg(long, default_value_t = 10_000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingKindArg {
    Window,
    Position,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CoupleArgs {
    #[command(flatten)]
    pub bias: Bias,
    #[arg(long = "L", value_parser = parse_memory)]
    pub l: Memory,
    #[arg(long, value_enum)]
    pub kind: CouplingKindArg,
    /// Comparison chain p; defaults to the pairing of the construction.
    #[arg(long = "p2")]
    pub p2: Option<f64>,
    #[arg(long = "q2")]
    pub q2: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub steps: u64,
    /// Number of independent coupled runs.
    #[arg(long, default_value_t = 1000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OriginArg {
    Stacked,
    Empty,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CookieArgs {
    #[command(flatten)]
    pub bias: Bias,
    /// Path length T (at most 10).
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    #[arg(long = "L", value_parser = parse_memory, default_value = "inf")]
    pub l: Memory,
    #[arg(long, value_enum, default_value_t = OriginArg::Stacked)]
    pub origin: OriginArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CltArgs {
    #[command(flatten)]
    pub bias: Bias,
    #[arg(long = "L", value_parser = parse_memory)]
    pub l: Memory,
    /// Horizon n (at least 1000).
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    #[arg(long, default_value_t = 2000)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit the standardized samples instead of the summary row.
    #[arg(long)]
    pub samples: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Window lengths, comma separated.
    #[arg(long = "L-values", value_delimiter = ',', default_value = "1,2,4,8,16")]
    pub l_values: Vec<usize>,
    /// Steps per Monte Carlo replica.
    #[arg(long, default_value_t = 10_000_000)]
    pub steps: u64,
    /// Monte Carlo replicas per row.
    #[arg(long, default_value_t = 32)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use Monte Carlo for every row, also below the exact cap.
    #[arg(long)]
    pub monte_carlo: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub bias: Bias,
    #[command(flatten)]
    pub sweep: SweepConfig,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FigArgs {
    /// Window length of the trajectories (or "inf").
    #[arg(long = "L", value_parser = parse_memory, default_value = "10")]
    pub l: Memory,
    /// Trajectory length.
    #[arg(long = "trajectory-steps", default_value_t = 10_000)]
    pub trajectory_steps: u64,
    #[arg(long, default_value_t = 1)]
    pub thin: u64,
    /// p of the speed sweep.
    #[arg(long, default_value_t = 0.95)]
    pub p: f64,
    /// q of the speed sweep.
    #[arg(long, default_value_t = 0.15)]
    pub q: f64,
    #[command(flatten)]
    pub sweep: SweepConfig,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write fig1.svg, fig2.svg and fig3.svg.
    #[arg(long)]
    pub svg: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Where to write the rerun output (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare the rerun output digest with the one in the manifest.
    #[arg(long)]
    pub verify: bool,
}
