use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Orbit norms and expansivity certificates for weighted shifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Omit the `generated_at` field so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Worker threads.
    #[arg(long, env = "SHIFTLAB_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run expansivity checkers on one operator.
    Check(CheckArgs),
    /// Build the block weight sequence and audit its inequalities.
    Synthesize(SynthArgs),
    /// Basis orbit norms over a range of steps and levels.
    Orbit(OrbitArgs),
    /// Upper densities of small- and large-norm steps along one orbit.
    Density(DensityArgs),
    /// Closure-law suite over the preset battery.
    Props(HorizonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OperatorArgs {
    /// Preset (`c0_Z`, `lp_Z:2`, `s_Z`, ...) or a JSON file.
    #[arg(long)]
    pub space: String,
    /// Shorthand (`constant:2`, `piecewise:1/2,2`, `blocks:4`, ...) or a JSON file.
    #[arg(long)]
    pub weights: String,
    /// Shift direction: `backward` (B_w) or `forward` (F_w).
    #[arg(long, default_value = "backward")]
    pub side: String,
    /// Use `T^stride`.
    #[arg(long, default_value_t = 1)]
    pub stride: u32,
}

#[derive(Args, Debug, Clone)]
pub struct HorizonArgs {
    /// Largest orbit step examined.
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Index window radius.
    #[arg(long)]
    pub w: Option<i64>,
    /// Thresholds run over `1, 2, ..., 2^grid_top`.
    #[arg(long)]
    pub grid_top: Option<u32>,
    /// Highest seminorm level searched for the source index.
    #[arg(long)]
    pub k_max: Option<u32>,
    /// Highest seminorm level searched for the target index.
    #[arg(long)]
    pub l_max: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Ae,
    Ape,
    Ue,
    Upe,
    Ediag,
    Mixing,
    Hierarchy,
    All,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    #[arg(long, value_enum, default_value_t = Criterion::All)]
    pub criterion: Criterion,
    /// Which orbit APE averages: `op` or `inverse`.
    #[arg(long, default_value = "op")]
    pub ape_side: String,
    #[command(flatten)]
    pub horizon: HorizonArgs,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Number of blocks J.
    #[arg(long, default_value_t = 4)]
    pub blocks: u32,
    /// Give up (SL-E003) if a block needs k above this.
    #[arg(long, default_value_t = 64)]
    pub k_cap: u32,
    /// Give up (SL-E003) if a block needs i above this.
    #[arg(long, default_value_t = 10_000_000)]
    pub i_cap: u64,
    /// Weight window `lo:hi` to include in the report.
    #[arg(long)]
    pub window: Option<String>,
    /// Shifts `|t| <= t_range` for the shifted-product check.
    #[arg(long, default_value_t = 8)]
    pub t_range: i64,
    /// Threshold exponent for the shifted-product check.
    #[arg(long, default_value_t = -10, allow_negative_numbers = true)]
    pub threshold_log2: i64,
    /// Also write the weight table as a loadable JSON weight file.
    #[arg(long)]
    pub weights_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// `e:j` or `j=c,j=c,...`.
    #[arg(long, default_value = "e:0")]
    pub vector: String,
    /// Step range `lo:hi`.
    #[arg(long, default_value = "0:20", allow_hyphen_values = true)]
    pub n: String,
    /// Level range `lo:hi`.
    #[arg(long, default_value = "1:1")]
    pub k: String,
    /// Exact rational norms instead of log2.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// Basis index of the orbit.
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    pub base: i64,
    /// `op` follows T^n, `inverse` follows T^{-n}.
    #[arg(long, default_value = "op")]
    pub orbit: String,
    /// Orbit length.
    #[arg(long, default_value_t = 1000)]
    pub n_max: u64,
    /// Large-norm thresholds.
    #[arg(long = "K", value_delimiter = ',', default_value = "2")]
    pub large: Vec<String>,
    /// Small-norm thresholds.
    #[arg(long = "tau", value_delimiter = ',', default_value = "1/2")]
    pub small: Vec<String>,
}
