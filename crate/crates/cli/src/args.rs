use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "lamperti", version, about = "Stationary processes, their noises and Lamperti transforms")]
#[command(args_override_self = true)]
pub struct Cli {
    /// TOML file with a `[<command>]` table of default flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for ensemble work (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an ensemble and write one CSV per path plus a manifest.
    Generate(GenerateArgs),
    /// Apply the Lamperti transform or its inverse to every path.
    Transform(TransformArgs),
    /// Solve the Langevin equation driven by each noise path.
    Solve(SolveArgs),
    /// Recover the driving noise of each stationary path.
    Extract(ExtractArgs),
    /// Check each noise path for membership of the class G_H.
    VerifyNoise(VerifyNoiseArgs),
    /// Run the selected checks on an ensemble; exits 1 if any fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output directory.
    #[arg(long, env = "LAMPERTI_OUT_DIR", default_value = "lamperti-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Manifest of the input ensemble.
    #[arg(long, value_name = "MANIFEST")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// brownian, fbm, lamperti_fbm, bm_lamperti_noise, second_kind_noise, ou,
    /// fou_first_kind, fou_second_kind, linear, pareto, arma, ma_truncated.
    #[arg(long)]
    pub kind: String,
    /// `start:stop:step` or `geo:start:stop:ratio`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hurst index or rate.
    #[arg(long = "H", allow_hyphen_values = true)]
    pub hurst: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub slope: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Series length.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ar: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ma: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub noise_sd: Option<f64>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Wold coefficients for `ma_truncated`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_enum)]
    pub direction: Direction,
    #[arg(long = "H", allow_hyphen_values = true)]
    pub hurst: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long = "H", allow_hyphen_values = true)]
    pub hurst: f64,
    /// Initial value at time 0; without it the stationary solution is built
    /// from the negative-time history.
    #[arg(long, allow_hyphen_values = true)]
    pub u0: Option<f64>,
    /// Convergence tolerance of the improper integral.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Truncation depth for series (default: enough for 1e-16).
    #[arg(long)]
    pub depth: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long = "H", allow_hyphen_values = true)]
    pub hurst: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyNoiseArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long = "H", allow_hyphen_values = true)]
    pub hurst: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long = "H", allow_hyphen_values = true)]
    pub hurst: f64,
    /// Extract the noise of each path, solve again and compare.
    #[arg(long)]
    pub roundtrip: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub roundtrip_tol: f64,
    /// KS test of `U_{t+shift} = U_t` across the ensemble.
    #[arg(long)]
    pub stationarity: bool,
    /// KS test of the increments at `t` and `t + shift`.
    #[arg(long)]
    pub increment_stationarity: bool,
    /// KS test of `a^{-H} X_{at} = X_t` at the given times.
    #[arg(long)]
    pub self_similarity: bool,
    /// Membership of every path in G_H.
    #[arg(long)]
    pub gh: bool,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub base: f64,
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub lags: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub shift: f64,
    #[arg(long, default_value_t = 4.0)]
    pub scale: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}
