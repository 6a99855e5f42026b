use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Clone, Parser)]
#[command(name = "gafheat", version, about = "Heat-flow experiments on entire functions and GAF zeros")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed; trial k draws from the stream (seed, k).
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Truncation degree of sampled or expanded series.
    #[arg(long = "nmax", global = true, default_value_t = 120)]
    pub n_max: usize,
    /// Monte Carlo trials.
    #[arg(long, global = true, default_value_t = 2000)]
    pub trials: usize,
    /// Flow time, a complex literal such as 0.3, -0.1+0.2i or 0.5i.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Real flow path `a:b:steps` (steps + 1 equally spaced nodes).
    #[arg(long = "tau-path", global = true, allow_hyphen_values = true)]
    pub tau_path: Option<String>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Exit with status 2 when a statistical check fails.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Flow a function to --tau; writes coefficients and sampled values.
    Flow {
        /// poly:c0,c1,..  expquad:a;b;c;c0,c1,..  taylor:FILE  builtin:sin_pi_z2|theta[:σ]|exp_sine[:a1]
        spec: String,
        /// Evaluation grid side.
        #[arg(long, default_value_t = 5)]
        grid: usize,
        /// Half-width of the evaluation grid.
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
    },
    /// Track zeros along --tau-path (or 0 → --tau).
    Trajectories {
        /// A function spec as for `flow`, or `gaf` for a sampled GAF.
        spec: String,
        /// Number of zeros of smallest modulus to follow.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Only follow zeros with |z| ≤ radius.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Anchored-zero drift residuals z^a(τ) − a − τā and energy tests against a = 0.
    Residuals {
        /// Comma-separated anchors, e.g. "0,2,2i,3+i".
        #[arg(long, default_value = "0,2,2i,3+i", allow_hyphen_values = true)]
        anchors: String,
        #[arg(long, default_value_t = 500)]
        permutations: usize,
    },
    /// Composition signs, V(A_τ) = V_τ and the hyperbolic covariance identity.
    MetaplecticCheck {
        #[arg(long, default_value_t = 200)]
        pairs: usize,
    },
    /// Empirical covariance of the flowed GAF against the prediction.
    Covariance {
        /// Second flow time σ (defaults to τ).
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        /// Probe points per axis; probes are all pairs of points.
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = Process::Heat)]
        process: Process,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    /// e^{−τD²/2}G, compared with the Mehler-type covariance.
    Heat,
    /// V_τG, compared with the normalised covariance (e^{zw̄} when σ = τ).
    Vtau,
}
