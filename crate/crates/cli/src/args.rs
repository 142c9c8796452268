use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use k3_thomae::C64;

#[derive(Debug, Parser)]
#[command(name = "k3thomae", version, about = "Hypergeometric periods, theta constants and four-term means")]
pub struct Cli {
    #[command(flatten)]
    pub cfg: Config,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Significant digits of floating-point output.
    #[arg(
        long,
        global = true,
        env = "K3THOMAE_PRECISION",
        default_value_t = 16,
        value_parser = clap::value_parser!(u8).range(10..=17)
    )]
    pub precision: u8,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write reports to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance override for the requested identity.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Cap on the total degree of truncated series.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a series.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Theta constants at a point of the domain.
    Theta {
        /// Row-major 2x2 complex matrix, e.g. `1.2i,0.1,0.1,1.1i`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_c64, required = true)]
        tau: Vec<C64>,
        /// Single characteristic as four bits, e.g. `0011`.
        #[arg(long = "char")]
        ch: Option<String>,
    },
    /// Squared periods, their signs and tau at `x = nu34(z)`.
    Periods {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_c64, required = true)]
        z: Vec<C64>,
    },
    /// Iterate a four-term mean.
    Agm {
        #[arg(value_enum)]
        kind: MeanArg,
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<f64>,
        /// Also evaluate the hypergeometric closed forms.
        #[arg(long)]
        limit_formula: bool,
        #[arg(long, default_value_t = 1e-15)]
        iter_tol: f64,
        #[arg(long, default_value_t = 200)]
        maxit: usize,
    },
    /// Check an identity numerically.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Batch runs.
    #[command(subcommand)]
    Sweep(SweepCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeanArg {
    D4,
    Borchardt,
}

#[derive(Debug, Subcommand)]
pub enum EvalCmd {
    Fs(SeriesArgs),
    Ft(SeriesArgs),
    #[command(name = "2f1")]
    Hyp2f1 {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_c64)]
        a: C64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_c64)]
        b: C64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_c64)]
        c: C64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_c64)]
        x: C64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// `z1,z2,z3,z4`, complex entries allowed (`0.1+0.2i`).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_c64, required = true)]
    pub z: Vec<C64>,
    /// Six parameters; all one half when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_c64)]
    pub alpha: Option<Vec<C64>>,
}

#[derive(Debug, Clone, Args)]
pub struct TauArg {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_c64, required = true)]
    pub tau: Vec<C64>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArg {
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    Jacobi {
        #[arg(long)]
        lambda: f64,
    },
    Gauss {
        #[arg(long)]
        z: f64,
    },
    #[command(name = "2tau")]
    TwoTau(TauArg),
    ThetaLaws(TauArg),
    H2(TauArg),
    Transform {
        /// Row-major 4x4 Gaussian-integer matrix.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_c64, required = true)]
        g: Vec<C64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_c64, required = true)]
        tau: Vec<C64>,
    },
    Thomae {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_c64, required = true)]
        z: Vec<C64>,
    },
    Degeneration {
        #[arg(long)]
        z1: f64,
        #[arg(long)]
        z4: f64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
    },
    Fe1(StateArg),
    Fe2(StateArg),
    AgmD4(StateArg),
    AgmBorchardt(StateArg),
}

#[derive(Debug, Subcommand)]
pub enum SweepCmd {
    /// Every verify operation at `n` seeded random inputs each.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

fn parse_c64(s: &str) -> Result<C64, String> {
    s.trim().parse::<C64>().map_err(|e| format!("`{s}` is not a complex number: {e}"))
}
