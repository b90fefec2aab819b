use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "randtensor", version, about = "Exact moments, bounds and spectra of random product-state ensembles")]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// TOML file of flag values; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact moments of the ensembles.
    #[command(subcommand)]
    Moments(MomentsCmd),
    /// Recursive and closed-form moment bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Generating-function iterations.
    #[command(subcommand)]
    Gf(GfCmd),
    /// Monte Carlo spectra.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Finite-size experiments.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
    /// Self-checks of the exact engines.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ensemble {
    Normalized,
    Gaussian,
    PartialTrace,
    Repeated,
}

impl Ensemble {
    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Normalized => "normalized",
            Ensemble::Gaussian => "gaussian",
            Ensemble::PartialTrace => "partial-trace",
            Ensemble::Repeated => "repeated",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Literature,
    Corrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    All,
    CompletelyReducible,
    Irreducible,
    Mixed,
}

/// `p`, `d`, `k` and the ensemble variant.
#[derive(Clone, Debug, Args)]
pub struct EnsembleArgs {
    #[arg(long, value_enum, default_value_t = Ensemble::Normalized)]
    pub ensemble: Ensemble,
    #[arg(long)]
    pub p: u64,
    /// Local dimension (not used by partial-trace).
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Kept dimension for partial-trace.
    #[arg(long)]
    pub d_a: Option<u64>,
    /// Traced-out dimension for partial-trace.
    #[arg(long)]
    pub d_b: Option<u64>,
}

#[derive(Clone, Debug, Args)]
pub struct Pdk {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub d: u64,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Subcommand)]
pub enum MomentsCmd {
    /// E^m and e^m with block-count and class breakdowns.
    Exact {
        #[command(flatten)]
        ens: EnsembleArgs,
        #[arg(long)]
        m: usize,
        /// Largest m accepted.
        #[arg(long, default_value_t = randtensor::partition::DEFAULT_CAP)]
        cap: usize,
        /// Write the result as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients c_l with E^m = sum_l c_l (p)_l.
    Table {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = randtensor::partition::DEFAULT_CAP)]
        cap: usize,
    },
    /// Compare the engine with a tabulated closed form for m <= 6.
    PaperCheck {
        #[arg(long, default_value_t = 6)]
        max_m: usize,
        #[arg(long, value_enum, default_value_t = Table::Literature)]
        table: Table,
    },
    /// Sums over completely reducible, irreducible and mixed words.
    Class {
        #[command(flatten)]
        pdk: Pdk,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        #[arg(long, default_value_t = randtensor::partition::DEFAULT_CAP)]
        cap: usize,
    },
    /// Moments of the ensemble with shared factors.
    Repeated {
        #[command(flatten)]
        pdk: Pdk,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Schwinger-Dyson lower and upper bounds for k = 1.
    Sd {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 6)]
        max_m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schwinger-Dyson upper bound for general k.
    Tensor {
        #[command(flatten)]
        pdk: Pdk,
        #[arg(long, default_value_t = 6)]
        max_m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form lower and upper bounds on e^m.
    Theorem {
        #[command(flatten)]
        pdk: Pdk,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GfCmd {
    /// Iterate (G_s, G_d) and compare with the closed-form fixed point.
    Rainbow {
        #[arg(long)]
        x: f64,
        /// Defaults to the critical point (1 + sqrt x)^2.
        #[arg(long)]
        z: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        /// Write every iterate as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Eigenvalues of sampled matrices as CSV.
    Sample {
        #[command(flatten)]
        ens: EnsembleArgs,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extreme eigenvalues, KS distance and moments as JSON.
    Stats {
        #[command(flatten)]
        ens: EnsembleArgs,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        max_m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the Marcenko-Pastur density and CDF.
    Density {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCmd {
    /// Spread of the largest eigenvalue at fixed x as d grows.
    Concentration {
        #[arg(long, value_enum, default_value_t = Ensemble::Normalized)]
        ensemble: Ensemble,
        #[arg(long)]
        x: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        d_list: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 40)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest and smallest eigenvalues against the edge predictions.
    Extremes {
        #[command(flatten)]
        ens: EnsembleArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Run every exact self-check and print a pass/fail table.
    All,
}
