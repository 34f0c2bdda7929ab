use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const LONG_VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (",
    env!("CARGO_PKG_NAME"),
    ", profile ",
    env!("SGBENCH_PROFILE"),
    ")"
);

#[derive(Debug, Parser)]
#[command(name = "sgbench", version, long_version = LONG_VERSION, about = "Sine-Gordon renormalization workbench")]
pub struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tree catalogs.
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Counterterm bookkeeping.
    #[command(subcommand)]
    Renorm(RenormCmd),
    /// Moment diagrams.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Scale-dependent forest projections.
    #[command(subcommand)]
    Multiscale(MultiscaleCmd),
    /// Power counting on coalescence trees.
    #[command(subcommand)]
    Power(PowerCmd),
    /// Lattice simulations.
    #[command(subcommand)]
    Sim(SimCmd),
}

/// Coupling given either as `β²/π` or directly as `β̄`.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// `β²` in units of `π`, as "a" or "a/b".
    #[arg(long)]
    pub beta2_over_pi: Option<String>,
    /// Power-counting exponent, as "a" or "a/b".
    #[arg(long)]
    pub beta_bar: Option<String>,
    /// Homogeneity cutoff, as "a" or "a/b".
    #[arg(long)]
    pub mu: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum TreesCmd {
    /// All trees below the cutoff.
    Enum {
        #[command(flatten)]
        model: ModelArgs,
        /// Only trees of negative homogeneity.
        #[arg(long)]
        negative_only: bool,
    },
    /// Negative trees split into renormalizable and charged ones.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum RenormCmd {
    /// Pairwise cancellation of the neutral counterterms.
    Cancel {
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DiagramArgs {
    /// Tree key, or "dipole".
    #[arg(long, default_value = "dipole")]
    pub tree: String,
    /// Number of copy pairs.
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// A single copy instead of `2p` copies.
    #[arg(long)]
    pub single: bool,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Subcommand)]
pub enum DiagramCmd {
    /// Expand the renormalized moment into terms.
    Terms {
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// Check that every term uses each edge exactly once.
    Audit {
        #[command(flatten)]
        diagram: DiagramArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum MultiscaleCmd {
    /// Interval and partition checks over random scale assignments.
    Audit {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long, default_value_t = 4)]
        ncap: u32,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum PowerCmd {
    /// Subdivergence, `ς̃` and large-scale checks.
    Audit {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// Forest members as node lists, e.g. "0,1;2,3".
        #[arg(long)]
        forest: Option<String>,
        /// Cut edges by child node, e.g. "always=2;harvest=4"; a bare list means always.
        #[arg(long)]
        cuts: Option<String>,
        /// Audit every forest and every split of its free cut edges.
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MollifierArg {
    Gaussian,
    Rational,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// `β²` in units of `π`, as "a" or "a/b".
    #[arg(long)]
    pub beta2_over_pi: Option<String>,
    /// Grid size per axis (power of two).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dt: Option<String>,
    /// Mollification width; a comma list for `converge`.
    #[arg(long)]
    pub eps: Option<String>,
    /// Test-function scales, comma separated.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Fields, blocks or seeds depending on the subcommand.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub t_end: Option<String>,
    #[arg(long, value_enum)]
    pub mollifier: Option<MollifierArg>,
}

#[derive(Debug, Subcommand)]
pub enum SimCmd {
    /// Renormalization constant and chaos correlations.
    Field(SimArgs),
    /// Second moment of the renormalized dipole against scale.
    Dipole(SimArgs),
    /// One trajectory of the remainder equation.
    Pde(SimArgs),
    /// Cauchy differences across dyadic mollification widths.
    Converge(SimArgs),
}
