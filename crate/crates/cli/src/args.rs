use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wipeplan::dataset::Split;
use wipeplan::geometry::ObjectKind;

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)");

#[derive(Debug, Parser)]
#[command(name = "wipeplan", version = VERSION, about = "Coverage planning for wiping point clouds with a deformable tool")]
pub struct Cli {
    /// JSON run configuration; command-line flags take precedence over it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Seed for every random stream of the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Maximum number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a synthetic object and write it as a point cloud.
    GenObject(GenObjectArgs),
    /// Generate labeled press interactions with train/val/test splits.
    #[command(alias = "generate")]
    GenDataset(GenDatasetArgs),
    /// Plan a full-coverage wiping trajectory for a point cloud.
    Plan(PlanArgs),
    /// Execute a trajectory with the press model and report coverage.
    Evaluate(EvaluateArgs),
    /// Plan and execute repeated trials over a set of objects.
    Benchmark(BenchmarkArgs),
    /// Contact-map F1, either for two maps or for a predictor over a dataset split.
    F1(F1Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GenObject(_) => "gen-object",
            Command::GenDataset(_) => "gen-dataset",
            Command::Plan(_) => "plan",
            Command::Evaluate(_) => "evaluate",
            Command::Benchmark(_) => "benchmark",
            Command::F1(_) => "f1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Plate,
    Bowl,
    Pan,
}

impl From<KindArg> for ObjectKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Plate => ObjectKind::Plate,
            KindArg::Bowl => ObjectKind::Bowl,
            KindArg::Pan => ObjectKind::Pan,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Train,
    Val,
    Test,
}

impl From<SplitArg> for Split {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Train => Split::Train,
            SplitArg::Val => Split::Val,
            SplitArg::Test => Split::Test,
        }
    }
}

/// Overrides for individual tool parameters.
#[derive(Clone, Debug, Default, Args)]
pub struct SpongeArgs {
    /// Tool width, m.
    #[arg(long)]
    pub width: Option<f64>,
    /// Tool length, m.
    #[arg(long)]
    pub length: Option<f64>,
    /// Tool height, m.
    #[arg(long)]
    pub height: Option<f64>,
    /// Young's modulus of the tool, Pa.
    #[arg(long)]
    pub youngs_modulus: Option<f64>,
    /// Nodes per side of the bottom-face grid.
    #[arg(long, value_name = "N")]
    pub sponge_grid: Option<usize>,
    /// Press force, N.
    #[arg(long)]
    pub target_force: Option<f64>,
    /// Nodal force threshold for contact, N.
    #[arg(long)]
    pub node_threshold: Option<f64>,
    /// Labeling distance from contact nodes, m.
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenObjectArgs {
    /// Start from a named object of the built-in catalog.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Rim radius, m.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Depth, m.
    #[arg(long)]
    pub depth: Option<f64>,
    /// Profile exponent for plates and bowls, fillet fraction for pans.
    #[arg(long)]
    pub rim_curvature: Option<f64>,
    /// Number of surface samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output cloud; `.ply` writes PLY, anything else XYZ-CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenDatasetArgs {
    /// Objects JSON; the built-in catalog when omitted.
    #[arg(long)]
    pub objects: Option<PathBuf>,
    /// Presses sampled per object.
    #[arg(long)]
    pub contacts: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub sponge: SpongeArgs,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Input point cloud (`.ply` or XYZ-CSV).
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    /// Number of candidate waypoint sets.
    #[arg(long)]
    pub n_sets: Option<usize>,
    /// Return to the first waypoint.
    #[arg(long)]
    pub closed: bool,
    /// Output trajectory JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub sponge: SpongeArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    /// Trajectory JSON written by `plan`.
    #[arg(long)]
    pub traj: Option<PathBuf>,
    /// Standard deviation of the waypoint position error, m.
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Probability that a press falls short of the target force.
    #[arg(long)]
    pub force_deficit: Option<f64>,
    /// Fraction of the target force applied by a deficient press.
    #[arg(long)]
    pub deficit_factor: Option<f64>,
    /// Report JSON; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub sponge: SpongeArgs,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Objects JSON; the built-in catalog when omitted.
    #[arg(long)]
    pub objects: Option<PathBuf>,
    /// Trials per object.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub n_sets: Option<usize>,
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    #[arg(long)]
    pub force_deficit: Option<f64>,
    #[arg(long)]
    pub deficit_factor: Option<f64>,
    /// Output directory for `benchmark.csv` and `summary.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub sponge: SpongeArgs,
}

#[derive(Debug, Args)]
pub struct F1Args {
    /// Predicted contact map JSON.
    #[arg(long, requires = "truth", conflicts_with = "dataset")]
    pub predicted: Option<PathBuf>,
    /// Ground-truth contact map JSON.
    #[arg(long, requires = "predicted")]
    pub truth: Option<PathBuf>,
    /// Dataset directory; scores the press predictor given by the tool flags.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub split: Option<SplitArg>,
    /// Score JSON; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub sponge: SpongeArgs,
}
