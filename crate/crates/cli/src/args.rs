use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kk_core::experiments::ExperimentId;
use kk_core::{Constraint, GenKind};

#[derive(Debug, Parser)]
#[command(name = "kk", version, about = "Kings and kernels in semicomplete compositions")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Digraph or composition file, text or JSON; `-` reads standard input.
    pub input: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// k-kings of a digraph (of the flattening, for a composition).
    Kings {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        /// Emit the digraph as DOT instead of a report.
        #[arg(long)]
        dot: bool,
    },
    /// Per-factor 3-king classification of a strong semicomplete composition.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Extend a composition so that its vertices are exactly the 3-kings.
    Establish {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dot: bool,
    },
    /// A quasi-kernel built by the pivot recursion.
    Quasikernel {
        #[command(flatten)]
        input: Input,
    },
    /// Two disjoint quasi-kernels of a semicomplete composition.
    #[command(name = "disjoint-qk")]
    DisjointQk {
        #[command(flatten)]
        input: Input,
    },
    /// Polynomial k-kernel decision for strong semicomplete compositions (k >= 4).
    Kkernel {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Exhaustive minimum k-kernel search.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        /// Largest digraph the search accepts.
        #[arg(long, env = "KK_MAX_N", default_value_t = kk_core::kernels::DEFAULT_ORACLE_CAP)]
        max_n: usize,
    },
    /// The 3-cycle gadget over a digraph.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dot: bool,
    },
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Run a seeded validation corpus against brute force.
    Experiment(ExperimentArgs),
    /// Structural report, or certificate check with `--cert`.
    Validate {
        #[command(flatten)]
        input: Input,
        /// Certificate JSON file to check against the input.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Tournament,
    Semicomplete,
    ErdosRenyi,
    Composition,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Tournament => GenKind::Tournament,
            KindArg::Semicomplete => GenKind::Semicomplete,
            KindArg::ErdosRenyi => GenKind::ErdosRenyi,
            KindArg::Composition => GenKind::Composition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(clippy::enum_variant_names)]
pub enum ConstraintArg {
    StrongOuter,
    NoSinkOuter,
    NoSourceOuter,
}

impl From<ConstraintArg> for Constraint {
    fn from(c: ConstraintArg) -> Self {
        match c {
            ConstraintArg::StrongOuter => Constraint::StrongOuter,
            ConstraintArg::NoSinkOuter => Constraint::NoSinkOuter,
            ConstraintArg::NoSourceOuter => Constraint::NoSourceOuter,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Vertex count for digraph kinds.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Outer order for compositions.
    #[arg(long, default_value_t = 0)]
    pub t: usize,
    /// Outer kind for compositions.
    #[arg(long, value_enum, default_value_t = KindArg::Semicomplete)]
    pub outer: KindArg,
    /// Inclusive factor order range, `min,max`.
    #[arg(long, default_value = "1,3", value_parser = parse_sizes)]
    pub sizes: (usize, usize),
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p2: f64,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub constraints: Vec<ConstraintArg>,
    /// Emit DOT instead of the instance.
    #[arg(long)]
    pub dot: bool,
}

fn parse_sizes(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `min,max`")?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad size `{a}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad size `{b}`"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 <= min <= max, got {a},{b}"));
    }
    Ok((a, b))
}

fn parse_experiment(s: &str) -> Result<ExperimentId, String> {
    s.parse().map_err(|e: kk_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// thma, thmd, thmc, thme, thmf, thm012, thm011, thmb1, thmc1,
    /// thmd2-poly, thmd2-reduction or lem11.
    #[arg(value_parser = parse_experiment)]
    pub id: ExperimentId,
    /// Number of seeded instances (defaults per experiment).
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Largest instance generated.
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    /// Base seed of the corpus.
    #[arg(long)]
    pub seed: Option<u64>,
}
