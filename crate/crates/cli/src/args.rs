use std::path::PathBuf;

use chromatic_cftp::GraphKind;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "chromatic-cftp", version, about = "Perfect sampling of uniform proper graph colorings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph from a named family.
    Gen {
        #[arg(long, value_enum)]
        kind: Family,
        /// Family parameters as key=value pairs: n, d, rows, cols.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Output file; `.json` selects the JSON format. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a seeding set.
    SeedSet {
        #[arg(long)]
        graph: PathBuf,
        /// Defaults to 1/3 - 2·sqrt(ln Δ / Δ), clamped at 0.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw perfect samples.
    Sample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long)]
        seed_set: Option<PathBuf>,
        /// Per-phase list-size histograms on stderr.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count (and optionally list) all proper colorings.
    Enumerate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: usize,
        /// Also print every coloring, one per line.
        #[arg(long)]
        list: bool,
    },
    /// Sample and test the output against the uniform law.
    Uniformity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Fail (exit 4) when the chi-squared p-value is at or below this.
        #[arg(long, default_value_t = 0.001)]
        alpha: f64,
        /// Also fail when the total variation distance exceeds this.
        #[arg(long)]
        max_tv: Option<f64>,
    },
    /// Check one update's decoded marginal against the Glauber law.
    UpdateTest {
        #[arg(long, value_enum)]
        kind: UpdateKindArg,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Time perfect samples and compare update counts with n·Δ²·ln k.
    Bench {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Path,
    Cycle,
    Clique,
    Grid,
    RandomRegular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum UpdateKindArg {
    Compress,
    Seeding,
    Disjoint,
}

/// Builds a [`GraphKind`] from `key=value` parameters.
pub fn graph_kind(family: Family, params: &[String]) -> Result<GraphKind, String> {
    let mut n = None;
    let mut d = None;
    let mut rows = None;
    let mut cols = None;
    for p in params.iter().flat_map(|p| p.split_whitespace()) {
        let (key, value) = p.split_once('=').ok_or_else(|| format!("parameter {p:?} is not key=value"))?;
        let value: usize = value.parse().map_err(|_| format!("parameter {key} needs a non-negative integer, got {value:?}"))?;
        let slot = match key {
            "n" => &mut n,
            "d" => &mut d,
            "rows" => &mut rows,
            "cols" => &mut cols,
            _ => return Err(format!("unknown parameter {key:?}")),
        };
        *slot = Some(value);
    }
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| format!("{family:?} needs {name}=..."));
    Ok(match family {
        Family::Path => GraphKind::Path { n: need(n, "n")? },
        Family::Cycle => GraphKind::Cycle { n: need(n, "n")? },
        Family::Clique => GraphKind::Clique { n: need(n, "n")? },
        Family::Grid => GraphKind::Grid { rows: need(rows, "rows")?, cols: need(cols, "cols")? },
        Family::RandomRegular => GraphKind::RandomRegular { n: need(n, "n")?, d: need(d, "d")? },
    })
}
