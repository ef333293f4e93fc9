use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use chromatic_cftp::bounding::BoundingListJson;
use chromatic_cftp::graph::{generate, GraphJson};
use chromatic_cftp::oracle::{enumerate_colorings, marginal_test, uniformity_report, MarginalReport};
use chromatic_cftp::rng::{streams, RootSeed};
use chromatic_cftp::seeding_set::{default_eta, default_resample_cap, find_seeding_set, MAX_SEARCH_ATTEMPTS};
use chromatic_cftp::{
    BoundingList, Color, Coloring, Graph, PairRule, PerfectSampler, SampleOutcome, SamplerConfig, SeedingSet, UpdateSpec,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{graph_kind, Family, Format, UpdateKindArg};
use crate::error::{CliError, CliResult};

pub const THREADS_ENV: &str = "CHROMATIC_CFTP_THREADS";

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    Graph::parse(&read(path)?).map_err(|e| match e {
        chromatic_cftp::Error::InvalidArgument(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => CliError::Parse(format!("{}: {other}", path.display())),
    })
}

/// Writes to `out` if given, else stdout.
fn emit(out: Option<&PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn gen(kind: Family, params: &[String], rng_seed: u64, out: Option<&PathBuf>) -> CliResult {
    let kind = graph_kind(kind, params).map_err(CliError::Usage)?;
    let graph = generate(kind, &mut RootSeed(rng_seed).stream(streams::GRAPH))?;
    let json = out.is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
    let text = if json { serde_json::to_string(&graph.to_json())? + "\n" } else { graph.to_edge_list() };
    emit(out, &text)
}

/// Up to [`MAX_SEARCH_ATTEMPTS`] searches; the empty set if all of them fail.
fn search_seeding_set(graph: &Graph, eta: f64, rng_seed: u64) -> CliResult<SeedingSet> {
    let mut rng = RootSeed(rng_seed).stream(streams::SEEDING_SET);
    let cap = default_resample_cap(graph.n());
    for _ in 0..MAX_SEARCH_ATTEMPTS {
        match find_seeding_set(graph, eta, &mut rng, cap) {
            Ok(set) => return Ok(set),
            Err(chromatic_cftp::Error::SeedingSetFailure { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    eprintln!("warning: no seeding set found in {MAX_SEARCH_ATTEMPTS} searches; using the empty set");
    Ok(SeedingSet::empty())
}

pub fn seed_set(graph: &Path, eta: Option<f64>, rng_seed: u64, out: Option<&PathBuf>) -> CliResult {
    let graph = load_graph(graph)?;
    let eta = eta.unwrap_or_else(|| default_eta(graph.max_degree()));
    let set = search_seeding_set(&graph, eta, rng_seed)?;
    emit(out, &(serde_json::to_string(&set)? + "\n"))
}

fn sampler<'g>(graph: &'g Graph, k: usize, seed_set: Option<&PathBuf>, rng_seed: u64) -> CliResult<PerfectSampler<'g>> {
    let config = SamplerConfig::default();
    Ok(match seed_set {
        Some(path) => {
            let set: SeedingSet = serde_json::from_str(&read(path)?)?;
            PerfectSampler::new(graph, k, set, &config)?
        }
        None => PerfectSampler::prepare(graph, k, &config, &mut RootSeed(rng_seed).stream(streams::SEEDING_SET))?,
    })
}

fn draw(sampler: &PerfectSampler<'_>, rng_seed: u64, index: usize) -> CliResult<SampleOutcome> {
    let out = sampler.sample(&mut RootSeed(rng_seed).sample_stream(index))?;
    if !out.coloring.is_proper(sampler.graph()) {
        return Err(CliError::Usage(format!("internal error: sample {index} is not a proper coloring")));
    }
    Ok(out)
}

#[derive(Serialize)]
struct TraceLine<'a> {
    sample: usize,
    blocks: usize,
    updates: usize,
    phases: &'a [Vec<chromatic_cftp::sampler::PhaseTrace>],
}

#[allow(clippy::too_many_arguments)]
pub fn sample(
    graph: &Path,
    k: usize,
    samples: usize,
    rng_seed: u64,
    seed_set: Option<&PathBuf>,
    trace: bool,
    format: Format,
) -> CliResult {
    let graph = load_graph(graph)?;
    let sampler = sampler(&graph, k, seed_set, rng_seed)?;
    let mut stdout = BufWriter::new(io::stdout().lock());
    for i in 0..samples {
        let out = draw(&sampler, rng_seed, i)?;
        if trace {
            let line = TraceLine { sample: i, blocks: out.blocks, updates: out.updates, phases: &out.traces };
            eprintln!("{}", serde_json::to_string(&line)?);
        }
        match format {
            Format::Text => {
                if i > 0 {
                    writeln!(stdout)?;
                }
                for (v, c) in out.coloring.as_slice().iter().enumerate() {
                    writeln!(stdout, "{v} {c}")?;
                }
            }
            Format::Json => writeln!(stdout, "{}", serde_json::to_string(out.coloring.as_slice())?)?,
        }
    }
    stdout.flush()?;
    Ok(())
}

pub fn enumerate(graph: &Path, k: usize, list: bool) -> CliResult {
    let graph = load_graph(graph)?;
    let all = enumerate_colorings(&graph, k)?;
    let mut stdout = BufWriter::new(io::stdout().lock());
    writeln!(stdout, "{}", all.len())?;
    if list {
        for chi in &all {
            let line: Vec<String> = chi.as_slice().iter().map(|c| c.to_string()).collect();
            writeln!(stdout, "{}", line.join(" "))?;
        }
    }
    stdout.flush()?;
    Ok(())
}

/// Worker pool sized by [`THREADS_ENV`] when set.
fn pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn uniformity(graph: &Path, k: usize, samples: usize, rng_seed: u64, alpha: f64, max_tv: Option<f64>) -> CliResult {
    let graph = load_graph(graph)?;
    let all = enumerate_colorings(&graph, k)?;
    let sampler = sampler(&graph, k, None, rng_seed)?;
    let drawn: Vec<Coloring> = pool()?.install(|| {
        (0..samples)
            .into_par_iter()
            .map(|i| draw(&sampler, rng_seed, i).map(|o| o.coloring))
            .collect::<CliResult<Vec<_>>>()
    })?;
    let report = uniformity_report(&all, drawn)?;
    println!("{}", serde_json::to_string(&report)?);
    if report.p_value <= alpha {
        return Err(CliError::Statistical(format!("p-value {} <= {alpha}", report.p_value)));
    }
    if let Some(limit) = max_tv {
        if report.tv > limit {
            return Err(CliError::Statistical(format!("TV {} > {limit}", report.tv)));
        }
    }
    Ok(())
}

/// `update-test` input: one update at `v` against a fixed coloring.
#[derive(Debug, Deserialize)]
pub struct UpdateConfig {
    pub graph: GraphJson,
    pub list: BoundingListJson,
    pub v: usize,
    pub chi: Vec<Color>,
    /// The compress set; required for compress updates.
    #[serde(default)]
    pub a: Option<Vec<Color>>,
    #[serde(default)]
    pub pair_rule: PairRule,
}

pub fn update_test(kind: UpdateKindArg, config: &Path, trials: usize, rng_seed: u64) -> CliResult {
    let config: UpdateConfig = serde_json::from_str(&read(config)?)?;
    let graph = Graph::from_edges(config.graph.n, config.graph.edges.iter().map(|&[u, v]| (u, v)))
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let list = BoundingList::from_json(config.list).map_err(|e| CliError::Parse(e.to_string()))?;
    let chi = Coloring::new(list.k(), config.chi).map_err(|e| CliError::Parse(e.to_string()))?;
    if list.n() != graph.n() || chi.len() != graph.n() || config.v >= graph.n() {
        return Err(CliError::Parse("graph, list, coloring and v disagree on the vertex count".into()));
    }
    let spec = match kind {
        UpdateKindArg::Compress => UpdateSpec::Compress {
            a: config.a.ok_or_else(|| CliError::Parse("compress needs the set \"a\"".into()))?,
        },
        UpdateKindArg::Seeding => UpdateSpec::Seeding,
        UpdateKindArg::Disjoint => UpdateSpec::Disjoint,
    };
    let mut rng = RootSeed(rng_seed).stream(0);
    let report: MarginalReport = marginal_test(&graph, &spec, &list, config.v, &chi, trials, config.pair_rule, &mut rng)?;
    println!("{}", serde_json::to_string(&report)?);
    if !report.pass {
        return Err(CliError::Statistical(format!("colours {:?} outside the 3σ band", report.failing_colors)));
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchReport {
    n: usize,
    max_degree: usize,
    k: usize,
    reps: usize,
    seeding_set: usize,
    mean_seconds: f64,
    mean_blocks: f64,
    mean_updates: f64,
    /// `n·Δ²·ln k`, the shape of the expected running time bound.
    reference: f64,
    seconds_per_reference: f64,
}

pub fn bench(graph: &Path, k: usize, reps: usize, rng_seed: u64) -> CliResult {
    if reps == 0 {
        return Err(CliError::Usage("--reps must be positive".into()));
    }
    let graph = load_graph(graph)?;
    let sampler = sampler(&graph, k, None, rng_seed)?;
    let (mut blocks, mut updates) = (0, 0);
    let start = Instant::now();
    for i in 0..reps {
        let out = draw(&sampler, rng_seed, i)?;
        blocks += out.blocks;
        updates += out.updates;
    }
    let mean_seconds = start.elapsed().as_secs_f64() / reps as f64;
    let (n, delta) = (graph.n(), graph.max_degree());
    let reference = n as f64 * (delta * delta) as f64 * (k as f64).ln();
    let report = BenchReport {
        n,
        max_degree: delta,
        k,
        reps,
        seeding_set: sampler.seeding_set().len(),
        mean_seconds,
        mean_blocks: blocks as f64 / reps as f64,
        mean_updates: updates as f64 / reps as f64,
        reference,
        seconds_per_reference: mean_seconds / reference,
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}
