//! The four-phase sampler unit and the coupling-from-the-past loop.
//!
//! A unit starts from the full bounding list and runs
//!
//! 1. seeding: for each `v_i` in the seeding set, compress its neighbours
//!    outside `{v_1..v_{i-1}}` around the lists of its earlier seeded
//!    neighbours, then apply a seeding update at `v_i`;
//! 2. for each `v_i` in the seeding set, compress its neighbours outside the
//!    set around the lists of its seeded neighbours, then apply disjoint;
//! 3. for the remaining vertices in order, compress the not-yet-processed
//!    neighbours around a set chosen by [`phase3_choose_a`], then apply
//!    disjoint;
//! 4. `T_D` disjoint updates at uniformly random vertices.
//!
//! After phase 3 every bounding set has at most two colours; phase 4 drives
//! them to singletons. A unit whose final list is all singletons maps every
//! coloring to the same coloring.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounding::{compute_stats_with, BoundingList, PairRule};
use crate::coloring::{Color, Coloring};
use crate::error::{Error, Promise, PromiseViolation, Result};
use crate::graph::{Graph, Vertex};
use crate::real::Real;
use crate::seeding_set::{choose_seeding_set, verify_seeding_set, SeedingSet};
use crate::updates::{compress_gen, disjoint_gen, seeding_gen, UpdateRecord};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub pair_rule: PairRule,
    /// Overrides the default `η` when a seeding set has to be computed.
    pub eta: Option<f64>,
}

/// Bounding-set size histogram at the end of one phase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTrace {
    pub phase: u8,
    pub updates: usize,
    /// `histogram[s]` vertices have a bounding set of size `s`.
    pub histogram: Vec<usize>,
}

/// The output of one sampler unit.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplerBlock<P = f64> {
    /// Updates in time order, earliest first.
    pub records: Vec<UpdateRecord<P>>,
    pub final_list: BoundingList,
    /// The constant image of the block, present iff every final set is a singleton.
    pub collapsed: Option<Coloring>,
    pub trace: Vec<PhaseTrace>,
}

/// Number of phase-4 updates: `⌈2(k-Δ)·n·ln n / (k - 5Δ/2)⌉`.
pub fn drift_steps(n: usize, k: usize, max_degree: usize) -> Result<usize> {
    if 2 * k <= 5 * max_degree {
        return Err(Error::Promise(PromiseViolation {
            promise: Promise::Drift,
            vertex: 0,
            s: 0,
            q: 0,
            d: 0,
            e: 0,
            k,
            max_degree,
        }));
    }
    if n <= 1 {
        return Ok(0);
    }
    let (n, k, delta) = (n as f64, k as f64, max_degree as f64);
    Ok((2.0 * (k - delta) * n * n.ln() / (k - 2.5 * delta)).ceil() as usize)
}

/// Chooses the compress set for phase 3 at `v`, given which vertices are
/// already processed (`marked`). Statistics are those of the list restricted
/// to marked neighbours. The set is filled from `Q ∪ E` (lowest colours first,
/// at most Δ of them), then with whole disjoint pairs while two slots remain,
/// then with one colour of a further pair if exactly one slot remains, then
/// with the lowest unused colours.
pub fn phase3_choose_a(graph: &Graph, list: &BoundingList, v: Vertex, marked: &[bool], rule: PairRule) -> Vec<Color> {
    let delta = graph.max_degree();
    let stats = compute_stats_with(graph, list, v, rule, |w| marked[w]);
    let mut chosen = vec![false; list.k()];
    let mut a = Vec::with_capacity(delta);

    let mut q_or_e: Vec<Color> = stats.q.iter().chain(stats.e.iter()).copied().collect();
    q_or_e.sort_unstable();
    for c in q_or_e.into_iter().take(delta) {
        chosen[c as usize] = true;
        a.push(c);
    }

    let mut pairs = stats.nstar.iter().map(|&w| list.colors(w).collect::<Vec<_>>());
    while delta - a.len() >= 2 {
        let Some(pair) = pairs.next() else { break };
        for c in pair {
            chosen[c as usize] = true;
            a.push(c);
        }
    }
    if delta - a.len() == 1 {
        if let Some(pair) = pairs.next() {
            chosen[pair[0] as usize] = true;
            a.push(pair[0]);
        }
    }

    fill_lowest(&mut a, &mut chosen, delta);
    a
}

fn fill_lowest(a: &mut Vec<Color>, chosen: &mut [bool], target: usize) {
    let mut c = 0;
    while a.len() < target {
        if !chosen[c] {
            chosen[c] = true;
            a.push(c as Color);
        }
        c += 1;
    }
}

/// A Δ-set containing every colour of `L(w)` for the given `required`
/// vertices, completed with the lowest unused colours.
fn covering_set(list: &BoundingList, required: impl Iterator<Item = Vertex>, delta: usize) -> Result<Vec<Color>> {
    let mut chosen = vec![false; list.k()];
    let mut a = Vec::with_capacity(delta);
    for w in required {
        for c in list.colors(w) {
            if !chosen[c as usize] {
                chosen[c as usize] = true;
                a.push(c);
            }
        }
    }
    if a.len() > delta {
        return Err(Error::InvalidArgument(format!(
            "seeded neighbours carry {} colours, more than Δ = {delta}",
            a.len()
        )));
    }
    fill_lowest(&mut a, &mut chosen, delta);
    Ok(a)
}

/// One sampler unit in progress. The phases can be driven one at a time so
/// that the bounding list can be inspected between them.
pub struct SamplerUnit<'a, P = f64> {
    graph: &'a Graph,
    seeding: &'a SeedingSet,
    rule: PairRule,
    list: BoundingList,
    records: Vec<UpdateRecord<P>>,
    trace: Vec<PhaseTrace>,
}

impl<'a, P: Real> SamplerUnit<'a, P> {
    pub fn new(graph: &'a Graph, k: usize, seeding: &'a SeedingSet, rule: PairRule) -> Result<Self> {
        Self::with_list(graph, BoundingList::full(graph.n(), k), seeding, rule)
    }

    /// A unit resuming from an arbitrary bounding list.
    pub fn with_list(graph: &'a Graph, list: BoundingList, seeding: &'a SeedingSet, rule: PairRule) -> Result<Self> {
        if list.n() != graph.n() {
            return Err(Error::InvalidArgument("bounding list and graph sizes differ".into()));
        }
        if list.k() < graph.max_degree() + 2 {
            return Err(Error::InvalidArgument(format!(
                "need k >= Δ + 2, got k = {} with Δ = {}",
                list.k(),
                graph.max_degree()
            )));
        }
        Ok(SamplerUnit { graph, seeding, rule, list, records: Vec::new(), trace: Vec::new() })
    }

    pub fn list(&self) -> &BoundingList {
        &self.list
    }

    pub fn records(&self) -> &[UpdateRecord<P>] {
        &self.records
    }

    fn close_phase(&mut self, phase: u8) {
        self.trace.push(PhaseTrace { phase, updates: self.records.len(), histogram: self.list.size_histogram() });
    }

    fn compress<R: Rng + ?Sized>(&mut self, v: Vertex, a: &[Color], rng: &mut R) -> Result<()> {
        let rec = compress_gen(self.graph, &mut self.list, v, a, rng)?;
        self.records.push(rec);
        Ok(())
    }

    fn disjoint<R: Rng + ?Sized>(&mut self, v: Vertex, rng: &mut R) -> Result<()> {
        let rec = disjoint_gen(self.graph, &mut self.list, v, self.rule, rng)?;
        self.records.push(rec);
        Ok(())
    }

    pub fn phase1<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let graph = self.graph;
        let delta = graph.max_degree();
        let mut seeded = vec![false; graph.n()];
        for &v in &self.seeding.members {
            let a = covering_set(&self.list, graph.neighbors(v).iter().copied().filter(|&w| seeded[w]), delta)?;
            for &w in graph.neighbors(v) {
                if !seeded[w] {
                    self.compress(w, &a, rng)?;
                }
            }
            let rec = seeding_gen(graph, &mut self.list, v, rng)?;
            self.records.push(rec);
            seeded[v] = true;
        }
        for &v in &self.seeding.members {
            assert!(self.list.len_at(v) <= 3, "seeded vertex {v} left phase 1 with {} colours", self.list.len_at(v));
        }
        self.close_phase(1);
        Ok(())
    }

    pub fn phase2<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let graph = self.graph;
        let delta = graph.max_degree();
        let member = self.seeding.membership(graph.n());
        for &v in &self.seeding.members {
            let a = covering_set(&self.list, graph.neighbors(v).iter().copied().filter(|&w| member[w]), delta)?;
            for &w in graph.neighbors(v) {
                if !member[w] {
                    self.compress(w, &a, rng)?;
                }
            }
            self.disjoint(v, rng)?;
        }
        for &v in &self.seeding.members {
            assert!(self.list.len_at(v) <= 2, "seeded vertex {v} left phase 2 with {} colours", self.list.len_at(v));
        }
        self.close_phase(2);
        Ok(())
    }

    pub fn phase3<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let graph = self.graph;
        let mut marked = self.seeding.membership(graph.n());
        for v in 0..graph.n() {
            if marked[v] {
                continue;
            }
            let a = phase3_choose_a(graph, &self.list, v, &marked, self.rule);
            for &w in graph.neighbors(v) {
                if !marked[w] {
                    self.compress(w, &a, rng)?;
                }
            }
            self.disjoint(v, rng)?;
            marked[v] = true;
        }
        for v in 0..graph.n() {
            assert!(self.list.len_at(v) <= 2, "vertex {v} left phase 3 with {} colours", self.list.len_at(v));
        }
        self.close_phase(3);
        Ok(())
    }

    /// `steps` disjoint updates at uniformly random vertices.
    pub fn drift<R: Rng + ?Sized>(&mut self, steps: usize, rng: &mut R) -> Result<()> {
        let n = self.graph.n();
        for _ in 0..steps {
            let v = rng.gen_range(0..n);
            self.disjoint(v, rng)?;
        }
        Ok(())
    }

    pub fn phase4<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let steps = drift_steps(self.graph.n(), self.list.k(), self.graph.max_degree())?;
        self.drift(steps, rng)?;
        self.close_phase(4);
        Ok(())
    }

    pub fn finish(self) -> SamplerBlock<P> {
        let collapsed = self.list.collapsed();
        SamplerBlock { records: self.records, final_list: self.list, collapsed, trace: self.trace }
    }
}

/// Runs all four phases from the full bounding list.
pub fn run_sampler_unit<P: Real, R: Rng + ?Sized>(
    graph: &Graph,
    k: usize,
    seeding: &SeedingSet,
    rule: PairRule,
    rng: &mut R,
) -> Result<SamplerBlock<P>> {
    drift_steps(graph.n(), k, graph.max_degree())?;
    let mut unit = SamplerUnit::new(graph, k, seeding, rule)?;
    unit.phase1(rng)?;
    unit.phase2(rng)?;
    unit.phase3(rng)?;
    unit.phase4(rng)?;
    Ok(unit.finish())
}

/// The collapse predicate: every final bounding set is a singleton.
pub fn phi<P>(block: &SamplerBlock<P>) -> bool {
    block.final_list.all_singletons()
}

/// Applies the block's updates to `chi`, earliest first.
pub fn apply_block<P: Real>(block: &SamplerBlock<P>, graph: &Graph, chi: &Coloring) -> Coloring {
    let mut out = chi.clone();
    for rec in &block.records {
        rec.apply(graph, &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleOutcome {
    pub coloring: Coloring,
    /// Blocks generated before one collapsed, including that one.
    pub blocks: usize,
    pub updates: usize,
    /// Phase traces of every generated block, in generation order.
    pub traces: Vec<Vec<PhaseTrace>>,
}

/// Perfect sampler for a fixed graph, colour count and seeding set.
#[derive(Clone, Debug)]
pub struct PerfectSampler<'g> {
    graph: &'g Graph,
    k: usize,
    seeding: SeedingSet,
    rule: PairRule,
}

impl<'g> PerfectSampler<'g> {
    pub fn new(graph: &'g Graph, k: usize, seeding: SeedingSet, config: &SamplerConfig) -> Result<Self> {
        if !verify_seeding_set(graph, &seeding.members, seeding.eta) {
            return Err(Error::InvalidArgument("seeding set violates its degree bounds".into()));
        }
        if k < graph.max_degree() + 2 {
            return Err(Error::InvalidArgument(format!("need k >= Δ + 2, got k = {k}")));
        }
        drift_steps(graph.n(), k, graph.max_degree())?;
        let mut seeding = seeding;
        seeding.members.sort_unstable();
        seeding.members.dedup();
        Ok(PerfectSampler { graph, k, seeding, rule: config.pair_rule })
    }

    /// Computes the seeding set once with `rng`, then builds the sampler.
    pub fn prepare<R: Rng + ?Sized>(graph: &'g Graph, k: usize, config: &SamplerConfig, rng: &mut R) -> Result<Self> {
        let seeding = choose_seeding_set(graph, config.eta, rng)?;
        Self::new(graph, k, seeding, config)
    }

    pub fn seeding_set(&self) -> &SeedingSet {
        &self.seeding
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block<P: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SamplerBlock<P>> {
        run_sampler_unit(self.graph, self.k, &self.seeding, self.rule, rng)
    }

    /// Generates blocks `B_1, B_2, ..` (`B_1` nearest to time zero) until one
    /// collapses, then pushes its constant image through the earlier-generated
    /// blocks, applying `B_1` last.
    pub fn sample_with<P: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SampleOutcome> {
        let mut blocks: Vec<SamplerBlock<P>> = Vec::new();
        let mut updates = 0;
        loop {
            let block: SamplerBlock<P> = self.block(rng)?;
            updates += block.records.len();
            if let Some(constant) = block.collapsed.clone() {
                let count = blocks.len() + 1;
                let coloring = blocks.iter().rev().fold(constant, |chi, b| apply_block(b, self.graph, &chi));
                let traces = blocks.iter().chain(std::iter::once(&block)).map(|b| b.trace.clone()).collect();
                return Ok(SampleOutcome { coloring, blocks: count, updates, traces });
            }
            blocks.push(block);
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SampleOutcome> {
        self.sample_with::<f64, R>(rng)
    }
}

/// Draws one exactly uniform proper `k`-coloring of `graph`.
pub fn perfect_sample<R: Rng + ?Sized>(graph: &Graph, k: usize, rng: &mut R) -> Result<Coloring> {
    let sampler = PerfectSampler::prepare(graph, k, &SamplerConfig::default(), rng)?;
    Ok(sampler.sample(rng)?.coloring)
}
