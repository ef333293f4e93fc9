//! Seeding sets via Moser–Tardos resampling.
//!
//! A seeding set `𝒮` with parameter `η` satisfies, for every vertex `v`,
//! `|N(v) \ 𝒮| <= (1 - η)Δ` and `|N(v) ∩ 𝒮| <= Δ/3`. Membership is sampled
//! independently; while some vertex violates either bound, the memberships of
//! its neighbours (the variables its bad event depends on) are redrawn.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Below this maximum degree the sampler runs without a seeding set.
pub const MIN_SEEDING_DEGREE: usize = 50;

/// Consecutive failed searches before falling back to the empty set.
pub const MAX_SEARCH_ATTEMPTS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedingSet {
    pub eta: f64,
    /// Sorted vertex ids.
    pub members: Vec<Vertex>,
}

impl SeedingSet {
    /// The empty set with `η = 0`, which satisfies both bounds on any graph.
    pub fn empty() -> Self {
        SeedingSet { eta: 0.0, members: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn membership(&self, n: usize) -> Vec<bool> {
        let mut member = vec![false; n];
        for &v in &self.members {
            member[v] = true;
        }
        member
    }
}

/// `η = 1/3 - 2·sqrt(ln Δ / Δ)`, clamped into `[0, 1/3)`.
pub fn default_eta(max_degree: usize) -> f64 {
    if max_degree < 2 {
        return 0.0;
    }
    let d = max_degree as f64;
    (1.0 / 3.0 - 2.0 * (d.ln() / d).sqrt()).max(0.0)
}

pub fn default_resample_cap(n: usize) -> usize {
    (4 * n).max(64)
}

fn out_bound_ok(out_count: usize, eta: f64, max_degree: usize) -> bool {
    out_count as f64 <= (1.0 - eta) * max_degree as f64
}

fn in_bound_ok(in_count: usize, max_degree: usize) -> bool {
    3 * in_count <= max_degree
}

/// Deterministic full check of both bounds at every vertex.
pub fn verify_seeding_set(graph: &Graph, members: &[Vertex], eta: f64) -> bool {
    let delta = graph.max_degree();
    let mut member = vec![false; graph.n()];
    for &v in members {
        if v >= graph.n() {
            return false;
        }
        member[v] = true;
    }
    (0..graph.n()).all(|v| {
        let inside = graph.neighbors(v).iter().filter(|&&w| member[w]).count();
        in_bound_ok(inside, delta) && out_bound_ok(graph.degree(v) - inside, eta, delta)
    })
}

struct Search<'g> {
    graph: &'g Graph,
    eta: f64,
    p: f64,
    member: Vec<bool>,
    in_count: Vec<usize>,
    violators: BTreeSet<Vertex>,
}

impl<'g> Search<'g> {
    fn new<R: Rng + ?Sized>(graph: &'g Graph, eta: f64, rng: &mut R) -> Self {
        let p = (eta + 1.0 / 3.0) / 2.0;
        let member: Vec<bool> = (0..graph.n()).map(|_| rng.gen_bool(p)).collect();
        let in_count: Vec<usize> =
            (0..graph.n()).map(|v| graph.neighbors(v).iter().filter(|&&w| member[w]).count()).collect();
        let mut search = Search { graph, eta, p, member, in_count, violators: BTreeSet::new() };
        for v in 0..graph.n() {
            search.refresh(v);
        }
        search
    }

    fn violates(&self, v: Vertex) -> bool {
        let delta = self.graph.max_degree();
        let inside = self.in_count[v];
        !(in_bound_ok(inside, delta) && out_bound_ok(self.graph.degree(v) - inside, self.eta, delta))
    }

    fn refresh(&mut self, v: Vertex) {
        if self.violates(v) {
            self.violators.insert(v);
        } else {
            self.violators.remove(&v);
        }
    }

    /// Redraws the membership of every neighbour of `v`; returns the vertices
    /// whose counts changed.
    fn resample<R: Rng + ?Sized>(&mut self, v: Vertex, rng: &mut R) -> Vec<Vertex> {
        let graph = self.graph;
        let mut touched = Vec::new();
        for &u in graph.neighbors(v) {
            let now = rng.gen_bool(self.p);
            if now == self.member[u] {
                continue;
            }
            self.member[u] = now;
            for &x in graph.neighbors(u) {
                if now {
                    self.in_count[x] += 1;
                } else {
                    self.in_count[x] -= 1;
                }
                touched.push(x);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        for &x in &touched {
            self.refresh(x);
        }
        touched
    }

    fn counts_consistent(&self) -> bool {
        (0..self.graph.n()).all(|v| {
            self.in_count[v] == self.graph.neighbors(v).iter().filter(|&&w| self.member[w]).count()
                && self.violators.contains(&v) == self.violates(v)
        })
    }

    fn into_set(self) -> SeedingSet {
        let members = self.member.iter().enumerate().filter(|(_, &m)| m).map(|(v, _)| v).collect();
        SeedingSet { eta: self.eta, members }
    }
}

/// One Moser–Tardos search, giving up after `resample_cap` resamplings.
pub fn find_seeding_set<R: Rng + ?Sized>(graph: &Graph, eta: f64, rng: &mut R, resample_cap: usize) -> Result<SeedingSet> {
    if !(0.0..1.0 / 3.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!("η must lie in [0, 1/3), got {eta}")));
    }
    let mut search = Search::new(graph, eta, rng);
    let mut resamples = 0;
    while let Some(&v) = search.violators.first() {
        if resamples == resample_cap {
            return Err(Error::SeedingSetFailure { cap: resample_cap });
        }
        search.resample(v, rng);
        resamples += 1;
        debug_assert!(search.counts_consistent());
    }
    Ok(search.into_set())
}

/// Seeding set used by the sampler: empty for small Δ, otherwise up to
/// [`MAX_SEARCH_ATTEMPTS`] searches before falling back to the empty set.
pub fn choose_seeding_set<R: Rng + ?Sized>(graph: &Graph, eta: Option<f64>, rng: &mut R) -> Result<SeedingSet> {
    if graph.max_degree() < MIN_SEEDING_DEGREE {
        return Ok(SeedingSet::empty());
    }
    let eta = eta.unwrap_or_else(|| default_eta(graph.max_degree()));
    let cap = default_resample_cap(graph.n());
    for _ in 0..MAX_SEARCH_ATTEMPTS {
        match find_seeding_set(graph, eta, rng, cap) {
            Ok(set) => return Ok(set),
            Err(Error::SeedingSetFailure { .. }) => continue,
            Err(other) => return Err(other),
        }
    }
    Ok(SeedingSet::empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, random_regular, GraphKind};
    use crate::rng::RootSeed;

    #[test]
    fn edgeless_graph_always_valid() {
        let g = Graph::empty(20);
        let mut rng = RootSeed(0).stream(0);
        for eta in [0.0, 0.1, 0.3] {
            let set = find_seeding_set(&g, eta, &mut rng, 0).unwrap();
            assert!(verify_seeding_set(&g, &set.members, eta));
        }
    }

    #[test]
    fn empty_set_with_zero_eta_is_valid() {
        let mut rng = RootSeed(1).stream(0);
        for g in [
            generate(GraphKind::Clique { n: 6 }, &mut rng).unwrap(),
            random_regular(40, 5, &mut rng).unwrap(),
        ] {
            assert!(verify_seeding_set(&g, &[], 0.0));
        }
    }

    #[test]
    fn whole_clique_is_rejected() {
        let g = generate(GraphKind::Clique { n: 4 }, &mut RootSeed(0).stream(0)).unwrap();
        assert!(!verify_seeding_set(&g, &[0, 1, 2, 3], 0.0));
    }

    #[test]
    fn eta_range_checked() {
        let g = Graph::empty(3);
        let mut rng = RootSeed(0).stream(0);
        assert!(find_seeding_set(&g, -0.1, &mut rng, 10).is_err());
        assert!(find_seeding_set(&g, 1.0 / 3.0, &mut rng, 10).is_err());
    }

    #[test]
    fn default_eta_clamps() {
        assert_eq!(default_eta(100), 0.0);
        assert_eq!(default_eta(1), 0.0);
        let big = default_eta(10_000);
        assert!(big > 0.2 && big < 1.0 / 3.0);
    }

    #[test]
    fn resampling_stays_within_distance_two() {
        let mut rng = RootSeed(4).stream(0);
        let g = random_regular(200, 12, &mut rng).unwrap();
        let mut search = Search::new(&g, 0.3, &mut rng);
        for v in (0..g.n()).step_by(7) {
            let touched = search.resample(v, &mut rng);
            for x in touched {
                let near = x == v || g.has_edge(v, x) || g.neighbors(v).iter().any(|&u| g.has_edge(u, x));
                assert!(near, "{x} is farther than 2 from {v}");
            }
            assert!(search.counts_consistent());
        }
    }

    #[test]
    fn successful_search_verifies() {
        let mut rng = RootSeed(6).stream(0);
        let g = random_regular(300, 60, &mut rng).unwrap();
        let set = find_seeding_set(&g, 0.05, &mut rng, default_resample_cap(300)).unwrap();
        assert!(verify_seeding_set(&g, &set.members, set.eta));
        assert!(!set.is_empty());
    }

    #[test]
    fn small_degree_falls_back_to_empty() {
        let mut rng = RootSeed(0).stream(0);
        let g = random_regular(50, 4, &mut rng).unwrap();
        assert_eq!(choose_seeding_set(&g, None, &mut rng).unwrap(), SeedingSet::empty());
    }
}
