//! The three bounding-chain updates.
//!
//! Each update has a `gen` half, which draws fresh randomness, freezes it in an
//! [`UpdateRecord`] and rewrites the bounding set at one vertex, and a `decode`
//! half, which replays the record on any coloring compatible with the list the
//! record was generated against. Over the gen randomness, decoding recolours
//! the vertex uniformly among the colours its neighbours leave free, i.e. one
//! Glauber step, and the new colour always lies in the new bounding set.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::bounding::{compute_stats_with, BoundingList, NeighborhoodStats, PairRule};
use crate::coloring::{Color, ColorVec, Coloring};
use crate::error::{Error, Promise, PromiseViolation, Result};
use crate::graph::{Graph, Vertex};
use crate::real::Real;

/// Update type, serialised as the integer `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum UpdateKind {
    Compress = 1,
    Seeding = 2,
    Disjoint = 3,
}

impl From<UpdateKind> for u8 {
    fn from(kind: UpdateKind) -> u8 {
        kind as u8
    }
}

impl TryFrom<u8> for UpdateKind {
    type Error = String;

    fn try_from(gamma: u8) -> std::result::Result<Self, String> {
        match gamma {
            1 => Ok(UpdateKind::Compress),
            2 => Ok(UpdateKind::Seeding),
            3 => Ok(UpdateKind::Disjoint),
            other => Err(format!("unknown update type {other}")),
        }
    }
}

/// Which gen-time branch produced the record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    /// Compress, and seeding with a nonempty neighbourhood.
    None,
    /// The bounding set became a disjoint pair copied from a neighbour.
    Pair,
    /// The bounding set became one fresh colour outside `S`.
    Singleton,
    /// `{c1, c2}` with `c2` drawn from `D`.
    C2FromD,
    /// `{c1, c2}` with `c2` drawn from `E`.
    C2FromE,
}

/// Gen-time neighbourhood sizes, plus `q(v)` and `p_Δ(v)` for disjoint updates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenStats<P> {
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "q", skip_serializing_if = "Option::is_none")]
    pub q_v: Option<P>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_delta: Option<P>,
}

impl<P> Default for GenStats<P> {
    fn default() -> Self {
        GenStats { s: 0, q: 0, d: 0, e: 0, q_v: None, p_delta: None }
    }
}

impl<P> GenStats<P> {
    fn sizes(stats: &NeighborhoodStats) -> Self {
        GenStats { s: stats.s_len(), q: stats.q_len(), d: stats.d_len(), e: stats.e_len(), q_v: None, p_delta: None }
    }
}

/// One frozen update. Decoding depends only on this record, the graph and
/// the coloring being decoded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpdateRecord<P = f64> {
    pub v: Vertex,
    pub tau: P,
    pub gamma: UpdateKind,
    #[serde(rename = "M")]
    pub m: Vec<Color>,
    pub branch: Branch,
    pub stats: GenStats<P>,
    /// The bounding set written at `v`.
    pub new_list: Vec<Color>,
}

fn promise_violation(promise: Promise, v: Vertex, k: usize, max_degree: usize, sizes: &GenStats<impl Sized>) -> Error {
    Error::Promise(PromiseViolation {
        promise,
        vertex: v,
        s: sizes.s,
        q: sizes.q,
        d: sizes.d,
        e: sizes.e,
        k,
        max_degree,
    })
}

/// Uniform colour from `0..k` minus the sorted set `excluded`.
fn uniform_outside<R: Rng + ?Sized>(k: usize, excluded: &[Color], rng: &mut R) -> Color {
    let free = k - excluded.len();
    assert!(free > 0, "no colour outside the excluded set");
    let mut idx = rng.gen_range(0..free) as Color;
    // Shift past every excluded colour at or below the running candidate.
    for &c in excluded {
        if c <= idx {
            idx += 1;
        } else {
            break;
        }
    }
    idx
}

fn sorted_set(colors: &[Color]) -> Vec<Color> {
    let mut out = colors.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_probability<P: Real>(name: &str, p: P) -> P {
    let slack = P::probability_slack();
    assert!(
        p >= -slack && p <= P::one() + slack,
        "{name} = {p} lies outside [0, 1]; the update's promise cannot have held"
    );
    p
}

/// Compress update at `v` with the Δ-set `a`: `L'(v) = A ∪ {c1}` for `c1`
/// uniform outside `A`, and `M` is a uniform permutation of `A` followed by `c1`.
pub fn compress_gen<P: Real, R: Rng + ?Sized>(
    graph: &Graph,
    list: &mut BoundingList,
    v: Vertex,
    a: &[Color],
    rng: &mut R,
) -> Result<UpdateRecord<P>> {
    let k = list.k();
    let delta = graph.max_degree();
    let sorted_a = sorted_set(a);
    if sorted_a.len() != a.len() || a.len() != delta {
        return Err(Error::InvalidArgument(format!(
            "compress needs {delta} distinct colours, got {:?}",
            a
        )));
    }
    if sorted_a.last().is_some_and(|&c| c as usize >= k) {
        return Err(Error::InvalidArgument(format!("compress set {a:?} leaves 0..{k}")));
    }
    if k <= delta {
        return Err(promise_violation(Promise::ColorsExceedDegree, v, k, delta, &GenStats::<P>::default()));
    }

    let tau = P::sample_unit(rng);
    let c1 = uniform_outside(k, &sorted_a, rng);
    let mut m = sorted_a.clone();
    m.shuffle(rng);
    m.push(c1);

    let mut new_list = sorted_a;
    let pos = new_list.partition_point(|&c| c < c1);
    new_list.insert(pos, c1);
    list.assign(v, &new_list)?;

    Ok(UpdateRecord {
        v,
        tau,
        gamma: UpdateKind::Compress,
        m,
        branch: Branch::None,
        stats: GenStats::default(),
        new_list,
    })
}

/// Seeding update at `v`: `L'(v) = {c1, c2, c3}` with `c1` uniform outside
/// `S` and `c2, c3` uniform in `S` (with repetition).
pub fn seeding_gen<P: Real, R: Rng + ?Sized>(
    graph: &Graph,
    list: &mut BoundingList,
    v: Vertex,
    rng: &mut R,
) -> Result<UpdateRecord<P>> {
    let k = list.k();
    let delta = graph.max_degree();
    let stats = compute_stats_with(graph, list, v, PairRule::default(), |_| true);
    let sizes = GenStats::<P>::sizes(&stats);
    if k <= delta {
        return Err(promise_violation(Promise::ColorsExceedDegree, v, k, delta, &sizes));
    }
    let s = stats.s_len() as u128;
    if s * s > (k - delta) as u128 * (delta as u128 + s) {
        return Err(promise_violation(Promise::Seeding, v, k, delta, &sizes));
    }
    assert!(stats.s_len() < k, "S covers every colour under the seeding promise");

    let tau = P::sample_unit(rng);
    let c1 = uniform_outside(k, &stats.s, rng);
    let (m, branch) = if stats.s.is_empty() {
        (vec![c1], Branch::Singleton)
    } else {
        let c2 = *stats.s.choose(rng).expect("S nonempty");
        let c3 = *stats.s.choose(rng).expect("S nonempty");
        (vec![c1, c2, c3], Branch::None)
    };
    let new_list = sorted_set(&m);
    list.assign(v, &new_list)?;

    Ok(UpdateRecord { v, tau, gamma: UpdateKind::Seeding, m, branch, stats: sizes, new_list })
}

/// Disjoint update at `v`, pairing the colours of `D` Jerrum-style.
pub fn disjoint_gen<P: Real, R: Rng + ?Sized>(
    graph: &Graph,
    list: &mut BoundingList,
    v: Vertex,
    rule: PairRule,
    rng: &mut R,
) -> Result<UpdateRecord<P>> {
    let k = list.k();
    let delta = graph.max_degree();
    let stats = compute_stats_with(graph, list, v, rule, |_| true);
    if let Err(reason) = stats.check_partition() {
        return Err(Error::InconsistentPairs { vertex: v, reason });
    }
    let mut sizes = GenStats::<P>::sizes(&stats);
    if k <= delta {
        return Err(promise_violation(Promise::ColorsExceedDegree, v, k, delta, &sizes));
    }
    let (s, q, d, e) = (sizes.s, sizes.q, sizes.d, sizes.e);
    let half_d = d / 2;
    // (S - Q)(k - Q - D/2) < (k - Δ)(k - Q), exact in integers since D is even.
    if ((s - q) * (k - q - half_d)) as u128 >= ((k - delta) * (k - q)) as u128 {
        return Err(promise_violation(Promise::Disjoint, v, k, delta, &sizes));
    }
    debug_assert!(k > q + d && k > s);

    let f = P::from_count;
    let (kf, qf, df, ef, deltaf) = (f(k), f(q), f(d), f(e), f(delta));
    let half_df = f(half_d);
    let q_v = check_probability(
        "q(v)",
        P::one() - (kf - qf - half_df) * ef / ((kf - qf - df) * (kf - deltaf)),
    );
    let p_delta = check_probability(
        "p_Δ(v)",
        (deltaf - qf - half_df) * df / ((kf - deltaf) * (kf - qf - df) * q_v),
    );
    sizes.q_v = Some(q_v);
    sizes.p_delta = Some(p_delta);

    let tau = P::sample_unit(rng);
    let stay_probability = (kf - qf - df) / (kf - qf - half_df);
    let (m, branch) = if d > 0 && P::sample_unit(rng) > stay_probability {
        let w = *stats.nstar.choose(rng).expect("N* nonempty when D > 0");
        (list.colors(w).collect::<Vec<_>>(), Branch::Pair)
    } else {
        let c1 = uniform_outside(k, &stats.s, rng);
        let c2_from_d = stats.d.choose(rng).copied();
        if P::sample_unit(rng) <= q_v {
            match c2_from_d {
                Some(c2) if P::sample_unit(rng) <= p_delta => (vec![c1, c2], Branch::C2FromD),
                _ => (vec![c1], Branch::Singleton),
            }
        } else {
            let c2 = *stats.e.choose(rng).expect("E nonempty when q(v) < 1");
            (vec![c1, c2], Branch::C2FromE)
        }
    };
    let new_list = sorted_set(&m);
    list.assign(v, &new_list)?;

    Ok(UpdateRecord { v, tau, gamma: UpdateKind::Disjoint, m, branch, stats: sizes, new_list })
}

fn contains(set: &ColorVec, c: Color) -> bool {
    set.binary_search(&c).is_ok()
}

/// The colour `decode` assigns to `rec.v`. `chi` must be compatible with the
/// bounding list the record was generated against.
pub fn decode_color<P: Real>(rec: &UpdateRecord<P>, graph: &Graph, chi: &Coloring) -> Color {
    let taken = chi.neighbor_colors(graph, rec.v);
    let k = P::from_count(chi.k());
    let delta = P::from_count(graph.max_degree());
    let used = P::from_count(taken.len());

    match rec.gamma {
        UpdateKind::Compress => {
            let (c1, perm) = rec.m.split_last().expect("compress record has M");
            let p = check_probability("p_χ(v)", (k - delta) / (k - used));
            if !contains(&taken, *c1) && rec.tau <= p {
                *c1
            } else {
                *perm
                    .iter()
                    .find(|c| !contains(&taken, **c))
                    .expect("compress fallback is empty only when c1 is forced")
            }
        }
        UpdateKind::Seeding => {
            if rec.m.len() == 1 {
                return rec.m[0];
            }
            let (c1, c2, c3) = (rec.m[0], rec.m[1], rec.m[2]);
            let s = P::from_count(rec.stats.s);
            let p = check_probability("p_χ(v)", s * s / ((k - used) * (used + s)));
            if (contains(&taken, c2) && contains(&taken, c3)) || rec.tau > p {
                c1
            } else if !contains(&taken, c2) {
                c2
            } else {
                c3
            }
        }
        UpdateKind::Disjoint => match rec.branch {
            Branch::Pair | Branch::Singleton => {
                let free: SmallVec<[Color; 2]> = rec.m.iter().copied().filter(|&c| !contains(&taken, c)).collect();
                assert_eq!(
                    free.len(),
                    1,
                    "{:?} record {:?} leaves {} free colours against χ(N(v)) = {:?}",
                    rec.branch,
                    rec.m,
                    free.len(),
                    taken
                );
                free[0]
            }
            Branch::C2FromD | Branch::C2FromE => {
                let (c1, c2) = (rec.m[0], rec.m[1]);
                let r = if rec.branch == Branch::C2FromD {
                    let st = &rec.stats;
                    let (q, d) = (P::from_count(st.q), P::from_count(st.d));
                    let half_d = P::from_count(st.d / 2);
                    let q_v = st.q_v.expect("disjoint record stores q(v)");
                    let p_delta = st.p_delta.expect("disjoint record stores p_Δ(v)");
                    let p_chi = check_probability("p_χ(v)", (used - q - half_d) * d / ((k - used) * (k - q - d) * q_v));
                    check_probability("p_χ(v)/p_Δ(v)", p_chi / p_delta)
                } else {
                    check_probability("p'_χ(v)", (k - delta) / (k - used))
                };
                if contains(&taken, c2) || rec.tau > r {
                    c1
                } else {
                    c2
                }
            }
            Branch::None => panic!("disjoint record without a branch tag"),
        },
    }
}

impl<P: Real> UpdateRecord<P> {
    /// Applies the update to `chi` in place.
    pub fn apply(&self, graph: &Graph, chi: &mut Coloring) {
        let c = decode_color(self, graph, chi);
        chi.set(self.v, c);
    }

    /// Structural invariants of a record for a graph of maximum degree
    /// `max_degree` with `k` colours.
    pub fn check_invariants(&self, k: usize, max_degree: usize) -> std::result::Result<(), String> {
        let in_range = |cs: &[Color]| cs.iter().all(|&c| (c as usize) < k);
        if !in_range(&self.m) || !in_range(&self.new_list) {
            return Err("colour out of range".into());
        }
        if !(self.tau >= P::zero() && self.tau <= P::one()) {
            return Err(format!("tau = {} outside [0, 1]", self.tau));
        }
        if sorted_set(&self.m) != self.new_list {
            return Err("new_list differs from the colours of M".into());
        }
        match self.gamma {
            UpdateKind::Compress => {
                if self.m.len() != max_degree + 1 || self.new_list.len() != max_degree + 1 {
                    return Err(format!("compress M has length {}, expected Δ+1", self.m.len()));
                }
            }
            UpdateKind::Seeding => {
                let ok = match self.branch {
                    Branch::Singleton => self.m.len() == 1 && self.stats.s == 0,
                    Branch::None => self.m.len() == 3 && self.m[0] != self.m[1] && self.m[0] != self.m[2],
                    _ => false,
                };
                if !ok {
                    return Err(format!("malformed seeding record {:?} / {:?}", self.m, self.branch));
                }
            }
            UpdateKind::Disjoint => {
                let ok = match self.branch {
                    Branch::Singleton => self.m.len() == 1,
                    Branch::Pair | Branch::C2FromD => self.m.len() == 2 && self.stats.d > 0,
                    Branch::C2FromE => self.m.len() == 2 && self.stats.e > 0,
                    Branch::None => false,
                };
                if !ok || self.new_list.len() != self.m.len() {
                    return Err(format!("malformed disjoint record {:?} / {:?}", self.m, self.branch));
                }
            }
        }
        Ok(())
    }
}

/// Decodes a compress record, returning the updated coloring.
pub fn compress_decode<P: Real>(rec: &UpdateRecord<P>, graph: &Graph, chi: &Coloring) -> Coloring {
    assert_eq!(rec.gamma, UpdateKind::Compress);
    decoded(rec, graph, chi)
}

pub fn seeding_decode<P: Real>(rec: &UpdateRecord<P>, graph: &Graph, chi: &Coloring) -> Coloring {
    assert_eq!(rec.gamma, UpdateKind::Seeding);
    decoded(rec, graph, chi)
}

pub fn disjoint_decode<P: Real>(rec: &UpdateRecord<P>, graph: &Graph, chi: &Coloring) -> Coloring {
    assert_eq!(rec.gamma, UpdateKind::Disjoint);
    decoded(rec, graph, chi)
}

fn decoded<P: Real>(rec: &UpdateRecord<P>, graph: &Graph, chi: &Coloring) -> Coloring {
    let mut out = chi.clone();
    rec.apply(graph, &mut out);
    out
}

/// An update request, for callers that pick the update type at run time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UpdateSpec {
    Compress { a: Vec<Color> },
    Seeding,
    Disjoint,
}

impl UpdateSpec {
    pub fn kind(&self) -> UpdateKind {
        match self {
            UpdateSpec::Compress { .. } => UpdateKind::Compress,
            UpdateSpec::Seeding => UpdateKind::Seeding,
            UpdateSpec::Disjoint => UpdateKind::Disjoint,
        }
    }

    pub fn gen<P: Real, R: Rng + ?Sized>(
        &self,
        graph: &Graph,
        list: &mut BoundingList,
        v: Vertex,
        rule: PairRule,
        rng: &mut R,
    ) -> Result<UpdateRecord<P>> {
        match self {
            UpdateSpec::Compress { a } => compress_gen(graph, list, v, a, rng),
            UpdateSpec::Seeding => seeding_gen(graph, list, v, rng),
            UpdateSpec::Disjoint => disjoint_gen(graph, list, v, rule, rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RootSeed;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|w| (0, w))).unwrap()
    }

    #[test]
    fn uniform_outside_skips_excluded() {
        let mut rng = RootSeed(3).stream(0);
        let mut seen = [0usize; 6];
        for _ in 0..6000 {
            seen[uniform_outside(6, &[0, 2, 3], &mut rng) as usize] += 1;
        }
        assert_eq!((seen[0], seen[2], seen[3]), (0, 0, 0));
        assert!(seen[1] > 1500 && seen[4] > 1500 && seen[5] > 1500);
    }

    #[test]
    fn compress_forced_when_k_is_delta_plus_one() {
        let g = star(2);
        let mut rng = RootSeed(0).stream(0);
        for _ in 0..50 {
            let mut l = BoundingList::full(3, 3);
            let rec: UpdateRecord = compress_gen(&g, &mut l, 1, &[0, 2], &mut rng).unwrap();
            assert_eq!(rec.m[2], 1);
            assert_eq!(rec.new_list, vec![0, 1, 2]);
            rec.check_invariants(3, 2).unwrap();
        }
    }

    #[test]
    fn compress_rejects_bad_sets() {
        let g = star(2);
        let mut l = BoundingList::full(3, 5);
        let mut rng = RootSeed(0).stream(0);
        for a in [&[0][..], &[0, 0], &[0, 1, 2], &[0, 5]] {
            assert!(compress_gen::<f64, _>(&g, &mut l, 0, a, &mut rng).is_err(), "{a:?}");
        }
        assert_eq!(l, BoundingList::full(3, 5));
    }

    #[test]
    fn compress_decode_forced_when_neighbours_fill_a() {
        let g = star(2);
        let chi = Coloring::new(6, vec![5, 0, 1]).unwrap();
        let rec = UpdateRecord::<f64> {
            v: 0,
            tau: 0.999,
            gamma: UpdateKind::Compress,
            m: vec![1, 0, 4],
            branch: Branch::None,
            stats: GenStats::default(),
            new_list: vec![0, 1, 4],
        };
        assert_eq!(compress_decode(&rec, &g, &chi).get(0), 4);
    }

    #[test]
    fn seeding_degenerate_isolated_vertex() {
        let g = Graph::empty(1);
        let mut l = BoundingList::full(1, 4);
        let mut rng = RootSeed(1).stream(0);
        let rec: UpdateRecord = seeding_gen(&g, &mut l, 0, &mut rng).unwrap();
        assert_eq!(rec.branch, Branch::Singleton);
        assert_eq!(rec.m.len(), 1);
        let chi = Coloring::new(4, vec![2]).unwrap();
        assert_eq!(seeding_decode(&rec, &g, &chi).get(0), rec.m[0]);
    }

    #[test]
    fn seeding_forced_c1_when_c2_c3_taken() {
        let g = star(2);
        let chi = Coloring::new(8, vec![0, 3, 3]).unwrap();
        let rec = UpdateRecord::<f64> {
            v: 0,
            tau: 0.0,
            gamma: UpdateKind::Seeding,
            m: vec![6, 3, 3],
            branch: Branch::None,
            stats: GenStats { s: 4, ..GenStats::default() },
            new_list: vec![3, 6],
        };
        assert_eq!(seeding_decode(&rec, &g, &chi).get(0), 6);
    }

    #[test]
    fn seeding_promise_is_enforced() {
        // Δ = 3, full neighbour lists: S = k = 6, and 36/9 = 4 > k - Δ = 3.
        let g = star(3);
        let mut l = BoundingList::full(4, 6);
        let mut rng = RootSeed(0).stream(0);
        let err = seeding_gen::<f64, _>(&g, &mut l, 0, &mut rng).unwrap_err();
        assert!(matches!(err, Error::Promise(PromiseViolation { promise: Promise::Seeding, s: 6, .. })));
    }

    #[test]
    fn disjoint_pair_decodes_to_free_colour() {
        let g = star(2);
        let chi = Coloring::new(9, vec![0, 4, 7]).unwrap();
        let rec = UpdateRecord::<f64> {
            v: 0,
            tau: 0.5,
            gamma: UpdateKind::Disjoint,
            m: vec![4, 5],
            branch: Branch::Pair,
            stats: GenStats { s: 4, q: 0, d: 4, e: 0, q_v: Some(1.0), p_delta: Some(0.5) },
            new_list: vec![4, 5],
        };
        assert_eq!(disjoint_decode(&rec, &g, &chi).get(0), 5);
    }

    #[test]
    #[should_panic(expected = "free colours")]
    fn disjoint_pair_with_both_colours_taken_panics() {
        let g = star(2);
        let chi = Coloring::new(9, vec![0, 4, 5]).unwrap();
        let rec = UpdateRecord::<f64> {
            v: 0,
            tau: 0.5,
            gamma: UpdateKind::Disjoint,
            m: vec![4, 5],
            branch: Branch::Pair,
            stats: GenStats { s: 4, q: 0, d: 4, e: 0, q_v: Some(1.0), p_delta: Some(0.5) },
            new_list: vec![4, 5],
        };
        disjoint_decode(&rec, &g, &chi);
    }

    #[test]
    fn disjoint_minimal_neighbourhood_never_takes_d_colour() {
        // |χ(N(v))| = Q + D/2 makes p_χ(v) vanish.
        let g = star(2);
        let chi = Coloring::new(10, vec![0, 1, 3]).unwrap();
        let rec = UpdateRecord::<f64> {
            v: 0,
            tau: 0.25,
            gamma: UpdateKind::Disjoint,
            m: vec![8, 2],
            branch: Branch::C2FromD,
            stats: GenStats { s: 4, q: 0, d: 4, e: 0, q_v: Some(1.0), p_delta: Some(0.1) },
            new_list: vec![2, 8],
        };
        assert_eq!(disjoint_decode(&rec, &g, &chi).get(0), 8);
    }

    #[test]
    fn disjoint_without_pairs_has_no_pair_branch() {
        let g = star(2);
        let mut rng = RootSeed(5).stream(0);
        for _ in 0..2000 {
            let mut l = BoundingList::from_sets(8, vec![vec![0], vec![1, 2], vec![2, 3]]).unwrap();
            let rec: UpdateRecord = disjoint_gen(&g, &mut l, 0, PairRule::default(), &mut rng).unwrap();
            assert!(matches!(rec.branch, Branch::Singleton | Branch::C2FromE));
            rec.check_invariants(8, 2).unwrap();
        }
    }

    #[test]
    fn disjoint_promise_is_enforced() {
        // Δ = 3, k = 6: S - Q = 6 against (k - Δ) = 3.
        let g = star(3);
        let mut l = BoundingList::from_sets(6, vec![vec![0], vec![0, 1], vec![1, 2, 3], vec![3, 4, 5]]).unwrap();
        let mut rng = RootSeed(0).stream(0);
        let err = disjoint_gen::<f64, _>(&g, &mut l, 0, PairRule::default(), &mut rng).unwrap_err();
        assert!(matches!(err, Error::Promise(PromiseViolation { promise: Promise::Disjoint, .. })));
    }

    #[test]
    fn record_json_shape() {
        let g = star(2);
        let mut l = BoundingList::from_sets(7, vec![vec![0], vec![1, 2], vec![3, 4]]).unwrap();
        let mut rng = RootSeed(2).stream(0);
        let rec: UpdateRecord = disjoint_gen(&g, &mut l, 0, PairRule::default(), &mut rng).unwrap();
        let value = serde_json::to_value(&rec).unwrap();
        for key in ["v", "tau", "gamma", "M", "branch", "stats", "new_list"] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        assert_eq!(value["gamma"], 3);
        assert_eq!(value["stats"]["D"], 4);
        let back: UpdateRecord = serde_json::from_value(value).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn f32_records_decode() {
        let g = star(2);
        let mut rng = RootSeed(9).stream(0);
        let chi = Coloring::new(7, vec![0, 1, 3]).unwrap();
        let mut l = BoundingList::from_sets(7, vec![vec![0], vec![1, 2], vec![3, 4]]).unwrap();
        let rec: UpdateRecord<f32> = disjoint_gen(&g, &mut l, 0, PairRule::default(), &mut rng).unwrap();
        let out = disjoint_decode(&rec, &g, &chi);
        assert!(l.is_compatible(&out));
    }
}
