//! Bounding lists and the neighbourhood colour statistics the updates consume.
//!
//! For a vertex `v` and bounding list `L`:
//!
//! * `S` is the union of `L(w)` over neighbours `w`,
//! * `Q` is the union of the singleton lists among them,
//! * `N*` are the neighbours holding a two-colour list that shares no colour
//!   with any other neighbour's list (see [`PairRule`]),
//! * `D` is the union of those pairs and `E = S \ (Q ∪ D)`.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::coloring::{Color, ColorVec, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Slot {
    Full,
    Listed(SmallVec<[Color; 4]>),
}

/// Per-vertex candidate colour sets `L(v) ⊆ 0..k`, all nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingList {
    k: usize,
    slots: Vec<Slot>,
}

/// JSON dump form: `{"k": .., "lists": [[colours..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingListJson {
    pub k: usize,
    pub lists: Vec<Vec<Color>>,
}

pub enum Colors<'a> {
    Range(std::ops::Range<Color>),
    Slice(std::slice::Iter<'a, Color>),
}

impl Iterator for Colors<'_> {
    type Item = Color;

    fn next(&mut self) -> Option<Color> {
        match self {
            Colors::Range(r) => r.next(),
            Colors::Slice(it) => it.next().copied(),
        }
    }
}

impl BoundingList {
    /// Every vertex may take every colour: the start state of a block.
    pub fn full(n: usize, k: usize) -> Self {
        BoundingList { k, slots: vec![Slot::Full; n] }
    }

    pub fn from_sets(k: usize, sets: Vec<Vec<Color>>) -> Result<Self> {
        let mut list = BoundingList::full(sets.len(), k);
        for (v, set) in sets.into_iter().enumerate() {
            list.assign(v, &set)?;
        }
        Ok(list)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn len_at(&self, v: Vertex) -> usize {
        match &self.slots[v] {
            Slot::Full => self.k,
            Slot::Listed(s) => s.len(),
        }
    }

    pub fn contains(&self, v: Vertex, c: Color) -> bool {
        match &self.slots[v] {
            Slot::Full => (c as usize) < self.k,
            Slot::Listed(s) => s.binary_search(&c).is_ok(),
        }
    }

    /// Colours of `L(v)` in increasing order.
    pub fn colors(&self, v: Vertex) -> Colors<'_> {
        match &self.slots[v] {
            Slot::Full => Colors::Range(0..self.k as Color),
            Slot::Listed(s) => Colors::Slice(s.iter()),
        }
    }

    pub fn singleton(&self, v: Vertex) -> Option<Color> {
        match &self.slots[v] {
            Slot::Listed(s) if s.len() == 1 => Some(s[0]),
            Slot::Full if self.k == 1 => Some(0),
            _ => None,
        }
    }

    /// Replaces `L(v)`. The set is sorted and deduplicated; it must be nonempty
    /// and inside `0..k`.
    pub fn assign(&mut self, v: Vertex, colors: &[Color]) -> Result<()> {
        let mut set: SmallVec<[Color; 4]> = colors.iter().copied().collect();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(Error::InvalidArgument(format!("empty bounding set at vertex {v}")));
        }
        if let Some(&c) = set.last().filter(|&&c| c as usize >= self.k) {
            return Err(Error::InvalidArgument(format!("colour {c} outside 0..{} at vertex {v}", self.k)));
        }
        self.slots[v] = if set.len() == self.k { Slot::Full } else { Slot::Listed(set) };
        Ok(())
    }

    /// χ ∼ L: every vertex's colour lies in its bounding set.
    pub fn is_compatible(&self, chi: &Coloring) -> bool {
        chi.len() == self.n() && (0..self.n()).all(|v| self.contains(v, chi.get(v)))
    }

    /// True iff every bounding set has exactly one colour.
    pub fn all_singletons(&self) -> bool {
        (0..self.n()).all(|v| self.len_at(v) == 1)
    }

    /// The unique coloring compatible with an all-singleton list.
    pub fn collapsed(&self) -> Option<Coloring> {
        let colors = (0..self.n()).map(|v| self.singleton(v)).collect::<Option<Vec<_>>>()?;
        Some(Coloring::new(self.k, colors).expect("bounding sets lie in 0..k"))
    }

    /// `hist[s]` is the number of vertices with `|L(v)| = s`, for `s <= max`.
    pub fn size_histogram(&self) -> Vec<usize> {
        let max = (0..self.n()).map(|v| self.len_at(v)).max().unwrap_or(0);
        let mut hist = vec![0; max + 1];
        for v in 0..self.n() {
            hist[self.len_at(v)] += 1;
        }
        hist
    }

    pub fn to_json(&self) -> BoundingListJson {
        BoundingListJson { k: self.k, lists: (0..self.n()).map(|v| self.colors(v).collect()).collect() }
    }

    pub fn from_json(doc: BoundingListJson) -> Result<Self> {
        Self::from_sets(doc.k, doc.lists)
    }
}

/// How the disjointness condition on a two-colour neighbour list is quantified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRule {
    /// `L(w)` must be disjoint from `L(w')` for every other neighbour `w'` of
    /// `v`. This is what makes each pair colour appear in exactly one list
    /// around `v`, which decoding relies on.
    #[default]
    OtherNeighborsOfV,
    /// `L(w)` must be disjoint from `L(w')` for every neighbour `w'` of `w`.
    /// Kept for experiments; it does not guarantee `Q ∩ D = ∅`.
    NeighborsOfW,
}

/// The sets `S, Q, N*, D, E` around one vertex, each sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodStats {
    pub s: ColorVec,
    pub q: ColorVec,
    pub nstar: SmallVec<[Vertex; 8]>,
    pub d: ColorVec,
    pub e: ColorVec,
}

impl NeighborhoodStats {
    pub fn s_len(&self) -> usize {
        self.s.len()
    }

    pub fn q_len(&self) -> usize {
        self.q.len()
    }

    pub fn d_len(&self) -> usize {
        self.d.len()
    }

    pub fn e_len(&self) -> usize {
        self.e.len()
    }

    /// Checks `Q ∩ D = ∅`, `|D| = 2|N*|` and `E = S \ (Q ∪ D)`.
    pub fn check_partition(&self) -> std::result::Result<(), String> {
        if let Some(c) = self.q.iter().find(|c| self.d.binary_search(c).is_ok()) {
            return Err(format!("colour {c} lies in both Q and D"));
        }
        if self.d.len() != 2 * self.nstar.len() {
            return Err(format!("|D| = {} but |N*| = {}", self.d.len(), self.nstar.len()));
        }
        let expected: ColorVec = self
            .s
            .iter()
            .copied()
            .filter(|c| self.q.binary_search(c).is_err() && self.d.binary_search(c).is_err())
            .collect();
        if expected != self.e {
            return Err("E differs from S \\ (Q ∪ D)".into());
        }
        Ok(())
    }
}

/// Statistics of `v` under `list`, with the default pair rule.
pub fn compute_stats(graph: &Graph, list: &BoundingList, v: Vertex) -> NeighborhoodStats {
    compute_stats_with(graph, list, v, PairRule::default(), |_| true)
}

/// Statistics of `v` counting only neighbours accepted by `include`; used for
/// the restriction of a list to the already-processed neighbours.
pub fn compute_stats_with<F>(graph: &Graph, list: &BoundingList, v: Vertex, rule: PairRule, include: F) -> NeighborhoodStats
where
    F: Fn(Vertex) -> bool,
{
    let nbrs: SmallVec<[Vertex; 16]> = graph.neighbors(v).iter().copied().filter(|&w| include(w)).collect();

    // Multiset of every colour occurrence among the included neighbours.
    let mut occurrences: Vec<Color> = Vec::new();
    let mut q = ColorVec::new();
    for &w in &nbrs {
        occurrences.extend(list.colors(w));
        if let Some(c) = list.singleton(w) {
            q.push(c);
        }
    }
    occurrences.sort_unstable();
    q.sort_unstable();
    q.dedup();

    let multiplicity = |c: Color| {
        let lo = occurrences.partition_point(|&x| x < c);
        let hi = occurrences.partition_point(|&x| x <= c);
        hi - lo
    };

    let mut nstar = SmallVec::new();
    let mut d = ColorVec::new();
    for &w in &nbrs {
        if list.len_at(w) != 2 {
            continue;
        }
        let pair: SmallVec<[Color; 2]> = list.colors(w).collect();
        let disjoint = match rule {
            PairRule::OtherNeighborsOfV => pair.iter().all(|&c| multiplicity(c) == 1),
            PairRule::NeighborsOfW => graph
                .neighbors(w)
                .iter()
                .filter(|&&x| x != w && include(x))
                .all(|&x| pair.iter().all(|&c| !list.contains(x, c))),
        };
        if disjoint {
            nstar.push(w);
            d.extend(pair);
        }
    }
    d.sort_unstable();
    d.dedup();

    let mut s: ColorVec = occurrences.iter().copied().collect();
    s.dedup();
    let e = s
        .iter()
        .copied()
        .filter(|c| q.binary_search(c).is_err() && d.binary_search(c).is_err())
        .collect();

    let stats = NeighborhoodStats { s, q, nstar, d, e };
    if rule == PairRule::OtherNeighborsOfV {
        debug_assert_eq!(stats.check_partition(), Ok(()));
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|w| (0, w))).unwrap()
    }

    fn lists(k: usize, sets: &[&[Color]]) -> BoundingList {
        BoundingList::from_sets(k, sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn all_singleton_neighbours() {
        let g = star(2);
        let l = lists(5, &[&[0, 1, 2, 3, 4], &[1], &[2]]);
        let st = compute_stats(&g, &l, 0);
        assert_eq!(st.s.as_slice(), &[1, 2]);
        assert_eq!(st.q.as_slice(), &[1, 2]);
        assert!(st.nstar.is_empty() && st.d.is_empty() && st.e.is_empty());
    }

    #[test]
    fn disjoint_pairs() {
        let g = star(2);
        let l = lists(5, &[&[0], &[1, 2], &[3, 4]]);
        let st = compute_stats(&g, &l, 0);
        assert_eq!(st.nstar.as_slice(), &[1, 2]);
        assert_eq!(st.d.as_slice(), &[1, 2, 3, 4]);
        assert!(st.q.is_empty() && st.e.is_empty());
    }

    #[test]
    fn intersecting_pairs_are_not_disjoint() {
        let g = star(2);
        let l = lists(5, &[&[0], &[1, 2], &[2, 3]]);
        let st = compute_stats(&g, &l, 0);
        assert!(st.nstar.is_empty() && st.d.is_empty() && st.q.is_empty());
        assert_eq!(st.e.as_slice(), &[1, 2, 3]);
    }

    #[test]
    fn pair_rules_disagree_when_neighbours_are_not_adjacent() {
        // Leaves of a star are pairwise non-adjacent, so under the N(w)
        // reading the pair {1,2} survives next to the singleton {1}.
        let g = star(2);
        let l = lists(5, &[&[0], &[1, 2], &[1]]);
        let default = compute_stats(&g, &l, 0);
        assert!(default.d.is_empty());
        let alt = compute_stats_with(&g, &l, 0, PairRule::NeighborsOfW, |_| true);
        assert_eq!(alt.d.as_slice(), &[1, 2]);
        assert!(alt.check_partition().is_err());
    }

    #[test]
    fn compatibility() {
        let full = BoundingList::full(3, 7);
        let chi = Coloring::new(7, vec![5, 5, 5]).unwrap();
        assert!(full.is_compatible(&chi));
        let fives = lists(7, &[&[5], &[5], &[5]]);
        assert!(fives.is_compatible(&chi));
        let chi = Coloring::new(7, vec![5, 6, 5]).unwrap();
        assert!(!fives.is_compatible(&chi));
    }

    #[test]
    fn singletons() {
        assert!(lists(4, &[&[0], &[3], &[2]]).all_singletons());
        assert!(!lists(4, &[&[0], &[1, 3], &[2]]).all_singletons());
        assert!(!BoundingList::full(3, 2).all_singletons());
        assert_eq!(lists(4, &[&[0], &[3]]).collapsed().unwrap().as_slice(), &[0, 3]);
    }

    #[test]
    fn assign_validates() {
        let mut l = BoundingList::full(2, 3);
        assert!(l.assign(0, &[]).is_err());
        assert!(l.assign(0, &[3]).is_err());
        l.assign(1, &[2, 0, 2]).unwrap();
        assert_eq!(l.colors(1).collect::<Vec<_>>(), vec![0, 2]);
        l.assign(1, &[0, 1, 2]).unwrap();
        assert_eq!(l, BoundingList::full(2, 3));
    }

    #[test]
    fn json_round_trip() {
        let l = lists(6, &[&[0, 1, 2, 3, 4, 5], &[1, 4], &[3]]);
        let doc = l.to_json();
        assert_eq!(doc.lists[0].len(), 6);
        let back = BoundingList::from_json(serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap()).unwrap();
        assert_eq!(back, l);
    }
}
