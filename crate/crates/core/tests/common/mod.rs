#![allow(dead_code)]

use chromatic_cftp::bounding::BoundingList;
use chromatic_cftp::graph::{generate, Graph, GraphKind, Vertex};
use chromatic_cftp::oracle::{marginal_test, MarginalReport};
use chromatic_cftp::rng::RootSeed;
use chromatic_cftp::{Color, Coloring, PairRule, UpdateSpec};
use rand::seq::SliceRandom;
use rand::Rng;

/// Star with centre 0 and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|w| (0, w))).unwrap()
}

pub fn family(kind: GraphKind) -> Graph {
    generate(kind, &mut RootSeed(0).stream(0)).unwrap()
}

/// Vertex 0 isolated, plus the edge 1-2 so that Δ = 1.
pub fn isolated_plus_edge() -> Graph {
    Graph::from_edges(3, [(1, 2)]).unwrap()
}

/// Full list at the centre, the given sets at leaves `1..`.
pub fn star_list(k: usize, leaves: &[&[Color]]) -> BoundingList {
    let mut sets = vec![(0..k as Color).collect::<Vec<_>>()];
    sets.extend(leaves.iter().map(|s| s.to_vec()));
    BoundingList::from_sets(k, sets).unwrap()
}

pub fn coloring(k: usize, colors: &[Color]) -> Coloring {
    Coloring::new(k, colors.to_vec()).unwrap()
}

pub struct Case {
    pub name: &'static str,
    pub graph: Graph,
    pub list: BoundingList,
    pub v: Vertex,
    pub chi: Coloring,
    pub spec: UpdateSpec,
}

fn case(name: &'static str, graph: Graph, list: BoundingList, chi: &[Color], spec: UpdateSpec) -> Case {
    let chi = coloring(list.k(), chi);
    assert!(list.is_compatible(&chi), "{name}: fixture coloring escapes its list");
    Case { name, graph, list, v: 0, chi, spec }
}

fn compress(a: &[Color]) -> UpdateSpec {
    UpdateSpec::Compress { a: a.to_vec() }
}

/// Update configurations for the marginal checks, all at vertex 0.
pub fn marginal_cases() -> Vec<Case> {
    use UpdateSpec::{Disjoint, Seeding};
    let c6 = family(GraphKind::Cycle { n: 6 });
    let c6_list = {
        let mut sets: Vec<Vec<Color>> = vec![(0..6).collect(); 6];
        sets[1] = vec![0, 1];
        sets[5] = vec![1, 2];
        BoundingList::from_sets(6, sets).unwrap()
    };
    vec![
        case("compress isolated", isolated_plus_edge(), BoundingList::full(3, 5), &[0, 1, 2], compress(&[3])),
        case("compress neighbours inside A", star(3), BoundingList::full(4, 7), &[6, 0, 1, 2], compress(&[0, 1, 2])),
        case("compress neighbours outside A", star(3), BoundingList::full(4, 7), &[0, 4, 5, 6], compress(&[0, 1, 2])),
        case("compress repeated neighbour colour", star(3), BoundingList::full(4, 6), &[0, 2, 2, 3], compress(&[1, 3, 5])),
        case("compress on cycle", family(GraphKind::Cycle { n: 5 }), BoundingList::full(5, 6), &[2, 0, 1, 0, 1], compress(&[0, 1])),
        case("compress wide star", star(4), BoundingList::full(5, 9), &[8, 0, 1, 2, 3], compress(&[0, 2, 4, 6])),
        case("seeding singleton neighbours", star(3), star_list(10, &[&[0], &[1], &[2]]), &[5, 0, 1, 2], Seeding),
        case(
            "seeding triples",
            star(3),
            star_list(12, &[&[0, 1, 2], &[1, 2, 3], &[2, 4, 5]]),
            &[7, 0, 3, 5],
            Seeding,
        ),
        case(
            "seeding one neighbour colour",
            star(3),
            star_list(12, &[&[0, 1, 2], &[1, 2, 3], &[2, 4, 5]]),
            &[7, 2, 2, 2],
            Seeding,
        ),
        case("seeding isolated", isolated_plus_edge(), BoundingList::full(3, 4), &[0, 1, 2], Seeding),
        case(
            "seeding mixed sizes",
            star(4),
            star_list(14, &[&[0], &[0, 1, 2], &[3, 4, 5], &[6, 7]]),
            &[9, 0, 1, 4, 7],
            Seeding,
        ),
        case(
            "seeding shared quadruples",
            star(3),
            star_list(10, &[&[0, 1, 2, 3], &[0, 1, 2, 3], &[0, 1, 2, 3]]),
            &[4, 0, 1, 1],
            Seeding,
        ),
        case(
            "disjoint D, Q, E > 0",
            star(4),
            star_list(14, &[&[0], &[1, 2], &[3, 4], &[0, 5]]),
            &[9, 0, 1, 4, 5],
            Disjoint,
        ),
        case(
            "disjoint D, Q, E > 0, other coloring",
            star(4),
            star_list(14, &[&[0], &[1, 2], &[3, 4], &[0, 5]]),
            &[9, 0, 2, 3, 0],
            Disjoint,
        ),
        case("disjoint pairs only", star(2), star_list(8, &[&[0, 1], &[2, 3]]), &[7, 1, 2], Disjoint),
        case("disjoint pairs only, other coloring", star(2), star_list(8, &[&[0, 1], &[2, 3]]), &[7, 0, 3], Disjoint),
        case("disjoint E only", star(2), star_list(10, &[&[0, 1, 2], &[3, 4, 5]]), &[9, 0, 3], Disjoint),
        case(
            "disjoint overlapping pairs",
            star(3),
            star_list(10, &[&[1, 2], &[2, 3], &[4, 5]]),
            &[0, 1, 3, 5],
            Disjoint,
        ),
        case("disjoint Q only", star(3), star_list(6, &[&[0], &[1], &[1]]), &[5, 0, 1, 1], Disjoint),
        case("disjoint isolated", isolated_plus_edge(), BoundingList::full(3, 4), &[3, 1, 2], Disjoint),
        case("disjoint D and Q", star(3), star_list(9, &[&[0], &[1, 2], &[3, 4]]), &[8, 0, 2, 3], Disjoint),
        case("disjoint on cycle", c6, c6_list, &[3, 0, 4, 5, 4, 2], Disjoint),
        case(
            "disjoint D and E",
            star(3),
            star_list(12, &[&[0, 1], &[2, 3], &[4, 5, 6]]),
            &[11, 1, 2, 6],
            Disjoint,
        ),
    ]
}

/// Marginal check with the retry-once policy: a failing configuration is
/// rerun once on a fresh stream and passes if the rerun passes.
pub fn marginal_with_retry(c: &Case, trials: usize, seed: u64) -> (MarginalReport, bool) {
    let run = |stream: u64| {
        marginal_test(&c.graph, &c.spec, &c.list, c.v, &c.chi, trials, PairRule::default(), &mut RootSeed(seed).stream(stream))
            .unwrap_or_else(|e| panic!("{}: {e}", c.name))
    };
    let first = run(0);
    if first.pass {
        return (first, false);
    }
    (run(1), true)
}

/// A random list: each vertex gets 1, 2 or 3 random colours, or stays full.
pub fn random_list<R: Rng>(n: usize, k: usize, rng: &mut R) -> BoundingList {
    let all: Vec<Color> = (0..k as Color).collect();
    let sets = (0..n)
        .map(|_| {
            let size = [1, 1, 2, 2, 2, 3, k][rng.gen_range(0..7)].min(k);
            all.choose_multiple(rng, size).copied().collect()
        })
        .collect();
    BoundingList::from_sets(k, sets).unwrap()
}

/// A uniformly random coloring compatible with `list` (not necessarily proper).
pub fn random_compatible<R: Rng>(list: &BoundingList, rng: &mut R) -> Coloring {
    let colors = (0..list.n())
        .map(|v| {
            let options: Vec<Color> = list.colors(v).collect();
            *options.choose(rng).unwrap()
        })
        .collect();
    Coloring::new(list.k(), colors).unwrap()
}

/// Every coloring compatible with `list`, in lexicographic order.
pub fn all_compatible(list: &BoundingList) -> Vec<Coloring> {
    let mut out = vec![Vec::with_capacity(list.n())];
    for v in 0..list.n() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Color>| {
                list.colors(v).map(move |c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|c| Coloring::new(list.k(), c).unwrap()).collect()
}

/// A random proper coloring by greedy colouring in a random order; needs
/// `k > Δ`.
pub fn random_proper<R: Rng>(graph: &Graph, k: usize, rng: &mut R) -> Coloring {
    let mut order: Vec<Vertex> = (0..graph.n()).collect();
    order.shuffle(rng);
    let mut colors: Vec<Option<Color>> = vec![None; graph.n()];
    for v in order {
        let free: Vec<Color> = (0..k as Color)
            .filter(|&c| graph.neighbors(v).iter().all(|&w| colors[w] != Some(c)))
            .collect();
        colors[v] = Some(*free.choose(rng).expect("k > Δ leaves a free colour"));
    }
    Coloring::new(k, colors.into_iter().map(Option::unwrap).collect()).unwrap()
}

/// `1 - (S-Q)/(k-Δ) + (D/2)/(k-Q-D/2)`.
pub fn singleton_probability(s: usize, q: usize, d: usize, k: usize, delta: usize) -> f64 {
    let (s, q, d, k, delta) = (s as f64, q as f64, d as f64, k as f64, delta as f64);
    1.0 - (s - q) / (k - delta) + (d / 2.0) / (k - q - d / 2.0)
}
