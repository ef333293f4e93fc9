//! Undirected simple graphs on dense vertex ids `0..n`, with the edge-list and
//! JSON file formats and a few generators for test instances.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Immutable undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    max_degree: usize,
}

/// JSON form of a graph: `{"n": .., "edges": [[u, v], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are merged; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_adjacency(adjacency))
    }

    fn from_adjacency(mut adjacency: Vec<Vec<Vertex>>) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Graph { adjacency, max_degree }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_adjacency(vec![Vec::new(); n])
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Maximum degree Δ.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Full scan of the structural invariants: symmetric adjacency, no loops,
    /// no duplicates, cached Δ correct.
    pub fn check_invariants(&self) -> bool {
        let mut max = 0;
        for (u, list) in self.adjacency.iter().enumerate() {
            max = max.max(list.len());
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &v in list {
                if v == u || v >= self.n() || !self.has_edge(v, u) {
                    return false;
                }
            }
        }
        max == self.max_degree
    }

    /// Parses either the edge-list format or the JSON form, chosen by the
    /// first non-blank character.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            parse_edge_list(text)
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(text)?;
        Self::from_edges(doc.n, doc.edges.iter().map(|e| (e[0], e[1])))
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { n: self.n(), edges: self.edges().map(|(u, v)| [u, v]).collect() }
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("p {} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

/// Parses the edge-list format: a header `p <n> <m>` followed by `m` lines
/// `e <u> <v>`. Lines starting with `c` are comments.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (fields[0], header) {
            ("p", None) => {
                if fields.len() != 3 {
                    return Err(err(line_no, format!("expected `p <n> <m>`, got `{line}`")));
                }
                let n = parse_count(fields[1]).map_err(|m| err(line_no, m))?;
                let m = parse_count(fields[2]).map_err(|m| err(line_no, m))?;
                header = Some((n, m));
            }
            ("p", Some(_)) => return Err(err(line_no, "duplicate `p` header".into())),
            ("e", Some((n, _))) => {
                if fields.len() != 3 {
                    return Err(err(line_no, format!("expected `e <u> <v>`, got `{line}`")));
                }
                let u = parse_count(fields[1]).map_err(|m| err(line_no, m))?;
                let v = parse_count(fields[2]).map_err(|m| err(line_no, m))?;
                if u >= n || v >= n {
                    return Err(err(line_no, format!("vertex out of range 0..{n}")));
                }
                if u == v {
                    return Err(err(line_no, format!("self-loop at vertex {u}")));
                }
                edges.push((u, v));
            }
            ("e", None) => return Err(err(line_no, "edge before `p` header".into())),
            _ => return Err(err(line_no, format!("unrecognised line `{line}`"))),
        }
    }

    let (n, m) = header.ok_or_else(|| err(0, "missing `p <n> <m>` header".into()))?;
    if edges.len() != m {
        return Err(err(0, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, edges)
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))
}

/// Graph families available to [`generate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Path { n: usize },
    Cycle { n: usize },
    Clique { n: usize },
    Grid { rows: usize, cols: usize },
    RandomRegular { n: usize, d: usize },
}

pub fn generate<R: Rng + ?Sized>(kind: GraphKind, rng: &mut R) -> Result<Graph> {
    match kind {
        GraphKind::Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidArgument(format!("cycle needs n >= 3, got {n}")));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        GraphKind::Clique { n } => Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
        GraphKind::Grid { rows, cols } => {
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            Graph::from_edges(rows * cols, edges)
        }
        GraphKind::RandomRegular { n, d } => random_regular(n, d, rng),
    }
}

/// Uniform-ish random `d`-regular graph by the configuration model. Stubs are
/// paired in shuffled rounds; a pair that would form a loop or a repeated edge
/// is sent back to the pool for the next round, and the whole attempt restarts
/// when the leftover stubs admit no valid pair.
pub fn random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Graph> {
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidArgument(format!("n·d must be even (n = {n}, d = {d})")));
    }
    if d >= n && !(d == 0 && n == 0) {
        return Err(Error::InvalidArgument(format!("need d < n (n = {n}, d = {d})")));
    }
    if d == 0 {
        return Ok(Graph::empty(n));
    }
    const MAX_ATTEMPTS: usize = 1000;
    for _ in 0..MAX_ATTEMPTS {
        if let Some(edges) = try_pairing(n, d, rng) {
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::InvalidArgument(format!("failed to build a {d}-regular graph on {n} vertices")))
}

fn try_pairing<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Option<HashSet<(Vertex, Vertex)>> {
    let mut edges: HashSet<(Vertex, Vertex)> = HashSet::with_capacity(n * d / 2);
    let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && !edges.contains(&(a, b)) {
                edges.insert((a, b));
            } else {
                leftover.push(a);
                leftover.push(b);
            }
        }
        if !leftover.is_empty() && !has_valid_pair(&leftover, &edges) {
            return None;
        }
        stubs = leftover;
    }
    Some(edges)
}

fn has_valid_pair(stubs: &[Vertex], edges: &HashSet<(Vertex, Vertex)>) -> bool {
    let mut distinct: Vec<Vertex> = stubs.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for (i, &a) in distinct.iter().enumerate() {
        for &b in &distinct[i + 1..] {
            if !edges.contains(&(a, b)) {
                return true;
            }
        }
    }
    false
}
