use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Colours are `0..k`.
pub type Color = u32;

/// Sorted, deduplicated colour set that stays inline for small sizes.
pub type ColorVec = SmallVec<[Color; 8]>;

/// A total map from vertices to `0..k`. Properness is not an invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    k: usize,
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(k: usize, colors: Vec<Color>) -> Result<Self> {
        if let Some((v, &c)) = colors.iter().enumerate().find(|(_, &c)| c as usize >= k) {
            return Err(Error::InvalidArgument(format!("vertex {v} has colour {c} outside 0..{k}")));
        }
        Ok(Coloring { k, colors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        debug_assert!((c as usize) < self.k);
        self.colors[v] = c;
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    pub fn into_vec(self) -> Vec<Color> {
        self.colors
    }

    pub fn is_proper(&self, graph: &Graph) -> bool {
        self.colors.len() == graph.n() && graph.edges().all(|(u, v)| self.colors[u] != self.colors[v])
    }

    /// χ(N(v)) as a sorted set.
    pub fn neighbor_colors(&self, graph: &Graph, v: Vertex) -> ColorVec {
        let mut out: ColorVec = graph.neighbors(v).iter().map(|&w| self.colors[w]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
