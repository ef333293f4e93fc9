//! Ground truth for the probabilistic claims: exhaustive enumeration of proper
//! colorings, the exact single-site Glauber law, and goodness-of-fit helpers.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bounding::{BoundingList, PairRule};
use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::real::Real;
use crate::updates::{decode_color, UpdateRecord, UpdateSpec};

/// Enumeration is refused when `k^n` exceeds this.
pub const ENUMERATION_LIMIT: f64 = 1e7;

/// Every proper `k`-coloring of `graph`, in lexicographic order.
pub fn enumerate_colorings(graph: &Graph, k: usize) -> Result<Vec<Coloring>> {
    let n = graph.n();
    let estimate = (k as f64).powi(n as i32);
    if estimate > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge { estimate, limit: ENUMERATION_LIMIT });
    }
    let mut out = Vec::new();
    let mut current: Vec<Color> = Vec::with_capacity(n);
    extend(graph, k, &mut current, &mut out);
    Ok(out)
}

fn extend(graph: &Graph, k: usize, current: &mut Vec<Color>, out: &mut Vec<Coloring>) {
    let v = current.len();
    if v == graph.n() {
        out.push(Coloring::new(k, current.clone()).expect("colours below k"));
        return;
    }
    for c in 0..k as Color {
        // Only earlier vertices are coloured so far.
        if graph.neighbors(v).iter().take_while(|&&w| w < v).all(|&w| current[w] != c) {
            current.push(c);
            extend(graph, k, current, out);
            current.pop();
        }
    }
}

/// Position of `chi` in a lexicographically sorted enumeration.
pub fn coloring_index(all: &[Coloring], chi: &Coloring) -> Option<usize> {
    all.binary_search_by(|c| c.as_slice().cmp(chi.as_slice())).ok()
}

/// Goodness of fit of a batch of samples against the uniform law on `all`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub statistic: f64,
    pub p_value: f64,
    pub tv: f64,
    pub n_cells: usize,
    pub n_samples: usize,
}

/// Tallies `samples` over the enumeration `all` and tests uniformity. A
/// sample missing from `all` (improper, or wrong size) is an error.
pub fn uniformity_report<I>(all: &[Coloring], samples: I) -> Result<UniformityReport>
where
    I: IntoIterator<Item = Coloring>,
{
    let mut counts = vec![0u64; all.len()];
    let mut n_samples = 0;
    for chi in samples {
        let i = coloring_index(all, &chi)
            .ok_or_else(|| Error::InvalidArgument(format!("sample {:?} is not a proper coloring", chi.as_slice())))?;
        counts[i] += 1;
        n_samples += 1;
    }
    let fit = chi_squared_uniformity(&counts)?;
    let exact = vec![1.0 / all.len() as f64; all.len()];
    Ok(UniformityReport {
        statistic: fit.statistic,
        p_value: fit.p_value,
        tv: empirical_tv(&counts, &exact),
        n_cells: all.len(),
        n_samples,
    })
}

/// Law of the new colour at `v` under one Glauber step from `chi`: uniform on
/// the colours not used by `v`'s neighbours. Indexed by colour.
pub fn exact_glauber_dist(graph: &Graph, chi: &Coloring, v: Vertex, k: usize) -> Result<Vec<f64>> {
    let mut blocked = vec![false; k];
    for &w in graph.neighbors(v) {
        blocked[chi.get(w) as usize] = true;
    }
    let free = blocked.iter().filter(|&&b| !b).count();
    if free == 0 {
        return Err(Error::NoFreeColor { vertex: v, k });
    }
    Ok(blocked.iter().map(|&b| if b { 0.0 } else { 1.0 / free as f64 }).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquared {
    pub statistic: f64,
    pub df: usize,
    /// Upper tail probability from the Wilson–Hilferty approximation.
    pub p_value: f64,
}

/// Pearson's statistic of `counts` against the uniform law on its cells.
pub fn chi_squared_uniformity(counts: &[u64]) -> Result<ChiSquared> {
    let cells = counts.len();
    let total: u64 = counts.iter().sum();
    if cells < 2 {
        return Err(Error::InvalidArgument("need at least two cells".into()));
    }
    let expected = total as f64 / cells as f64;
    if expected < 5.0 {
        return Err(Error::UnderfilledCells { cells, expected });
    }
    let statistic = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let df = cells - 1;
    Ok(ChiSquared { statistic, df, p_value: wilson_hilferty_sf(statistic, df) })
}

/// `P[X >= x]` for `X ~ χ²(df)`, via the cube-root normal approximation.
pub fn wilson_hilferty_sf(x: f64, df: usize) -> f64 {
    let df = df as f64;
    let h = 2.0 / (9.0 * df);
    let z = ((x / df).cbrt() - (1.0 - h)) / h.sqrt();
    1.0 - Normal::standard().cdf(z)
}

/// Total variation distance between the empirical law of `counts` and `exact`.
pub fn empirical_tv(counts: &[u64], exact: &[f64]) -> f64 {
    assert_eq!(counts.len(), exact.len(), "count and probability vectors differ in length");
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.5 * exact.iter().map(|p| p.abs()).sum::<f64>();
    }
    0.5 * counts.iter().zip(exact).map(|(&c, &p)| (c as f64 / total as f64 - p).abs()).sum::<f64>()
}

/// Per-colour comparison of decoded colours against the exact Glauber law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalReport {
    pub trials: usize,
    pub counts: Vec<u64>,
    pub expected: Vec<f64>,
    /// Largest `|count - N p| / sqrt(N p (1 - p))` over cells with `0 < p < 1`.
    pub max_z: f64,
    /// Cells whose count left the 3σ band, or that are impossible yet observed.
    pub failing_colors: Vec<Color>,
    pub pass: bool,
}

pub const SIGMA_BAND: f64 = 3.0;

/// Tallies `counts` (indexed by colour) against `exact` at [`SIGMA_BAND`].
pub fn binomial_band_check(counts: Vec<u64>, exact: Vec<f64>) -> MarginalReport {
    let trials: u64 = counts.iter().sum();
    let n = trials as f64;
    let mut max_z: f64 = 0.0;
    let mut failing = Vec::new();
    for (c, (&count, &p)) in counts.iter().zip(&exact).enumerate() {
        let mean = n * p;
        let var = n * p * (1.0 - p);
        let ok = if var <= 0.0 {
            (count as f64 - mean).abs() < 0.5
        } else {
            let z = (count as f64 - mean).abs() / var.sqrt();
            max_z = max_z.max(z);
            z <= SIGMA_BAND
        };
        if !ok {
            failing.push(c as Color);
        }
    }
    MarginalReport {
        trials: trials as usize,
        counts,
        expected: exact,
        max_z,
        pass: failing.is_empty(),
        failing_colors: failing,
    }
}

/// Runs `trials` independent gen+decode rounds of `spec` at `v` from `list`,
/// decoding `chi` each time, and compares the law of the new colour at `v`
/// with [`exact_glauber_dist`].
#[allow(clippy::too_many_arguments)]
pub fn marginal_test<R: Rng + ?Sized>(
    graph: &Graph,
    spec: &UpdateSpec,
    list: &BoundingList,
    v: Vertex,
    chi: &Coloring,
    trials: usize,
    rule: PairRule,
    rng: &mut R,
) -> Result<MarginalReport> {
    marginal_test_with(graph, spec, list, v, chi, trials, rule, rng, decode_color::<f64>)
}

/// [`marginal_test`] with a caller-supplied decoder.
#[allow(clippy::too_many_arguments)]
pub fn marginal_test_with<P, R, D>(
    graph: &Graph,
    spec: &UpdateSpec,
    list: &BoundingList,
    v: Vertex,
    chi: &Coloring,
    trials: usize,
    rule: PairRule,
    rng: &mut R,
    decode: D,
) -> Result<MarginalReport>
where
    P: Real,
    R: Rng + ?Sized,
    D: Fn(&UpdateRecord<P>, &Graph, &Coloring) -> Color,
{
    if !list.is_compatible(chi) {
        return Err(Error::InvalidArgument("coloring is not compatible with the bounding list".into()));
    }
    let k = list.k();
    let exact = exact_glauber_dist(graph, chi, v, k)?;
    let mut counts = vec![0u64; k];
    let mut scratch = list.clone();
    for _ in 0..trials {
        scratch.clone_from(list);
        let rec: UpdateRecord<P> = spec.gen(graph, &mut scratch, v, rule, rng)?;
        let c = decode(&rec, graph, chi);
        assert!(scratch.contains(v, c), "decoded colour {c} escapes the new bounding set at {v}");
        counts[c as usize] += 1;
    }
    Ok(binomial_band_check(counts, exact))
}
