use std::fmt;

use thiserror::Error;

/// Which update precondition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Promise {
    /// `|S|^2 / (Δ + |S|) <= k - Δ`
    Seeding,
    /// `S - Q < (k - Δ)(k - Q) / (k - Q - D/2)`
    Disjoint,
    /// `k > 5Δ/2`, required to size the drift phase.
    Drift,
    /// `k > Δ`, required by every update.
    ColorsExceedDegree,
}

impl fmt::Display for Promise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Promise::Seeding => "seeding: |S|^2/(Δ+|S|) <= k-Δ",
            Promise::Disjoint => "disjoint: S-Q < (k-Δ)(k-Q)/(k-Q-D/2)",
            Promise::Drift => "drift: k > 5Δ/2",
            Promise::ColorsExceedDegree => "k > Δ",
        };
        f.write_str(s)
    }
}

/// An update was requested at a vertex whose neighbourhood statistics do not
/// satisfy the update's precondition. Signals that `(G, k)` is outside the
/// supported regime.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("promise violated ({promise}) at vertex {vertex}: S={s} Q={q} D={d} E={e} k={k} Δ={max_degree}")]
pub struct PromiseViolation {
    pub promise: Promise,
    pub vertex: usize,
    pub s: usize,
    pub q: usize,
    pub d: usize,
    pub e: usize,
    pub k: usize,
    pub max_degree: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Promise(#[from] PromiseViolation),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration refused: k^n = {estimate:.3e} exceeds the limit of {limit:.0e}")]
    EnumerationTooLarge { estimate: f64, limit: f64 },

    #[error("{cells} cells have expected count {expected:.2} < 5; draw more samples")]
    UnderfilledCells { cells: usize, expected: f64 },

    #[error("no colour available at vertex {vertex}: its neighbours use all {k} colours")]
    NoFreeColor { vertex: usize, k: usize },

    #[error("seeding set search exceeded {cap} resamplings")]
    SeedingSetFailure { cap: usize },

    #[error("inconsistent disjoint pairs at vertex {vertex}: {reason}")]
    InconsistentPairs { vertex: usize, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
