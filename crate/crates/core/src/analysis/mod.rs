//! Transition graphs, transitivity and density probes, the dense-orbit
//! builder, and an exact oracle for finite systems.
//!
//! Grid probes can only certify one direction each, so results are
//! [`Verdict`]s: `certified_yes`, `certified_no` or `inconclusive`, and every
//! certified status carries evidence that the `Verdict::recheck_*` methods validate from
//! scratch.

mod density;
mod finite_oracle;
mod graph;
mod transitivity;

use serde::Serialize;
use thiserror::Error;

use crate::setmap::{FiniteError, SetMapError, SetValuedMap};
use crate::space::{ClosedSet, Grid, Scalar};

pub use density::{
    dense_orbit_build, dense_orbit_build_finite, minimality_check, minimality_check_finite, weak_dense_probe,
    DensityReport, MinimalityReport,
};
pub use finite_oracle::{finite_oracle, finite_oracle_with_horizon, FiniteReport, FiniteSensitivity, ORACLE_MAX_STATES};
pub use graph::{ComplexGraph, ComplexNode, GraphReport, TransitionGraph};
pub use transitivity::{transitivity_probe, witness_candidates};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("resolution {0} is not 1/m with m >= 2")]
    Resolution(String),
    #[error("cell {cell} is not reached within the horizon")]
    NotWeakDense { cell: usize },
    #[error("finite oracle handles at most {max} states, got {states}")]
    TooLarge { states: usize, max: usize },
    #[error("could not chain an orbit back through {0}")]
    BrokenChain(String),
    #[error(transparent)]
    Map(#[from] SetMapError),
    #[error(transparent)]
    Finite(#[from] FiniteError),
}

pub(crate) fn grid_for(eps: &Scalar) -> Result<Grid, AnalysisError> {
    Grid::from_eps(eps).ok_or_else(|| AnalysisError::Resolution(crate::space::format_scalar(eps)))
}

/// `transition_graph(F, ε)`.
pub fn transition_graph(f: &SetValuedMap, eps: &Scalar) -> Result<TransitionGraph, AnalysisError> {
    Ok(TransitionGraph::build(f, grid_for(eps)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    CertifiedYes,
    CertifiedNo,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::CertifiedYes => "certified_yes",
            Status::CertifiedNo => "certified_no",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Resolutions and horizons a verdict was obtained with.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Budget {
    #[serde(with = "crate::space::exact_opt", skip_serializing_if = "Option::is_none")]
    pub eps: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// `x ∈ U` with `F^k(x)` meeting `V`, for grid cells `U`, `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub u: usize,
    pub v: usize,
    #[serde(with = "crate::space::exact")]
    pub x: Scalar,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    /// Closed cells.
    Closed,
    /// Grid points and open cells.
    Complex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// A witness for every ordered pair of cells.
    PairWitnesses { pairs: Vec<PairWitness> },
    /// No walk from cell `from` to cell `to` (closed cells, or open cells of
    /// the complex): no orbit passes from the one to the other.
    Unreachable { graph: GraphKind, from: usize, to: usize },
    /// First hit `k` of every cell by `F^k(p)`.
    AllCellsHit { hits: Vec<usize> },
    /// `F^{start+period}(p) = F^start(p)` and the union of `F^1(p), ...` misses the open cell.
    Cycle {
        start: usize,
        period: usize,
        union: ClosedSet,
        missed_cell: usize,
    },
    /// Every `F^k(p)`, `k >= 1`, stays in a forward invariant union of closed
    /// cells that misses the interior of `missed_cell`.
    ClosedTrap { cells: Vec<usize>, missed_cell: usize },
    /// Same, with a forward invariant union of grid points and open cells.
    ComplexTrap { nodes: Vec<ComplexNode>, missed_cell: usize },
    /// Per sample point results.
    Samples { points: Vec<SampleResult> },
    /// Decided exactly on a finite system.
    Exact { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleResult {
    #[serde(with = "crate::space::exact")]
    pub p: Scalar,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Option<Evidence>,
    pub budget: Budget,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        self.status == Status::CertifiedYes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::CertifiedNo
    }

    /// Re-validates the evidence of a transitivity verdict against `f`.
    pub fn recheck_transitivity(&self, f: &SetValuedMap) -> bool {
        match (&self.status, &self.evidence, &self.budget.eps) {
            (Status::CertifiedYes, Some(Evidence::PairWitnesses { pairs }), Some(eps)) => {
                transitivity::recheck_pairs(f, eps, pairs)
            }
            (Status::CertifiedNo, Some(Evidence::Unreachable { graph, from, to }), Some(eps)) => {
                transitivity::recheck_unreachable(f, eps, *graph, *from, *to)
            }
            (Status::Inconclusive, _, _) => true,
            _ => false,
        }
    }

    /// Re-validates the evidence of a weak-density verdict for base point `p`.
    pub fn recheck_density(&self, f: &SetValuedMap, p: &Scalar) -> bool {
        match (&self.status, &self.budget.eps) {
            (Status::Inconclusive, _) => true,
            (_, Some(eps)) => density::recheck(f, p, eps, self),
            _ => false,
        }
    }
}
