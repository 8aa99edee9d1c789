//! Orbit sets: exact trees for finite-valued maps, grid covers for general
//! maps, and structural surrogates for the shape of orbit sets.

mod arms;
mod cover;
mod inverse;
mod tree;

use thiserror::Error;

use crate::setmap::{SetMapError, SetValuedMap};
use crate::space::SeqPrefix;

pub use arms::{arm_families, branching_points, pin_embedding_prefix, ArmFamily};
pub use cover::{ConnectivityVerdict, CoverReport, OrbitCover, DEFAULT_PATH_BUDGET};
pub use inverse::inverse_limit_prefixes;
pub use tree::{split_index, Node, OrbitTree, TreeReport, DEFAULT_NODE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("F({0}) is not a finite set")]
    NotFiniteValued(String),
    #[error("more than {limit} nodes or paths")]
    BudgetExceeded { limit: usize },
    #[error("index {k} outside 1..={depth}")]
    IndexOutOfRange { k: usize, depth: usize },
    #[error("no branching value at or after index {index}")]
    NoSibling { index: usize },
    #[error("sequence is not a branch of this tree")]
    NotABranch,
    #[error("values of the map are not known to be connected")]
    HypothesisNotChecked,
    #[error("resolution {0} is not 1/m with m >= 2")]
    Resolution(String),
    #[error("map moves the non-branching point {0}")]
    NotArmStructured(String),
    #[error(transparent)]
    Map(#[from] SetMapError),
}

/// Checks `x_{i+1} ∈ F(x_i)` for every consecutive pair.
pub fn is_orbit_prefix(f: &SetValuedMap, prefix: &SeqPrefix) -> bool {
    prefix.entries().windows(2).all(|w| {
        f.evaluate(&w[0])
            .map(|v| v.contains(&w[1]))
            .unwrap_or(false)
    })
}
