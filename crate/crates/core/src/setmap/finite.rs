//! Multivalued maps on finite discrete spaces, with state sets as bitmasks.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Set of state indices; bit `i` stands for state `i`.
pub type StateSet = u64;

pub const MAX_STATES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("a finite system needs between 1 and {MAX_STATES} states, got {0}")]
    Size(usize),
    #[error("state {0} has an empty image")]
    EmptyImage(usize),
    #[error("state {0} maps outside the state space")]
    BadTarget(usize),
    #[error("unknown state `{0}`")]
    UnknownState(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteSystem {
    states: Vec<String>,
    table: Vec<StateSet>,
}

impl FiniteSystem {
    pub fn new(states: Vec<String>, table: Vec<StateSet>) -> Result<Self, FiniteError> {
        let n = states.len();
        if n == 0 || n > MAX_STATES || table.len() != n {
            return Err(FiniteError::Size(n.max(table.len())));
        }
        let full = full_mask(n);
        for (i, &t) in table.iter().enumerate() {
            if t == 0 {
                return Err(FiniteError::EmptyImage(i));
            }
            if t & !full != 0 {
                return Err(FiniteError::BadTarget(i));
            }
        }
        Ok(FiniteSystem { states, table })
    }

    /// States named `s0, s1, ...`.
    pub fn from_table(table: Vec<StateSet>) -> Result<Self, FiniteError> {
        let states = (0..table.len()).map(|i| format!("s{i}")).collect();
        FiniteSystem::new(states, table)
    }

    /// Builds from `(state, successors)` pairs given by label.
    pub fn from_edges(labels: &[&str], edges: &[(&str, &[&str])]) -> Result<Self, FiniteError> {
        let idx = |s: &str| {
            labels
                .iter()
                .position(|l| *l == s)
                .ok_or_else(|| FiniteError::UnknownState(s.to_string()))
        };
        let mut table = vec![0; labels.len()];
        for (from, tos) in edges {
            let i = idx(from)?;
            for t in *tos {
                table[i] |= 1 << idx(t)?;
            }
        }
        FiniteSystem::new(labels.iter().map(|s| s.to_string()).collect(), table)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.states
    }

    pub fn table(&self) -> &[StateSet] {
        &self.table
    }

    pub fn full(&self) -> StateSet {
        full_mask(self.len())
    }

    pub fn successors(&self, state: usize) -> StateSet {
        self.table[state]
    }

    pub fn image(&self, set: StateSet) -> StateSet {
        members(set).fold(0, |acc, i| acc | self.table[i])
    }

    /// `F^n(state)`; `n = 0` gives the state itself.
    pub fn iterate(&self, state: usize, n: usize) -> StateSet {
        let mut s = 1 << state;
        for _ in 0..n {
            s = self.image(s);
        }
        s
    }

    /// `{x : F(x) meets set}`.
    pub fn preimage(&self, set: StateSet) -> StateSet {
        (0..self.len())
            .filter(|&i| self.table[i] & set != 0)
            .fold(0, |acc, i| acc | 1 << i)
    }

    pub fn label_set(&self, set: StateSet) -> Vec<&str> {
        members(set).map(|i| self.states[i].as_str()).collect()
    }
}

pub(crate) fn full_mask(n: usize) -> StateSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the set bits, ascending.
pub fn members(set: StateSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set >> i & 1 == 1)
}

impl fmt::Display for FiniteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.states.iter().enumerate() {
            writeln!(f, "{l} -> {{{}}}", self.label_set(self.table[i]).join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_iterates() {
        let s = FiniteSystem::from_edges(&["a", "b", "c"], &[("a", &["b"]), ("b", &["c"]), ("c", &["a"])])
            .unwrap();
        assert_eq!(s.iterate(0, 3), 0b001);
        assert_eq!(s.iterate(0, 1), 0b010);
        assert_eq!(s.preimage(0b001), 0b100);
        assert_eq!(s.to_string(), "a -> {b}\nb -> {c}\nc -> {a}\n");
    }

    #[test]
    fn invalid_tables_rejected() {
        assert_eq!(FiniteSystem::from_table(vec![0b1, 0]), Err(FiniteError::EmptyImage(1)));
        assert_eq!(FiniteSystem::from_table(vec![0b100]), Err(FiniteError::BadTarget(0)));
        assert_eq!(FiniteSystem::from_table(vec![]), Err(FiniteError::Size(0)));
    }
}
