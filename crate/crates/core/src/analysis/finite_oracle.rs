use std::collections::VecDeque;

use serde::Serialize;

use crate::setmap::{members, FiniteSystem, StateSet};

use super::AnalysisError;

pub const ORACLE_MAX_STATES: usize = 12;
const DEFAULT_HORIZON: usize = 16;

/// Sensitivity of a finite system under the discrete metric, over a bounded horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteSensitivity {
    pub horizon: usize,
    pub strong: bool,
    pub sensitive: bool,
    pub weak: bool,
    pub liyorke: bool,
}

/// Exact answers for a finite system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteReport {
    pub states: Vec<String>,
    pub transitive: bool,
    /// Some walk from the state runs through every state.
    pub dense_orbit: Vec<bool>,
    /// Some walk from the state runs through every state infinitely often.
    pub recurrent_dense_orbit: Vec<bool>,
    /// `F^k(p)`, `k >= 1`, together meet every state.
    pub weak_dense: Vec<bool>,
    pub dense_minimal: bool,
    pub weak_dense_minimal: bool,
    pub sensitivity: FiniteSensitivity,
}

pub fn finite_oracle(s: &FiniteSystem) -> Result<FiniteReport, AnalysisError> {
    finite_oracle_with_horizon(s, DEFAULT_HORIZON)
}

pub fn finite_oracle_with_horizon(s: &FiniteSystem, horizon: usize) -> Result<FiniteReport, AnalysisError> {
    let n = s.len();
    if n > ORACLE_MAX_STATES {
        return Err(AnalysisError::TooLarge {
            states: n,
            max: ORACLE_MAX_STATES,
        });
    }
    let full = s.full();

    // transitive closure of the one-step relation
    let mut reach: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| s.successors(a) >> b & 1 == 1).collect()).collect();
    for k in 0..n {
        for a in 0..n {
            if reach[a][k] {
                for b in 0..n {
                    if reach[k][b] {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    let transitive = reach.iter().all(|row| row.iter().all(|&r| r));

    let weak_dense: Vec<bool> = (0..n)
        .map(|p| {
            let mut seen: StateSet = 0;
            let mut cur: StateSet = 1 << p;
            loop {
                cur = s.image(cur);
                if seen | cur == seen {
                    break;
                }
                seen |= cur;
            }
            seen == full
        })
        .collect();

    let dense_orbit: Vec<bool> = (0..n).map(|p| covering_walk(s, p, false)).collect();
    let recurrent_dense_orbit: Vec<bool> = (0..n).map(|p| covering_walk(s, p, true)).collect();

    let sensitivity = FiniteSensitivity {
        horizon,
        strong: (0..n).all(|x| nearby(x).any(|y| (1..=horizon).any(|m| excess(s.iterate(y, m), s.iterate(x, m))))),
        sensitive: (0..n).all(|x| nearby(x).any(|y| (1..=horizon).any(|m| hausdorff(s.iterate(x, m), s.iterate(y, m))))),
        weak: (0..n).all(|x| branches_split(s, x, horizon)),
        liyorke: (0..n).all(|x| {
            nearby(x).any(|y| {
                let h: Vec<bool> = (1..=horizon).map(|m| hausdorff(s.iterate(x, m), s.iterate(y, m))).collect();
                h.iter().any(|d| !d) && h.iter().any(|&d| d)
            })
        }),
    };

    Ok(FiniteReport {
        states: s.labels().to_vec(),
        transitive,
        dense_minimal: dense_orbit.iter().all(|&b| b),
        weak_dense_minimal: weak_dense.iter().all(|&b| b),
        dense_orbit,
        recurrent_dense_orbit,
        weak_dense,
        sensitivity,
    })
}

// points within distance δ < 1 of x in the discrete metric
fn nearby(x: usize) -> impl Iterator<Item = usize> {
    std::iter::once(x)
}

fn excess(a: StateSet, b: StateSet) -> bool {
    a & !b != 0
}

fn hausdorff(a: StateSet, b: StateSet) -> bool {
    excess(a, b) || excess(b, a)
}

// two orbits from x that differ at some index <= horizon
fn branches_split(s: &FiniteSystem, x: usize, horizon: usize) -> bool {
    let n = s.len();
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::from([(x, x, 1usize)]);
    seen[x * n + x] = true;
    while let Some((a, b, idx)) = queue.pop_front() {
        if a != b {
            return true;
        }
        if idx == horizon {
            continue;
        }
        for a2 in members(s.successors(a)) {
            for b2 in members(s.successors(b)) {
                if !seen[a2 * n + b2] {
                    seen[a2 * n + b2] = true;
                    queue.push_back((a2, b2, idx + 1));
                }
            }
        }
    }
    false
}

// search over (state, visited) for a walk from p covering every state,
// optionally required to return to p afterwards
fn covering_walk(s: &FiniteSystem, p: usize, closed: bool) -> bool {
    let n = s.len();
    let full = s.full();
    let mut seen = vec![false; n << n];
    let start = (p, 1u64 << p);
    let mut stack = vec![start];
    seen[(p << n) | start.1 as usize] = true;
    while let Some((a, mask)) = stack.pop() {
        if mask == full && !closed {
            return true;
        }
        for b in members(s.successors(a)) {
            let m2 = mask | 1 << b;
            if closed && m2 == full && b == p {
                return true;
            }
            let key = (b << n) | m2 as usize;
            if !seen[key] {
                seen[key] = true;
                stack.push((b, m2));
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(edges: &[(&str, &[&str])]) -> FiniteSystem {
        let labels: Vec<&str> = edges.iter().map(|e| e.0).collect();
        FiniteSystem::from_edges(&labels, edges).unwrap()
    }

    #[test]
    fn swap_is_transitive() {
        let r = finite_oracle(&sys(&[("a", &["b"]), ("b", &["a"])])).unwrap();
        assert!(r.transitive);
        assert_eq!(r.dense_orbit, vec![true, true]);
        assert!(r.dense_minimal && r.weak_dense_minimal);
        assert!(!r.sensitivity.weak);
    }

    #[test]
    fn fixed_pair_is_not() {
        let r = finite_oracle(&sys(&[("a", &["a"]), ("b", &["b"])])).unwrap();
        assert!(!r.transitive);
        assert_eq!(r.dense_orbit, vec![false, false]);
        assert_eq!(r.weak_dense, vec![false, false]);
    }

    #[test]
    fn transient_start_has_literal_dense_orbit_only() {
        let r = finite_oracle(&sys(&[("a", &["b"]), ("b", &["b"])])).unwrap();
        assert_eq!(r.dense_orbit, vec![true, false]);
        assert_eq!(r.recurrent_dense_orbit, vec![false, false]);
        assert!(!r.transitive);
    }

    #[test]
    fn splitting_is_weakly_sensitive_only() {
        let r = finite_oracle(&sys(&[("a", &["a", "b"]), ("b", &["a", "b"])])).unwrap();
        assert!(r.sensitivity.weak);
        assert!(!r.sensitivity.sensitive && !r.sensitivity.strong && !r.sensitivity.liyorke);
    }

    #[test]
    fn too_large() {
        let s = FiniteSystem::from_table(vec![1; 13]).unwrap();
        assert!(matches!(finite_oracle(&s), Err(AnalysisError::TooLarge { states: 13, .. })));
    }
}
