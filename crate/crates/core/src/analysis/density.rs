use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::orbit::is_orbit_prefix;
use crate::setmap::{members, FiniteSystem, SetValuedMap, StateSet};
use crate::space::{ClosedSet, Grid, Scalar, SeqPrefix};

use super::{
    finite_oracle, grid_for, AnalysisError, Budget, ComplexGraph, ComplexNode, Evidence, SampleResult, Status,
    TransitionGraph, Verdict,
};

/// First hits of the grid cells by `F^k(p)`, `k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    #[serde(with = "crate::space::exact")]
    pub p: Scalar,
    #[serde(with = "crate::space::exact")]
    pub eps: Scalar,
    pub horizon: usize,
    /// Least `k` with `F^k(p)` meeting cell `i`, or `None` if missed.
    pub first_hit: Vec<Option<usize>>,
    pub certificate: Option<Evidence>,
}

/// Weak dense orbit probe at `p`: do the sets `F^k(p)`, `k >= 1`, meet every
/// open set?
///
/// `certified_yes` if every closed cell is met within `horizon`;
/// `certified_no` if the set sequence cycles with a union missing an open
/// cell, or if a forward invariant union of cells (closed cells, or grid
/// points and open cells) containing `F(p)` misses an open cell.
pub fn weak_dense_probe(
    f: &SetValuedMap,
    p: &Scalar,
    eps: &Scalar,
    horizon: usize,
) -> Result<(Verdict, DensityReport), AnalysisError> {
    let grid = grid_for(eps)?;
    let m = grid.cells();
    f.evaluate(p)?;
    let budget = Budget {
        eps: Some(eps.clone()),
        horizon: Some(horizon),
        samples: None,
    };
    let mut first_hit: Vec<Option<usize>> = vec![None; m];
    let mut missing = m;
    let mut seen: HashMap<ClosedSet, usize> = HashMap::new();
    let mut exact = true;
    let mut union: Option<ClosedSet> = None;
    let mut s = ClosedSet::point(p.clone());
    let mut decided: Option<(Status, Evidence)> = None;
    for k in 1..=horizon {
        s = f.image(&s);
        exact &= !s.is_outer();
        if exact {
            if let Some(&start) = seen.get(&s) {
                let u = union.clone().expect("at least one earlier set");
                if let Some(missed_cell) = (0..m).find(|&i| !u.meets_open(&grid.lo(i), &grid.hi(i))) {
                    decided = Some((
                        Status::CertifiedNo,
                        Evidence::Cycle {
                            start,
                            period: k - start,
                            union: u,
                            missed_cell,
                        },
                    ));
                }
                break;
            }
            seen.insert(s.clone(), k);
            union = Some(match union {
                None => s.clone(),
                Some(u) => u.union(&s),
            });
        }
        for c in grid.cells_meeting(&s) {
            if first_hit[c].is_none() {
                first_hit[c] = Some(k);
                missing -= 1;
            }
        }
        if missing == 0 {
            let hits = first_hit.iter().map(|h| h.expect("all hit")).collect();
            decided = Some((Status::CertifiedYes, Evidence::AllCellsHit { hits }));
            break;
        }
    }
    if decided.is_none() {
        decided = trap(f, &grid, p)?.map(|e| (Status::CertifiedNo, e));
    }
    let (status, evidence) = match decided {
        Some((s, e)) => (s, Some(e)),
        None => (Status::Inconclusive, None),
    };
    let report = DensityReport {
        p: p.clone(),
        eps: eps.clone(),
        horizon,
        first_hit,
        certificate: evidence.clone(),
    };
    Ok((
        Verdict {
            status,
            evidence,
            budget,
        },
        report,
    ))
}

fn trap(f: &SetValuedMap, grid: &Grid, p: &Scalar) -> Result<Option<Evidence>, AnalysisError> {
    let first = f.evaluate(p)?;
    let closed = TransitionGraph::build(f, *grid);
    let start = grid.cells_meeting(&first);
    let mut region = closed.reachable(&start);
    for &c in &start {
        region[c] = true;
    }
    if let Some(missed_cell) = region.iter().position(|&r| !r) {
        let cells = (0..grid.cells()).filter(|&i| region[i]).collect();
        return Ok(Some(Evidence::ClosedTrap { cells, missed_cell }));
    }
    let complex = ComplexGraph::build(f, *grid);
    let start = complex.nodes_meeting(&first);
    let mut nodes: BTreeSet<ComplexNode> = complex.reachable(&start).into_iter().collect();
    nodes.extend(start);
    if let Some(missed_cell) = (0..grid.cells()).find(|&i| !nodes.contains(&ComplexNode::Open(i))) {
        return Ok(Some(Evidence::ComplexTrap {
            nodes: nodes.into_iter().collect(),
            missed_cell,
        }));
    }
    Ok(None)
}

pub(super) fn recheck(f: &SetValuedMap, p: &Scalar, eps: &Scalar, v: &Verdict) -> bool {
    let Some(grid) = Grid::from_eps(eps) else {
        return false;
    };
    let m = grid.cells();
    let Ok(first) = f.evaluate(p) else {
        return false;
    };
    match (&v.status, &v.evidence) {
        (Status::CertifiedYes, Some(Evidence::AllCellsHit { hits })) => {
            hits.len() == m
                && hits.iter().enumerate().all(|(i, &k)| {
                    k >= 1
                        && f.iterate(p, k)
                            .is_ok_and(|s| !s.is_outer() && s.intersects(&grid.cell_set(i)))
                })
        }
        (
            Status::CertifiedNo,
            Some(Evidence::Cycle {
                start,
                period,
                union,
                missed_cell,
            }),
        ) => {
            if *start == 0 || *period == 0 || *missed_cell >= m {
                return false;
            }
            let sets = f.forward_sets(&ClosedSet::point(p.clone()), start + period);
            let u = sets[..start + period - 1]
                .iter()
                .skip(1)
                .fold(sets[0].clone(), |acc, s| acc.union(s));
            sets.iter().all(|s| !s.is_outer())
                && sets[start - 1] == sets[start + period - 1]
                && u == *union
                && !u.meets_open(&grid.lo(*missed_cell), &grid.hi(*missed_cell))
        }
        (Status::CertifiedNo, Some(Evidence::ClosedTrap { cells, missed_cell })) => {
            let g = TransitionGraph::build(f, grid);
            let inside: BTreeSet<usize> = cells.iter().copied().collect();
            !inside.contains(missed_cell)
                && *missed_cell < m
                && grid.cells_meeting(&first).iter().all(|c| inside.contains(c))
                && inside.iter().all(|&c| c < m && g.successors(c).iter().all(|t| inside.contains(t)))
        }
        (Status::CertifiedNo, Some(Evidence::ComplexTrap { nodes, missed_cell })) => {
            let g = ComplexGraph::build(f, grid);
            let inside: BTreeSet<ComplexNode> = nodes.iter().copied().collect();
            *missed_cell < m
                && !inside.contains(&ComplexNode::Open(*missed_cell))
                && g.nodes_meeting(&first).iter().all(|n| inside.contains(n))
                && inside.iter().all(|&n| g.successors(n).iter().all(|t| inside.contains(t)))
        }
        _ => false,
    }
}

/// An exact orbit prefix starting at `p` that visits every closed cell.
///
/// Repeatedly takes the lowest unvisited cell, finds the first `k` with
/// `F^k(x)` meeting it from the current end point `x`, picks the least point
/// there and chains back through the forward sets by exact preimages.
pub fn dense_orbit_build(
    f: &SetValuedMap,
    p: &Scalar,
    eps: &Scalar,
    horizon: usize,
) -> Result<SeqPrefix, AnalysisError> {
    let grid = grid_for(eps)?;
    f.evaluate(p)?;
    let mut visited = vec![false; grid.cells()];
    let mut path = vec![p.clone()];
    for c in grid.cells_of(p) {
        visited[c] = true;
    }
    while let Some(target) = visited.iter().position(|v| !v) {
        let current = path.last().expect("nonempty").clone();
        let cell = grid.cell_set(target);
        let mut sets = Vec::new();
        let mut s = ClosedSet::point(current.clone());
        let mut hit = None;
        for _ in 0..horizon {
            s = f.image(&s);
            sets.push(s.clone());
            if let Some(meet) = s.intersection(&cell) {
                hit = Some(meet.min().clone());
                break;
            }
        }
        let y = hit.ok_or(AnalysisError::NotWeakDense { cell: target })?;
        let k = sets.len();
        let mut chain = vec![y];
        for i in (0..k - 1).rev() {
            let next = chain.last().expect("nonempty");
            let pre = f
                .preimage_within(next, &sets[i])
                .ok_or_else(|| AnalysisError::BrokenChain(crate::space::format_scalar(next)))?;
            let pick = [pre.min(), pre.max()]
                .into_iter()
                .find(|x| f.evaluate(x).is_ok_and(|v| v.contains(next)))
                .ok_or_else(|| AnalysisError::BrokenChain(crate::space::format_scalar(next)))?
                .clone();
            chain.push(pick);
        }
        chain.reverse();
        for x in &chain {
            for c in grid.cells_of(x) {
                visited[c] = true;
            }
        }
        path.extend(chain);
    }
    let prefix = SeqPrefix::new(path).expect("orbit points lie in [0,1]");
    if !is_orbit_prefix(f, &prefix) {
        return Err(AnalysisError::BrokenChain("assembled prefix".into()));
    }
    Ok(prefix)
}

/// Finite counterpart of [`dense_orbit_build`]: a walk from `p` visiting every state.
pub fn dense_orbit_build_finite(s: &FiniteSystem, p: usize, horizon: usize) -> Result<Vec<usize>, AnalysisError> {
    if p >= s.len() {
        return Err(crate::setmap::FiniteError::UnknownState(p.to_string()).into());
    }
    let mut visited: StateSet = 1 << p;
    let mut path = vec![p];
    while visited != s.full() {
        let target = (0..s.len()).find(|&i| visited >> i & 1 == 0).expect("unvisited state");
        let current = *path.last().expect("nonempty");
        let mut sets = Vec::new();
        let mut set: StateSet = 1 << current;
        for _ in 0..horizon {
            set = s.image(set);
            sets.push(set);
            if set >> target & 1 == 1 {
                break;
            }
        }
        if sets.last().is_none_or(|&l| l >> target & 1 == 0) {
            return Err(AnalysisError::NotWeakDense { cell: target });
        }
        let mut chain = vec![target];
        for i in (0..sets.len() - 1).rev() {
            let next = *chain.last().expect("nonempty");
            let x = members(sets[i] & s.preimage(1 << next))
                .next()
                .expect("forward sets chain back");
            chain.push(x);
        }
        chain.reverse();
        for &x in &chain {
            visited |= 1 << x;
        }
        path.extend(chain);
    }
    Ok(path)
}

/// Dense-orbit and weak-dense-orbit minimality, aggregated over sample points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub dense_minimal: Verdict,
    pub weak_dense_minimal: Verdict,
}

/// Probes every sample point (cell endpoints and midpoints by default).
///
/// A `certified_no` at any point refutes; `certified_yes` needs every point
/// certified at resolution `eps` and horizon `horizon`.
pub fn minimality_check(
    f: &SetValuedMap,
    eps: &Scalar,
    horizon: usize,
    sample: Option<&[Scalar]>,
) -> Result<MinimalityReport, AnalysisError> {
    let grid = grid_for(eps)?;
    let points: Vec<Scalar> = match sample {
        Some(s) => s.to_vec(),
        None => {
            let mut pts: BTreeSet<Scalar> = BTreeSet::new();
            for i in 0..grid.cells() {
                pts.insert(grid.lo(i));
                pts.insert(grid.midpoint(i));
                pts.insert(grid.hi(i));
            }
            pts.into_iter().collect()
        }
    };
    let results: Vec<(SampleResult, SampleResult)> = points
        .par_iter()
        .map(|p| -> Result<_, AnalysisError> {
            let (weak, _) = weak_dense_probe(f, p, eps, horizon)?;
            let dense = match weak.status {
                Status::CertifiedNo => Status::CertifiedNo,
                _ => match dense_orbit_build(f, p, eps, horizon) {
                    Ok(_) => Status::CertifiedYes,
                    Err(AnalysisError::NotWeakDense { .. }) | Err(AnalysisError::BrokenChain(_)) => {
                        Status::Inconclusive
                    }
                    Err(e) => return Err(e),
                },
            };
            Ok((
                SampleResult {
                    p: p.clone(),
                    status: dense,
                },
                SampleResult {
                    p: p.clone(),
                    status: weak.status,
                },
            ))
        })
        .collect::<Result<_, _>>()?;
    let budget = Budget {
        eps: Some(eps.clone()),
        horizon: Some(horizon),
        samples: Some(points.len()),
    };
    let (dense, weak): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(MinimalityReport {
        dense_minimal: aggregate(dense, budget.clone()),
        weak_dense_minimal: aggregate(weak, budget),
    })
}

fn aggregate(points: Vec<SampleResult>, budget: Budget) -> Verdict {
    let status = if points.iter().any(|r| r.status == Status::CertifiedNo) {
        Status::CertifiedNo
    } else if points.iter().all(|r| r.status == Status::CertifiedYes) {
        Status::CertifiedYes
    } else {
        Status::Inconclusive
    };
    Verdict {
        status,
        evidence: Some(Evidence::Samples { points }),
        budget,
    }
}

/// Exact minimality decisions for a finite system.
pub fn minimality_check_finite(s: &FiniteSystem) -> Result<MinimalityReport, AnalysisError> {
    let r = finite_oracle(s)?;
    let verdict = |holds: bool, per_point: &[bool], what: &str| {
        let detail = match per_point.iter().position(|b| !b) {
            Some(i) => format!("state {} has no {what}", s.labels()[i]),
            None => format!("every state has a {what}"),
        };
        Verdict {
            status: if holds { Status::CertifiedYes } else { Status::CertifiedNo },
            evidence: Some(Evidence::Exact { detail }),
            budget: Budget::default(),
        }
    };
    Ok(MinimalityReport {
        dense_minimal: verdict(r.dense_minimal, &r.dense_orbit, "dense orbit"),
        weak_dense_minimal: verdict(r.weak_dense_minimal, &r.weak_dense, "weak dense orbit"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{one, rat};

    fn slide() -> SetValuedMap {
        SetValuedMap::parse("slide", "segment 0 1 cc -> 0 1\npoint 1 -> [0,1]").unwrap()
    }

    fn tent() -> SetValuedMap {
        SetValuedMap::parse("tent", "segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0").unwrap()
    }

    #[test]
    fn slide_top_point_is_weakly_dense() {
        let (v, r) = weak_dense_probe(&slide(), &one(), &rat(1, 8), 10).unwrap();
        assert_eq!(v.status, Status::CertifiedYes);
        assert!(r.first_hit.iter().all(|h| *h == Some(1)));
        assert!(v.recheck_density(&slide(), &one()));
    }

    #[test]
    fn slide_interior_point_cycles() {
        let p = rat(3, 10);
        let (v, _) = weak_dense_probe(&slide(), &p, &rat(1, 8), 10).unwrap();
        assert_eq!(v.status, Status::CertifiedNo);
        match &v.evidence {
            Some(Evidence::Cycle { start, period, union, .. }) => {
                assert_eq!((*start, *period), (1, 1));
                assert_eq!(*union, ClosedSet::point(p.clone()));
            }
            other => panic!("{other:?}"),
        }
        assert!(v.recheck_density(&slide(), &p));
    }

    #[test]
    fn trap_without_cycle() {
        // x -> x/2 has no cycle of sets from 1/3 but stays in [0,1/2]
        let half = SetValuedMap::parse("h", "segment 0 1 cc -> 0 1/2").unwrap();
        let p = rat(1, 3);
        let (v, _) = weak_dense_probe(&half, &p, &rat(1, 4), 5).unwrap();
        assert!(matches!(v.evidence, Some(Evidence::ClosedTrap { missed_cell: 1, .. })));
        assert!(v.recheck_density(&half, &p));
    }

    #[test]
    fn dense_orbit_for_tent() {
        let p = rat(1, 7);
        let prefix = dense_orbit_build(&tent(), &p, &rat(1, 4), 64).unwrap();
        assert!(is_orbit_prefix(&tent(), &prefix));
        let grid = Grid::new(4).unwrap();
        let cells: BTreeSet<usize> = prefix.entries().iter().flat_map(|x| grid.cells_of(x)).collect();
        assert_eq!(cells.len(), 4);
    }

    #[test]
    fn identity_has_no_dense_orbit() {
        let id = SetValuedMap::parse("id", "segment 0 1 cc -> 0 1").unwrap();
        assert!(matches!(
            dense_orbit_build(&id, &rat(1, 3), &rat(1, 4), 16),
            Err(AnalysisError::NotWeakDense { .. })
        ));
    }

    #[test]
    fn slide_dense_orbit_gets_stuck() {
        assert!(matches!(
            dense_orbit_build(&slide(), &one(), &rat(1, 4), 16),
            Err(AnalysisError::NotWeakDense { .. })
        ));
    }

    #[test]
    fn finite_cycle_walk() {
        let s = FiniteSystem::from_edges(&["a", "b", "c"], &[("a", &["b"]), ("b", &["c"]), ("c", &["a"])]).unwrap();
        assert_eq!(dense_orbit_build_finite(&s, 1, 3).unwrap(), vec![1, 2, 0]);
        let r = minimality_check_finite(&s).unwrap();
        assert!(r.dense_minimal.is_yes() && r.weak_dense_minimal.is_yes());
    }

    #[test]
    fn fan_fixed_end_refutes_dense_minimality() {
        let fan = SetValuedMap::parse("fan", "segment 0 1 cc -> 0 1\npoint 0 -> [0,1]").unwrap();
        let r = minimality_check(&fan, &rat(1, 4), 16, None).unwrap();
        assert!(r.dense_minimal.is_no());
        let Some(Evidence::Samples { points }) = &r.dense_minimal.evidence else {
            panic!()
        };
        assert!(points.iter().any(|s| s.p == one() && s.status == Status::CertifiedNo));
    }
}
