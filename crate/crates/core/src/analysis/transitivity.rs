use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::setmap::{MapPiece, SetValuedMap};
use crate::space::{int, ClosedSet, Grid, Scalar};

use super::{grid_for, Budget, ComplexGraph, ComplexNode, Evidence, GraphKind, PairWitness, Status, TransitionGraph, Verdict};

const PREIMAGE_DEPTH: usize = 4;
const SPECIAL_CAP: usize = 512;

/// ε-transitivity probe: for grid cells `U`, `V`, is there `x ∈ U` and
/// `k ∈ 1..=horizon` with `F^k(x) ∩ V ≠ ∅`?
///
/// `certified_no` comes from a pair of cells (closed, or open cells of the
/// point/open-cell complex) with no walk between them; `certified_yes` means
/// every ordered pair of closed cells has an exact witness, which covers all
/// open sets containing a whole cell.
pub fn transitivity_probe(f: &SetValuedMap, eps: &Scalar, horizon: usize) -> Verdict {
    let grid = match grid_for(eps) {
        Ok(g) => g,
        Err(_) => {
            return Verdict {
                status: Status::Inconclusive,
                evidence: None,
                budget: Budget::default(),
            }
        }
    };
    let m = grid.cells();
    let budget = Budget {
        eps: Some(eps.clone()),
        horizon: Some(horizon),
        samples: None,
    };

    let closed = TransitionGraph::build(f, grid);
    for u in 0..m {
        let r = closed.reachable(&[u]);
        if let Some(v) = r.iter().position(|&hit| !hit) {
            return Verdict {
                status: Status::CertifiedNo,
                evidence: Some(Evidence::Unreachable {
                    graph: GraphKind::Closed,
                    from: u,
                    to: v,
                }),
                budget,
            };
        }
    }
    let complex = ComplexGraph::build(f, grid);
    for u in 0..m {
        let r: HashSet<ComplexNode> = complex.reachable(&[ComplexNode::Open(u)]).into_iter().collect();
        if let Some(v) = (0..m).find(|&v| !r.contains(&ComplexNode::Open(v))) {
            return Verdict {
                status: Status::CertifiedNo,
                evidence: Some(Evidence::Unreachable {
                    graph: GraphKind::Complex,
                    from: u,
                    to: v,
                }),
                budget,
            };
        }
    }

    let candidates = witness_candidates(f, &grid);
    let hits: Vec<Vec<Option<usize>>> = candidates
        .par_iter()
        .map(|x| first_hits(f, &grid, x, horizon))
        .collect();
    let mut pairs = Vec::with_capacity(m * m);
    let mut complete = true;
    for u in 0..m {
        let cell = grid.cell(u);
        for v in 0..m {
            let found = candidates
                .iter()
                .zip(&hits)
                .filter(|(x, _)| cell.contains(x))
                .find_map(|(x, h)| h[v].map(|k| (x.clone(), k)));
            match found {
                Some((x, k)) => pairs.push(PairWitness { u, v, x, k }),
                None => complete = false,
            }
        }
    }
    let budget = Budget {
        samples: Some(candidates.len()),
        ..budget
    };
    if complete {
        Verdict {
            status: Status::CertifiedYes,
            evidence: Some(Evidence::PairWitnesses { pairs }),
            budget,
        }
    } else {
        Verdict {
            status: Status::Inconclusive,
            evidence: None,
            budget,
        }
    }
}

/// Sample points used as witnesses: cell endpoints, midpoints and sevenths,
/// breakpoints, and iterated preimages of the points where the map has an
/// isolated set value.
pub fn witness_candidates(f: &SetValuedMap, grid: &Grid) -> Vec<Scalar> {
    let mut out: BTreeSet<Scalar> = BTreeSet::new();
    for i in 0..grid.cells() {
        let (lo, hi) = (grid.lo(i), grid.hi(i));
        let w = &hi - &lo;
        for j in 1..7 {
            out.insert(&lo + &w * int(j) / int(7));
        }
        out.insert(grid.midpoint(i));
        out.insert(lo);
        out.insert(hi);
    }
    out.extend(f.breakpoints());
    out.extend(special_points(f));
    out.into_iter().collect()
}

fn special_points(f: &SetValuedMap) -> BTreeSet<Scalar> {
    let mut seeds: BTreeSet<Scalar> = BTreeSet::new();
    for p in f.pieces() {
        if let MapPiece::PointRule { at, value } = p {
            seeds.insert(at.clone());
            seeds.extend(value.components().iter().filter(|c| c.is_point()).map(|c| c.lo.clone()));
        }
    }
    let mut all = seeds.clone();
    let mut frontier = seeds;
    for _ in 0..PREIMAGE_DEPTH {
        let mut next = BTreeSet::new();
        for y in &frontier {
            if let Some(pre) = f.preimage(y) {
                for c in pre.components().iter().filter(|c| c.is_point()) {
                    if all.len() >= SPECIAL_CAP {
                        return all;
                    }
                    if all.insert(c.lo.clone()) {
                        next.insert(c.lo.clone());
                    }
                }
            }
        }
        frontier = next;
    }
    all
}

// first k in 1..=horizon with F^k(x) meeting each closed cell
fn first_hits(f: &SetValuedMap, grid: &Grid, x: &Scalar, horizon: usize) -> Vec<Option<usize>> {
    let m = grid.cells();
    let mut hits = vec![None; m];
    let mut missing = m;
    let mut seen: HashSet<ClosedSet> = HashSet::new();
    let mut s = ClosedSet::point(x.clone());
    for k in 1..=horizon {
        s = f.image(&s);
        if s.is_outer() || !seen.insert(s.clone()) {
            break;
        }
        for c in grid.cells_meeting(&s) {
            if hits[c].is_none() {
                hits[c] = Some(k);
                missing -= 1;
            }
        }
        if missing == 0 {
            break;
        }
    }
    hits
}

pub(super) fn recheck_pairs(f: &SetValuedMap, eps: &Scalar, pairs: &[PairWitness]) -> bool {
    let Some(grid) = Grid::from_eps(eps) else {
        return false;
    };
    let m = grid.cells();
    let covered: BTreeSet<(usize, usize)> = pairs.iter().map(|p| (p.u, p.v)).collect();
    covered.len() == m * m
        && pairs.par_iter().all(|p| {
            p.u < m
                && p.v < m
                && p.k >= 1
                && grid.cell(p.u).contains(&p.x)
                && f.iterate(&p.x, p.k).is_ok_and(|s| !s.is_outer() && s.intersects(&grid.cell_set(p.v)))
        })
}

pub(super) fn recheck_unreachable(
    f: &SetValuedMap,
    eps: &Scalar,
    kind: GraphKind,
    u: usize,
    v: usize,
) -> bool {
    let Some(grid) = Grid::from_eps(eps) else {
        return false;
    };
    if u >= grid.cells() || v >= grid.cells() {
        return false;
    }
    match kind {
        GraphKind::Closed => !TransitionGraph::build(f, grid).reachable(&[u])[v],
        GraphKind::Complex => !ComplexGraph::build(f, grid)
            .reachable(&[ComplexNode::Open(u)])
            .contains(&ComplexNode::Open(v)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::rat;

    fn tent() -> SetValuedMap {
        SetValuedMap::parse("tent", "segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0").unwrap()
    }

    fn slide() -> SetValuedMap {
        SetValuedMap::parse("slide", "segment 0 1 cc -> 0 1\npoint 1 -> [0,1]").unwrap()
    }

    #[test]
    fn tent_is_eps_transitive() {
        let v = transitivity_probe(&tent(), &rat(1, 4), 40);
        assert_eq!(v.status, Status::CertifiedYes);
        assert!(v.recheck_transitivity(&tent()));
    }

    #[test]
    fn slide_is_refuted_on_the_complex() {
        for m in [4, 8, 16] {
            let v = transitivity_probe(&slide(), &rat(1, m), 40);
            assert_eq!(v.status, Status::CertifiedNo, "eps 1/{m}");
            assert!(matches!(v.evidence, Some(Evidence::Unreachable { graph: GraphKind::Complex, .. })));
            assert!(v.recheck_transitivity(&slide()));
        }
    }

    #[test]
    fn refutations_on_closed_cells() {
        let id = SetValuedMap::parse("id", "segment 0 1 cc -> 0 1").unwrap();
        let v = transitivity_probe(&id, &rat(1, 4), 10);
        assert!(matches!(v.evidence, Some(Evidence::Unreachable { graph: GraphKind::Complex, .. })));
        let low = SetValuedMap::parse("low", "segment 0 1 cc -> 0 1/4").unwrap();
        let v = transitivity_probe(&low, &rat(1, 4), 10);
        assert_eq!(
            v.evidence,
            Some(Evidence::Unreachable { graph: GraphKind::Closed, from: 0, to: 1 })
        );
        assert!(v.recheck_transitivity(&low));
    }

    #[test]
    fn forged_witness_fails_recheck() {
        let v = transitivity_probe(&tent(), &rat(1, 4), 40);
        let mut forged = v.clone();
        if let Some(Evidence::PairWitnesses { pairs }) = &mut forged.evidence {
            pairs[0].x = rat(1, 2);
            pairs[0].k = 2;
        }
        assert!(!forged.recheck_transitivity(&tent()));
    }
}
