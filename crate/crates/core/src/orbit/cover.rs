use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::analysis::TransitionGraph;
use crate::setmap::{SetValuedMap, Tri};
use crate::space::{format_scalar, ClosedSet, Grid, Scalar, SeqPrefix};

use super::OrbitError;

pub const DEFAULT_PATH_BUDGET: usize = 1_000_000;

/// Outer approximation of the truncated orbit set by sequences of grid cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCover {
    grid: Grid,
    depth: usize,
    paths: BTreeSet<Vec<u32>>,
}

impl OrbitCover {
    /// Walks of length `n` in the transition graph, starting at cells that meet
    /// `{z}` and continuing through cells that meet the exact value `F(z)`.
    pub fn build(f: &SetValuedMap, z: &Scalar, n: usize, eps: &Scalar) -> Result<Self, OrbitError> {
        OrbitCover::build_with_budget(f, z, n, eps, DEFAULT_PATH_BUDGET)
    }

    pub fn build_with_budget(
        f: &SetValuedMap,
        z: &Scalar,
        n: usize,
        eps: &Scalar,
        budget: usize,
    ) -> Result<Self, OrbitError> {
        let grid = Grid::from_eps(eps).ok_or_else(|| OrbitError::Resolution(format_scalar(eps)))?;
        if n == 0 {
            return Err(OrbitError::IndexOutOfRange { k: 0, depth: 0 });
        }
        let graph = TransitionGraph::build(f, grid);
        OrbitCover::from_graph(f, &graph, z, n, budget)
    }

    pub fn from_graph(
        f: &SetValuedMap,
        graph: &TransitionGraph,
        z: &Scalar,
        n: usize,
        budget: usize,
    ) -> Result<Self, OrbitError> {
        let grid = graph.grid();
        let mut paths: Vec<Vec<u32>> = grid.cells_of(z).into_iter().map(|c| vec![c as u32]).collect();
        if n >= 2 {
            let second = grid.cells_meeting(&f.evaluate(z)?);
            paths = extend(paths, budget, |_| second.iter().map(|&c| c as u32).collect())?;
        }
        for _ in 2..n {
            paths = extend(paths, budget, |last| {
                graph.successors(last as usize).iter().map(|&c| c as u32).collect()
            })?;
        }
        Ok(OrbitCover {
            grid,
            depth: n,
            paths: paths.into_iter().collect(),
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn eps(&self) -> Scalar {
        self.grid.eps()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Always true: the cover contains the truncated orbit set.
    pub fn is_outer(&self) -> bool {
        true
    }

    pub fn paths(&self) -> &BTreeSet<Vec<u32>> {
        &self.paths
    }

    /// Cells occurring at index `k` (1-based).
    pub fn project(&self, k: usize) -> Result<BTreeSet<u32>, OrbitError> {
        if k == 0 || k > self.depth {
            return Err(OrbitError::IndexOutOfRange { k, depth: self.depth });
        }
        Ok(self.paths.iter().map(|p| p[k - 1]).collect())
    }

    /// Union of the cells at index `k`.
    pub fn project_set(&self, k: usize) -> Result<ClosedSet, OrbitError> {
        let cells = self.project(k)?;
        let parts = cells.into_iter().map(|c| self.grid.cell(c as usize)).collect();
        Ok(crate::space::canonicalize(parts).expect("cells lie in [0,1]"))
    }

    /// Distinct length-`k` prefixes of the stored paths.
    pub fn truncate(&self, k: usize) -> BTreeSet<Vec<u32>> {
        self.paths.iter().map(|p| p[..k.min(p.len())].to_vec()).collect()
    }

    /// True if every entry of `prefix` lies in the matching cell of some path.
    pub fn contains_prefix(&self, prefix: &SeqPrefix) -> bool {
        let xs = prefix.entries();
        if xs.len() != self.depth {
            return false;
        }
        let options: Vec<Vec<usize>> = xs.iter().map(|x| self.grid.cells_of(x)).collect();
        let mut partial: Vec<Vec<u32>> = vec![Vec::new()];
        for opts in &options {
            let mut next = Vec::new();
            for p in &partial {
                for &c in opts {
                    let mut q = p.clone();
                    q.push(c as u32);
                    let hit = self
                        .paths
                        .range(q.clone()..)
                        .next()
                        .is_some_and(|r| r.starts_with(&q));
                    if hit {
                        next.push(q);
                    }
                }
            }
            partial = next;
        }
        !partial.is_empty()
    }

    /// Connectedness of the union of path boxes, level by level.
    ///
    /// Two boxes (products of closed cells) touch exactly when their cells are
    /// equal or adjacent in every coordinate, so the union is connected iff the
    /// touching graph is.
    pub fn depth_connectivity(&self, f: &SetValuedMap) -> Result<ConnectivityVerdict, OrbitError> {
        if f.values_connected_check().holds != Tri::True {
            return Err(OrbitError::HypothesisNotChecked);
        }
        let mut components_per_level = Vec::with_capacity(self.depth);
        for k in 1..=self.depth {
            let boxes: Vec<Vec<u32>> = self.truncate(k).into_iter().collect();
            let count = touching_components(&boxes);
            components_per_level.push(count);
            if count > 1 {
                return Ok(ConnectivityVerdict {
                    connected: false,
                    disconnected_level: Some(k),
                    components_per_level,
                });
            }
        }
        Ok(ConnectivityVerdict {
            connected: true,
            disconnected_level: None,
            components_per_level,
        })
    }

    pub fn to_report(&self) -> CoverReport {
        CoverReport {
            eps: format_scalar(&self.eps()),
            depth: self.depth,
            outer: true,
            path_count: self.paths.len(),
            levels: (1..=self.depth)
                .map(|k| self.project(k).expect("in range").into_iter().collect())
                .collect(),
        }
    }
}

fn extend(
    paths: Vec<Vec<u32>>,
    budget: usize,
    next: impl Fn(u32) -> Vec<u32>,
) -> Result<Vec<Vec<u32>>, OrbitError> {
    let mut out = Vec::new();
    for p in paths {
        let last = *p.last().expect("paths are nonempty");
        for c in next(last) {
            if out.len() >= budget {
                return Err(OrbitError::BudgetExceeded { limit: budget });
            }
            let mut q = p.clone();
            q.push(c);
            out.push(q);
        }
    }
    Ok(out)
}

fn touches(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.abs_diff(*y) <= 1)
}

fn touching_components(boxes: &[Vec<u32>]) -> usize {
    let n = boxes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let dims = boxes.first().map_or(0, Vec::len);
    let neighbours = 3usize.saturating_pow(dims as u32);
    if neighbours < n {
        let index: HashMap<&[u32], usize> = boxes.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
        for (i, b) in boxes.iter().enumerate() {
            for code in 0..neighbours {
                let mut q = b.clone();
                let mut c = code;
                let mut valid = true;
                for x in q.iter_mut() {
                    match c % 3 {
                        0 => {}
                        1 => *x += 1,
                        _ => {
                            if *x == 0 {
                                valid = false;
                            } else {
                                *x -= 1;
                            }
                        }
                    }
                    c /= 3;
                }
                if let Some(&j) = valid.then(|| index.get(q.as_slice())).flatten() {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                if touches(&boxes[i], &boxes[j]) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectivityVerdict {
    pub connected: bool,
    pub disconnected_level: Option<usize>,
    pub components_per_level: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub eps: String,
    pub depth: usize,
    pub outer: bool,
    pub path_count: usize,
    pub levels: Vec<Vec<u32>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{rat, zero};

    fn fan() -> SetValuedMap {
        SetValuedMap::parse("fan", "segment 0 1 cc -> 0 1\npoint 0 -> [0,1]").unwrap()
    }

    #[test]
    fn fan_cover_second_level_is_everything() {
        let c = OrbitCover::build(&fan(), &zero(), 2, &rat(1, 4)).unwrap();
        assert_eq!(c.project(2).unwrap(), (0..4).collect());
        assert_eq!(c.project_set(2).unwrap(), ClosedSet::full());
        assert_eq!(c.project(1).unwrap(), [0].into_iter().collect());
    }

    #[test]
    fn identity_cover_spreads_through_shared_endpoints() {
        let id = SetValuedMap::parse("id", "segment 0 1 cc -> 0 1").unwrap();
        let c = OrbitCover::build(&id, &rat(1, 3), 5, &rat(1, 4)).unwrap();
        assert_eq!(c.project(1).unwrap(), [1].into_iter().collect());
        assert_eq!(c.project(2).unwrap(), [1].into_iter().collect());
        assert_eq!(c.project(3).unwrap(), [0, 1, 2].into_iter().collect());
        let exact = SeqPrefix::new(vec![rat(1, 3); 5]).unwrap();
        assert!(c.contains_prefix(&exact));
    }

    #[test]
    fn fan_cover_is_connected() {
        let c = OrbitCover::build(&fan(), &zero(), 3, &rat(1, 8)).unwrap();
        let v = c.depth_connectivity(&fan()).unwrap();
        assert!(v.connected);
    }

    #[test]
    fn flip_connectivity_needs_connected_values() {
        let flip = SetValuedMap::parse("flip", "segment 0 1 cc -> 0 1\nsegment 0 1 cc -> 1 0").unwrap();
        let c = OrbitCover::build(&flip, &rat(3, 10), 3, &rat(1, 4)).unwrap();
        assert_eq!(c.depth_connectivity(&flip), Err(OrbitError::HypothesisNotChecked));
    }

    #[test]
    fn separated_boxes_count() {
        assert_eq!(touching_components(&[vec![0, 0], vec![1, 1], vec![3, 3]]), 2);
        let many: Vec<Vec<u32>> = (0..20).map(|i| vec![i]).collect();
        assert_eq!(touching_components(&many), 1);
    }

    #[test]
    fn bad_resolution() {
        assert!(matches!(
            OrbitCover::build(&fan(), &zero(), 2, &rat(2, 5)),
            Err(OrbitError::Resolution(_))
        ));
    }
}
