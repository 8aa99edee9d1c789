use std::collections::HashMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use crate::setmap::SetValuedMap;
use crate::space::{format_scalar, int, one, rho_prefix, ClosedSet, Scalar, SeqPrefix};

use super::OrbitError;

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub value: Scalar,
    pub parent: Option<usize>,
    pub children: Range<usize>,
}

/// All orbit prefixes `(x_1, ..., x_n)` with `x_1 = z` and `x_{i+1} ∈ F(x_i)`,
/// stored level by level. Only defined when every reachable value is finite.
#[derive(Debug, Clone)]
pub struct OrbitTree {
    depth: usize,
    nodes: Vec<Node>,
    levels: Vec<Range<usize>>,
}

impl OrbitTree {
    pub fn build(f: &SetValuedMap, z: &Scalar, depth: usize) -> Result<Self, OrbitError> {
        OrbitTree::build_with_budget(f, z, depth, DEFAULT_NODE_BUDGET)
    }

    pub fn build_with_budget(
        f: &SetValuedMap,
        z: &Scalar,
        depth: usize,
        budget: usize,
    ) -> Result<Self, OrbitError> {
        if depth == 0 {
            return Err(OrbitError::IndexOutOfRange { k: 0, depth });
        }
        f.evaluate(z)?;
        let mut nodes = vec![Node {
            value: z.clone(),
            parent: None,
            children: 0..0,
        }];
        let mut levels = vec![0..1];
        let mut memo: HashMap<Scalar, Vec<Scalar>> = HashMap::new();
        for _ in 1..depth {
            let current = levels.last().expect("root level").clone();
            let mut fresh: Vec<Scalar> = nodes[current.clone()]
                .iter()
                .filter(|n| !memo.contains_key(&n.value))
                .map(|n| n.value.clone())
                .collect();
            fresh.sort();
            fresh.dedup();
            let evaluated: Vec<(Scalar, Result<Vec<Scalar>, OrbitError>)> = fresh
                .into_par_iter()
                .map(|x| {
                    let r = f.evaluate(&x).map_err(OrbitError::from).and_then(|v| {
                        if v.is_finite() {
                            Ok(v.point_values())
                        } else {
                            Err(OrbitError::NotFiniteValued(format_scalar(&x)))
                        }
                    });
                    (x, r)
                })
                .collect();
            for (x, r) in evaluated {
                memo.insert(x, r?);
            }
            let start = nodes.len();
            for i in current {
                let kids = &memo[&nodes[i].value];
                if nodes.len() + kids.len() > budget {
                    return Err(OrbitError::BudgetExceeded { limit: budget });
                }
                let first = nodes.len();
                for k in kids {
                    nodes.push(Node {
                        value: k.clone(),
                        parent: Some(i),
                        children: 0..0,
                    });
                }
                nodes[i].children = first..nodes.len();
            }
            levels.push(start..nodes.len());
        }
        Ok(OrbitTree {
            depth,
            nodes,
            levels,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root(&self) -> &Scalar {
        &self.nodes[0].value
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Node indices at level `k` (1-based).
    pub fn level(&self, k: usize) -> Result<Range<usize>, OrbitError> {
        if k == 0 || k > self.depth {
            return Err(OrbitError::IndexOutOfRange { k, depth: self.depth });
        }
        Ok(self.levels[k - 1].clone())
    }

    /// The set of `k`-th coordinates over all branches.
    pub fn project(&self, k: usize) -> Result<ClosedSet, OrbitError> {
        let r = self.level(k)?;
        Ok(ClosedSet::points(self.nodes[r].iter().map(|n| n.value.clone())).expect("levels are nonempty"))
    }

    pub fn leaf_count(&self) -> usize {
        self.levels[self.depth - 1].len()
    }

    /// Root-to-node path of values.
    pub fn path_to(&self, mut node: usize) -> Vec<Scalar> {
        let mut out = vec![self.nodes[node].value.clone()];
        while let Some(p) = self.nodes[node].parent {
            out.push(self.nodes[p].value.clone());
            node = p;
        }
        out.reverse();
        out
    }

    /// Every full-depth branch, in tree order.
    pub fn branches(&self) -> Vec<SeqPrefix> {
        self.levels[self.depth - 1]
            .clone()
            .map(|leaf| SeqPrefix::new(self.path_to(leaf)).expect("orbit values lie in [0,1]"))
            .collect()
    }

    /// Node indices along `branch`, if it is a branch of the tree.
    pub fn locate(&self, branch: &SeqPrefix) -> Option<Vec<usize>> {
        let xs = branch.entries();
        if xs.len() != self.depth || xs[0] != self.nodes[0].value {
            return None;
        }
        let mut path = vec![0];
        for x in &xs[1..] {
            let node = &self.nodes[*path.last().expect("nonempty")];
            let kids = &self.nodes[node.children.clone()];
            let j = kids.binary_search_by(|k| k.value.cmp(x)).ok()?;
            path.push(node.children.start + j);
        }
        Some(path)
    }

    /// A different branch within `eps` of `branch` in the product metric.
    ///
    /// With `N` the least index such that `2^-N < eps`, the sibling agrees with
    /// `branch` up to some index `j >= N`, switches to another value of
    /// `F(x_j)` at `j + 1`, then follows the first child at every level.
    pub fn sibling_within(&self, branch: &SeqPrefix, eps: &Scalar) -> Result<SeqPrefix, OrbitError> {
        let path = self.locate(branch).ok_or(OrbitError::NotABranch)?;
        let n = split_index(eps);
        for j in n..self.depth {
            let node = &self.nodes[path[j - 1]];
            if node.children.len() < 2 {
                continue;
            }
            let alt = node
                .children
                .clone()
                .find(|&c| c != path[j])
                .expect("at least two children");
            let mut leaf = alt;
            while !self.nodes[leaf].children.is_empty() {
                leaf = self.nodes[leaf].children.start;
            }
            let sibling = SeqPrefix::new(self.path_to(leaf)).expect("orbit values lie in [0,1]");
            let (value, tail) = rho_prefix(branch, &sibling, self.depth).expect("equal lengths");
            debug_assert!(value + tail < *eps);
            return Ok(sibling);
        }
        Err(OrbitError::NoSibling { index: n })
    }

    pub fn to_report(&self) -> TreeReport {
        TreeReport {
            root: format_scalar(self.root()),
            depth: self.depth,
            nodes: self.nodes.len(),
            levels: (1..=self.depth)
                .map(|k| self.project(k).expect("in range").to_string())
                .collect(),
            branches: self
                .branches()
                .iter()
                .map(|b| b.entries().iter().map(format_scalar).collect())
                .collect(),
        }
    }
}

/// Least `N >= 1` with `2^-N < eps`.
pub fn split_index(eps: &Scalar) -> usize {
    let mut n = 1;
    let mut w = one() / int(2);
    while w >= *eps {
        n += 1;
        w /= int(2);
    }
    n
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeReport {
    pub root: String,
    pub depth: usize,
    pub nodes: usize,
    pub levels: Vec<String>,
    pub branches: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{half, rat};

    fn flip() -> SetValuedMap {
        SetValuedMap::parse("flip", "segment 0 1 cc -> 0 1\nsegment 0 1 cc -> 1 0").unwrap()
    }

    #[test]
    fn flip_tree_shape() {
        let t = OrbitTree::build(&flip(), &rat(3, 10), 3).unwrap();
        assert_eq!(t.leaf_count(), 4);
        for k in 1..=3 {
            assert!(t.project(k).unwrap().is_subset_of(&"{3/10}|{7/10}".parse().unwrap()));
        }
        assert_eq!(t.project(1).unwrap().to_string(), "{3/10}");
        assert!(matches!(t.project(4), Err(OrbitError::IndexOutOfRange { k: 4, depth: 3 })));
    }

    #[test]
    fn fixed_point_has_one_branch() {
        let t = OrbitTree::build(&flip(), &half(), 5).unwrap();
        assert_eq!(t.leaf_count(), 1);
        let b = &t.branches()[0];
        assert!(b.entries().iter().all(|x| *x == half()));
        assert_eq!(t.sibling_within(b, &rat(1, 4)), Err(OrbitError::NoSibling { index: 3 }));
    }

    #[test]
    fn sibling_of_constant_branch() {
        let t = OrbitTree::build(&flip(), &rat(3, 10), 6).unwrap();
        let b = SeqPrefix::new(vec![rat(3, 10); 6]).unwrap();
        let s = t.sibling_within(&b, &rat(1, 4)).unwrap();
        let first_diff = (0..6).find(|&i| s.entries()[i] != b.entries()[i]).unwrap() + 1;
        assert_eq!(first_diff, 4);
        let (v, tail) = rho_prefix(&b, &s, 6).unwrap();
        assert!(v + tail < rat(1, 4));
        let wide = t.sibling_within(&b, &rat(2, 1)).unwrap();
        assert_eq!(wide.entries()[1], rat(7, 10));
    }

    #[test]
    fn split_indices() {
        assert_eq!(split_index(&rat(1, 4)), 3);
        assert_eq!(split_index(&rat(1, 2)), 2);
        assert_eq!(split_index(&rat(2, 1)), 1);
        assert_eq!(split_index(&rat(1, 8)), 4);
    }

    #[test]
    fn interval_values_are_rejected() {
        let fan = SetValuedMap::parse("fan", "segment 0 1 cc -> 0 1\npoint 0 -> [0,1]").unwrap();
        assert!(matches!(
            OrbitTree::build(&fan, &rat(0, 1), 3),
            Err(OrbitError::NotFiniteValued(_))
        ));
        assert!(matches!(
            OrbitTree::build_with_budget(&flip(), &rat(1, 3), 12, 100),
            Err(OrbitError::BudgetExceeded { limit: 100 })
        ));
    }
}
