//! Cell graphs of a set-valued map.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::setmap::{Domain, SetValuedMap};
use crate::space::{format_scalar, int, ClosedSet, Grid, Scalar};

/// Closed cells `[iε, (i+1)ε]` with an edge `c -> c'` iff `F(c)` meets `c'`.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    grid: Grid,
    images: Vec<ClosedSet>,
    succ: Vec<Vec<usize>>,
}

impl TransitionGraph {
    pub fn build(f: &SetValuedMap, grid: Grid) -> Self {
        let images: Vec<ClosedSet> = (0..grid.cells())
            .into_par_iter()
            .map(|i| f.image(&grid.cell_set(i)))
            .collect();
        let succ = images.iter().map(|im| grid.cells_meeting(im)).collect();
        TransitionGraph { grid, images, succ }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn cells(&self) -> usize {
        self.grid.cells()
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    /// `F(c_i)`, computed exactly.
    pub fn image(&self, i: usize) -> &ClosedSet {
        &self.images[i]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    /// Cells reachable from `start` by walks of length at least one.
    pub fn reachable(&self, start: &[usize]) -> Vec<bool> {
        reach(&self.succ, start)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(s, "  rankdir=LR;");
        let _ = writeln!(s, "  node [shape=box, fontname=\"monospace\"];");
        for i in 0..self.cells() {
            let c = self.grid.cell(i);
            let _ = writeln!(
                s,
                "  c{i} [label=\"c{i}\\n[{},{}]\"];",
                format_scalar(&c.lo),
                format_scalar(&c.hi)
            );
        }
        for (i, out) in self.succ.iter().enumerate() {
            for j in out {
                let _ = writeln!(s, "  c{i} -> c{j};");
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_report(&self) -> GraphReport {
        GraphReport {
            eps: format_scalar(&self.grid.eps()),
            cells: self.cells(),
            edges: self.succ.clone(),
            images: self.images.iter().map(ToString::to_string).collect(),
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub(crate) fn reach(succ: &[Vec<usize>], start: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in start {
        for &t in &succ[s] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    while let Some(a) = stack.pop() {
        for &t in &succ[a] {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphReport {
    pub eps: String,
    pub cells: usize,
    pub edges: Vec<Vec<usize>>,
    pub images: Vec<String>,
}

/// Node of the cell complex: grid point `i/m` or open cell `(i/m, (i+1)/m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "node", content = "index", rename_all = "snake_case")]
pub enum ComplexNode {
    Point(usize),
    Open(usize),
}

impl ComplexNode {
    fn id(self) -> usize {
        match self {
            ComplexNode::Point(i) => 2 * i,
            ComplexNode::Open(i) => 2 * i + 1,
        }
    }

    fn from_id(id: usize) -> Self {
        if id % 2 == 0 {
            ComplexNode::Point(id / 2)
        } else {
            ComplexNode::Open(id / 2)
        }
    }

    pub fn label(self, grid: &Grid) -> String {
        match self {
            ComplexNode::Point(i) => format!("{{{}}}", format_scalar(&grid.lo(i))),
            ComplexNode::Open(i) => format!(
                "({},{})",
                format_scalar(&grid.lo(i)),
                format_scalar(&grid.hi(i))
            ),
        }
    }
}

/// Transition graph on the partition of `[0,1]` into grid points and open
/// cells. Images of open cells are computed without closing them, so a walk
/// exists whenever some orbit passes between the two pieces; missing walks
/// are therefore sound refutations.
#[derive(Debug, Clone)]
pub struct ComplexGraph {
    grid: Grid,
    succ: Vec<Vec<usize>>,
}

/// An interval with open or closed ends.
#[derive(Debug, Clone)]
struct Span(Domain);

impl Span {
    fn meets_point(&self, p: &Scalar) -> bool {
        self.0.contains(p)
    }

    fn meets_open(&self, a: &Scalar, b: &Scalar) -> bool {
        let d = &self.0;
        if d.lo == d.hi {
            return a < &d.lo && &d.lo < b;
        }
        (&d.lo).max(a) < (&d.hi).min(b)
    }
}

impl ComplexGraph {
    pub fn build(f: &SetValuedMap, grid: Grid) -> Self {
        let m = grid.cells();
        let succ: Vec<Vec<usize>> = (0..2 * m + 1)
            .into_par_iter()
            .map(|id| {
                let spans = match ComplexNode::from_id(id) {
                    ComplexNode::Point(i) => {
                        let v = f.evaluate(&grid.lo(i)).expect("map is total");
                        v.components()
                            .iter()
                            .map(|c| Span(Domain::closed(c.lo.clone(), c.hi.clone())))
                            .collect()
                    }
                    ComplexNode::Open(i) => open_image(f, &grid.lo(i), &grid.hi(i)),
                };
                let mut out = Vec::new();
                for t in 0..2 * m + 1 {
                    let hit = match ComplexNode::from_id(t) {
                        ComplexNode::Point(j) => spans.iter().any(|s| s.meets_point(&grid.lo(j))),
                        ComplexNode::Open(j) => {
                            spans.iter().any(|s| s.meets_open(&grid.lo(j), &grid.hi(j)))
                        }
                    };
                    if hit {
                        out.push(t);
                    }
                }
                out
            })
            .collect();
        ComplexGraph { grid, succ }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn successors(&self, node: ComplexNode) -> Vec<ComplexNode> {
        self.succ[node.id()].iter().map(|&t| ComplexNode::from_id(t)).collect()
    }

    /// Nodes reachable from `start` by walks of length at least one.
    pub fn reachable(&self, start: &[ComplexNode]) -> Vec<ComplexNode> {
        let ids: Vec<usize> = start.iter().map(|n| n.id()).collect();
        reach(&self.succ, &ids)
            .into_iter()
            .enumerate()
            .filter(|(_, r)| *r)
            .map(|(i, _)| ComplexNode::from_id(i))
            .collect()
    }

    /// Nodes whose piece of `[0,1]` meets `set`.
    pub fn nodes_meeting(&self, set: &ClosedSet) -> Vec<ComplexNode> {
        let g = &self.grid;
        let mut out = Vec::new();
        for i in 0..=g.cells() {
            if set.contains(&g.lo(i)) {
                out.push(ComplexNode::Point(i));
            }
            if i < g.cells() && set.meets_open(&g.lo(i), &g.hi(i)) {
                out.push(ComplexNode::Open(i));
            }
        }
        out.sort();
        out
    }
}

// exact image of the open interval (a, b), as a list of spans
fn open_image(f: &SetValuedMap, a: &Scalar, b: &Scalar) -> Vec<Span> {
    let mut out = Vec::new();
    for s in f.strips() {
        let d = &s.domain;
        let (lo, lo_open) = if d.lo > *a { (d.lo.clone(), d.lo_open) } else { (a.clone(), true) };
        let (hi, hi_open) = if d.hi < *b { (d.hi.clone(), d.hi_open) } else { (b.clone(), true) };
        if lo > hi || (lo == hi && (lo_open || hi_open)) {
            continue;
        }
        if lo == hi {
            out.push(Span(Domain::closed(s.lower.at(&lo), s.upper.at(&lo))));
            continue;
        }
        // lower edge minimum and upper edge maximum over the span
        let end_open = |slope: &Scalar, at_lo: bool| -> bool {
            if *slope == int(0) {
                false
            } else if at_lo {
                lo_open
            } else {
                hi_open
            }
        };
        let (l_lo, l_hi) = (s.lower.at(&lo), s.lower.at(&hi));
        let (min, min_open) = if l_lo <= l_hi {
            (l_lo, end_open(&s.lower.slope, true) && s.lower.slope != int(0))
        } else {
            (l_hi, end_open(&s.lower.slope, false))
        };
        let (u_lo, u_hi) = (s.upper.at(&lo), s.upper.at(&hi));
        let (max, max_open) = if u_hi >= u_lo {
            (u_hi, end_open(&s.upper.slope, false))
        } else {
            (u_lo, end_open(&s.upper.slope, true))
        };
        out.push(Span(Domain {
            lo: min,
            hi: max,
            lo_open: min_open,
            hi_open: max_open,
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::rat;

    fn map(text: &str) -> SetValuedMap {
        SetValuedMap::parse("m", text).unwrap()
    }

    #[test]
    fn tent_half_grid_is_complete() {
        let t = map("segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0");
        let g = TransitionGraph::build(&t, Grid::new(2).unwrap());
        assert_eq!(g.successors(0), &[0, 1]);
        assert_eq!(g.successors(1), &[0, 1]);
    }

    #[test]
    fn identity_edges_only_touch_neighbours() {
        let id = map("segment 0 1 cc -> 0 1");
        let g = TransitionGraph::build(&id, Grid::new(4).unwrap());
        assert_eq!(g.successors(0), &[0, 1]);
        assert_eq!(g.successors(2), &[1, 2, 3]);
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn slide_top_cell_reaches_everything() {
        let slide = map("segment 0 1 cc -> 0 1\npoint 1 -> [0,1]");
        let g = TransitionGraph::build(&slide, Grid::new(4).unwrap());
        assert_eq!(g.successors(3), &[0, 1, 2, 3]);
        // closed cells chain through shared endpoints
        assert!(g.reachable(&[0]).iter().all(|&r| r));
        let c = ComplexGraph::build(&slide, Grid::new(4).unwrap());
        let r = c.reachable(&[ComplexNode::Open(0)]);
        assert_eq!(r, vec![ComplexNode::Open(0)]);
        // (3/4,1) never reaches 1 itself; the point 1 reaches everything
        let top = c.reachable(&[ComplexNode::Open(3)]);
        assert!(!top.contains(&ComplexNode::Point(4)));
        assert_eq!(c.reachable(&[ComplexNode::Point(4)]).len(), 9);
    }

    #[test]
    fn open_images_exclude_limits() {
        // y = x on (0,1/4) never reaches the grid point 1/4
        let id = map("segment 0 1 cc -> 0 1");
        let spans = open_image(&id, &rat(0, 1), &rat(1, 4));
        assert_eq!(spans.len(), 1);
        assert!(!spans[0].meets_point(&rat(1, 4)));
        assert!(spans[0].meets_open(&rat(1, 8), &rat(1, 2)));
        let c = ComplexGraph::build(&id, Grid::new(4).unwrap());
        assert_eq!(c.successors(ComplexNode::Open(0)), vec![ComplexNode::Open(0)]);
    }

    #[test]
    fn dot_output_lists_edges() {
        let t = map("segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0");
        let g = TransitionGraph::build(&t, Grid::new(2).unwrap());
        let dot = g.to_dot("tent");
        assert!(dot.starts_with("digraph \"tent\" {"));
        assert_eq!(dot.matches("->").count(), 4);
    }
}
