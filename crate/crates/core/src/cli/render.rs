//! Deterministic SVG drawings. Coordinates are exact rationals until they are
//! written, then rounded to 12 significant digits.

use std::fmt::Write as _;

use thiserror::Error;

use crate::analysis::TransitionGraph;
use crate::orbit::{OrbitCover, OrbitTree};
use crate::setmap::SetValuedMap;
use crate::space::{format_scalar, int, one, rat, to_f64, zero, Scalar};

pub const MAX_ELEMENTS: usize = 100_000;
const SIZE: i64 = 400;
const MARGIN: i64 = 24;
const LABEL_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("drawing needs {elements} elements, more than {max}")]
    TooLarge { elements: usize, max: usize },
}

/// `x` rounded to 12 significant digits, without trailing zeros.
pub fn sig12(x: &Scalar) -> String {
    let v = to_f64(x);
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

struct Svg {
    width: i64,
    height: i64,
    body: String,
    elements: usize,
}

impl Svg {
    fn new(width: i64, height: i64) -> Self {
        Svg {
            width,
            height,
            body: String::new(),
            elements: 0,
        }
    }

    fn budget(&self, more: usize) -> Result<(), RenderError> {
        if self.elements + more > MAX_ELEMENTS {
            return Err(RenderError::TooLarge {
                elements: self.elements + more,
                max: MAX_ELEMENTS,
            });
        }
        Ok(())
    }

    fn raw(&mut self, s: String) {
        self.body.push_str("  ");
        self.body.push_str(&s);
        self.body.push('\n');
        self.elements += 1;
    }

    fn line(&mut self, a: (&Scalar, &Scalar), b: (&Scalar, &Scalar), class: &str) {
        self.raw(format!(
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            sig12(a.0),
            sig12(a.1),
            sig12(b.0),
            sig12(b.1)
        ));
    }

    fn circle(&mut self, c: (&Scalar, &Scalar), r: i64, class: &str) {
        self.raw(format!(
            "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{r}\"/>",
            sig12(c.0),
            sig12(c.1)
        ));
    }

    fn polygon(&mut self, pts: &[(Scalar, Scalar)], class: &str) {
        let p: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", sig12(x), sig12(y))).collect();
        self.raw(format!("<polygon class=\"{class}\" points=\"{}\"/>", p.join(" ")));
    }

    fn rect(&mut self, x: &Scalar, y: &Scalar, w: &Scalar, h: &Scalar, class: &str) {
        self.raw(format!(
            "<rect class=\"{class}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
            sig12(x),
            sig12(y),
            sig12(w),
            sig12(h)
        ));
    }

    fn text(&mut self, at: (&Scalar, &Scalar), anchor: &str, s: &str) {
        self.raw(format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\">{}</text>",
            sig12(at.0),
            sig12(at.1),
            xml_escape(s)
        ));
    }

    fn finish(self, title: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = self.width,
            h = self.height
        );
        let _ = writeln!(s, "  <title>{}</title>", xml_escape(title));
        s.push_str(
            "  <style>line,polyline{stroke:#222;stroke-width:1.5}.axis{stroke:#999;stroke-width:1}\
             .edge{stroke:#555;stroke-width:1;marker-end:url(#arrow)}.band{fill:#4a7ab5;fill-opacity:0.35;stroke:#4a7ab5}\
             .node{fill:#fff;stroke:#222}.open{fill:#fff;stroke:#222}.hit{fill:#4a7ab5;stroke:#222}\
             .miss{fill:#fff;stroke:#bbb}text{font:10px monospace}</style>\n",
        );
        s.push_str(
            "  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" \
             markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0L10,5L0,10z\"/></marker></defs>\n",
        );
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

// unit square to canvas, y pointing up
fn to_canvas(x: &Scalar, y: &Scalar) -> (Scalar, Scalar) {
    let m = int(MARGIN);
    let s = int(SIZE);
    (&m + x * &s, &m + (one() - y) * &s)
}

/// Graph of the map: lines for single-valued pieces, shaded bands otherwise,
/// open circles at excluded domain endpoints.
pub fn render_map(f: &SetValuedMap) -> Result<String, RenderError> {
    let mut svg = Svg::new(SIZE + 2 * MARGIN, SIZE + 2 * MARGIN);
    let strips = f.strips();
    svg.budget(4 + 3 * strips.len())?;
    let (o, x1, y1) = (to_canvas(&zero(), &zero()), to_canvas(&one(), &zero()), to_canvas(&zero(), &one()));
    svg.line((&o.0, &o.1), (&x1.0, &x1.1), "axis");
    svg.line((&o.0, &o.1), (&y1.0, &y1.1), "axis");
    let c = to_canvas(&one(), &one());
    svg.line((&o.0, &o.1), (&c.0, &c.1), "axis");
    for s in strips {
        let (lo, hi) = (&s.domain.lo, &s.domain.hi);
        let corners = [
            to_canvas(lo, &s.lower.at(lo)),
            to_canvas(hi, &s.lower.at(hi)),
            to_canvas(hi, &s.upper.at(hi)),
            to_canvas(lo, &s.upper.at(lo)),
        ];
        if s.is_singleton() || lo == hi {
            let (a, b) = if lo == hi { (&corners[0], &corners[3]) } else { (&corners[0], &corners[1]) };
            svg.line((&a.0, &a.1), (&b.0, &b.1), "graph");
        } else {
            svg.polygon(&corners, "band");
        }
        if s.domain.lo_open {
            let p = to_canvas(lo, &s.lower.at(lo));
            svg.circle((&p.0, &p.1), 3, "open");
        }
        if s.domain.hi_open {
            let p = to_canvas(hi, &s.lower.at(hi));
            svg.circle((&p.0, &p.1), 3, "open");
        }
    }
    Ok(svg.finish(&format!("Gr({})", f.name())))
}

/// The orbit tree drawn top-down, one row per level.
pub fn render_tree(t: &OrbitTree) -> Result<String, RenderError> {
    let nodes = t.nodes();
    let labels = nodes.len() <= LABEL_LIMIT;
    svg_budget_check(2 * nodes.len() + if labels { nodes.len() } else { 0 })?;
    let leaves: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].children.is_empty()).collect();
    let mut order = Vec::with_capacity(leaves.len());
    dfs_leaves(t, 0, &mut order);
    let width = SIZE.max(24 * order.len() as i64);
    let height = 60 * t.depth() as i64 + 2 * MARGIN;
    let mut x: Vec<Scalar> = vec![zero(); nodes.len()];
    let slot = rat(width, order.len().max(1) as i64);
    for (j, &leaf) in order.iter().enumerate() {
        x[leaf] = int(MARGIN) + &slot * (int(j as i64) + rat(1, 2));
    }
    for i in (0..nodes.len()).rev() {
        let ch = &nodes[i].children;
        if !ch.is_empty() {
            x[i] = (&x[ch.start] + &x[ch.end - 1]) / int(2);
        }
    }
    let mut level_of = vec![0usize; nodes.len()];
    for k in 1..=t.depth() {
        for i in t.level(k).expect("in range") {
            level_of[i] = k;
        }
    }
    let y = |i: usize| int(MARGIN + 60 * (level_of[i] as i64 - 1) + 12);
    let mut svg = Svg::new(width + 2 * MARGIN, height);
    for (i, n) in nodes.iter().enumerate() {
        if let Some(p) = n.parent {
            svg.line((&x[p], &y(p)), (&x[i], &y(i)), "tree");
        }
    }
    for (i, n) in nodes.iter().enumerate() {
        svg.circle((&x[i], &y(i)), 4, "node");
        if labels {
            let below = y(i) + int(16);
            svg.text((&x[i], &below), "middle", &format_scalar(&n.value));
        }
    }
    Ok(svg.finish(&format!("orbit tree of {} to depth {}", format_scalar(t.root()), t.depth())))
}

fn dfs_leaves(t: &OrbitTree, i: usize, out: &mut Vec<usize>) {
    let ch = t.nodes()[i].children.clone();
    if ch.is_empty() {
        out.push(i);
    }
    for c in ch {
        dfs_leaves(t, c, out);
    }
}

fn svg_budget_check(elements: usize) -> Result<(), RenderError> {
    Svg::new(0, 0).budget(elements)
}

/// The cover as a level-by-cell table: column `k`, row `i` is shaded when
/// cell `i` belongs to level `k`.
pub fn render_cover(c: &OrbitCover) -> Result<String, RenderError> {
    let m = c.grid().cells();
    let n = c.depth();
    svg_budget_check(m * n + n)?;
    let cell_h = rat(SIZE, m as i64);
    let col_w = int(40);
    let mut svg = Svg::new(40 * n as i64 + 2 * MARGIN, SIZE + 2 * MARGIN);
    for k in 1..=n {
        let level = c.project(k).expect("in range");
        let x = int(MARGIN) + &col_w * int(k as i64 - 1);
        for i in 0..m {
            let y = int(MARGIN) + &cell_h * int((m - 1 - i) as i64);
            let class = if level.contains(&(i as u32)) { "hit" } else { "miss" };
            svg.rect(&x, &y, &(&col_w - int(4)), &cell_h, class);
        }
        let label_x = &x + int(18);
        svg.text((&label_x, &int(MARGIN - 6)), "middle", &format!("k={k}"));
    }
    Ok(svg.finish(&format!("orbit cover at eps {}", format_scalar(&c.eps()))))
}

/// Cells on a horizontal line, edges as arrows (self-loops as small circles).
pub fn render_graph(g: &TransitionGraph) -> Result<String, RenderError> {
    let m = g.cells();
    svg_budget_check(3 * m + g.edge_count())?;
    let step = rat(SIZE, m as i64);
    let cx = |i: usize| int(MARGIN) + &step * (int(i as i64) + rat(1, 2));
    let mid = int(MARGIN + SIZE / 2);
    let mut svg = Svg::new(SIZE + 2 * MARGIN, SIZE + 2 * MARGIN);
    for i in 0..m {
        for &j in g.successors(i) {
            if i == j {
                let top = &mid - int(10);
                svg.circle((&cx(i), &top), 6, "open");
                continue;
            }
            // arcs above for rightward edges, below for leftward ones
            let lift = &step * int(i.abs_diff(j) as i64) / int(3);
            let off = if j > i { &mid - &lift - int(8) } else { &mid + &lift + int(8) };
            let a = (&cx(i), &mid);
            let midx = (cx(i) + cx(j)) / int(2);
            svg.raw(format!(
                "<path class=\"edge\" fill=\"none\" d=\"M{},{} Q{},{} {},{}\"/>",
                sig12(a.0),
                sig12(a.1),
                sig12(&midx),
                sig12(&off),
                sig12(&cx(j)),
                sig12(&mid)
            ));
        }
    }
    for i in 0..m {
        svg.circle((&cx(i), &mid), 5, "node");
        let below = &mid + int(20);
        let c = g.grid().cell(i);
        svg.text((&cx(i), &below), "middle", &format!("c{i}"));
        let below2 = &mid + int(32);
        if m <= 32 {
            svg.text((&cx(i), &below2), "middle", &format!("[{},{}]", format_scalar(&c.lo), format_scalar(&c.hi)));
        }
    }
    Ok(svg.finish(&format!("transition graph at eps {}", format_scalar(&g.grid().eps()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Grid;

    fn map(text: &str) -> SetValuedMap {
        SetValuedMap::parse("m", text).unwrap()
    }

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(&rat(1, 3)), "0.333333333333");
        assert_eq!(sig12(&rat(424, 1)), "424");
        assert_eq!(sig12(&rat(200, 3)), "66.6666666667");
        assert_eq!(sig12(&zero()), "0");
    }

    #[test]
    fn double_tent_graph_is_three_lines() {
        let h = map("segment 0 1/4 cc -> 1/2 0\nsegment 1/4 3/4 cc -> 0 1\nsegment 3/4 1 cc -> 1 1/2");
        let svg = render_map(&h).unwrap();
        assert_eq!(svg.matches("class=\"graph\"").count(), 3);
        assert!(svg.contains("x1=\"24\" y1=\"224\" x2=\"124\" y2=\"424\""));
    }

    #[test]
    fn flip_tree_is_binary() {
        let f = map("segment 0 1 cc -> 0 1\nsegment 0 1 cc -> 1 0");
        let t = OrbitTree::build(&f, &rat(3, 10), 4).unwrap();
        let svg = render_tree(&t).unwrap();
        assert_eq!(svg.matches("class=\"node\"").count(), 15);
        assert_eq!(svg.matches("class=\"tree\"").count(), 14);
    }

    #[test]
    fn tent_graph_has_four_nodes() {
        let tent = map("segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0");
        let g = TransitionGraph::build(&tent, Grid::new(4).unwrap());
        let svg = render_graph(&g).unwrap();
        assert_eq!(svg.matches("class=\"node\"").count(), 4);
        assert_eq!(render_graph(&g).unwrap(), svg);
    }

    #[test]
    fn too_large() {
        let f = map("segment 0 1 cc -> 0 1\nsegment 0 1 cc -> 1 0");
        let t = OrbitTree::build(&f, &rat(1, 3), 17).unwrap();
        assert!(matches!(render_tree(&t), Err(RenderError::TooLarge { .. })));
    }
}
