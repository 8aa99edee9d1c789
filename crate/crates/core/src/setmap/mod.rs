//! Set-valued maps on `[0,1]` given by finitely many graph pieces, and maps on
//! finite discrete spaces.

mod finite;
mod piece;
mod pl;
mod semicontinuity;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{format_scalar, half, in_unit, int, one, zero, ClosedSet, Interval, Scalar};

pub use finite::{members, FiniteError, FiniteSystem, StateSet};
pub use piece::{Affine, Domain, MapPiece};
pub use pl::{common_preimage_point, preimage_union_map, PlMap};
pub use semicontinuity::{lsc_check, usc_check, SemiKind, SemicontinuityVerdict, LimitWitness};

pub(crate) use piece::Strip;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetMapError {
    #[error("no piece applies at x = {0}")]
    DomainGap(String),
    #[error("invalid piece: {0}")]
    InvalidPiece(String),
    #[error("map #{index} ({name}) is not onto [0,1]")]
    NotOnto { index: usize, name: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("point {0} lies outside [0,1]")]
    OutOfRange(String),
}

/// Three-valued answer for properties that are sometimes only sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

/// Result of the connected-values decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectedVerdict {
    pub holds: Tri,
    #[serde(with = "crate::space::exact_opt")]
    pub witness: Option<Scalar>,
}

/// Upper semicontinuous candidate `F : [0,1] -> 2^[0,1]` with piecewise-affine graph.
#[derive(Debug, Clone)]
pub struct SetValuedMap {
    name: String,
    pieces: Vec<MapPiece>,
    strips: Vec<Strip>,
    sources: Vec<PlMap>,
}

impl SetValuedMap {
    /// Validates every piece and checks that the domains cover `[0,1]`.
    pub fn new(name: impl Into<String>, pieces: Vec<MapPiece>) -> Result<Self, SetMapError> {
        for p in &pieces {
            p.validate()?;
        }
        let strips = pieces.iter().flat_map(MapPiece::strips).collect();
        let map = SetValuedMap {
            name: name.into(),
            pieces,
            strips,
            sources: Vec::new(),
        };
        map.check_coverage()?;
        Ok(map)
    }

    /// Reads the line-oriented piece format; `#` starts a comment.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self, SetMapError> {
        let mut pieces = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let piece = MapPiece::parse_line(line).map_err(|e| SetMapError::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            pieces.push(piece);
        }
        SetValuedMap::new(name, pieces)
    }

    pub(crate) fn with_sources(mut self, sources: Vec<PlMap>) -> Self {
        self.sources = sources;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn pieces(&self) -> &[MapPiece] {
        &self.pieces
    }

    pub(crate) fn strips(&self) -> &[Strip] {
        &self.strips
    }

    /// The single-valued maps this was built from by `preimage_union_map`, if any.
    pub fn sources(&self) -> &[PlMap] {
        &self.sources
    }

    /// Sorted domain endpoints of all pieces, together with 0 and 1.
    pub fn breakpoints(&self) -> Vec<Scalar> {
        let mut set: BTreeSet<Scalar> = BTreeSet::new();
        set.insert(zero());
        set.insert(one());
        for s in &self.strips {
            set.insert(s.domain.lo.clone());
            set.insert(s.domain.hi.clone());
        }
        set.into_iter().collect()
    }

    fn check_coverage(&self) -> Result<(), SetMapError> {
        let bps = self.breakpoints();
        let mut probes = bps.clone();
        for w in bps.windows(2) {
            probes.push((&w[0] + &w[1]) / int(2));
        }
        for x in probes {
            if !self.strips.iter().any(|s| s.domain.contains(&x)) {
                return Err(SetMapError::DomainGap(format_scalar(&x)));
            }
        }
        Ok(())
    }

    /// `F(x)`.
    pub fn evaluate(&self, x: &Scalar) -> Result<ClosedSet, SetMapError> {
        if !in_unit(x) {
            return Err(SetMapError::OutOfRange(format_scalar(x)));
        }
        let parts: Vec<Interval> = self
            .strips
            .iter()
            .filter(|s| s.domain.contains(x))
            .map(|s| s.value_at(x))
            .collect();
        ClosedSet::normalize(parts).ok_or_else(|| SetMapError::DomainGap(format_scalar(x)))
    }

    /// `F(A)`, the union of `F(x)` over `x` in `A`.
    ///
    /// Pieces with open domain ends contribute the closure of their image, so for
    /// maps whose graph is not closed the result may exceed the true image at
    /// those limit values.
    pub fn image(&self, a: &ClosedSet) -> ClosedSet {
        let comps = a.components();
        let mut out: Vec<Interval> = Vec::new();
        for s in &self.strips {
            let dom = &s.domain;
            let start = comps.partition_point(|c| c.hi < dom.lo);
            for c in &comps[start..] {
                if c.lo > dom.hi {
                    break;
                }
                let lo = (&c.lo).max(&dom.lo);
                let hi = (&c.hi).min(&dom.hi);
                if lo < hi {
                    let (l0, l1) = (s.lower.at(lo), s.lower.at(hi));
                    let (u0, u1) = (s.upper.at(lo), s.upper.at(hi));
                    out.push(Interval {
                        lo: l0.min(l1),
                        hi: u0.max(u1),
                    });
                } else if dom.contains(lo) {
                    out.push(s.value_at(lo));
                }
            }
        }
        ClosedSet::normalize(out)
            .expect("a total map has a nonempty image")
            .with_outer(a.is_outer())
    }

    /// `F^n(x)`; `n = 0` gives `{x}`.
    pub fn iterate(&self, x: &Scalar, n: usize) -> Result<ClosedSet, SetMapError> {
        if !in_unit(x) {
            return Err(SetMapError::OutOfRange(format_scalar(x)));
        }
        Ok(self.iterate_set(&ClosedSet::point(x.clone()), n))
    }

    pub fn iterate_set(&self, a: &ClosedSet, n: usize) -> ClosedSet {
        let mut s = a.clone();
        for _ in 0..n {
            s = self.image(&s);
        }
        s
    }

    /// Successive images `F^1(a), ..., F^n(a)`.
    pub fn forward_sets(&self, a: &ClosedSet, n: usize) -> Vec<ClosedSet> {
        let mut out = Vec::with_capacity(n);
        let mut s = a.clone();
        for _ in 0..n {
            s = self.image(&s);
            out.push(s.clone());
        }
        out
    }

    /// `{x : y in F(x)}`; `None` when empty.
    pub fn preimage(&self, y: &Scalar) -> Option<ClosedSet> {
        let mut out = Vec::new();
        for s in &self.strips {
            let d = &s.domain;
            let Some((a, b)) = s.lower.sublevel(y, &d.lo, &d.hi) else {
                continue;
            };
            let Some((c, e)) = s.upper.superlevel(y, &a, &b) else {
                continue;
            };
            if c < e || d.contains(&c) {
                out.push(Interval { lo: c, hi: e });
            }
        }
        ClosedSet::normalize(out)
    }

    /// Preimage of `y` restricted to `within`.
    pub fn preimage_within(&self, y: &Scalar, within: &ClosedSet) -> Option<ClosedSet> {
        self.preimage(y)?.intersection(within)
    }

    /// True when every piece is closed (and hence the graph is closed).
    pub fn has_closed_domains(&self) -> bool {
        self.strips.iter().all(|s| s.domain.is_closed())
    }

    /// True if every value `F(x)` is a single point.
    pub fn is_single_valued(&self) -> bool {
        let pts = self.probe_points();
        self.strips.iter().all(Strip::is_singleton)
            && pts.iter().all(|x| self.evaluate(x).map(|v| v.is_singleton()).unwrap_or(false))
    }

    /// Breakpoints plus the midpoints between consecutive breakpoints.
    pub fn probe_points(&self) -> Vec<Scalar> {
        let bps = self.breakpoints();
        let mut pts = bps.clone();
        for w in bps.windows(2) {
            pts.push((&w[0] + &w[1]) / int(2));
        }
        pts.sort();
        pts
    }

    /// Decides whether every `F(x)` is an interval.
    ///
    /// Between consecutive breakpoints the active strips are fixed, so the
    /// number of components can only change where two strip edges cross; the
    /// check evaluates at every crossing and between consecutive crossings.
    pub fn values_connected_check(&self) -> ConnectedVerdict {
        let bps = self.breakpoints();
        let mut probes: Vec<Scalar> = bps.clone();
        for w in bps.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let mid = (a + b) / int(2);
            let active: Vec<&Strip> = self
                .strips
                .iter()
                .filter(|s| s.domain.contains(&mid))
                .collect();
            let mut edges: Vec<&Affine> = Vec::new();
            for s in &active {
                edges.push(&s.lower);
                edges.push(&s.upper);
            }
            let mut cuts: BTreeSet<Scalar> = BTreeSet::new();
            cuts.insert(a.clone());
            cuts.insert(b.clone());
            for (i, e) in edges.iter().enumerate() {
                for f in &edges[i + 1..] {
                    if let Some(x) = e.crossing(f) {
                        if a < &x && &x < b {
                            cuts.insert(x);
                        }
                    }
                }
            }
            let cuts: Vec<Scalar> = cuts.into_iter().collect();
            for c in cuts.windows(2) {
                probes.push(c[0].clone());
                probes.push((&c[0] + &c[1]) * half());
            }
        }
        probes.sort();
        probes.dedup();
        for x in probes {
            match self.evaluate(&x) {
                Ok(v) if v.is_interval() => {}
                _ => {
                    return ConnectedVerdict {
                        holds: Tri::False,
                        witness: Some(x),
                    }
                }
            }
        }
        ConnectedVerdict {
            holds: Tri::True,
            witness: None,
        }
    }

    /// Points with `F(x) = {x}`, or `None` if they fill an interval.
    pub fn fixed_singletons(&self) -> Option<Vec<Scalar>> {
        let is_identity = |s: &Strip| s.is_singleton() && s.lower == Affine::new(one(), zero());
        let bps = self.breakpoints();
        for w in bps.windows(2) {
            let mid = (&w[0] + &w[1]) * half();
            if self
                .strips
                .iter()
                .filter(|s| s.domain.contains(&mid))
                .all(is_identity)
            {
                return None;
            }
        }
        let diag = Affine::new(one(), zero());
        let mut candidates: BTreeSet<Scalar> = bps.into_iter().collect();
        for s in self.strips.iter().filter(|s| !is_identity(s)) {
            for edge in [&s.lower, &s.upper] {
                if let Some(x) = edge.crossing(&diag) {
                    if s.domain.contains(&x) {
                        candidates.insert(x);
                    }
                }
            }
        }
        Some(
            candidates
                .into_iter()
                .filter(|x| self.evaluate(x).map(|v| v == ClosedSet::point(x.clone())).unwrap_or(false))
                .collect(),
        )
    }

    /// Text form readable by [`SetValuedMap::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.pieces {
            s.push_str(&p.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for SetValuedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.name)?;
        f.write_str(&self.to_text())
    }
}

impl Serialize for SetValuedMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SetValuedMap", 2)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("pieces", &self.pieces)?;
        st.end()
    }
}
