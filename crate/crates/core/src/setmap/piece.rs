use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::space::{format_scalar, in_unit, parse_scalar, ClosedSet, Interval, Scalar};

use super::SetMapError;

/// Piece domain: an interval with independently open or closed ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Domain {
    #[serde(with = "crate::space::exact")]
    pub lo: Scalar,
    #[serde(with = "crate::space::exact")]
    pub hi: Scalar,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Domain {
    pub fn closed(lo: Scalar, hi: Scalar) -> Self {
        Domain {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn point(x: Scalar) -> Self {
        Domain::closed(x.clone(), x)
    }

    /// `flags` is one of `cc`, `co`, `oc`, `oo` (left end first).
    pub fn with_flags(lo: Scalar, hi: Scalar, flags: &str) -> Result<Self, SetMapError> {
        let (lo_open, hi_open) = match flags {
            "cc" => (false, false),
            "co" => (false, true),
            "oc" => (true, false),
            "oo" => (true, true),
            other => return Err(SetMapError::InvalidPiece(format!("unknown flags `{other}`"))),
        };
        let d = Domain {
            lo,
            hi,
            lo_open,
            hi_open,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), SetMapError> {
        if !in_unit(&self.lo) || !in_unit(&self.hi) {
            return Err(SetMapError::InvalidPiece(format!(
                "domain {self} leaves [0,1]"
            )));
        }
        if self.lo > self.hi || (self.lo == self.hi && (self.lo_open || self.hi_open)) {
            return Err(SetMapError::InvalidPiece(format!("empty domain {self}")));
        }
        Ok(())
    }

    pub fn flags(&self) -> &'static str {
        match (self.lo_open, self.hi_open) {
            (false, false) => "cc",
            (false, true) => "co",
            (true, false) => "oc",
            (true, true) => "oo",
        }
    }

    pub fn is_closed(&self) -> bool {
        !self.lo_open && !self.hi_open
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let above = if self.lo_open { *x > self.lo } else { *x >= self.lo };
        let below = if self.hi_open { *x < self.hi } else { *x <= self.hi };
        above && below
    }

    pub fn closure(&self) -> Interval {
        Interval {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_open { '(' } else { '[' },
            format_scalar(&self.lo),
            format_scalar(&self.hi),
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// `x -> slope * x + intercept`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Affine {
    #[serde(with = "crate::space::exact")]
    pub slope: Scalar,
    #[serde(with = "crate::space::exact")]
    pub intercept: Scalar,
}

impl Affine {
    pub fn new(slope: Scalar, intercept: Scalar) -> Self {
        Affine { slope, intercept }
    }

    pub fn constant(c: Scalar) -> Self {
        Affine::new(Scalar::zero(), c)
    }

    /// The line through `(x0, y0)` and `(x1, y1)`; a vertical pair gives a constant.
    pub fn through(x0: &Scalar, y0: &Scalar, x1: &Scalar, y1: &Scalar) -> Self {
        if x0 == x1 {
            return Affine::constant(y0.clone());
        }
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        Affine { slope, intercept }
    }

    pub fn at(&self, x: &Scalar) -> Scalar {
        &self.slope * x + &self.intercept
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    /// Point where two lines cross, if they cross exactly once.
    pub fn crossing(&self, other: &Affine) -> Option<Scalar> {
        let ds = &self.slope - &other.slope;
        if ds.is_zero() {
            return None;
        }
        Some((&other.intercept - &self.intercept) / ds)
    }

    /// `{x : self(x) <= y}` intersected with `[lo, hi]`, as a closed interval.
    pub(crate) fn sublevel(&self, y: &Scalar, lo: &Scalar, hi: &Scalar) -> Option<(Scalar, Scalar)> {
        clip_halfline(&self.slope, &(y - &self.intercept), lo, hi)
    }

    /// `{x : self(x) >= y}` intersected with `[lo, hi]`.
    pub(crate) fn superlevel(&self, y: &Scalar, lo: &Scalar, hi: &Scalar) -> Option<(Scalar, Scalar)> {
        clip_halfline(&-&self.slope, &(&self.intercept - y), lo, hi)
    }
}

// solves slope * x <= rhs on [lo, hi]
fn clip_halfline(slope: &Scalar, rhs: &Scalar, lo: &Scalar, hi: &Scalar) -> Option<(Scalar, Scalar)> {
    if slope.is_zero() {
        return (!rhs.is_negative()).then(|| (lo.clone(), hi.clone()));
    }
    let root = rhs / slope;
    let (a, b) = if slope.is_positive() {
        (lo.clone(), (&root).min(hi).clone())
    } else {
        ((&root).max(lo).clone(), hi.clone())
    };
    (a <= b).then_some((a, b))
}

/// One piece of the graph of a set-valued map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapPiece {
    /// Single value `line(x)` over the domain.
    Segment { domain: Domain, line: Affine },
    /// Constant set value over the domain.
    Rectangle { domain: Domain, value: ClosedSet },
    /// Set value at a single point.
    PointRule {
        #[serde(with = "crate::space::exact")]
        at: Scalar,
        value: ClosedSet,
    },
    /// Interval value `[lower(x), upper(x)]` over the domain.
    Band {
        domain: Domain,
        lower: Affine,
        upper: Affine,
    },
}

/// Uniform internal form: every piece becomes strips `x -> [lower(x), upper(x)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Strip {
    pub domain: Domain,
    pub lower: Affine,
    pub upper: Affine,
}

impl Strip {
    pub fn value_at(&self, x: &Scalar) -> Interval {
        Interval::new(self.lower.at(x), self.upper.at(x))
    }

    pub fn is_singleton(&self) -> bool {
        self.lower == self.upper
    }
}

impl MapPiece {
    pub fn segment(lo: Scalar, hi: Scalar, line: Affine) -> Self {
        MapPiece::Segment {
            domain: Domain::closed(lo, hi),
            line,
        }
    }

    /// Closed segment through `(x0, y0)` and `(x1, y1)`.
    pub fn segment_through(x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> Self {
        let line = Affine::through(&x0, &y0, &x1, &y1);
        MapPiece::segment(x0, x1, line)
    }

    pub fn rectangle(domain: Domain, value: ClosedSet) -> Self {
        MapPiece::Rectangle { domain, value }
    }

    pub fn point(at: Scalar, value: ClosedSet) -> Self {
        MapPiece::PointRule { at, value }
    }

    pub fn domain(&self) -> Domain {
        match self {
            MapPiece::Segment { domain, .. }
            | MapPiece::Rectangle { domain, .. }
            | MapPiece::Band { domain, .. } => domain.clone(),
            MapPiece::PointRule { at, .. } => Domain::point(at.clone()),
        }
    }

    pub(crate) fn strips(&self) -> Vec<Strip> {
        match self {
            MapPiece::Segment { domain, line } => vec![Strip {
                domain: domain.clone(),
                lower: line.clone(),
                upper: line.clone(),
            }],
            MapPiece::Band {
                domain,
                lower,
                upper,
            } => vec![Strip {
                domain: domain.clone(),
                lower: lower.clone(),
                upper: upper.clone(),
            }],
            MapPiece::Rectangle { domain, value } => constant_strips(domain, value),
            MapPiece::PointRule { at, value } => constant_strips(&Domain::point(at.clone()), value),
        }
    }

    pub fn validate(&self) -> Result<(), SetMapError> {
        let d = self.domain();
        d.validate()?;
        let check_unit = |a: &Affine, what: &str| -> Result<(), SetMapError> {
            for x in [&d.lo, &d.hi] {
                let y = a.at(x);
                if !in_unit(&y) {
                    return Err(SetMapError::InvalidPiece(format!(
                        "{what} on {d} reaches {} outside [0,1]",
                        format_scalar(&y)
                    )));
                }
            }
            Ok(())
        };
        match self {
            MapPiece::Segment { line, .. } => check_unit(line, "segment"),
            MapPiece::Band { lower, upper, .. } => {
                check_unit(lower, "band lower edge")?;
                check_unit(upper, "band upper edge")?;
                for x in [&d.lo, &d.hi] {
                    if lower.at(x) > upper.at(x) {
                        return Err(SetMapError::InvalidPiece(format!(
                            "band edges cross on {d}"
                        )));
                    }
                }
                Ok(())
            }
            MapPiece::Rectangle { .. } | MapPiece::PointRule { .. } => Ok(()),
        }
    }

    /// Parses one line of the piece text format.
    ///
    /// ```text
    /// segment <lo> <hi> <flags> -> <f(lo)> <f(hi)>
    /// rect <lo> <hi> <flags> -> <set>
    /// point <x> -> <set>
    /// band <lo> <hi> <flags> -> <lower(lo)> <lower(hi)> <upper(lo)> <upper(hi)>
    /// ```
    pub fn parse_line(line: &str) -> Result<Self, SetMapError> {
        let bad = |msg: &str| SetMapError::InvalidPiece(format!("{msg}: `{line}`"));
        let (head, tail) = line.split_once("->").ok_or_else(|| bad("missing `->`"))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let tail = tail.trim();
        let num = |s: &str| parse_scalar(s).map_err(|e| bad(&e.to_string()));
        let piece = match head.as_slice() {
            ["segment", lo, hi, flags] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let vals: Vec<&str> = tail.split_whitespace().collect();
                let [y0, y1] = vals.as_slice() else {
                    return Err(bad("segment needs two values"));
                };
                let line = Affine::through(&lo, &num(y0)?, &hi, &num(y1)?);
                MapPiece::Segment {
                    domain: Domain::with_flags(lo, hi, flags)?,
                    line,
                }
            }
            ["rect", lo, hi, flags] => MapPiece::Rectangle {
                domain: Domain::with_flags(num(lo)?, num(hi)?, flags)?,
                value: tail.parse().map_err(|e: crate::space::SpaceError| bad(&e.to_string()))?,
            },
            ["point", x] => MapPiece::PointRule {
                at: num(x)?,
                value: tail.parse().map_err(|e: crate::space::SpaceError| bad(&e.to_string()))?,
            },
            ["band", lo, hi, flags] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let vals: Vec<&str> = tail.split_whitespace().collect();
                let [l0, l1, u0, u1] = vals.as_slice() else {
                    return Err(bad("band needs four values"));
                };
                MapPiece::Band {
                    lower: Affine::through(&lo, &num(l0)?, &hi, &num(l1)?),
                    upper: Affine::through(&lo, &num(u0)?, &hi, &num(u1)?),
                    domain: Domain::with_flags(lo, hi, flags)?,
                }
            }
            _ => return Err(bad("unrecognised piece")),
        };
        piece.validate()?;
        Ok(piece)
    }
}

fn constant_strips(domain: &Domain, value: &ClosedSet) -> Vec<Strip> {
    value
        .components()
        .iter()
        .map(|c| Strip {
            domain: domain.clone(),
            lower: Affine::constant(c.lo.clone()),
            upper: Affine::constant(c.hi.clone()),
        })
        .collect()
}

impl fmt::Display for MapPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs = format_scalar;
        match self {
            MapPiece::Segment { domain, line } => write!(
                f,
                "segment {} {} {} -> {} {}",
                fs(&domain.lo),
                fs(&domain.hi),
                domain.flags(),
                fs(&line.at(&domain.lo)),
                fs(&line.at(&domain.hi))
            ),
            MapPiece::Rectangle { domain, value } => write!(
                f,
                "rect {} {} {} -> {}",
                fs(&domain.lo),
                fs(&domain.hi),
                domain.flags(),
                value
            ),
            MapPiece::PointRule { at, value } => write!(f, "point {} -> {}", fs(at), value),
            MapPiece::Band {
                domain,
                lower,
                upper,
            } => write!(
                f,
                "band {} {} {} -> {} {} {} {}",
                fs(&domain.lo),
                fs(&domain.hi),
                domain.flags(),
                fs(&lower.at(&domain.lo)),
                fs(&lower.at(&domain.hi)),
                fs(&upper.at(&domain.lo)),
                fs(&upper.at(&domain.hi))
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::rat;

    #[test]
    fn domain_flags_and_membership() {
        let d = Domain::with_flags(rat(0, 1), rat(1, 1), "oc").unwrap();
        assert!(!d.contains(&rat(0, 1)));
        assert!(d.contains(&rat(1, 1)));
        assert!(Domain::with_flags(rat(1, 2), rat(1, 2), "oo").is_err());
        assert!(Domain::with_flags(rat(0, 1), rat(1, 1), "xx").is_err());
    }

    #[test]
    fn halfline_clipping() {
        let a = Affine::new(rat(2, 1), rat(0, 1));
        assert_eq!(
            a.sublevel(&rat(1, 2), &rat(0, 1), &rat(1, 1)),
            Some((rat(0, 1), rat(1, 4)))
        );
        assert_eq!(
            a.superlevel(&rat(1, 2), &rat(0, 1), &rat(1, 1)),
            Some((rat(1, 4), rat(1, 1)))
        );
        let c = Affine::constant(rat(1, 3));
        assert_eq!(c.sublevel(&rat(1, 4), &rat(0, 1), &rat(1, 1)), None);
    }

    #[test]
    fn piece_lines_round_trip() {
        for text in [
            "segment 0 1/2 cc -> 0 1",
            "rect 0 1 oc -> [0,1]",
            "point 1/6 -> {1/6}|{10/19}",
            "band 0 1 oc -> 0 1 1 1",
        ] {
            let p = MapPiece::parse_line(text).unwrap();
            assert_eq!(p.to_string(), text);
        }
        assert!(MapPiece::parse_line("segment 0 1 cc -> 0 2").is_err());
        assert!(MapPiece::parse_line("segment 0 1 cc 0 1").is_err());
    }
}
