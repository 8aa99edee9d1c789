//! Continuous single-valued piecewise-linear maps of `[0,1]`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::space::{format_scalar, in_unit, one, zero, ClosedSet, Interval, Scalar};

use super::{Affine, Domain, MapPiece, SetMapError, SetValuedMap};

/// Continuous map given by its values at increasing knots `0 = x_0 < ... < x_n = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlMap {
    name: String,
    #[serde(serialize_with = "ser_knots")]
    knots: Vec<(Scalar, Scalar)>,
}

fn ser_knots<S: serde::Serializer>(k: &[(Scalar, Scalar)], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<[String; 2]> = k
        .iter()
        .map(|(x, y)| [format_scalar(x), format_scalar(y)])
        .collect();
    v.serialize(s)
}

impl PlMap {
    pub fn new(name: impl Into<String>, knots: Vec<(Scalar, Scalar)>) -> Result<Self, SetMapError> {
        let bad = |m: String| SetMapError::InvalidPiece(m);
        if knots.len() < 2 {
            return Err(bad("need at least two knots".into()));
        }
        if knots[0].0 != zero() || knots[knots.len() - 1].0 != one() {
            return Err(bad("knots must start at 0 and end at 1".into()));
        }
        for w in knots.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(bad("knots must increase".into()));
            }
        }
        if let Some((_, y)) = knots.iter().find(|(_, y)| !in_unit(y)) {
            return Err(bad(format!("value {} outside [0,1]", format_scalar(y))));
        }
        Ok(PlMap {
            name: name.into(),
            knots,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn knots(&self) -> &[(Scalar, Scalar)] {
        &self.knots
    }

    pub fn identity() -> Self {
        PlMap::new("identity", vec![(zero(), zero()), (one(), one())]).expect("valid")
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let i = self.knots.partition_point(|(k, _)| k < x);
        if i < self.knots.len() && self.knots[i].0 == *x {
            return self.knots[i].1.clone();
        }
        let (x0, y0) = &self.knots[i - 1];
        let (x1, y1) = &self.knots[i];
        Affine::through(x0, y0, x1, y1).at(x)
    }

    /// `f([0,1])`.
    pub fn range(&self) -> Interval {
        let lo = self.knots.iter().map(|(_, y)| y).min().expect("nonempty").clone();
        let hi = self.knots.iter().map(|(_, y)| y).max().expect("nonempty").clone();
        Interval { lo, hi }
    }

    pub fn is_onto(&self) -> bool {
        let r = self.range();
        r.lo == zero() && r.hi == one()
    }

    /// `f^{-1}(y)`; flat pieces at height `y` contribute whole intervals.
    pub fn preimage(&self, y: &Scalar) -> Option<ClosedSet> {
        let mut out = Vec::new();
        for w in self.knots.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if y0 == y1 {
                if y0 == y {
                    out.push(Interval::new(x0.clone(), x1.clone()));
                }
                continue;
            }
            let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
            if lo <= y && y <= hi {
                let x = x0 + (y - y0) * (x1 - x0) / (y1 - y0);
                out.push(Interval::point(x));
            }
        }
        ClosedSet::normalize(out)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PlMap) -> PlMap {
        let mut xs: BTreeSet<Scalar> = inner.knots.iter().map(|(x, _)| x.clone()).collect();
        for (k, _) in &self.knots {
            if let Some(pre) = inner.preimage(k) {
                for c in pre.components() {
                    xs.insert(c.lo.clone());
                    xs.insert(c.hi.clone());
                }
            }
        }
        let knots = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x));
                (x, y)
            })
            .collect();
        PlMap {
            name: format!("{}∘{}", self.name, inner.name),
            knots,
        }
        .simplified()
    }

    fn simplified(mut self) -> Self {
        let mut out: Vec<(Scalar, Scalar)> = Vec::with_capacity(self.knots.len());
        for k in self.knots.drain(..) {
            if out.len() >= 2 {
                let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
                let line = Affine::through(&a.0, &a.1, &b.0, &b.1);
                if line.at(&k.0) == k.1 {
                    out.pop();
                }
            }
            out.push(k);
        }
        self.knots = out;
        self
    }

    /// The graph as a (single-valued) set-valued map.
    pub fn to_map(&self) -> SetValuedMap {
        let pieces = self
            .knots
            .windows(2)
            .map(|w| MapPiece::segment_through(w[0].0.clone(), w[0].1.clone(), w[1].0.clone(), w[1].1.clone()))
            .collect();
        SetValuedMap::new(self.name.clone(), pieces).expect("continuous maps are total")
    }
}

/// `F(x) = f_1^{-1}(x) ∪ ... ∪ f_k^{-1}(x)` for onto maps `f_i`.
///
/// Each linear piece of each `f_i` is transposed: a sloped piece becomes a
/// segment over its range, a flat piece at height `c` becomes the rule
/// `c -> [x_0, x_1]`.
pub fn preimage_union_map(fs: &[PlMap]) -> Result<SetValuedMap, SetMapError> {
    let mut pieces = Vec::new();
    for (index, f) in fs.iter().enumerate() {
        if !f.is_onto() {
            return Err(SetMapError::NotOnto {
                index,
                name: f.name.clone(),
            });
        }
        for w in f.knots.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            if y0 == y1 {
                pieces.push(MapPiece::point(
                    y0.clone(),
                    ClosedSet::interval(x0.clone(), x1.clone()),
                ));
            } else {
                let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
                pieces.push(MapPiece::Segment {
                    domain: Domain::closed(lo.clone(), hi.clone()),
                    line: Affine::through(y0, x0, y1, x1),
                });
            }
        }
    }
    let names: Vec<&str> = fs.iter().map(|f| f.name.as_str()).collect();
    let name = format!("preimage_union({})", names.join(","));
    Ok(SetValuedMap::new(name, pieces)?.with_sources(fs.to_vec()))
}

/// `f_1^{-1}(x0) ∩ ... ∩ f_k^{-1}(x0)`, or `None` when empty.
pub fn common_preimage_point(fs: &[PlMap], x0: &Scalar) -> Option<ClosedSet> {
    let mut acc = fs.first()?.preimage(x0)?;
    for f in &fs[1..] {
        acc = acc.intersection(&f.preimage(x0)?)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{half, rat};

    fn tent() -> PlMap {
        PlMap::new("tent", vec![(zero(), zero()), (half(), one()), (one(), zero())]).unwrap()
    }

    #[test]
    fn evaluation_and_preimages() {
        let t = tent();
        assert_eq!(t.eval(&rat(1, 4)), half());
        assert_eq!(t.eval(&rat(3, 4)), half());
        assert_eq!(t.preimage(&rat(2, 3)).unwrap().to_string(), "{1/3}|{2/3}");
    }

    #[test]
    fn composition_matches_pointwise() {
        let t = tent();
        let tt = t.compose(&t);
        assert_eq!(tt.knots().len(), 5);
        for i in 0..=40 {
            let x = rat(i, 40);
            assert_eq!(tt.eval(&x), t.eval(&t.eval(&x)));
        }
    }

    #[test]
    fn union_of_preimages() {
        let f = preimage_union_map(&[tent(), PlMap::identity()]).unwrap();
        assert_eq!(f.evaluate(&rat(2, 3)).unwrap().to_string(), "{1/3}|{2/3}");
        let common = common_preimage_point(&[tent(), PlMap::identity()], &rat(2, 3)).unwrap();
        assert_eq!(common.to_string(), "{2/3}");
    }

    #[test]
    fn constant_map_is_not_onto() {
        let c = PlMap::new("const", vec![(zero(), half()), (one(), half())]).unwrap();
        assert_eq!(
            preimage_union_map(&[c]).unwrap_err(),
            SetMapError::NotOnto {
                index: 0,
                name: "const".into()
            }
        );
    }

    #[test]
    fn flat_pieces_become_point_rules() {
        let staircase = PlMap::new(
            "step",
            vec![(zero(), zero()), (rat(1, 3), half()), (rat(2, 3), half()), (one(), one())],
        )
        .unwrap();
        let f = preimage_union_map(&[staircase]).unwrap();
        assert_eq!(f.evaluate(&half()).unwrap().to_string(), "[1/3,2/3]");
        assert_eq!(f.evaluate(&rat(1, 4)).unwrap().to_string(), "{1/6}");
    }
}
