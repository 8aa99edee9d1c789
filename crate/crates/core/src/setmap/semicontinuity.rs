//! Symbolic upper and lower semicontinuity decisions.
//!
//! Away from piece boundaries the set of active strips is locally constant and
//! each strip is continuous, so both properties can only fail at breakpoints.
//! There the one-sided limit sets are read off the strips whose closed domain
//! extends to that side.

use serde::Serialize;

use crate::space::{one, zero, ClosedSet, Interval, Scalar};

use super::SetValuedMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiKind {
    Usc,
    Lsc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitWitness {
    #[serde(with = "crate::space::exact")]
    pub x: Scalar,
    /// The limit set that is not contained where it should be.
    pub limit: Option<ClosedSet>,
    pub value: ClosedSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemicontinuityVerdict {
    pub kind: SemiKind,
    pub holds: bool,
    pub witness: Option<LimitWitness>,
}

impl SemicontinuityVerdict {
    /// Recomputes the witness from the map and confirms that it refutes the property.
    pub fn recheck(&self, f: &SetValuedMap) -> bool {
        let Some(w) = &self.witness else {
            return self.holds;
        };
        let Ok(value) = f.evaluate(&w.x) else {
            return false;
        };
        if value != w.value {
            return false;
        }
        let (left, right) = one_sided_limits(f, &w.x);
        match self.kind {
            SemiKind::Usc => {
                let lim = union_opt(left, right);
                lim == w.limit && !lim.map(|l| l.is_subset_of(&value)).unwrap_or(true)
            }
            SemiKind::Lsc => [left, right].into_iter().any(|side| {
                side == w.limit && !side.as_ref().map(|l| value.is_subset_of(l)).unwrap_or(false)
            }),
        }
    }
}

/// Limit sets of `F(t)` as `t` approaches `x` from the left and from the right.
pub(crate) fn one_sided_limits(f: &SetValuedMap, x: &Scalar) -> (Option<ClosedSet>, Option<ClosedSet>) {
    let mut left: Vec<Interval> = Vec::new();
    let mut right: Vec<Interval> = Vec::new();
    for s in f.strips() {
        let d = &s.domain;
        if *x > zero() && d.lo < *x && *x <= d.hi {
            left.push(s.value_at(x));
        }
        if *x < one() && d.lo <= *x && *x < d.hi {
            right.push(s.value_at(x));
        }
    }
    (ClosedSet::normalize(left), ClosedSet::normalize(right))
}

fn union_opt(a: Option<ClosedSet>, b: Option<ClosedSet>) -> Option<ClosedSet> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.union(&b)),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Upper semicontinuity: at every breakpoint both one-sided limit sets lie in `F(x)`,
/// which is the same as the graph being closed.
pub fn usc_check(f: &SetValuedMap) -> SemicontinuityVerdict {
    for x in f.breakpoints() {
        let value = f.evaluate(&x).expect("coverage checked at construction");
        let (left, right) = one_sided_limits(f, &x);
        let lim = union_opt(left, right);
        if let Some(l) = &lim {
            if !l.is_subset_of(&value) {
                return SemicontinuityVerdict {
                    kind: SemiKind::Usc,
                    holds: false,
                    witness: Some(LimitWitness { x, limit: lim, value }),
                };
            }
        }
    }
    SemicontinuityVerdict {
        kind: SemiKind::Usc,
        holds: true,
        witness: None,
    }
}

/// Lower semicontinuity: at every breakpoint `F(x)` lies in each one-sided limit set.
pub fn lsc_check(f: &SetValuedMap) -> SemicontinuityVerdict {
    for x in f.breakpoints() {
        let value = f.evaluate(&x).expect("coverage checked at construction");
        let (left, right) = one_sided_limits(f, &x);
        let sides = [(x > zero(), left), (x < one(), right)];
        for (applies, side) in sides {
            if !applies {
                continue;
            }
            let ok = side.as_ref().map(|l| value.is_subset_of(l)).unwrap_or(false);
            if !ok {
                return SemicontinuityVerdict {
                    kind: SemiKind::Lsc,
                    holds: false,
                    witness: Some(LimitWitness {
                        x,
                        limit: side,
                        value,
                    }),
                };
            }
        }
    }
    SemicontinuityVerdict {
        kind: SemiKind::Lsc,
        holds: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::half;

    fn map(text: &str) -> SetValuedMap {
        SetValuedMap::parse("m", text).unwrap()
    }

    #[test]
    fn jump_to_full_interval_is_not_usc() {
        let f = map("point 0 -> {0}\nrect 0 1 oc -> [0,1]");
        let v = usc_check(&f);
        assert!(!v.holds);
        let w = v.witness.as_ref().unwrap();
        assert_eq!(w.x, zero());
        assert_eq!(w.limit, Some(ClosedSet::full()));
        assert!(v.recheck(&f));
    }

    #[test]
    fn fan_is_usc_not_lsc() {
        let f = map("segment 0 1 cc -> 0 1\npoint 0 -> [0,1]");
        assert!(usc_check(&f).holds);
        let v = lsc_check(&f);
        assert!(!v.holds);
        let w = v.witness.as_ref().unwrap();
        assert_eq!(w.x, zero());
        assert_eq!(w.limit.as_ref().unwrap().to_string(), "{0}");
        assert!(v.recheck(&f));
    }

    #[test]
    fn rising_band_is_lsc_not_usc() {
        let g = map("point 0 -> {0}\nband 0 1 oc -> 0 1 1 1");
        assert!(!usc_check(&g).holds);
        assert!(lsc_check(&g).holds);
    }

    #[test]
    fn continuous_maps_pass_both() {
        let t = map("segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0");
        assert!(usc_check(&t).holds);
        assert!(lsc_check(&t).holds);
        let (l, r) = one_sided_limits(&t, &half());
        assert_eq!(l, r);
    }
}
