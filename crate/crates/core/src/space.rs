//! Exact closed subsets of `[0,1]` and the metrics used on them.
//!
//! A [`ClosedSet`] is a finite union of closed rational intervals (points are
//! zero-length intervals). The representation is canonical: components are
//! sorted, pairwise disjoint and separated by a positive gap, so two sets are
//! equal exactly when their component lists are equal.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational number; every coordinate in the crate is one of these.
pub type Scalar = BigRational;

/// Sets with more components than this are coarsened onto a grid.
pub const COMPONENT_BUDGET: usize = 4096;

/// Number of grid cells used when a set is coarsened.
pub const COARSEN_CELLS: i64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("no parts supplied")]
    EmptyInput,
    #[error("endpoint {0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("prefix of length {len} is shorter than {needed}")]
    LengthMismatch { len: usize, needed: usize },
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// `n/d` as an exact scalar.
pub fn rat(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn half() -> Scalar {
    rat(1, 2)
}

pub fn in_unit(x: &Scalar) -> bool {
    !x.is_negative() && *x <= Scalar::one()
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders `p/q`, or `p` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125` (converted exactly).
pub fn parse_scalar(text: &str) -> Result<Scalar, SpaceError> {
    let s = text.trim();
    let bad = || SpaceError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !digits.chars().all(|c| c.is_ascii_digit())
            || frac.is_empty()
            || !frac.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let whole_part: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num::pow(BigInt::from(10), frac.len());
        let mut value = BigRational::new(whole_part * &scale + frac_part, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Serde adapter writing a scalar as `{"exact": "p/q", "decimal": f64}`.
pub mod exact {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        exact: String,
        #[serde(default)]
        decimal: Option<f64>,
    }

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            exact: format_scalar(x),
            decimal: Some(to_f64(x)),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let r = Repr::deserialize(d)?;
        parse_scalar(&r.exact).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Scalar>` using [`exact`] per element.
pub mod exact_seq {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Item(#[serde(with = "super::exact")] Scalar);

    pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        let items: Vec<Item> = xs.iter().cloned().map(Item).collect();
        items.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        let items = Vec::<Item>::deserialize(d)?;
        Ok(items.into_iter().map(|i| i.0).collect())
    }
}

/// Serde adapter for `Option<Scalar>`.
pub mod exact_opt {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Item(#[serde(with = "super::exact")] Scalar);

    pub fn serialize<S: Serializer>(x: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
        x.clone().map(Item).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Scalar>, D::Error> {
        Ok(Option::<Item>::deserialize(d)?.map(|i| i.0))
    }
}

/// Closed interval `[lo, hi]`; `lo == hi` is a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Interval {
    /// Orders the endpoints if they arrive reversed.
    pub fn new(a: Scalar, b: Scalar) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: Scalar) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn midpoint(&self) -> Scalar {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn length(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", format_scalar(&self.lo))
        } else {
            write!(f, "[{},{}]", format_scalar(&self.lo), format_scalar(&self.hi))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
}

/// Nonempty compact subset of `[0,1]` with finitely many components.
#[derive(Debug, Clone)]
pub struct ClosedSet {
    parts: Vec<Interval>,
    outer: bool,
}

impl PartialEq for ClosedSet {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Eq for ClosedSet {}

impl std::hash::Hash for ClosedSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.parts.hash(state);
    }
}

impl ClosedSet {
    pub fn point(x: Scalar) -> Self {
        assert!(in_unit(&x), "point outside [0,1]");
        ClosedSet {
            parts: vec![Interval::point(x)],
            outer: false,
        }
    }

    pub fn interval(lo: Scalar, hi: Scalar) -> Self {
        let iv = Interval::new(lo, hi);
        assert!(in_unit(&iv.lo) && in_unit(&iv.hi), "interval outside [0,1]");
        ClosedSet {
            parts: vec![iv],
            outer: false,
        }
    }

    /// The whole phase space `[0,1]`.
    pub fn full() -> Self {
        ClosedSet::interval(zero(), one())
    }

    pub fn points<I: IntoIterator<Item = Scalar>>(xs: I) -> Result<Self, SpaceError> {
        canonicalize(xs.into_iter().map(Interval::point).collect())
    }

    /// Merges sorted-or-unsorted parts already known to lie in `[0,1]`.
    pub(crate) fn normalize(mut parts: Vec<Interval>) -> Option<Self> {
        if parts.is_empty() {
            return None;
        }
        parts.sort();
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match merged.last_mut() {
                Some(last) if p.lo <= last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => merged.push(p),
            }
        }
        let mut set = ClosedSet {
            parts: merged,
            outer: false,
        };
        if set.parts.len() > COMPONENT_BUDGET {
            set = set.coarsen(COARSEN_CELLS);
        }
        Some(set)
    }

    pub fn components(&self) -> &[Interval] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Always false; present for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// True if coarsening replaced the exact set by a superset somewhere upstream.
    pub fn is_outer(&self) -> bool {
        self.outer
    }

    pub fn with_outer(mut self, outer: bool) -> Self {
        self.outer = self.outer || outer;
        self
    }

    pub fn min(&self) -> &Scalar {
        &self.parts[0].lo
    }

    pub fn max(&self) -> &Scalar {
        &self.parts[self.parts.len() - 1].hi
    }

    pub fn diameter(&self) -> Scalar {
        self.max() - self.min()
    }

    pub fn is_interval(&self) -> bool {
        self.parts.len() == 1
    }

    pub fn is_singleton(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].is_point()
    }

    /// True if every component is a point.
    pub fn is_finite(&self) -> bool {
        self.parts.iter().all(Interval::is_point)
    }

    pub fn is_full(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].lo.is_zero() && self.parts[0].hi.is_one()
    }

    /// Point components, in increasing order. Only meaningful when [`is_finite`](Self::is_finite).
    pub fn point_values(&self) -> Vec<Scalar> {
        self.parts
            .iter()
            .filter(|p| p.is_point())
            .map(|p| p.lo.clone())
            .collect()
    }

    fn locate(&self, x: &Scalar) -> usize {
        // first component whose upper end is >= x
        self.parts.partition_point(|p| p.hi < *x)
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let i = self.locate(x);
        i < self.parts.len() && self.parts[i].lo <= *x
    }

    /// Distance from `x` to the nearest point of the set.
    pub fn dist_point(&self, x: &Scalar) -> Scalar {
        let i = self.locate(x);
        let mut best: Option<Scalar> = None;
        if i < self.parts.len() {
            let p = &self.parts[i];
            if p.lo <= *x {
                return zero();
            }
            best = Some(&p.lo - x);
        }
        if i > 0 {
            let d = x - &self.parts[i - 1].hi;
            best = Some(match best {
                Some(b) if b < d => b,
                _ => d,
            });
        }
        best.expect("closed sets are nonempty")
    }

    pub fn union(&self, other: &ClosedSet) -> ClosedSet {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        ClosedSet::normalize(parts)
            .expect("nonempty")
            .with_outer(self.outer || other.outer)
    }

    /// `None` when the sets are disjoint.
    pub fn intersection(&self, other: &ClosedSet) -> Option<ClosedSet> {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.parts.len() && j < other.parts.len() {
            if let Some(iv) = self.parts[i].intersect(&other.parts[j]) {
                out.push(iv);
            }
            if self.parts[i].hi < other.parts[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        ClosedSet::normalize(out).map(|s| s.with_outer(self.outer || other.outer))
    }

    pub fn intersects(&self, other: &ClosedSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            if self.parts[i].intersect(&other.parts[j]).is_some() {
                return true;
            }
            if self.parts[i].hi < other.parts[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }

    pub fn intersect_interval(&self, iv: &Interval) -> Option<ClosedSet> {
        let parts: Vec<Interval> = self.parts.iter().filter_map(|p| p.intersect(iv)).collect();
        ClosedSet::normalize(parts).map(|s| s.with_outer(self.outer))
    }

    /// True if the set meets the open interval `(lo, hi)`.
    pub fn meets_open(&self, lo: &Scalar, hi: &Scalar) -> bool {
        self.parts.iter().any(|p| {
            let a = (&p.lo).max(lo);
            let b = (&p.hi).min(hi);
            if p.is_point() {
                lo < &p.lo && &p.lo < hi
            } else {
                a < b
            }
        })
    }

    pub fn is_subset_of(&self, other: &ClosedSet) -> bool {
        self.parts.iter().all(|p| {
            let i = other.locate(&p.lo);
            i < other.parts.len() && other.parts[i].lo <= p.lo && p.hi <= other.parts[i].hi
        })
    }

    /// Sup over `a` in `self` of the distance from `a` to `other`.
    pub fn directed_excess(&self, other: &ClosedSet) -> Scalar {
        let mut best = zero();
        let mut consider = |x: &Scalar| {
            let d = other.dist_point(x);
            if d > best {
                best = d;
            }
        };
        for p in &self.parts {
            consider(&p.lo);
            consider(&p.hi);
        }
        // interior maxima of the distance function sit at gap midpoints of `other`
        for w in other.parts.windows(2) {
            let mid = (&w[0].hi + &w[1].lo) / int(2);
            if self.contains(&mid) {
                consider(&mid);
            }
        }
        best
    }

    /// Union of all closed grid cells `[i/m, (i+1)/m]` meeting the set.
    pub fn coarsen(&self, cells: i64) -> ClosedSet {
        let m = int(cells);
        let parts: Vec<Interval> = self
            .parts
            .iter()
            .map(|p| {
                let lo = (&p.lo * &m).floor() / &m;
                let hi = (&p.hi * &m).ceil() / &m;
                Interval { lo, hi }
            })
            .collect();
        let mut merged = ClosedSet::normalize_unbudgeted(parts);
        merged.outer = true;
        merged
    }

    fn normalize_unbudgeted(mut parts: Vec<Interval>) -> ClosedSet {
        parts.sort();
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match merged.last_mut() {
                Some(last) if p.lo <= last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => merged.push(p),
            }
        }
        ClosedSet {
            parts: merged,
            outer: false,
        }
    }
}

/// Builds the canonical set equal to the union of `parts`.
pub fn canonicalize(parts: Vec<Interval>) -> Result<ClosedSet, SpaceError> {
    if parts.is_empty() {
        return Err(SpaceError::EmptyInput);
    }
    for p in &parts {
        for e in [&p.lo, &p.hi] {
            if !in_unit(e) {
                return Err(SpaceError::OutOfRange(format_scalar(e)));
            }
        }
    }
    Ok(ClosedSet::normalize(parts).expect("nonempty"))
}

/// Union or intersection; `None` signals an empty intersection.
pub fn combine(op: SetOp, a: &ClosedSet, b: &ClosedSet) -> Option<ClosedSet> {
    match op {
        SetOp::Union => Some(a.union(b)),
        SetOp::Intersection => a.intersection(b),
    }
}

pub fn hausdorff(a: &ClosedSet, b: &ClosedSet) -> Scalar {
    let ab = a.directed_excess(b);
    let ba = b.directed_excess(a);
    if ab >= ba {
        ab
    } else {
        ba
    }
}

/// Largest distance between a point of `a` and a point of `b`.
pub fn maxdist(a: &ClosedSet, b: &ClosedSet) -> Scalar {
    let x = (b.max() - a.min()).abs();
    let y = (a.max() - b.min()).abs();
    if x >= y {
        x
    } else {
        y
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for ClosedSet {
    type Err = SpaceError;

    /// Grammar: `set := term ("|" term)*`, `term := "[" q "," q "]" | "{" q "}"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        for term in s.split('|') {
            let t = term.trim();
            let bad = || SpaceError::Parse(t.to_string());
            if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let (a, b) = inner.split_once(',').ok_or_else(bad)?;
                let a = parse_scalar(a)?;
                let b = parse_scalar(b)?;
                if a > b {
                    return Err(bad());
                }
                parts.push(Interval { lo: a, hi: b });
            } else if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                parts.push(Interval::point(parse_scalar(inner)?));
            } else {
                return Err(bad());
            }
        }
        canonicalize(parts)
    }
}

impl Serialize for ClosedSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let decimal: Vec<[f64; 2]> = self
            .parts
            .iter()
            .map(|p| [to_f64(&p.lo), to_f64(&p.hi)])
            .collect();
        let mut st = s.serialize_struct("ClosedSet", 3)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("decimal", &decimal)?;
        st.serialize_field("outer", &self.outer)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ClosedSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            exact: String,
            #[serde(default)]
            outer: bool,
        }
        let r = Repr::deserialize(d)?;
        let set: ClosedSet = r.exact.parse().map_err(serde::de::Error::custom)?;
        Ok(set.with_outer(r.outer))
    }
}

/// Uniform grid of closed cells `[i/m, (i+1)/m]`, `i = 0..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    m: u32,
}

impl Grid {
    pub fn new(cells: u32) -> Option<Self> {
        (cells >= 2).then_some(Grid { m: cells })
    }

    /// Grid of resolution `eps`, which must be `1/m` for an integer `m >= 2`.
    pub fn from_eps(eps: &Scalar) -> Option<Self> {
        if !eps.is_positive() || !eps.numer().is_one() {
            return None;
        }
        let m = eps.denom().to_u32()?;
        Grid::new(m)
    }

    pub fn cells(&self) -> usize {
        self.m as usize
    }

    pub fn eps(&self) -> Scalar {
        rat(1, self.m as i64)
    }

    pub fn lo(&self, i: usize) -> Scalar {
        rat(i as i64, self.m as i64)
    }

    pub fn hi(&self, i: usize) -> Scalar {
        rat(i as i64 + 1, self.m as i64)
    }

    pub fn cell(&self, i: usize) -> Interval {
        Interval {
            lo: self.lo(i),
            hi: self.hi(i),
        }
    }

    pub fn cell_set(&self, i: usize) -> ClosedSet {
        ClosedSet::interval(self.lo(i), self.hi(i))
    }

    pub fn midpoint(&self, i: usize) -> Scalar {
        rat(2 * i as i64 + 1, 2 * self.m as i64)
    }

    /// Indices of closed cells meeting `set`, ascending.
    pub fn cells_meeting(&self, set: &ClosedSet) -> Vec<usize> {
        let m = int(self.m as i64);
        let last = self.m as i64 - 1;
        let mut out: Vec<usize> = Vec::new();
        for c in set.components() {
            let first = ((&c.lo * &m).ceil().to_integer().to_i64().unwrap_or(0) - 1).clamp(0, last);
            let stop = (&c.hi * &m).floor().to_integer().to_i64().unwrap_or(last).clamp(0, last);
            for i in first..=stop {
                if out.last().is_none_or(|&l| l < i as usize) {
                    out.push(i as usize);
                }
            }
        }
        out
    }

    /// Closed cells containing `x`.
    pub fn cells_of(&self, x: &Scalar) -> Vec<usize> {
        self.cells_meeting(&ClosedSet::point(x.clone()))
    }

    /// Indices of open cells `(i/m, (i+1)/m)` meeting `set`.
    pub fn open_cells_meeting(&self, set: &ClosedSet) -> Vec<usize> {
        self.cells_meeting(set)
            .into_iter()
            .filter(|&i| set.meets_open(&self.lo(i), &self.hi(i)))
            .collect()
    }
}

/// Finite truncation `(x_1, ..., x_n)` of a sequence in `[0,1]^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeqPrefix(#[serde(with = "exact_seq")] Vec<Scalar>);

impl SeqPrefix {
    pub fn new(entries: Vec<Scalar>) -> Result<Self, SpaceError> {
        if entries.is_empty() {
            return Err(SpaceError::EmptyInput);
        }
        if let Some(bad) = entries.iter().find(|x| !in_unit(x)) {
            return Err(SpaceError::OutOfRange(format_scalar(bad)));
        }
        Ok(SeqPrefix(entries))
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Scalar> {
        self.0
    }
}

impl fmt::Display for SeqPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_scalar(x))?;
        }
        f.write_str(")")
    }
}

/// Truncated product metric `sum_{i<=n} |u_i - v_i| / 2^i` and the bound `2^-n`
/// on whatever the remaining coordinates can add (distances are at most 1).
pub fn rho_prefix(u: &SeqPrefix, v: &SeqPrefix, n: usize) -> Result<(Scalar, Scalar), SpaceError> {
    for p in [u, v] {
        if p.len() < n {
            return Err(SpaceError::LengthMismatch {
                len: p.len(),
                needed: n,
            });
        }
    }
    let mut value = zero();
    let mut weight = one();
    for i in 0..n {
        weight /= int(2);
        value += (&u.0[i] - &v.0[i]).abs() * &weight;
    }
    Ok((value, weight))
}

/// Compares by value; convenience for sorting scalars by reference.
pub fn cmp_scalar(a: &Scalar, b: &Scalar) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> ClosedSet {
        s.parse().unwrap()
    }

    #[test]
    fn touching_intervals_merge() {
        let s = canonicalize(vec![
            Interval::new(zero(), half()),
            Interval::new(half(), one()),
        ])
        .unwrap();
        assert_eq!(s, ClosedSet::full());
    }

    #[test]
    fn point_absorbed_by_interval() {
        let s = canonicalize(vec![
            Interval::point(rat(3, 10)),
            Interval::new(rat(1, 5), rat(2, 5)),
        ])
        .unwrap();
        assert_eq!(s, ClosedSet::interval(rat(1, 5), rat(2, 5)));
    }

    #[test]
    fn empty_and_out_of_range_rejected() {
        assert_eq!(canonicalize(vec![]), Err(SpaceError::EmptyInput));
        assert!(matches!(
            canonicalize(vec![Interval::new(zero(), rat(3, 2))]),
            Err(SpaceError::OutOfRange(_))
        ));
    }

    #[test]
    fn combine_examples() {
        let i = combine(SetOp::Intersection, &set("[0,1/2]"), &set("[1/4,1]")).unwrap();
        assert_eq!(i, set("[1/4,1/2]"));
        let u = combine(SetOp::Union, &set("{0}"), &set("{1}")).unwrap();
        assert_eq!(u.to_string(), "{0}|{1}");
        assert!(combine(SetOp::Intersection, &set("{3/10}"), &set("[2/5,1]")).is_none());
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff(&ClosedSet::full(), &set("{0}")), one());
        let a = set("[0,1/4]|{1/2}|[3/4,1]");
        assert_eq!(hausdorff(&a, &a), zero());
        // grid oracle: max distance from [0,1] to 1/2 over 10^4 samples
        let grid_max = (0..=10_000)
            .map(|i| (rat(i, 10_000) - half()).abs())
            .max()
            .unwrap();
        assert_eq!(hausdorff(&ClosedSet::full(), &set("{1/2}")), grid_max);
    }

    #[test]
    fn excess_uses_gap_midpoints() {
        // distance from [0,1] to {0,1} peaks at 1/2
        assert_eq!(set("[0,1]").directed_excess(&set("{0}|{1}")), half());
        assert_eq!(set("{0}|{1}").directed_excess(&set("[0,1]")), zero());
    }

    #[test]
    fn maxdist_examples() {
        assert_eq!(maxdist(&set("[0,1/2]"), &set("[1/2,1]")), one());
        assert_eq!(maxdist(&set("{1/5}"), &set("{7/10}")), half());
    }

    #[test]
    fn rho_examples() {
        let u = SeqPrefix::new(vec![zero(), zero(), zero()]).unwrap();
        let v = SeqPrefix::new(vec![one(), one(), one()]).unwrap();
        assert_eq!(rho_prefix(&u, &v, 3).unwrap(), (rat(7, 8), rat(1, 8)));
        assert_eq!(rho_prefix(&u, &u, 3).unwrap().0, zero());
        assert!(matches!(
            rho_prefix(&u, &v, 4),
            Err(SpaceError::LengthMismatch { len: 3, needed: 4 })
        ));
    }

    #[test]
    fn literal_round_trip_and_decimals() {
        let s = set("[0, 0.25] | {1/2} | [3/4,1]");
        assert_eq!(s.to_string(), "[0,1/4]|{1/2}|[3/4,1]");
        assert_eq!(parse_scalar("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_scalar("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!("[1/2,0]".parse::<ClosedSet>().is_err());
        assert!("(0,1)".parse::<ClosedSet>().is_err());
    }

    #[test]
    fn coarsening_is_outer_superset() {
        let pts: Vec<Scalar> = (0..5000).map(|i| rat(2 * i + 1, 10_001)).collect();
        let s = ClosedSet::points(pts.clone()).unwrap();
        assert!(s.is_outer());
        assert!(s.len() <= COMPONENT_BUDGET);
        assert!(pts.iter().all(|p| s.contains(p)));
    }

    #[test]
    fn serde_round_trip() {
        let s = set("[0,1/3]|{2/3}");
        let json = serde_json::to_string(&s).unwrap();
        let back: ClosedSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn open_interval_meeting() {
        let s = set("{1/4}|[1/2,3/4]");
        assert!(!s.meets_open(&zero(), &rat(1, 4)));
        assert!(s.meets_open(&zero(), &rat(1, 2)));
        assert!(!s.meets_open(&rat(3, 4), &one()));
        assert!(s.meets_open(&rat(5, 8), &one()));
    }

    #[test]
    fn grid_cells() {
        let g = Grid::from_eps(&rat(1, 4)).unwrap();
        assert_eq!(g.cells_meeting(&set("{1/4}")), vec![0, 1]);
        assert_eq!(g.cells_meeting(&set("{0}|{1}")), vec![0, 3]);
        assert_eq!(g.cells_meeting(&set("[1/3,2/3]")), vec![1, 2]);
        assert_eq!(g.open_cells_meeting(&set("{1/4}|{3/8}")), vec![1]);
        assert!(Grid::from_eps(&rat(2, 5)).is_none());
        assert!(Grid::from_eps(&rat(1, 1)).is_none());
    }
}
