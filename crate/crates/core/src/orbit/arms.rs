//! Arm decomposition of orbit sets for maps that fix every point except a
//! finite set of branching points.
//!
//! For such a map an orbit prefix runs through branching points for a while,
//! then leaves them for some `t` and stays at `t` forever. Grouping orbits by
//! that initial run (the address) gives arcs `{(a_1, ..., a_L, t, t, ...)}`
//! whose diameter in the product metric is `diam(T) / 2^L`, `T` being the set
//! of allowed tails.

use serde::Serialize;

use crate::setmap::{Affine, SetValuedMap};
use crate::space::{format_scalar, half, int, one, zero, ClosedSet, Interval, Scalar, SeqPrefix};

use super::OrbitError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArmFamily {
    #[serde(serialize_with = "ser_address")]
    pub address: Vec<Scalar>,
    /// Closure of the set of tail values.
    pub tail: ClosedSet,
    #[serde(with = "crate::space::exact")]
    pub diameter: Scalar,
}

fn ser_address<S: serde::Serializer>(a: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    a.iter().map(format_scalar).collect::<Vec<_>>().serialize(s)
}

impl ArmFamily {
    pub fn len(&self) -> usize {
        self.address.len()
    }

    pub fn is_empty(&self) -> bool {
        self.address.is_empty()
    }
}

/// Points where `F` is not single-valued; errors unless `F(t) = {t}` everywhere else.
pub fn branching_points(f: &SetValuedMap) -> Result<Vec<Scalar>, OrbitError> {
    let diag = Affine::new(one(), zero());
    let bps = f.breakpoints();
    for w in bps.windows(2) {
        let mid = (&w[0] + &w[1]) * half();
        let active_identity = f
            .strips()
            .iter()
            .filter(|s| s.domain.contains(&mid))
            .all(|s| s.is_singleton() && s.lower == diag);
        if !active_identity {
            return Err(OrbitError::NotArmStructured(format_scalar(&mid)));
        }
    }
    let mut out = Vec::new();
    for x in bps {
        let v = f.evaluate(&x)?;
        if !v.is_singleton() {
            out.push(x);
        }
    }
    Ok(out)
}

/// Arm families of the orbit set of `z` whose address has length below `depth`.
pub fn arm_families(f: &SetValuedMap, z: &Scalar, depth: usize) -> Result<Vec<ArmFamily>, OrbitError> {
    let branching = branching_points(f)?;
    let is_branch = |x: &Scalar| branching.binary_search(x).is_ok();
    let mut families = Vec::new();
    if !is_branch(z) {
        return Ok(families);
    }
    let mut frontier: Vec<Vec<Scalar>> = vec![vec![z.clone()]];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for address in frontier {
            if address.len() >= depth {
                continue;
            }
            let last = address.last().expect("nonempty");
            let value = f.evaluate(last)?;
            if let Some(tail) = without_points(&value, &branching) {
                let weight = (0..address.len()).fold(one(), |w, _| w / int(2));
                families.push(ArmFamily {
                    address: address.clone(),
                    diameter: tail.diameter() * weight,
                    tail,
                });
            }
            for b in branching.iter().filter(|b| value.contains(b)) {
                let mut a = address.clone();
                a.push(b.clone());
                next.push(a);
            }
        }
        frontier = next;
    }
    Ok(families)
}

// closure of `set` minus finitely many points
fn without_points(set: &ClosedSet, points: &[Scalar]) -> Option<ClosedSet> {
    let parts: Vec<Interval> = set
        .components()
        .iter()
        .filter(|c| !(c.is_point() && points.binary_search(&c.lo).is_ok()))
        .cloned()
        .collect();
    ClosedSet::normalize(parts)
}

/// `(t0, r, s_1, r, s_2, ..., r, s_k)`: the coordinates of the embedding of
/// the Hilbert cube into the orbit set of the pin map.
pub fn pin_embedding_prefix(t0: &Scalar, r: &Scalar, s: &[Scalar]) -> SeqPrefix {
    let mut out = vec![t0.clone()];
    for x in s {
        out.push(r.clone());
        out.push(x.clone());
    }
    SeqPrefix::new(out).expect("coordinates in [0,1]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::is_orbit_prefix;
    use crate::space::rat;

    fn fan0() -> SetValuedMap {
        SetValuedMap::parse("fan0", "segment 0 1 cc -> 0 1\npoint 0 -> [0,1]").unwrap()
    }

    fn fan01() -> SetValuedMap {
        SetValuedMap::parse("fan01", "segment 0 1 cc -> 0 1\npoint 0 -> [0,1]\npoint 1 -> [0,1]").unwrap()
    }

    #[test]
    fn fan0_has_one_arm_per_length() {
        let arms = arm_families(&fan0(), &zero(), 6).unwrap();
        assert_eq!(arms.len(), 5);
        for (k, a) in arms.iter().enumerate() {
            assert_eq!(a.len(), k + 1);
            assert!(a.address.iter().all(|x| *x == zero()));
            assert_eq!(a.diameter, (0..=k).fold(one(), |w, _| w / int(2)));
        }
    }

    #[test]
    fn fan01_arms_double() {
        let arms = arm_families(&fan01(), &zero(), 5).unwrap();
        for len in 1..5 {
            let level: Vec<_> = arms.iter().filter(|a| a.len() == len).collect();
            assert_eq!(level.len(), 1 << (len - 1));
            assert!(level.iter().all(|a| a.tail == ClosedSet::full()));
        }
    }

    #[test]
    fn non_fixed_maps_are_rejected() {
        let tent = SetValuedMap::parse("t", "segment 0 1/2 cc -> 0 1\nsegment 1/2 1 cc -> 1 0").unwrap();
        assert!(matches!(branching_points(&tent), Err(OrbitError::NotArmStructured(_))));
    }

    #[test]
    fn pin_embedding_is_an_orbit() {
        let pin = SetValuedMap::parse("pin", "segment 0 1 cc -> 1/2 1/2\npoint 1/2 -> [0,1]").unwrap();
        let p = pin_embedding_prefix(&rat(1, 5), &half(), &[rat(1, 3), zero(), one()]);
        assert!(is_orbit_prefix(&pin, &p));
    }
}
