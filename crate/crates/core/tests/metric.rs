use num::Signed;
use proptest::prelude::*;

use orbitkit::space::{canonicalize, hausdorff, maxdist, rat, zero, ClosedSet, Interval, Scalar};

const DEN: i64 = 12;

fn lattice_set() -> impl Strategy<Value = ClosedSet> {
    prop::collection::vec((0..=DEN, 0..=DEN, any::<bool>()), 1..=4).prop_map(|parts| {
        let parts = parts
            .into_iter()
            .map(|(a, b, point)| {
                let a = rat(a, DEN);
                let b = if point { a.clone() } else { rat(b, DEN) };
                Interval::new(a, b)
            })
            .collect();
        canonicalize(parts).unwrap()
    })
}

fn interval_dist(x: &Scalar, iv: &Interval) -> Scalar {
    if x < &iv.lo {
        &iv.lo - x
    } else if x > &iv.hi {
        x - &iv.hi
    } else {
        zero()
    }
}

fn dist_oracle(x: &Scalar, b: &ClosedSet) -> Scalar {
    b.components().iter().map(|iv| interval_dist(x, iv)).min().unwrap()
}

// Endpoints sit on the 1/12 lattice, so the distance to `b` is linear between
// consecutive points of the 1/24 lattice and the supremum over `a` is attained there.
fn excess_oracle(a: &ClosedSet, b: &ClosedSet) -> Scalar {
    (0..=2 * DEN)
        .map(|k| rat(k, 2 * DEN))
        .filter(|x| a.contains(x))
        .map(|x| dist_oracle(&x, b))
        .max()
        .unwrap()
}

#[test]
fn hausdorff_of_full_and_endpoint_is_one() {
    assert_eq!(hausdorff(&ClosedSet::full(), &ClosedSet::point(zero())), rat(1, 1));
    assert_eq!(hausdorff(&ClosedSet::full(), &ClosedSet::point(rat(1, 2))), rat(1, 2));
}

proptest! {
    #[test]
    fn directed_excess_matches_lattice_oracle(a in lattice_set(), b in lattice_set()) {
        prop_assert_eq!(a.directed_excess(&b), excess_oracle(&a, &b));
    }

    #[test]
    fn dist_point_matches_oracle(a in lattice_set(), k in 0..=48i64) {
        let x = rat(k, 48);
        prop_assert_eq!(a.dist_point(&x), dist_oracle(&x, &a));
    }

    #[test]
    fn hausdorff_is_a_metric(a in lattice_set(), b in lattice_set(), c in lattice_set()) {
        let ab = hausdorff(&a, &b);
        prop_assert!(ab >= zero());
        prop_assert_eq!(ab == zero(), a == b);
        prop_assert_eq!(&ab, &hausdorff(&b, &a));
        prop_assert!(hausdorff(&a, &c) <= &ab + hausdorff(&b, &c));
    }

    #[test]
    fn separations_are_ordered(a in lattice_set(), b in lattice_set()) {
        let h = hausdorff(&a, &b);
        prop_assert!(b.directed_excess(&a) <= h);
        prop_assert!(h <= maxdist(&a, &b));
    }

    #[test]
    fn maxdist_of_points_is_absolute_difference(x in 0..=DEN, y in 0..=DEN) {
        let (x, y) = (rat(x, DEN), rat(y, DEN));
        let d = maxdist(&ClosedSet::point(x.clone()), &ClosedSet::point(y.clone()));
        prop_assert_eq!(d, (x - y).abs());
    }

    #[test]
    fn union_and_intersection(a in lattice_set(), b in lattice_set()) {
        let u = a.union(&b);
        prop_assert_eq!(&u, &b.union(&a));
        prop_assert!(a.is_subset_of(&u) && b.is_subset_of(&u));
        match a.intersection(&b) {
            Some(i) => {
                prop_assert!(i.is_subset_of(&a) && i.is_subset_of(&b));
                prop_assert!(a.intersects(&b));
            }
            None => prop_assert!(!a.intersects(&b)),
        }
    }

    #[test]
    fn text_form_round_trips(a in lattice_set()) {
        let back: ClosedSet = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }
}
