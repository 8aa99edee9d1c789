use num::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitkit::corpus::{builtin, Params, System};
use orbitkit::space::{hausdorff, maxdist, one, rat, ClosedSet, Scalar};

fn tent_point(x: &Scalar) -> Scalar {
    if *x <= rat(1, 2) {
        x * rat(2, 1)
    } else {
        (one() - x) * rat(2, 1)
    }
}

fn tent_iterate(x: &Scalar, m: usize) -> Scalar {
    (0..m).fold(x.clone(), |y, _| tent_point(&y))
}

#[test]
fn singleton_valued_tent_matches_pointwise_dynamics() {
    let f = match builtin("tent", &Params::new()).unwrap().system {
        System::Map(f) => f,
        System::Finite(_) => unreachable!(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut point = || {
        let d = rng.gen_range(1..=997);
        rat(rng.gen_range(0..=d), d)
    };
    let mut rng_m = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let (x, y) = (point(), point());
        let m = rng_m.gen_range(0..=24);
        let (tx, ty) = (tent_iterate(&x, m), tent_iterate(&y, m));
        let (fx, fy) = (f.iterate(&x, m).unwrap(), f.iterate(&y, m).unwrap());
        assert_eq!(fx, ClosedSet::point(tx.clone()), "x = {x}, m = {m}");
        assert_eq!(fy, ClosedSet::point(ty.clone()), "y = {y}, m = {m}");
        let d = (tx - ty).abs();
        assert_eq!(hausdorff(&fx, &fy), d);
        assert_eq!(maxdist(&fx, &fy), d);
        assert_eq!(fy.directed_excess(&fx), d);
    }
}
