//! Building a map from pieces, evaluating it and checking semicontinuity.

use orbitkit::setmap::{lsc_check, usc_check, SetValuedMap};
use orbitkit::space::rat;

fn main() {
    let f = SetValuedMap::parse(
        "tent with a full fibre at 0",
        "point 0 -> [0,1]\nsegment 0 1/2 oc -> 0 1\nsegment 1/2 1 cc -> 1 0",
    )
    .unwrap();
    for x in [rat(0, 1), rat(1, 8), rat(1, 2), rat(3, 4)] {
        println!("F({x}) = {}", f.evaluate(&x).unwrap());
    }
    println!("F([1/4,1/2]) = {}", f.image(&"[1/4,1/2]".parse().unwrap()));
    println!("F^3(1/5) = {}", f.iterate(&rat(1, 5), 3).unwrap());
    let usc = usc_check(&f);
    let lsc = lsc_check(&f);
    println!("usc: {}  lsc: {}", usc.holds, lsc.holds);
    if let Some(w) = &lsc.witness {
        println!("lsc fails at x = {}", w.x);
    }
}
