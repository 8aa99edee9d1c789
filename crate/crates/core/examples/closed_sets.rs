//! Exact closed subsets of [0,1] and the Hausdorff distance.

use orbitkit::space::{hausdorff, maxdist, rat, ClosedSet};

fn main() {
    let a: ClosedSet = "{1/2} | [0,1/4]".parse().unwrap();
    let b = ClosedSet::interval(rat(1, 8), rat(3, 4));
    println!("A = {a}");
    println!("B = {b}");
    println!("A u B = {}", a.union(&b));
    match a.intersection(&b) {
        Some(i) => println!("A n B = {i}"),
        None => println!("A n B is empty"),
    }
    println!("excess of A over B = {}", a.directed_excess(&b));
    println!("H(A, B) = {}", hausdorff(&a, &b));
    println!("maxdist(A, B) = {}", maxdist(&a, &b));
    println!("{}", serde_json::to_string(&a).unwrap());
}
