//! Orbit tree of a finite-valued map and siblings of a branch.

use orbitkit::corpus::{builtin_ref, System};
use orbitkit::space::rat;
use orbitkit::orbit::OrbitTree;

fn main() {
    let System::Map(f) = builtin_ref("flip").unwrap().system else { unreachable!() };
    let t = OrbitTree::build(&f, &rat(3, 10), 5).unwrap();
    println!("{} nodes, {} leaves", t.node_count(), t.leaf_count());
    for k in 1..=t.depth() {
        println!("level {k}: {}", t.project(k).unwrap());
    }
    let b = &t.branches()[0];
    for eps in [rat(1, 2), rat(1, 8)] {
        println!("sibling of {b} within {eps}: {}", t.sibling_within(b, &eps).unwrap());
    }
}
