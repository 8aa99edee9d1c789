//! Inverse-limit prefixes from several bonding maps and the matching orbit tree.

use orbitkit::corpus::pl_builtin;
use orbitkit::orbit::{inverse_limit_prefixes, OrbitTree};
use orbitkit::setmap::preimage_union_map;
use orbitkit::space::rat;

fn main() {
    let fs = vec![pl_builtin("tent").unwrap(), pl_builtin("identity").unwrap()];
    let f = preimage_union_map(&fs).unwrap();
    let z = rat(1, 3);
    let prefixes = inverse_limit_prefixes(&fs, &z, 3).unwrap();
    for p in &prefixes {
        let p: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        println!("({})", p.join(", "));
    }
    let t = OrbitTree::build(&f, &z, 3).unwrap();
    println!("{} prefixes, {} tree branches", prefixes.len(), t.branches().len());
}
