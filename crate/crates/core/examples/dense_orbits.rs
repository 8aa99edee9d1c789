//! Weak dense orbits on [0,1] and dense orbits of a finite system.

use orbitkit::analysis::{dense_orbit_build, dense_orbit_build_finite, finite_oracle, weak_dense_probe};
use orbitkit::corpus::{builtin_ref, System};
use orbitkit::setmap::FiniteSystem;
use orbitkit::space::rat;

fn main() {
    let System::Map(tent) = builtin_ref("tent").unwrap().system else { unreachable!() };
    let eps = rat(1, 8);
    let p = rat(1, 131);
    let (v, _) = weak_dense_probe(&tent, &p, &eps, 40).unwrap();
    println!("tent, p = {p}: weak dense {}", v.status.as_str());
    println!("orbit visiting every cell: {}", dense_orbit_build(&tent, &p, &eps, 40).unwrap());

    let s = FiniteSystem::from_edges(&["a", "b", "c"], &[("a", &["b"]), ("b", &["c", "a"]), ("c", &["a"])]).unwrap();
    let r = finite_oracle(&s).unwrap();
    println!("{s}transitive {}, dense minimal {}", r.transitive, r.dense_minimal);
    let walk: Vec<&str> = dense_orbit_build_finite(&s, 0, 16).unwrap().iter().map(|&i| s.labels()[i].as_str()).collect();
    println!("walk from a: {}", walk.join(" "));
}
