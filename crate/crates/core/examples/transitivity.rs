//! Transition graph on a grid and the transitivity probe.

use orbitkit::analysis::{transition_graph, transitivity_probe};
use orbitkit::corpus::{builtin_ref, System};
use orbitkit::space::rat;

fn main() {
    let eps = rat(1, 8);
    for name in ["tent", "double_tent_f", "slide"] {
        let System::Map(f) = builtin_ref(name).unwrap().system else { unreachable!() };
        let g = transition_graph(&f, &eps).unwrap();
        let v = transitivity_probe(&f, &eps, 40);
        println!("{name}: {} edges, transitive {}", g.edge_count(), v.status.as_str());
    }
    let System::Map(slide) = builtin_ref("slide").unwrap().system else { unreachable!() };
    println!("{}", transition_graph(&slide, &eps).unwrap().to_dot("slide"));
}
