//! Writes the four SVG figures for a builtin into a directory.

use orbitkit::analysis::transition_graph;
use orbitkit::cli::{render_cover, render_graph, render_map, render_tree};
use orbitkit::corpus::{builtin_ref, System};
use orbitkit::orbit::{OrbitCover, OrbitTree};
use orbitkit::space::rat;

fn main() -> std::io::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    std::fs::create_dir_all(&dir)?;
    let System::Map(f) = builtin_ref("flip").unwrap().system else { unreachable!() };
    let z = rat(3, 10);
    let eps = rat(1, 8);
    let figures = [
        ("map.svg", render_map(&f)),
        ("orbit_tree.svg", render_tree(&OrbitTree::build(&f, &z, 4).unwrap())),
        ("orbit_cover.svg", render_cover(&OrbitCover::build(&f, &z, 4, &eps).unwrap())),
        ("transition.svg", render_graph(&transition_graph(&f, &eps).unwrap())),
    ];
    for (name, svg) in figures {
        let path = format!("{dir}/{name}");
        std::fs::write(&path, svg.expect("small figures fit the budget"))?;
        println!("{path}");
    }
    Ok(())
}
