//! Runs a text run description and prints the report.

use orbitkit::cli::{parse_config, run};

const RUN: &str = "\
# the slide map, with an assertion that fails
map builtin slide
cmd analyze
param eps 1/8
assert transitive
";

fn main() {
    let cfg = parse_config(RUN).unwrap();
    let out = run(&cfg).unwrap();
    println!("{}", out.file("report.json").unwrap());
    println!("exit code {}; failed: {:?}", out.exit_code, out.failed_assertions);
}
