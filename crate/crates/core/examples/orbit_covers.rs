//! Grid cover of the orbit paths and the branching arms of a fan.

use orbitkit::corpus::{builtin_ref, System};
use orbitkit::orbit::{arm_families, OrbitCover};
use orbitkit::space::{rat, zero};

fn main() {
    let System::Map(tent) = builtin_ref("tent").unwrap().system else { unreachable!() };
    let cover = OrbitCover::build(&tent, &rat(1, 5), 4, &rat(1, 4)).unwrap();
    println!("{} cell paths of length {}", cover.paths().len(), cover.depth());
    for k in 1..=cover.depth() {
        println!("level {k}: cells {:?}", cover.project(k).unwrap());
    }

    let System::Map(fan) = builtin_ref("fan01").unwrap().system else { unreachable!() };
    for arm in arm_families(&fan, &zero(), 4).unwrap() {
        let address: Vec<String> = arm.address.iter().map(|x| x.to_string()).collect();
        println!("arm {:?}: tail {}, diameter {}", address, arm.tail, arm.diameter);
    }
}
