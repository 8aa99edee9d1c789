//! Sensitivity probes with exact witnesses and refutation certificates.

use orbitkit::corpus::{builtin_ref, System};
use orbitkit::sensitivity::{liyorke_probe, sensitivity_probe, ProbeBudget, SensitivityKind};
use orbitkit::space::rat;

fn main() {
    let System::Map(f) = builtin_ref("tent_aug_f").unwrap().system else { unreachable!() };
    let budget = ProbeBudget::default().with_horizon(32);
    for kind in [SensitivityKind::Strong, SensitivityKind::Sensitive, SensitivityKind::Weak] {
        let v = sensitivity_probe(kind, &f, &rat(2, 5), &budget);
        println!("{kind}: {}", v.status.as_str());
        if let Some(w) = &v.headline {
            println!("  x = {}, y = {}, m = {}, measured {}", w.x, w.y, w.m, w.measured[0]);
        }
        for c in v.certificates.iter().take(1) {
            println!("  {}", serde_json::to_string(c).unwrap());
        }
    }
    let ly = liyorke_probe(&f, &rat(1, 4), &rat(1, 16), (1, 64), &budget);
    println!("liyorke: {}", ly.status.as_str());
    for c in ly.certificates.iter().take(1) {
        println!("  {}", serde_json::to_string(c).unwrap());
    }
}
