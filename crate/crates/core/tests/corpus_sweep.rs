use orbitkit::corpus::{builtin_default, builtin_names};

#[test]
fn every_expectation_passes() {
    let mut failures = Vec::new();
    for name in builtin_names() {
        let b = builtin_default(name).unwrap();
        for (e, o) in b.run_all() {
            if !o.passed {
                failures.push(format!("{}: {} (observed {})", b.name, e.anchor, o.observed));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
