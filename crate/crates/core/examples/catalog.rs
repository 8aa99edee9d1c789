//! The builtin catalog and its recorded expectations.

use orbitkit::corpus::{builtin, list_builtins, Params};

fn main() {
    for info in list_builtins() {
        println!("{:<16} {:<6} {}", info.name, info.kind, info.summary);
    }
    let mut params = Params::new();
    params.insert("r".into(), "1/3".into());
    let pin = builtin("pin", &params).unwrap();
    for (e, outcome) in pin.run_all() {
        println!("{}: {}", serde_json::to_string(&e.check).unwrap(), if outcome.passed { "ok" } else { "FAILED" });
    }
}
