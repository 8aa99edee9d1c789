use proptest::prelude::*;

use orbitkit::corpus::{builtin_ref, System};
use orbitkit::sensitivity::{liyorke_probe, sensitivity_probe, CandidateRule, ProbeBudget, SensitivityKind};
use orbitkit::setmap::SetValuedMap;
use orbitkit::space::rat;

fn map(name: &str) -> SetValuedMap {
    match builtin_ref(name).unwrap().system {
        System::Map(f) => f,
        System::Finite(_) => panic!("{name} is finite"),
    }
}

const KINDS: [SensitivityKind; 3] = [SensitivityKind::Strong, SensitivityKind::Sensitive, SensitivityKind::Weak];

#[test]
fn witnesses_pass_every_weaker_check() {
    let budget = ProbeBudget::default().with_horizon(24);
    for name in ["tent", "double_tent_h", "tent_aug_f", "tent_aug_g", "pin", "const_full"] {
        let f = map(name);
        for (i, &kind) in KINDS.iter().enumerate() {
            let v = sensitivity_probe(kind, &f, &rat(1, 4), &budget);
            assert!(v.recheck(&f), "{name} {kind}");
            for w in &v.witnesses {
                for &weaker in &KINDS[i..] {
                    assert!(w.satisfies(weaker, &f), "{name}: {kind} witness fails {weaker}");
                }
            }
        }
    }
}

#[test]
fn liyorke_witnesses_are_sensitive() {
    let budget = ProbeBudget::default().with_candidates(CandidateRule::Dense);
    for name in ["tent", "double_tent_h"] {
        let f = map(name);
        let v = liyorke_probe(&f, &rat(1, 4), &rat(1, 16), (1, 64), &budget);
        assert!(!v.witnesses.is_empty(), "{name}");
        for w in &v.witnesses {
            assert!(w.replay(&f));
            assert!(w.satisfies(SensitivityKind::Sensitive, &f), "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forged_witnesses_do_not_replay(bump in 1i64..1000) {
        let f = map("tent");
        let v = sensitivity_probe(SensitivityKind::Sensitive, &f, &rat(1, 4), &ProbeBudget::default().with_horizon(16));
        let mut w = v.headline.unwrap();
        prop_assert!(w.replay(&f));
        w.measured[0] += rat(bump, 1_000_000);
        prop_assert!(!w.replay(&f));
    }
}
