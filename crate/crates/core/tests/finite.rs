use proptest::prelude::*;

use orbitkit::analysis::{dense_orbit_build_finite, finite_oracle_with_horizon};
use orbitkit::sensitivity::{finite_sensitivity_probe, ProbeBudget, ProbeStatus, SensitivityKind};
use orbitkit::setmap::{members, FiniteSystem, StateSet};

const HORIZON: usize = 16;

fn system() -> impl Strategy<Value = FiniteSystem> {
    (1usize..=6).prop_flat_map(|n| {
        let full: StateSet = (1 << n) - 1;
        prop::collection::vec(1..=full, n).prop_map(|t| FiniteSystem::from_table(t).unwrap())
    })
}

// b is in F^k(a) for some k >= 1
fn reaches(s: &FiniteSystem, a: usize, b: usize) -> bool {
    (1..=s.len()).any(|k| s.iterate(a, k) >> b & 1 == 1)
}

fn weak_dense(s: &FiniteSystem, p: usize) -> bool {
    let hit = (1..=1 << s.len()).fold(0 as StateSet, |acc, k| acc | s.iterate(p, k));
    hit == s.full()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn oracle_matches_definitions(s in system()) {
        let r = finite_oracle_with_horizon(&s, HORIZON).unwrap();
        let n = s.len();
        let transitive = (0..n).all(|a| (0..n).all(|b| reaches(&s, a, b)));
        prop_assert_eq!(r.transitive, transitive);
        for p in 0..n {
            prop_assert_eq!(r.weak_dense[p], weak_dense(&s, p));
        }
    }

    #[test]
    fn minimal_notions_agree_and_walks_cover(s in system()) {
        let r = finite_oracle_with_horizon(&s, HORIZON).unwrap();
        prop_assert_eq!(r.dense_minimal, r.weak_dense_minimal);
        if r.weak_dense_minimal {
            for p in 0..s.len() {
                let walk = dense_orbit_build_finite(&s, p, 64).unwrap();
                prop_assert_eq!(walk[0], p);
                prop_assert!(walk.windows(2).all(|w| members(s.successors(w[0])).any(|b| b == w[1])));
                let covered = walk.iter().fold(0 as StateSet, |acc, &i| acc | 1 << i);
                prop_assert_eq!(covered, s.full());
            }
        }
    }

    #[test]
    fn recurrent_dense_orbit_implies_transitive_and_weak_dense(s in system()) {
        let r = finite_oracle_with_horizon(&s, HORIZON).unwrap();
        if r.recurrent_dense_orbit.iter().any(|&b| b) {
            prop_assert!(r.transitive);
            prop_assert!(r.weak_dense.iter().any(|&b| b));
        }
        for p in 0..s.len() {
            prop_assert!(!r.recurrent_dense_orbit[p] || r.dense_orbit[p]);
        }
    }

    #[test]
    fn probes_agree_with_oracle(s in system()) {
        let r = finite_oracle_with_horizon(&s, HORIZON).unwrap();
        let budget = ProbeBudget::default().with_horizon(HORIZON);
        let status = |kind| finite_sensitivity_probe(kind, &s, &budget) == ProbeStatus::WitnessedYes;
        prop_assert_eq!(status(SensitivityKind::Strong), r.sensitivity.strong);
        prop_assert_eq!(status(SensitivityKind::Sensitive), r.sensitivity.sensitive);
        prop_assert_eq!(status(SensitivityKind::Weak), r.sensitivity.weak);
        prop_assert!(!status(SensitivityKind::LiYorke) || r.sensitivity.liyorke);
        prop_assert!(!r.sensitivity.strong || r.sensitivity.sensitive);
        prop_assert!(!r.sensitivity.liyorke || r.sensitivity.sensitive);
    }
}
