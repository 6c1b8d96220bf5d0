use std::collections::BTreeMap;

use coadjoint::verify::{check_ids, run_suite};

#[test]
fn every_invariant_passes_for_several_seeds() {
    for seed in [0u64, 1, 20240917] {
        let out = run_suite(seed, &BTreeMap::new());
        assert_eq!(out.len(), check_ids().len());
        for o in &out {
            println!("seed {seed} {} {} measured={:e} tol={:e} {}", o.id, o.passed, o.measured, o.tolerance, o.detail);
        }
        let failed: Vec<_> = out.iter().filter(|o| !o.passed).map(|o| o.id).collect();
        assert!(failed.is_empty(), "seed {seed}: {failed:?}");
    }
}

#[test]
fn suite_is_deterministic() {
    let a = run_suite(7, &BTreeMap::new());
    let b = run_suite(7, &BTreeMap::new());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.to_json(), y.to_json());
    }
}

#[test]
fn tolerance_override_applies() {
    let mut o = BTreeMap::new();
    o.insert("matgroup.exp_log_roundtrip".to_string(), -1.0);
    let out = run_suite(3, &o);
    let r = out.iter().find(|c| c.id == "matgroup.exp_log_roundtrip").unwrap();
    assert!(!r.passed);
    assert_eq!(r.tolerance, -1.0);
}
