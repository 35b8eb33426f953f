//! Acceptance gate: runs every seeded self-check and prints one pass/fail
//! line per criterion.

use qent::orbit::FlowParams;
use qent::selftest::run_all;

#[test]
fn acceptance_criteria() {
    let results = run_all(20240615, &FlowParams::default());
    let mut all_passed = true;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status}  {name}: {detail}", name = r.name, detail = r.detail);
        all_passed &= r.passed;
    }
    assert!(all_passed, "one or more acceptance criteria failed (see lines above)");
}
