use std::io::Write;

use powergraph::selftest;

#[test]
fn acceptance_criteria() {
    // Written to the process stdout so the lines survive libtest's capture.
    let outcomes = selftest::run_all(|o| {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{o}");
    });
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
