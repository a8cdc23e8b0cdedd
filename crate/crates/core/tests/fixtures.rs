mod oracle;

/// Recomputes the frozen values from scratch with the brute-force oracle.
#[test]
fn oracle_reproduces_frozen_values() {
    assert_eq!(oracle::compute_all(), oracle::frozen());
}

/// Prints fresh fixture JSON; run with `--ignored --nocapture` to refreeze.
#[test]
#[ignore]
fn print_fixtures() {
    println!("{}", serde_json::to_string_pretty(&oracle::compute_all()).unwrap());
}
