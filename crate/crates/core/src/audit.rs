//! Process-wide counters for the internal consistency checks (rank–nullity,
//! exactness rank identities). The checks always run; the counters let test
//! suites confirm that they ran and never failed.

use std::sync::atomic::{AtomicU64, Ordering};

static CHECKS: AtomicU64 = AtomicU64::new(0);
static FAILURES: AtomicU64 = AtomicU64::new(0);

/// Records the outcome of one identity check. Panics in debug builds when the
/// identity fails.
pub fn record(ok: bool, what: &str) {
    CHECKS.fetch_add(1, Ordering::Relaxed);
    if !ok {
        FAILURES.fetch_add(1, Ordering::Relaxed);
        debug_assert!(ok, "internal identity violated: {what}");
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditCounts {
    pub checks: u64,
    pub failures: u64,
}

pub fn counts() -> AuditCounts {
    AuditCounts {
        checks: CHECKS.load(Ordering::Relaxed),
        failures: FAILURES.load(Ordering::Relaxed),
    }
}
