//! Lightweight PASS/FAIL reporting for the verification suites.
//!
//! Every `verify` entry point in this crate produces a [`Report`]: an ordered
//! list of named checks, each of which either passed or failed with a short
//! human-readable detail.  The CLI prints one line per check and derives its
//! exit code from [`Report::all_passed`].

use serde::Serialize;
use std::fmt;

/// A single named verification check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    /// Stable, short identifier for the check (e.g. `yang_baxter_sigma`).
    pub name: String,
    /// Whether the check succeeded.
    pub passed: bool,
    /// Short free-form context: the quantity checked, a residual, a count.
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{status} {}", self.name)
        } else {
            write!(f, "{status} {} ({})", self.name, self.detail)
        }
    }
}

/// An ordered collection of [`Check`]s produced by one verification suite.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    /// The checks, in the order they were run.
    pub checks: Vec<Check>,
}

impl Report {
    /// Creates an empty report.
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    /// Records one check outcome.
    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records a check that must hold exactly (no tolerance involved).
    pub fn require(&mut self, name: impl Into<String>, passed: bool) {
        self.push(name, passed, "");
    }

    /// True when every recorded check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Number of failed checks.
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    /// Appends all checks of `other`, prefixing their names with `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let total = self.checks.len();
        let failed = self.failures();
        if failed == 0 {
            write!(f, "all {total} checks passed")
        } else {
            write!(f, "{failed} of {total} checks FAILED")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_tracks_failures_and_formats_lines() {
        let mut r = Report::new();
        r.push("alpha", true, "residual 0");
        r.push("beta", false, "expected 1, got 2");
        assert!(!r.all_passed());
        assert_eq!(r.failures(), 1);
        let text = r.to_string();
        assert!(text.contains("PASS alpha (residual 0)"));
        assert!(text.contains("FAIL beta (expected 1, got 2)"));
        assert!(text.ends_with("1 of 2 checks FAILED"));
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut inner = Report::new();
        inner.require("x", true);
        let mut outer = Report::new();
        outer.absorb("suite", inner);
        assert_eq!(outer.checks[0].name, "suite.x");
    }
}
