use serde::{Deserialize, Serialize};
use std::fmt;

/// One concrete problem found by a check, with its witness spelled out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    /// Short stable name of the violated condition, e.g. `"triangle"`,
    /// `"r-disjoint"`, `"coverage"`.
    pub check: String,
    /// Human-readable witness: which points, sets, or elements break it.
    pub detail: String,
}

impl Finding {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Finding {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.check, self.detail)
    }
}

/// Outcome of a validation pass.
///
/// `violations` fail the check. `warnings` flag boundary behavior that
/// the check tolerates by convention (and says so). `caveats` record
/// scope limits: facts the window is too small to decide.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Finding>,
    pub warnings: Vec<Finding>,
    pub caveats: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&mut self, check: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Finding::new(check, detail));
    }

    pub fn warning(&mut self, check: impl Into<String>, detail: impl Into<String>) {
        self.warnings.push(Finding::new(check, detail));
    }

    pub fn caveat(&mut self, note: impl Into<String>) {
        self.caveats.push(note.into());
    }

    /// Fold another report into this one, prefixing its findings.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for v in other.violations {
            self.violations
                .push(Finding::new(v.check, format!("{prefix}: {}", v.detail)));
        }
        for w in other.warnings {
            self.warnings
                .push(Finding::new(w.check, format!("{prefix}: {}", w.detail)));
        }
        for c in other.caveats {
            self.caveats.push(format!("{prefix}: {c}"));
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "pass")?;
        } else {
            writeln!(f, "fail: {} violation(s)", self.violations.len())?;
        }
        for v in &self.violations {
            writeln!(f, "  violation {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning {w}")?;
        }
        for c in &self.caveats {
            writeln!(f, "  caveat: {c}")?;
        }
        Ok(())
    }
}

/// Three-valued outcome for checks that can be undecidable at a finite
/// window. `Uncertified` is never collapsed into `Pass`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { witness: Finding },
    Uncertified { reason: String },
}

impl Verdict {
    pub fn fail(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict::Fail {
            witness: Finding::new(check, detail),
        }
    }

    pub fn uncertified(reason: impl Into<String>) -> Self {
        Verdict::Uncertified {
            reason: reason.into(),
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_uncertified(&self) -> bool {
        matches!(self, Verdict::Uncertified { .. })
    }

    /// Combine: any `Fail` dominates, else any `Uncertified`, else `Pass`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (v @ Verdict::Fail { .. }, _) => v,
            (_, v @ Verdict::Fail { .. }) => v,
            (v @ Verdict::Uncertified { .. }, _) => v,
            (_, v) => v,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail { witness } => write!(f, "fail: {witness}"),
            Verdict::Uncertified { reason } => write!(f, "uncertified: {reason}"),
        }
    }
}
