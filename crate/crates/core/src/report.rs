use alloc::string::String;
use alloc::vec::Vec;

/// One labelled relative residual, e.g. `"P·A_2·Rᵀ − B_2"`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualEntry {
    pub label: String,
    pub residual: f64,
}

/// Outcome of a verification predicate.
///
/// Every residual is relative to the scale described in `scale`; the
/// report passes when every entry is finite and at most `threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub relation: String,
    pub scale: String,
    pub threshold: f64,
    pub entries: Vec<ResidualEntry>,
    pub max_residual: f64,
    pub passed: bool,
    /// Non-fatal observation, such as a permutation residual far above the
    /// adjacent-transposition residual.
    pub flagged: Option<String>,
}

impl ResidualReport {
    pub(crate) fn new(relation: &str, scale: &str, threshold: f64) -> Self {
        ResidualReport {
            relation: relation.into(),
            scale: scale.into(),
            threshold,
            entries: Vec::new(),
            max_residual: 0.0,
            passed: true,
            flagged: None,
        }
    }

    pub(crate) fn push(&mut self, label: String, residual: f64) {
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = residual;
        }
        if !(residual <= self.threshold) {
            self.passed = false;
        }
        self.entries.push(ResidualEntry { label, residual });
    }

    /// Appends another report's entries with a label prefix.
    pub(crate) fn absorb(&mut self, prefix: &str, other: ResidualReport) {
        for e in other.entries {
            self.push(alloc::format!("{prefix}{}", e.label), e.residual);
        }
        if let Some(f) = other.flagged {
            self.flagged = Some(f);
        }
    }

    /// The entry with the largest residual.
    pub fn worst(&self) -> Option<&ResidualEntry> {
        self.entries
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
    }

    /// Entries above the threshold.
    pub fn failures(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.entries.iter().filter(|e| !(e.residual <= self.threshold))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_and_fail_tracking() {
        let mut r = ResidualReport::new("congruence", "‖S‖²·max‖A_i‖", 1e-8);
        assert!(r.passed);
        r.push("a".into(), 1e-12);
        assert!(r.passed);
        r.push("b".into(), 1e-3);
        r.push("c".into(), 1e-9);
        assert!(!r.passed);
        assert_eq!(r.max_residual, 1e-3);
        assert_eq!(r.worst().unwrap().label, "b");
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn nan_fails() {
        let mut r = ResidualReport::new("x", "y", 1.0);
        r.push("nan".into(), f64::NAN);
        assert!(!r.passed);
    }
}
