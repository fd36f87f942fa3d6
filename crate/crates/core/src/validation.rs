use std::fmt;

/// Outcome of checking a structure's defining laws.
///
/// An empty `violations` list means the structure is valid; `notes` carry
/// non-fatal observations such as a degenerate zero algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn merge(&mut self, prefix: &str, other: ValidationReport) {
        self.violations.extend(
            other
                .violations
                .into_iter()
                .map(|v| format!("{prefix}: {v}")),
        );
        self.notes
            .extend(other.notes.into_iter().map(|v| format!("{prefix}: {v}")));
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")?;
        } else {
            write!(f, "invalid: {}", self.violations.join("; "))?;
        }
        if !self.notes.is_empty() {
            write!(f, " ({})", self.notes.join("; "))?;
        }
        Ok(())
    }
}
