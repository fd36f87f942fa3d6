use std::fmt;

use serde::Serialize;

use crate::exactlin::Matrix;

/// A matrix attached to a verdict so it can be re-checked independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub rows: Vec<Vec<String>>,
}

impl Witness {
    pub fn new(label: impl Into<String>, m: &Matrix) -> Self {
        Witness {
            label: label.into(),
            rows: m.to_text_rows(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub subject: String,
    pub check: String,
    pub pass: bool,
    /// Reached by sampling rather than exhaustive search.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub sampled: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn new(subject: impl Into<String>, check: impl Into<String>, pass: bool) -> Self {
        Verdict {
            subject: subject.into(),
            check: check.into(),
            pass,
            sampled: false,
            detail: None,
            witness: None,
        }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn witness(mut self, label: impl Into<String>, m: &Matrix) -> Self {
        self.witness = Some(Witness::new(label, m));
        self
    }

    pub fn sampled(mut self, sampled: bool) -> Self {
        self.sampled = sampled;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: bool,
    pub verdicts: usize,
    pub failed: usize,
    pub sampled: usize,
}

/// Append-only record of one verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub theorem: String,
    /// What was covered, e.g. catalog bounds.
    pub bound: Vec<String>,
    /// Computed quantities such as trace ideal dimensions.
    pub facts: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(theorem: impl Into<String>) -> Self {
        Report {
            theorem: theorem.into(),
            bound: Vec::new(),
            facts: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn fact(&mut self, f: impl Into<String>) {
        self.facts.push(f.into());
    }

    pub fn bound(&mut self, b: impl Into<String>) {
        self.bound.push(b.into());
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn extend(&mut self, other: Report) {
        self.bound.extend(other.bound);
        self.facts.extend(other.facts);
        self.verdicts.extend(other.verdicts);
    }

    /// Every verdict passes, and with `strict_sampling` none is a sampled pass.
    pub fn passed(&self, strict_sampling: bool) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.pass && !(strict_sampling && v.sampled))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    pub fn has_fact(&self, needle: &str) -> bool {
        self.facts.iter().any(|f| f.contains(needle))
    }

    pub fn summary(&self, strict_sampling: bool) -> Summary {
        Summary {
            pass: self.passed(strict_sampling),
            verdicts: self.verdicts.len(),
            failed: self.verdicts.iter().filter(|v| !v.pass).count(),
            sampled: self.verdicts.iter().filter(|v| v.sampled).count(),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.theorem)?;
        for b in &self.bound {
            writeln!(f, "  bound: {b}")?;
        }
        for x in &self.facts {
            writeln!(f, "  {x}")?;
        }
        for v in &self.verdicts {
            let tag = match (v.pass, v.sampled) {
                (true, false) => "PASS",
                (true, true) => "PASS*",
                (false, _) => "FAIL",
            };
            write!(f, "  [{tag}] {}: {}", v.subject, v.check)?;
            if let Some(d) = &v.detail {
                write!(f, " ({d})")?;
            }
            writeln!(f)?;
        }
        let s = self.summary(false);
        write!(
            f,
            "  summary: {} ({} verdicts, {} failed, {} sampled)",
            if s.pass { "pass" } else { "FAIL" },
            s.verdicts,
            s.failed,
            s.sampled
        )
    }
}
