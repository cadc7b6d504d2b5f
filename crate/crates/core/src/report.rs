//! Pass/fail findings with witnesses, shared by every checker.

use std::fmt;

use crate::symalg::Expr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A quantity that should vanish identically, and its actual value.
    Value { at: String, value: Expr },
    /// A rank that differs from the required one.
    Rank {
        what: String,
        expected: usize,
        found: usize,
    },
    Text(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Value { at, value } => write!(f, "{at} = {value}"),
            Witness::Rank {
                what,
                expected,
                found,
            } => write!(f, "rank of {what} is {found}, expected {expected}"),
            Witness::Text(t) => f.write_str(t),
        }
    }
}

/// One named sub-check. It passes when there is no witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub name: String,
    pub witness: Option<Witness>,
}

impl Finding {
    pub fn pass(name: impl Into<String>) -> Self {
        Finding {
            name: name.into(),
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Witness) -> Self {
        Finding {
            name: name.into(),
            witness: Some(witness),
        }
    }

    pub fn from_option(name: impl Into<String>, witness: Option<Witness>) -> Self {
        Finding {
            name: name.into(),
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{}: pass", self.name),
            Some(w) => write!(f, "{}: fail ({w})", self.name),
        }
    }
}

/// An ordered list of findings plus free-form notes (conventions, caveats).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub findings: Vec<Finding>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, f: Finding) {
        self.findings.push(f);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn passed(&self) -> bool {
        self.findings.iter().all(Finding::passed)
    }

    pub fn first_failure(&self) -> Option<&Finding> {
        self.findings.iter().find(|f| !f.passed())
    }

    pub fn finding(&self, name: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.name == name)
    }

    /// Short witness text of the first failing finding.
    pub fn witness_text(&self) -> Option<String> {
        self.first_failure()
            .map(|f| format!("{}: {}", f.name, f.witness.as_ref().expect("failing")))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, finding) in self.findings.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{finding}")?;
        }
        Ok(())
    }
}

/// Index label with 1-based entries, e.g. `mu[1,2,3]`.
pub fn label(name: &str, idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("{name}[{}]", parts.join(","))
}
