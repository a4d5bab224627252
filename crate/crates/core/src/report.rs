use serde::Serialize;

/// One named axiom check; `witness` holds the first failing basis labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub axiom: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Report {
        Report {
            passed: true,
            checks: Vec::new(),
        }
    }

    /// Record a check; `witness = None` means it passed.
    pub fn record(&mut self, axiom: &str, witness: Option<Vec<String>>) {
        let passed = witness.is_none();
        self.passed &= passed;
        self.checks.push(Check {
            axiom: axiom.to_string(),
            passed,
            witness,
        });
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn merge(&mut self, other: Report) {
        self.passed &= other.passed;
        self.checks.extend(other.checks);
    }
}
