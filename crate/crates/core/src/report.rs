//! Law-check reports and satisfaction verdicts, with their JSON forms.

use serde::Serialize;

/// One failing (or undecided) sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Per-sample seed; re-running the checker with it replays the sample.
    pub seed: u64,
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub law: String,
    pub samples: usize,
    pub failures: Vec<Failure>,
    /// Samples on which a fuel-bounded order answered `unknown`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inconclusive: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_applicable: Option<String>,
}

impl Report {
    pub fn new(law: impl Into<String>) -> Self {
        Report {
            law: law.into(),
            samples: 0,
            failures: Vec::new(),
            inconclusive: Vec::new(),
            not_applicable: None,
        }
    }

    pub fn not_applicable(law: impl Into<String>, reason: impl Into<String>) -> Self {
        Report {
            not_applicable: Some(reason.into()),
            ..Report::new(law)
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Smallest failing input, by rendered length.
    pub fn minimal(&self) -> Option<&Failure> {
        self.failures.iter().min_by_key(|f| (f.input.len(), f.seed))
    }

    pub(crate) fn record(&mut self, seed: u64, ok: bool, input: impl FnOnce() -> (String, String, String)) {
        self.samples += 1;
        if !ok {
            let (input, lhs, rhs) = input();
            self.failures.push(Failure { seed, input, lhs, rhs });
        }
    }

    /// One human-readable line, plus the minimal counterexample when failing.
    pub fn summary(&self) -> String {
        if let Some(reason) = &self.not_applicable {
            return format!("n/a   {}: {}", self.law, reason);
        }
        let mut s = if self.passed() {
            format!("pass  {} ({} samples", self.law, self.samples)
        } else {
            format!(
                "FAIL  {} ({} of {} samples failed",
                self.law,
                self.failures.len(),
                self.samples
            )
        };
        if !self.inconclusive.is_empty() {
            s.push_str(&format!(", {} inconclusive", self.inconclusive.len()));
        }
        s.push(')');
        if let Some(f) = self.minimal() {
            s.push_str(&format!(
                "\n      seed {}: input {}\n      lhs {}\n      rhs {}",
                f.seed, f.input, f.lhs, f.rhs
            ));
        }
        s
    }
}

/// Outcome of checking an inequation against a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds { samples: usize },
    Violated { samples: usize, witness: Failure },
    Inconclusive { samples: usize, witness: Failure },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }
}
