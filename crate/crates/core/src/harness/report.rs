use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One failed case: the law, the inputs needed to replay it, and a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub law: String,
    pub inputs: Value,
    pub witness: Value,
}

/// Outcome of a law suite or a noninterference or soundness run.
///
/// A run with zero cases is vacuous and does not pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub passed: bool,
    pub vacuous: bool,
    pub failures: Vec<Failure>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn from_tally(suite: &str, seed: u64, tally: Tally, start: Instant) -> Self {
        let vacuous = tally.cases == 0;
        CheckReport {
            suite: suite.to_string(),
            seed,
            cases: tally.cases,
            passed: !vacuous && tally.failures.is_empty(),
            vacuous,
            failures: tally.failures,
            notes: tally.notes,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let status = if self.vacuous {
            "VACUOUS"
        } else if self.passed {
            "PASS"
        } else {
            "FAIL"
        };
        let mut out = format!(
            "{status} {}: {} cases, {} failures (seed {}, {} ms)\n",
            self.suite,
            self.cases,
            self.failures.len(),
            self.seed,
            self.elapsed_ms
        );
        for f in &self.failures {
            let _ = writeln!(out, "  law {}", f.law);
            let _ = writeln!(out, "    inputs:  {}", f.inputs);
            let _ = writeln!(out, "    witness: {}", f.witness);
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

/// Accumulates cases, failures and notes for one batch of checks.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Tally {
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl Tally {
    /// Records one case. Inputs and witness are only built on failure.
    pub fn check(
        &mut self,
        law: &str,
        ok: bool,
        inputs: impl FnOnce() -> Value,
        witness: impl FnOnce() -> Value,
    ) -> bool {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure {
                law: law.to_string(),
                inputs: inputs(),
                witness: witness(),
            });
        }
        ok
    }

    pub fn fail(&mut self, law: &str, inputs: Value, witness: Value) {
        self.check(law, false, || inputs, || witness);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }
}
