//! CSV row layouts for procedure and star-check reports.
//!
//! Rows are plain string fields; quoting is left to the CSV writer. Integer
//! sequences (witnesses, `P`) are written comma-separated.

use std::fmt::Display;

use crate::avoider::AvoiderOutcome;
use crate::checkers::StarReport;

pub const PROCEDURE_HEADER: [&str; 5] = ["procedure", "params_hash", "steps_completed", "verdict", "witness"];

pub const STAR_HEADER: [&str; 7] = ["check", "universe", "params", "verdict", "witness", "enumerated", "seed"];

/// `1,2,3`
pub fn join_seq<T: Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcedureRow {
    pub procedure: String,
    pub params_hash: String,
    pub steps_completed: u64,
    pub verdict: String,
    pub witness: String,
}

impl ProcedureRow {
    pub fn fields(&self) -> [String; 5] {
        [
            self.procedure.clone(),
            self.params_hash.clone(),
            self.steps_completed.to_string(),
            self.verdict.clone(),
            self.witness.clone(),
        ]
    }

    /// `PASS` with `P` as witness, or `STUCK@j` with the prefix chosen so far.
    pub fn from_avoider(params_hash: String, outcome: &AvoiderOutcome) -> Self {
        let (steps, verdict, witness) = match outcome {
            AvoiderOutcome::Success { p, report } => {
                (p.len(), if report.passed { "PASS".to_string() } else { "FAIL".to_string() }, join_seq(p))
            }
            AvoiderOutcome::Stuck { step, p } => (p.len(), format!("STUCK@{step}"), join_seq(p)),
        };
        Self {
            procedure: "avoid".into(),
            params_hash,
            steps_completed: steps as u64,
            verdict,
            witness,
        }
    }
}

impl StarReport {
    pub fn fields(&self, params: &str) -> [String; 7] {
        [
            self.check.to_string(),
            self.universe.to_string(),
            params.to_string(),
            self.verdict.to_string(),
            self.witness.as_deref().map(join_seq).unwrap_or_default(),
            self.enumerated.to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}
