//! Executable verifiers. Each builds the maps a proof describes, checks them
//! exactly on the truncated range, and returns a [`VerificationReport`].

mod foundation;
mod hom;
mod tensor;

use std::fmt;

use serde::Serialize;

pub use foundation::{verify_composition_laws, verify_functoriality};
pub use hom::{
    verify_adjunction_dims, verify_internal_hom_constant, verify_internal_hom_dual,
    verify_internal_hom_identities, verify_internal_hom_representable, verify_pairing_bijection,
};
pub use tensor::{tau_component, verify_lev_tensor, verify_representable_tensor, verify_tau};

use crate::sweep::{CaseCount, Execution, SweepPlan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// Outcome of one verifier run. A failing report always carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub parameters: String,
    pub bound: usize,
    pub checked_cases: usize,
    pub exhaustive_cases: usize,
    pub random_cases: usize,
    pub status: Status,
    pub witness: Option<String>,
    /// False when a Hom computation is only an upper bound at this truncation.
    pub exact: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// `THEOREM <id>(<parameters>) PASS|FAIL cases=<n> [witness=<desc>]`
    pub fn to_text(&self) -> String {
        let mut s = format!("THEOREM {}", self.theorem_id);
        if !self.parameters.is_empty() {
            s.push_str(&format!("({})", self.parameters));
        }
        s.push_str(&format!(" {} cases={}", self.status, self.checked_cases));
        if let Some(w) = &self.witness {
            s.push_str(" witness=");
            s.push_str(w);
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Sampling and scheduling shared by all verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 500,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

impl SweepConfig {
    pub fn plan(&self, bound: usize) -> SweepPlan {
        SweepPlan::new(bound, self.samples, self.seed)
    }

    pub fn with_samples(self, samples: usize) -> Self {
        SweepConfig { samples, ..self }
    }
}

/// Runs `body`, which adds to the case tally and fails with a witness.
pub(crate) fn run_report<F>(id: &str, parameters: String, bound: usize, body: F) -> VerificationReport
where
    F: FnOnce(&mut Tally) -> Result<(), String>,
{
    let mut tally = Tally {
        count: CaseCount::default(),
        exact: true,
    };
    let outcome = body(&mut tally);
    VerificationReport {
        theorem_id: id.to_string(),
        parameters,
        bound,
        checked_cases: tally.count.total(),
        exhaustive_cases: tally.count.exhaustive,
        random_cases: tally.count.random,
        status: if outcome.is_ok() { Status::Pass } else { Status::Fail },
        witness: outcome.err(),
        exact: tally.exact,
    }
}

pub(crate) struct Tally {
    pub count: CaseCount,
    pub exact: bool,
}

impl Tally {
    pub fn exhaustive(&mut self, n: usize) {
        self.count.exhaustive += n;
    }

    pub fn add(&mut self, c: CaseCount) {
        self.count = self.count + c;
    }
}

/// Cases within the plan's correspondences restricted to a bound.
pub(crate) fn plan_cases(cfg: &SweepConfig, bound: usize) -> (Vec<crate::relations::Correspondence>, CaseCount) {
    cfg.plan(bound).correspondences()
}

#[cfg(test)]
mod tests;
