//! Seeded property suites. Each suite samples inputs from a fixed seed,
//! re-checks the algorithms against independent evidence (bounded search,
//! back-substitution, closed forms) and counts violations.

mod classify;
mod cuts;
mod definable;
mod examples;
mod groups;
mod parser;
mod phi;
mod series;

use serde::Serialize;

use crate::sample::DEFAULT_SEED;

pub use examples::{example_table, ExampleCheck};
pub use parser::{malformed_corpus, random_group_expr};

pub const SUITES: &[&str] = &[
    "examples",
    "groups",
    "definable",
    "series",
    "cuts",
    "phi",
    "classify",
    "parser",
];

const MAX_REPORTED: usize = 20;

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    pub prime_bound: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            trials: 1000,
            seed: DEFAULT_SEED,
            prime_bound: 50,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub checks: u64,
    pub violation_count: u64,
    /// The first few violation messages.
    pub violations: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.checks > 0
    }
}

pub(crate) struct Tally {
    suite: &'static str,
    checks: u64,
    count: u64,
    messages: Vec<String>,
}

impl Tally {
    pub(crate) fn new(suite: &'static str) -> Self {
        Tally {
            suite,
            checks: 0,
            count: 0,
            messages: Vec::new(),
        }
    }

    pub(crate) fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(msg());
        }
    }

    /// Unwraps `r`, recording an error as a violation.
    pub(crate) fn ok<T>(&mut self, r: crate::Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{}: {e}", ctx()));
                None
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.count += 1;
        if self.messages.len() < MAX_REPORTED {
            self.messages.push(msg);
        }
    }

    pub(crate) fn finish(self) -> SuiteOutcome {
        SuiteOutcome {
            suite: self.suite.to_string(),
            checks: self.checks,
            violation_count: self.count,
            violations: self.messages,
        }
    }
}

/// Runs one suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, cfg: &CheckConfig) -> Option<SuiteOutcome> {
    Some(match name {
        "examples" => examples::run(cfg),
        "groups" => groups::run(cfg),
        "definable" => definable::run(cfg),
        "series" => series::run(cfg),
        "cuts" => cuts::run(cfg),
        "phi" => phi::run(cfg),
        "classify" => classify::run(cfg),
        "parser" => parser::run(cfg),
        _ => return None,
    })
}
