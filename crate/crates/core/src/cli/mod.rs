//! The `verify` command: load a scenario, run its suites, render a report and pick an exit code.

pub mod config;
pub mod suites;

use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub use config::{Overrides, Scenario, SUITES};
pub use suites::{run_suites, Case, SuiteResult};

use crate::error::{Error, Result};
use crate::report::Verdict;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_STARVED: i32 = 3;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub scenario: Scenario,
    pub suites: Vec<SuiteResult>,
}

impl Outcome {
    pub fn cases(&self) -> impl Iterator<Item = (&str, &Case)> {
        self.suites.iter().flat_map(|s| s.cases.iter().map(move |c| (s.name.as_str(), c)))
    }

    fn starved(&self, case: &Case) -> bool {
        let n = case.report.compared();
        n == 0 || n < self.scenario.min_compared
    }

    /// A mismatch, as opposed to an empty window.
    fn failed(&self, case: &Case) -> bool {
        !case.report.ok() && case.report.verdict() != Verdict::Empty
    }

    /// A failing case wins over a starved one.
    pub fn exit_code(&self) -> i32 {
        if self.cases().any(|(_, c)| self.failed(c)) {
            EXIT_FAIL
        } else if self.cases().any(|(_, c)| self.starved(c)) {
            EXIT_STARVED
        } else {
            EXIT_PASS
        }
    }

    pub fn summary(&self) -> String {
        let total = self.cases().count();
        let failed = self.cases().filter(|(_, c)| self.failed(c)).count();
        let starved = self.cases().filter(|(_, c)| !self.failed(c) && self.starved(c)).count();
        let compared: usize = self.cases().map(|(_, c)| c.report.compared()).sum();
        format!("{total} cases, {failed} failed, {starved} starved, {compared} coefficients compared")
    }

    /// The deterministic part of the report.
    pub fn render_body(&self) -> String {
        let s = &self.scenario;
        let mut out = String::new();
        let _ = writeln!(out, "seed: {}", s.seed);
        let _ = writeln!(
            out,
            "rank: {}, window: {}, cutoff: {}, N: {}, min compared: {}",
            s.rank, s.window, s.cutoff, s.branch_n, s.min_compared
        );
        for suite in &self.suites {
            let _ = writeln!(out, "\n== suite {} ({} cases)", suite.name, suite.cases.len());
            for (i, case) in suite.cases.iter().enumerate() {
                let starved = if !self.failed(case) && self.starved(case) { " [STARVED]" } else { "" };
                let _ = writeln!(out, "-- case {i}: {}{starved}", case.description);
                out.push_str(&case.report.render_mismatches());
            }
        }
        let _ = writeln!(out, "\nsummary: {}", self.summary());
        let _ = writeln!(out, "exit: {}", self.exit_code());
        out
    }

    pub fn render(&self, config: &Path) -> String {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        format!("# generated-unix: {now}\n# config: {}\n---\n{}", config.display(), self.render_body())
    }
}

pub fn run(scenario: Scenario) -> Result<Outcome> {
    let mut suites = run_suites(&scenario)?;
    suites.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(Outcome { scenario, suites })
}

pub fn load_and_run(path: &Path, overrides: &Overrides) -> Result<Outcome> {
    run(Scenario::load(path, overrides)?)
}

/// Exit code for an error raised before any verdict exists.
pub fn error_code(_: &Error) -> i32 {
    EXIT_CONFIG
}
