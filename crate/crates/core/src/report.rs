//! Coefficientwise comparison records and their verdicts.

use std::fmt::{self, Write as _};

use crate::fock::State;
use crate::scalars::GaussRat;

#[derive(Clone, Debug)]
pub struct Record {
    pub exponents: Vec<GaussRat>,
    pub left: State,
    pub right: State,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// A failure was expected and observed.
    ExpectedFail,
    /// A failure was expected but every record passed.
    UnexpectedPass,
    /// Nothing was compared.
    Empty,
}

impl Verdict {
    /// Whether the outcome is the one asked for.
    pub fn ok(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::ExpectedFail)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ExpectedFail => "EXPECTED-FAIL",
            Verdict::UnexpectedPass => "UNEXPECTED-PASS",
            Verdict::Empty => "EMPTY",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub identity: String,
    pub records: Vec<Record>,
    pub window: (i64, i64),
    pub expect_failure: bool,
    /// Terms skipped because they would need depth beyond the cutoff.
    pub skipped: usize,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, window: (i64, i64)) -> Self {
        VerificationReport { identity: identity.into(), records: Vec::new(), window, expect_failure: false, skipped: 0 }
    }

    pub fn expecting_failure(mut self) -> Self {
        self.expect_failure = true;
        self
    }

    pub fn push(&mut self, exponents: Vec<GaussRat>, left: State, right: State) {
        let pass = left == right;
        self.records.push(Record { exponents, left, right, pass });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
        self.skipped += other.skipped;
    }

    pub fn compared(&self) -> usize {
        self.records.len()
    }

    /// Records where at least one side is nonzero.
    pub fn nonzero(&self) -> usize {
        self.records.iter().filter(|r| !r.left.is_zero() || !r.right.is_zero()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn all_pass(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.pass)
    }

    pub fn verdict(&self) -> Verdict {
        if self.records.is_empty() {
            return Verdict::Empty;
        }
        match (self.all_pass(), self.expect_failure) {
            (true, false) => Verdict::Pass,
            (false, false) => Verdict::Fail,
            (false, true) => Verdict::ExpectedFail,
            (true, true) => Verdict::UnexpectedPass,
        }
    }

    pub fn ok(&self) -> bool {
        self.verdict().ok()
    }

    /// Plain-text rendering: one line per record, then a summary line.
    pub fn render(&self, with_records: bool) -> String {
        self.render_records(self.records.iter().filter(|_| with_records))
    }

    /// Like `render`, listing only the mismatched records.
    pub fn render_mismatches(&self) -> String {
        self.render_records(self.failures())
    }

    fn render_records<'r>(&self, records: impl Iterator<Item = &'r Record>) -> String {
        let mut out = String::new();
        {
            for r in records {
                let exps: Vec<String> = r.exponents.iter().map(|e| e.to_string()).collect();
                let _ = writeln!(
                    out,
                    "  [{}] {} left={} right={}",
                    exps.join(", "),
                    if r.pass { "ok" } else { "MISMATCH" },
                    r.left,
                    r.right
                );
            }
        }
        let _ = writeln!(
            out,
            "{}: {} (compared {}, nonzero {}, failures {}, skipped {}, window [{}, {}])",
            self.identity,
            self.verdict(),
            self.compared(),
            self.nonzero(),
            self.failures().count(),
            self.skipped,
            self.window.0,
            self.window.1
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Label;

    #[test]
    fn verdicts() {
        let v = State::vacuum(Label::zero(1));
        let mut r = VerificationReport::new("t", (0, 0));
        assert_eq!(r.verdict(), Verdict::Empty);
        r.push(vec![], v.clone(), v.clone());
        assert_eq!(r.verdict(), Verdict::Pass);
        r.push(vec![], v.clone(), State::zero());
        assert_eq!(r.verdict(), Verdict::Fail);
        let r = r.expecting_failure();
        assert_eq!(r.verdict(), Verdict::ExpectedFail);
        assert!(r.ok());
        assert_eq!(r.nonzero(), 2);
    }
}
