//! Bookkeeping for the acceptance suite: one verdict per criterion, printed
//! as a `PASS`/`FAIL` line, and an exit status that fails if any did.

use std::fmt;
use std::process::ExitCode;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2}: {} ({:.1}s) -- {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

#[derive(Debug, Default)]
pub struct Suite {
    verdicts: Vec<Verdict>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `check`, which returns `(passed, detail)`, and prints its line at once.
    pub fn check(&mut self, id: u32, title: &'static str, check: impl FnOnce() -> (bool, String)) {
        let start = Instant::now();
        let (passed, detail) = check();
        let v = Verdict {
            id,
            title,
            passed,
            detail,
            elapsed: start.elapsed(),
        };
        println!("{v}");
        self.verdicts.push(v);
    }

    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    pub fn failed(&self) -> Vec<u32> {
        self.verdicts.iter().filter(|v| !v.passed).map(|v| v.id).collect()
    }

    pub fn finish(self) -> ExitCode {
        let failed = self.failed();
        println!(
            "acceptance: {} passed, {} failed{}",
            self.verdicts.len() - failed.len(),
            failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(" ({failed:?})")
            }
        );
        if failed.is_empty() {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    }
}
