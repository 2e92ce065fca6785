//! Structured verification reports with a stable JSON rendering.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check_id: String,
    /// Human-readable statement of the identity being checked.
    pub statement: String,
    pub status: Status,
    /// On failure, the inputs and both sides rendered.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproBlock {
    pub seed: u64,
    pub grid: Vec<(usize, usize)>,
    pub degree_cap: u64,
    pub samples: usize,
    pub suites: Vec<String>,
    pub version: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub repro: ReproBlock,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(repro: ReproBlock) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            repro,
            records: Vec::new(),
            summary: Summary { pass: 0, fail: 0, skipped: 0 },
        }
    }

    pub fn push(
        &mut self,
        suite: &str,
        check_id: &str,
        statement: &str,
        ok: bool,
        witness: Option<String>,
    ) {
        let status = if ok { Status::Pass } else { Status::Fail };
        match status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Skipped => self.summary.skipped += 1,
        }
        self.records.push(CheckRecord {
            suite: suite.to_string(),
            check_id: check_id.to_string(),
            statement: statement.to_string(),
            status,
            witness: if ok { None } else { witness },
        });
    }

    pub fn skip(&mut self, suite: &str, check_id: &str, statement: &str) {
        self.summary.skipped += 1;
        self.records.push(CheckRecord {
            suite: suite.to_string(),
            check_id: check_id.to_string(),
            statement: statement.to_string(),
            status: Status::Skipped,
            witness: None,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let tag = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            out.push_str(&format!("[{tag}] {} :: {} :: {}\n", r.suite, r.check_id, r.statement));
            if let Some(w) = &r.witness {
                out.push_str(&format!("       witness: {w}\n"));
            }
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} skipped (seed {})\n",
            self.summary.pass, self.summary.fail, self.summary.skipped, self.repro.seed
        ));
        out
    }
}
