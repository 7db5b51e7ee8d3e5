//! Scenario runner, self-test orchestration and report emission.

pub mod run;
pub mod scenario;
pub mod selftest;

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::prisms::CheckStatus;
use crate::rings::Prec;

pub use run::{run_scenario, run_scenario_file, RunOptions};
pub use scenario::{catalog_files, Command, Scenario};
pub use selftest::{selftest, suites, Level, SuiteResult, Summary};

/// Environment variable naming the default catalog directory.
pub const CATALOG_ENV: &str = "PRISMDISP_CATALOG";

/// The catalog shipped with the crate.
pub fn builtin_catalog() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/catalog"))
}

/// `$PRISMDISP_CATALOG` if set, else the shipped catalog.
pub fn default_catalog() -> PathBuf {
    std::env::var_os(CATALOG_ENV).map(PathBuf::from).unwrap_or_else(builtin_catalog)
}

/// Overall outcome of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    Inconclusive,
}

impl Status {
    /// 0 verified, 2 failed, 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Failed => 2,
            Status::Inconclusive => 3,
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Verified
        } else {
            Status::Failed
        }
    }

    /// Failed dominates inconclusive, which dominates verified.
    pub fn and(self, o: Status) -> Status {
        match (self, o) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Verified,
        }
    }

    /// Errors that only reflect the available precision or budget are
    /// inconclusive; every other error is a failure.
    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Budget(_) | Error::PrecisionExhausted(_) | Error::DepthExhausted(_) | Error::NonConvergence(_) => {
                Status::Inconclusive
            }
            _ => Status::Failed,
        }
    }
}

impl From<CheckStatus> for Status {
    fn from(c: CheckStatus) -> Self {
        match c {
            CheckStatus::Verified => Status::Verified,
            CheckStatus::Inconclusive => Status::Inconclusive,
            CheckStatus::Failed => Status::Failed,
        }
    }
}

impl From<crate::bkmod::Verdict> for Status {
    fn from(v: crate::bkmod::Verdict) -> Self {
        match v {
            crate::bkmod::Verdict::True => Status::Verified,
            crate::bkmod::Verdict::False => Status::Failed,
            crate::bkmod::Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

/// Output format of [`report_emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// The structured outcome of one scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Status>,
    /// Certified precision of the inputs, if a ring was built.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<Prec>,
    /// Named certificates; keys are emitted in sorted order.
    pub certificates: Map<String, Value>,
}

impl Report {
    pub fn new(scenario: &str, command: &str) -> Report {
        Report {
            scenario: scenario.into(),
            command: command.into(),
            status: Status::Verified,
            expected: None,
            precision: None,
            certificates: Map::new(),
        }
    }

    pub fn put(&mut self, key: &str, v: impl Serialize) {
        self.certificates.insert(key.into(), serde_json::to_value(v).expect("certificates serialize"));
    }

    /// Folds `s` into the overall status.
    pub fn fold(&mut self, s: Status) {
        self.status = self.status.and(s);
    }

    /// The status matches the scenario's expectation (or none was given).
    pub fn as_expected(&self) -> bool {
        self.expected.is_none_or(|e| e == self.status)
    }
}

/// Canonical bytes of any report. JSON is pretty-printed with a trailing
/// newline; text is one `path: value` line per scalar leaf.
pub fn report_emit(report: &impl Serialize, format: Format) -> String {
    let v = serde_json::to_value(report).expect("reports serialize");
    let mut out = match format {
        Format::Json => serde_json::to_string_pretty(&v).expect("values serialize"),
        Format::Text => {
            let mut s = String::new();
            flatten("", &v, &mut s);
            s.pop();
            s
        }
    };
    out.push('\n');
    debug_assert!(out.is_ascii());
    out
}

fn flatten(path: &str, v: &Value, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{path}: {s}");
        }
        _ => {
            let _ = writeln!(out, "{path}: {v}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Verified.exit_code(), 0);
        assert_eq!(Status::Failed.exit_code(), 2);
        assert_eq!(Status::Inconclusive.exit_code(), 3);
        assert_eq!(Status::Verified.and(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.and(Status::Failed), Status::Failed);
    }

    #[test]
    fn emission_is_stable() {
        let mut r = Report::new("s", "bk");
        r.put("zeta", 1);
        r.put("alpha", vec![vec!["1 + t"]]);
        r.put("nested", serde_json::json!({"b": [{"x": 1}], "a": true}));
        let j = report_emit(&r, Format::Json);
        assert_eq!(j, report_emit(&r.clone(), Format::Json));
        assert!(j.find("alpha").unwrap() < j.find("zeta").unwrap());
        let t = report_emit(&r, Format::Text);
        assert!(t.contains("certificates.nested.b[0].x: 1\n"));
        assert!(t.contains("status: verified\n"));
    }
}
