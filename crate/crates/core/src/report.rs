//! Machine-readable run reports (`"schema": 1`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::junta::{Check, Verdict};
use crate::oracles::ManifestEntry;
use crate::setcore::KSet;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub source: String,
    pub hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// `pass`, `fail` or `skipped(<reason>)`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
}

impl CheckRecord {
    pub fn from_verdict(name: impl Into<String>, verdict: &Verdict, witness: &[KSet]) -> Self {
        let (verdict, detail) = match verdict {
            Verdict::Pass => ("pass".to_string(), None),
            Verdict::Fail(why) => ("fail".to_string(), Some(why.clone())),
            Verdict::Skipped(why) => (format!("skipped({why})"), None),
        };
        CheckRecord {
            name: name.into(),
            verdict,
            detail,
            witness: witness.iter().map(KSet::to_vec).collect(),
            counts: None,
        }
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == "fail"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: Vec<String>,
    pub status: String,
    #[serde(default)]
    pub inputs: Vec<InputRecord>,
    #[serde(default)]
    pub checks: Vec<CheckRecord>,
    /// Exact quantities as integer or rational strings.
    #[serde(default)]
    pub values: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transcript: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall clock per phase; the only part of a report that varies between runs.
    #[serde(default)]
    pub timings_us: BTreeMap<String, u64>,
    /// Families generated while producing the report; written separately as a manifest.
    #[serde(skip)]
    pub corpus: Vec<ManifestEntry>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Report {
        Report {
            schema: SCHEMA,
            command,
            status: "pass".into(),
            inputs: Vec::new(),
            checks: Vec::new(),
            values: BTreeMap::new(),
            transcript: Vec::new(),
            notes: Vec::new(),
            timings_us: BTreeMap::new(),
            corpus: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        if record.is_fail() {
            self.status = "fail".into();
        }
        self.checks.push(record);
    }

    pub fn push_check(&mut self, check: &Check) {
        self.push(CheckRecord::from_verdict(&check.name, &check.verdict, &[]));
    }

    pub fn value(&mut self, key: impl Into<String>, value: impl ToString) {
        self.values.insert(key.into(), value.to_string());
    }

    pub fn input(&mut self, source: impl Into<String>, hash: String, seed: Option<u64>) {
        self.inputs.push(InputRecord {
            source: source.into(),
            hash,
            seed,
        });
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(CheckRecord::is_fail)
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Report> {
        let report: Report = serde_json::from_str(text)?;
        if report.schema != SCHEMA {
            return crate::error::invalid(format!("unsupported report schema {}", report.schema));
        }
        Ok(report)
    }

    /// One row per check, value and input: `kind,name,verdict,detail,passed,failed,skipped`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let row = |w: &mut csv::Writer<Vec<u8>>, cells: [&str; 7]| {
            w.write_record(cells).expect("in-memory write");
        };
        row(
            &mut w,
            ["kind", "name", "verdict", "detail", "passed", "failed", "skipped"],
        );
        for c in &self.checks {
            let counts = c
                .counts
                .map(|k| [k.passed.to_string(), k.failed.to_string(), k.skipped.to_string()]);
            let [p, f, s] = counts.unwrap_or_default();
            row(
                &mut w,
                [
                    "check",
                    &c.name,
                    &c.verdict,
                    c.detail.as_deref().unwrap_or(""),
                    &p,
                    &f,
                    &s,
                ],
            );
        }
        for (k, v) in &self.values {
            row(&mut w, ["value", k, "", v, "", "", ""]);
        }
        for i in &self.inputs {
            row(&mut w, ["input", &i.source, "", &i.hash, "", "", ""]);
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Aggregates one named check over many instances.
#[derive(Clone, Debug)]
pub struct Tally {
    pub name: String,
    pub counts: Counts,
    first_failure: Option<(String, Vec<KSet>)>,
    skip_reason: Option<String>,
}

impl Tally {
    pub fn new(name: impl Into<String>) -> Tally {
        Tally {
            name: name.into(),
            counts: Counts::default(),
            first_failure: None,
            skip_reason: None,
        }
    }

    pub fn record(&mut self, verdict: &Verdict, context: &str, witness: &[KSet]) {
        match verdict {
            Verdict::Pass => self.counts.passed += 1,
            Verdict::Fail(why) => {
                self.counts.failed += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some((format!("{context}: {why}"), witness.to_vec()));
                }
            }
            Verdict::Skipped(why) => {
                self.counts.skipped += 1;
                self.skip_reason.get_or_insert_with(|| why.clone());
            }
        }
    }

    pub fn total(&self) -> usize {
        self.counts.passed + self.counts.failed + self.counts.skipped
    }

    pub fn into_record(self) -> CheckRecord {
        let Counts {
            passed,
            failed,
            skipped,
        } = self.counts;
        let (verdict, detail, witness) = if let Some((why, w)) = self.first_failure {
            let n = passed + failed + skipped;
            (
                "fail".to_string(),
                Some(format!("{failed} of {n} failed; first: {why}")),
                w,
            )
        } else if passed > 0 {
            let detail = self.skip_reason.map(|r| format!("{skipped} skipped: {r}"));
            ("pass".to_string(), detail, Vec::new())
        } else {
            let reason = self.skip_reason.unwrap_or_else(|| "no instances".into());
            (format!("skipped({reason})"), None, Vec::new())
        };
        CheckRecord {
            name: self.name,
            verdict,
            detail,
            witness: witness.iter().map(KSet::to_vec).collect(),
            counts: Some(self.counts),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_verdicts() {
        let mut t = Tally::new("x");
        assert_eq!(t.clone().into_record().verdict, "skipped(no instances)");
        t.record(&Verdict::Skipped("budget".into()), "i=0", &[]);
        assert_eq!(t.clone().into_record().verdict, "skipped(budget)");
        t.record(&Verdict::Pass, "i=1", &[]);
        let r = t.clone().into_record();
        assert_eq!(
            (r.verdict.as_str(), r.detail.as_deref()),
            ("pass", Some("1 skipped: budget"))
        );
        t.record(&Verdict::Fail("too big".into()), "i=2", &[KSet::prefix(3, 2).unwrap()]);
        let r = t.into_record();
        assert!(r.is_fail());
        assert_eq!(r.witness, vec![vec![1, 2]]);
        assert_eq!(r.detail.unwrap(), "1 of 3 failed; first: i=2: too big");
    }

    #[test]
    fn report_roundtrip_and_exit_code() {
        let mut rep = Report::new(vec!["check".into()]);
        rep.push_check(&Check::new("a", Verdict::Pass));
        rep.value("size", "7/2");
        assert_eq!(rep.exit_code(), 0);
        rep.push(CheckRecord::from_verdict("b", &Verdict::Fail("no".into()), &[]));
        assert_eq!((rep.exit_code(), rep.status.as_str()), (1, "fail"));
        assert_eq!(Report::from_json(&rep.to_json()).unwrap(), rep);
        let csv = rep.to_csv();
        assert!(csv.starts_with("kind,name,verdict,detail,passed,failed,skipped\n"));
        assert!(csv.contains("check,b,fail,no,,,\n"));
        assert!(csv.contains("value,size,,7/2,,,\n"));
        assert!(Report::from_json(&rep.to_json().replace("\"schema\": 1", "\"schema\": 2")).is_err());
    }
}
