//! The JSON report. Key order is fixed by the struct layout and by sorted
//! maps; timings live outside the verdicts.

use std::collections::BTreeMap;

use relgor::cert::{recheck, Certificate};
use relgor::contexts::Finding;
use relgor::quiver::{validate_algebra, Algebra, AlgebraDescription};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "relgor.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Positive,
    Negative,
    Inconclusive,
    /// A hypothesis of the checked statement fails; nothing to confirm.
    NotApplicable,
    /// Reported for information; does not affect the exit code.
    Observation,
}

impl Status {
    pub fn of_finding(f: &Finding) -> Status {
        match f {
            Finding::Holds { .. } | Finding::Vacuous { .. } => Status::Positive,
            Finding::Fails { .. } => Status::Negative,
            Finding::Inconclusive { .. } => Status::Inconclusive,
            Finding::HypothesisNotMet { .. } => Status::NotApplicable,
        }
    }

    pub fn of_bool(b: bool) -> Status {
        if b {
            Status::Positive
        } else {
            Status::Negative
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub status: Status,
    /// Hash of the algebra the claim is about.
    pub algebra: String,
    /// Which decision mode produced the verdict, where that matters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub value: Value,
    /// Indices into the report's certificate list.
    pub certificates: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertEntry {
    pub id: usize,
    pub algebra: String,
    #[serde(flatten)]
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecheckSummary {
    pub checked: usize,
    /// `(certificate id, reason)`
    pub failed: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub algebra_hash: String,
    /// Canonical descriptions by hash, so that certificates can be rechecked
    /// from the report alone.
    pub algebras: BTreeMap<String, AlgebraDescription>,
    pub verdicts: Vec<Verdict>,
    pub certificates: Vec<CertEntry>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recheck: Option<RecheckSummary>,
    /// Milliseconds.
    pub timings: BTreeMap<String, f64>,
    /// Progress notes for standard error; not part of the JSON.
    #[serde(skip)]
    pub log: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            algebra_hash: String::new(),
            algebras: BTreeMap::new(),
            verdicts: Vec::new(),
            certificates: Vec::new(),
            warnings: Vec::new(),
            recheck: None,
            timings: BTreeMap::new(),
            log: Vec::new(),
        }
    }

    /// Registers an algebra; the first one becomes the report's algebra.
    pub fn algebra(&mut self, alg: &Algebra) -> String {
        let hash = alg.fingerprint().to_string();
        if self.algebra_hash.is_empty() {
            self.algebra_hash = hash.clone();
        }
        self.algebras.entry(hash.clone()).or_insert_with(|| alg.description());
        hash
    }

    pub fn certificate(&mut self, algebra: &str, certificate: Certificate) -> usize {
        let id = self.certificates.len();
        self.certificates.push(CertEntry {
            id,
            algebra: algebra.to_string(),
            certificate,
        });
        id
    }

    /// Adds a verdict. Certificates embedded anywhere in `value` move to the
    /// certificate list and are replaced by `{"certificate": id}`.
    pub fn push(&mut self, algebra: &str, claim: impl Into<String>, status: Status, mut value: Value, mut certificates: Vec<usize>) {
        self.extract(algebra, &mut value, &mut certificates);
        self.verdicts.push(Verdict {
            claim: claim.into(),
            status,
            algebra: algebra.to_string(),
            mode: None,
            value,
            certificates,
        });
    }

    pub fn push_finding(&mut self, algebra: &str, claim: impl Into<String>, finding: &Finding) {
        let value = serde_json::to_value(finding).expect("finding serializes");
        self.push(algebra, claim, Status::of_finding(finding), value, Vec::new());
    }

    /// Sets the mode of the most recent verdict.
    pub fn mode(&mut self, mode: &str) {
        if let Some(v) = self.verdicts.last_mut() {
            v.mode = Some(mode.to_string());
        }
    }

    fn extract(&mut self, algebra: &str, value: &mut Value, ids: &mut Vec<usize>) {
        match value {
            Value::Object(map) => {
                let is_cert = map.len() == 2 && map.contains_key("objects") && map.contains_key("claims");
                if is_cert {
                    if let Ok(c) = serde_json::from_value::<Certificate>(Value::Object(map.clone())) {
                        let id = self.certificate(algebra, c);
                        ids.push(id);
                        *value = serde_json::json!({ "certificate": id });
                        return;
                    }
                }
                for v in map.values_mut() {
                    self.extract(algebra, v, ids);
                }
            }
            Value::Array(items) => {
                for v in items {
                    self.extract(algebra, v, ids);
                }
            }
            _ => {}
        }
    }

    /// 1 for a definite negative, else 2 when something is inconclusive,
    /// else 0. A failed recheck counts as negative.
    pub fn exit_code(&self) -> i32 {
        let has = |s: Status| self.verdicts.iter().any(|v| v.status == s);
        if has(Status::Negative) || self.recheck.as_ref().is_some_and(|r| !r.failed.is_empty()) {
            1
        } else if has(Status::Inconclusive) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            let status = serde_json::to_value(v.status).ok().and_then(|s| s.as_str().map(str::to_string)).unwrap_or_default();
            let mode = v.mode.as_deref().map(|m| format!(" [{m}]")).unwrap_or_default();
            let certs = match v.certificates.len() {
                0 => String::new(),
                1 => " (1 certificate)".to_string(),
                n => format!(" ({n} certificates)"),
            };
            out.push_str(&format!("{status:<15} {}{mode}{certs}\n", v.claim));
        }
        if let Some(r) = &self.recheck {
            out.push_str(&format!("recheck: {} certificates, {} failed\n", r.checked, r.failed.len()));
        }
        out
    }
}

/// Re-verifies every certificate using only linear algebra on the stored
/// representations. The report should come straight from JSON.
pub fn recheck_report(report: &Report) -> RecheckSummary {
    let mut algebras: BTreeMap<&str, Result<std::sync::Arc<Algebra>, String>> = BTreeMap::new();
    for (hash, desc) in &report.algebras {
        let alg = validate_algebra(desc).map_err(|e| e.to_string()).and_then(|a| {
            if a.fingerprint() == hash {
                Ok(a)
            } else {
                Err("algebra description does not match its hash".to_string())
            }
        });
        algebras.insert(hash, alg);
    }
    let mut failed = Vec::new();
    for c in &report.certificates {
        let outcome = match algebras.get(c.algebra.as_str()) {
            None => Err("unknown algebra".to_string()),
            Some(Err(e)) => Err(e.clone()),
            Some(Ok(alg)) => recheck(alg, &c.certificate).map_err(|e| e.to_string()),
        };
        if let Err(e) = outcome {
            failed.push((c.id, e));
        }
    }
    RecheckSummary {
        checked: report.certificates.len(),
        failed,
    }
}
