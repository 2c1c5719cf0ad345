use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Where a reference bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Proved analytically for the discrete setting.
    Derived,
    /// Measured once on the frozen bank, then fixed.
    Calibrated,
    /// A fixed acceptance threshold (stability factor, homogeneity tolerance).
    Gate,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Derived => "derived",
            Provenance::Calibrated => "calibrated",
            Provenance::Gate => "gate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBound {
    pub value: f64,
    /// Absolute slack added to `value` before comparing.
    pub slack: f64,
    pub provenance: Provenance,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
    /// `rhs_core` vanished, so no ratio exists.
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "informational",
            Verdict::Undefined => "undefined",
        })
    }
}

/// One measured inequality `lhs ≤ c · rhs_core`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub lhs: f64,
    pub rhs_core: f64,
    /// `lhs / rhs_core` when `rhs_core > 0`.
    pub ratio: Option<f64>,
    pub reference_bound: Option<ReferenceBound>,
    pub verdict: Verdict,
}

impl AuditRecord {
    pub fn new(name: impl Into<String>, lhs: f64, rhs_core: f64) -> AuditRecord {
        let ratio = (rhs_core > 0.0).then(|| lhs / rhs_core);
        AuditRecord {
            name: name.into(),
            inputs: BTreeMap::new(),
            lhs,
            rhs_core,
            ratio,
            reference_bound: None,
            verdict: if ratio.is_some() {
                Verdict::Informational
            } else {
                Verdict::Undefined
            },
        }
    }

    pub fn input(mut self, key: &str, value: impl fmt::Display) -> AuditRecord {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    /// Attaches a bound; the record fails iff its ratio is not `≤ value + slack`.
    pub fn bounded(mut self, value: f64, slack: f64, provenance: Provenance, note: &str) -> AuditRecord {
        self.verdict = match self.ratio {
            Some(r) if r <= value + slack => Verdict::Pass,
            Some(_) => Verdict::Fail,
            None => Verdict::Undefined,
        };
        self.reference_bound = Some(ReferenceBound {
            value,
            slack,
            provenance,
            note: note.to_string(),
        });
        self
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// `key=value` pairs joined by `;`, in key order.
    pub fn params(&self) -> String {
        self.inputs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Records of one run plus the configuration that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: serde_json::Value,
    pub resolutions: Vec<usize>,
    pub records: Vec<AuditRecord>,
    /// Largest defined ratio per record name.
    pub max_ratio: BTreeMap<String, f64>,
}

impl SweepResult {
    pub fn new(config: serde_json::Value, resolutions: Vec<usize>, records: Vec<AuditRecord>) -> SweepResult {
        let mut out = SweepResult {
            config,
            resolutions,
            records: Vec::new(),
            max_ratio: BTreeMap::new(),
        };
        out.extend(records);
        out
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = AuditRecord>) {
        for r in records {
            if let Some(v) = r.ratio {
                let e = self.max_ratio.entry(r.name.clone()).or_insert(v);
                if v > *e || v.is_nan() {
                    *e = v;
                }
            }
            self.records.push(r);
        }
    }

    /// Appends another sweep's records; the config becomes a list of both.
    pub fn merge(&mut self, other: SweepResult) {
        self.config = match std::mem::take(&mut self.config) {
            serde_json::Value::Null => other.config,
            serde_json::Value::Array(mut a) => {
                a.push(other.config);
                serde_json::Value::Array(a)
            }
            v => serde_json::Value::Array(vec![v, other.config]),
        };
        for r in other.resolutions {
            if !self.resolutions.contains(&r) {
                self.resolutions.push(r);
            }
        }
        self.extend(other.records);
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditRecord> {
        self.records.iter().filter(|r| r.failed())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn records_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a AuditRecord> {
        self.records.iter().filter(move |r| r.name == name)
    }

    /// One row per record: `name,params,lhs,rhs_core,ratio,bound,verdict`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["name", "params", "lhs", "rhs_core", "ratio", "bound", "verdict"])?;
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            out.write_record([
                r.name.clone(),
                r.params(),
                r.lhs.to_string(),
                r.rhs_core.to_string(),
                num(r.ratio),
                num(r.reference_bound.as_ref().map(|b| b.value + b.slack)),
                r.verdict.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_and_verdicts() {
        let r = AuditRecord::new("x", 3.0, 2.0);
        assert_eq!(r.ratio, Some(1.5));
        assert_eq!(r.verdict, Verdict::Informational);
        assert_eq!(r.clone().bounded(1.5, 0.0, Provenance::Derived, "").verdict, Verdict::Pass);
        assert_eq!(r.bounded(1.4, 0.0, Provenance::Derived, "").verdict, Verdict::Fail);
        let z = AuditRecord::new("x", 0.0, 0.0).bounded(1.0, 0.0, Provenance::Gate, "");
        assert_eq!(z.ratio, None);
        assert_eq!(z.verdict, Verdict::Undefined);
        let nan = AuditRecord::new("x", f64::NAN, 1.0).bounded(1.0, 0.0, Provenance::Gate, "");
        assert!(nan.failed());
    }

    #[test]
    fn max_ratio_tracks_names_and_csv_is_stable() {
        let recs = vec![
            AuditRecord::new("a", 1.0, 2.0).input("q", 2).input("gamma", 0.5),
            AuditRecord::new("a", 3.0, 2.0),
            AuditRecord::new("b", 1.0, 0.0),
        ];
        let s = SweepResult::new(serde_json::Value::Null, vec![128], recs);
        assert_eq!(s.max_ratio["a"], 1.5);
        assert!(!s.max_ratio.contains_key("b"));
        let csv = s.to_csv_string().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "name,params,lhs,rhs_core,ratio,bound,verdict");
        assert_eq!(lines[1], "a,gamma=0.5;q=2,1,2,0.5,,informational");
        assert_eq!(lines[3], "b,,1,0,,,undefined");
        assert_eq!(csv, s.to_csv_string().unwrap());
    }
}
