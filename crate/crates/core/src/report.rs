//! Suite reports: one line per check, serialisable to JSON.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Label of the display or table the check reproduces.
    pub reference: String,
    pub status: Status,
    /// Residual, multiplier or measured value.
    pub value: String,
    /// Wall time in milliseconds; left out unless timings were requested,
    /// so reports for equal inputs are byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub overall: Status,
}

impl Report {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> Report {
        let overall = Status::from_bool(!checks.is_empty() && checks.iter().all(|c| c.status.is_pass()));
        Report {
            suite: suite.into(),
            checks,
            overall,
        }
    }

    /// Concatenates reports, prefixing each check id with its suite.
    pub fn merge(suite: impl Into<String>, parts: Vec<Report>) -> Report {
        let checks = parts
            .into_iter()
            .flat_map(|r| {
                let name = r.suite;
                r.checks.into_iter().map(move |mut c| {
                    c.id = format!("{name}/{}", c.id);
                    c
                })
            })
            .collect();
        Report::new(suite, checks)
    }

    pub fn passed(&self) -> bool {
        self.overall.is_pass()
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.status.is_pass()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            write!(f, "{} {:width$}  [{}]  {}", c.status, c.id, c.reference, c.value)?;
            if let Some(ms) = c.runtime_ms {
                write!(f, "  ({ms:.1} ms)")?;
            }
            writeln!(f)?;
        }
        let n = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.status.is_pass()).count();
        writeln!(f, "{}: {} ({ok}/{n} checks pass)", self.suite, self.overall)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(id: &str, ok: bool) -> Check {
        Check {
            id: id.into(),
            reference: "r".into(),
            status: Status::from_bool(ok),
            value: "0".into(),
            runtime_ms: None,
        }
    }

    #[test]
    fn overall_is_conjunction() {
        assert!(Report::new("s", vec![check("a", true), check("b", true)]).passed());
        assert!(!Report::new("s", vec![check("a", true), check("b", false)]).passed());
        assert!(!Report::new("s", vec![]).passed());
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("s", vec![check("a", true), check("b", false)]);
        let text = r.to_json();
        assert!(!text.contains("runtime_ms"));
        assert!(text.contains("\"status\": \"fail\""));
        assert_eq!(Report::from_json(&text).unwrap(), r);
        r.checks[0].runtime_ms = Some(1.5);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn merge_prefixes_ids() {
        let m = Report::merge(
            "all",
            vec![Report::new("x", vec![check("a", true)]), Report::new("y", vec![check("a", false)])],
        );
        assert_eq!(m.checks[1].id, "y/a");
        assert_eq!(m.failed().len(), 1);
        assert!(!m.passed());
    }
}
