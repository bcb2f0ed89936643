use std::fmt::Write;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    pub fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Input {
    pub reference: String,
    pub digest: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Outcome of one command. Field order and content depend only on the
/// inputs, so identical runs print identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<Input>,
    pub values: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            values: Vec::new(),
            checks: Vec::new(),
            artifacts: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn input(&mut self, reference: &str, digest: String) {
        self.inputs.push(Input {
            reference: reference.to_string(),
            digest,
        });
    }

    pub fn value(&mut self, key: &str, value: impl ToString) {
        self.values.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, name: &str, ok: bool, witness: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            verdict: Verdict::of(ok),
            witness: if ok { None } else { witness },
        });
    }

    pub fn unknown(&mut self, name: &str, note: impl ToString) {
        self.checks.push(Check {
            name: name.to_string(),
            verdict: Verdict::Unknown,
            witness: Some(note.to_string()),
        });
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        for i in &self.inputs {
            writeln!(out, "input: {} sha256:{}", i.reference, i.digest).unwrap();
        }
        for (k, v) in &self.values {
            for (n, line) in v.lines().enumerate() {
                if n == 0 {
                    writeln!(out, "{k}: {line}").unwrap();
                } else {
                    writeln!(out, "  {line}").unwrap();
                }
            }
            if v.is_empty() {
                writeln!(out, "{k}:").unwrap();
            }
        }
        for c in &self.checks {
            match &c.witness {
                Some(w) => writeln!(out, "check {}: {} ({w})", c.name, c.verdict.as_str()).unwrap(),
                None => writeln!(out, "check {}: {}", c.name, c.verdict.as_str()).unwrap(),
            }
        }
        for a in &self.artifacts {
            writeln!(out, "artifact: {a}").unwrap();
        }
        if let Some(t) = self.timing_ms {
            writeln!(out, "timing_ms: {t}").unwrap();
        }
        let verdict = if self.failed() { "fail" } else { "pass" };
        writeln!(out, "verdict: {verdict}").unwrap();
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
