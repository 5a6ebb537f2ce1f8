use std::fmt::Write as _;

use serde::Serialize;

use crate::report::{Report, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub label: String,
    pub status: Status,
}

/// The result of one command, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub output: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CommandReport {
    pub fn new(command: impl Into<String>) -> Self {
        CommandReport {
            command: command.into(),
            status: Status::Pass,
            witnesses: vec![],
            checks: vec![],
            output: vec![],
            notes: vec![],
            error: None,
            elapsed_ms: None,
        }
    }

    pub fn error(command: impl Into<String>, msg: impl Into<String>) -> Self {
        CommandReport {
            status: Status::Error,
            error: Some(msg.into()),
            ..CommandReport::new(command)
        }
    }

    /// Folds a library report in: one check line per entry, witnesses of failing entries.
    pub fn absorb(&mut self, r: &Report) {
        for e in &r.entries {
            let status = if e.passed { Status::Pass } else { Status::Fail };
            self.checks.push(CheckLine {
                label: e.label.clone(),
                status,
            });
            if !e.passed {
                self.witnesses.extend(e.witnesses.iter().cloned());
                self.status = Status::Fail;
            }
        }
        self.notes.extend(r.notes.iter().cloned());
    }

    pub fn fail_with(&mut self, w: Vec<Witness>) {
        if !w.is_empty() {
            self.status = Status::Fail;
            self.witnesses.extend(w);
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    reports: &'a [CommandReport],
}

/// `{"schema": 1, "reports": [...]}`, pretty-printed.
pub fn render_json(reports: &[CommandReport]) -> String {
    serde_json::to_string_pretty(&Envelope { schema: 1, reports }).expect("reports serialize")
}

fn tag(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}

pub fn render_text(reports: &[CommandReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = write!(out, "[{}] {}", tag(r.status), r.command.replace('\n', " "));
        if let Some(ms) = r.elapsed_ms {
            let _ = write!(out, " ({ms} ms)");
        }
        out.push('\n');
        if let Some(e) = &r.error {
            let _ = writeln!(out, "    error: {e}");
        }
        for line in &r.output {
            let _ = writeln!(out, "    {line}");
        }
        for c in &r.checks {
            let _ = writeln!(out, "    [{}] {}", tag(c.status), c.label);
        }
        for w in &r.witnesses {
            let _ = writeln!(out, "    at {}: {}  !=  {}", w.generator, w.lhs, w.rhs);
        }
        for n in &r.notes {
            let _ = writeln!(out, "    note: {n}");
        }
    }
    out
}

/// 0 if everything passed, 1 on a failed check, 2 on any error.
pub fn exit_code(reports: &[CommandReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Error) {
        2
    } else if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}
