use std::fmt;

use serde::Serialize;

/// A single mismatch: the generator (or label) where two sides disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub generator: String,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn new(generator: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Witness {
            generator: generator.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub label: String,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

/// Outcome of a batch of identity checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub entries: Vec<Entry>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Default::default()
        }
    }

    /// Records a check that passes iff `witnesses` is empty.
    pub fn check(&mut self, label: impl Into<String>, witnesses: Vec<Witness>) -> bool {
        let passed = witnesses.is_empty();
        self.entries.push(Entry {
            label: label.into(),
            passed,
            witnesses,
        });
        passed
    }

    pub fn expect(&mut self, label: impl Into<String>, ok: bool, witness: impl FnOnce() -> Witness) -> bool {
        let w = if ok { vec![] } else { vec![witness()] };
        self.check(label, w)
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn absorb(&mut self, other: Report) {
        let prefix = other.title;
        for mut e in other.entries {
            if !prefix.is_empty() {
                e.label = format!("{prefix}: {}", e.label);
            }
            self.entries.push(e);
        }
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        self.failures().flat_map(|e| e.witnesses.iter().cloned()).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.entries.iter().filter(|e| e.passed).count();
        writeln!(f, "{} ({}/{} passed)", self.title, ok, self.entries.len())?;
        for e in &self.entries {
            writeln!(f, "  [{}] {}", if e.passed { "pass" } else { "FAIL" }, e.label)?;
            for w in &e.witnesses {
                writeln!(f, "      at {}: {}  !=  {}", w.generator, w.lhs, w.rhs)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
