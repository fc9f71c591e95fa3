//! Reports in table and machine formats.

use std::fmt::Write;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Machine,
}

/// Homology dimensions over a certified degree range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimTable {
    pub title: String,
    pub rows: Vec<(i64, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass(name: &str) -> Self {
        Verdict {
            name: name.to_string(),
            pass: true,
            witness: None,
        }
    }

    pub fn from_check(name: &str, holds: bool, witness: Option<String>) -> Self {
        Verdict {
            name: name.to_string(),
            pass: holds,
            witness: if holds { None } else { Some(witness.unwrap_or_else(|| "unspecified".into())) },
        }
    }

    pub fn fail(name: &str, witness: impl Into<String>) -> Self {
        Verdict {
            name: name.to_string(),
            pass: false,
            witness: Some(witness.into()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub models: Vec<String>,
    /// Degrees every table and verdict is certified for.
    pub valid_degrees: Option<(i64, i64)>,
    pub notes: Vec<String>,
    pub tables: Vec<DimTable>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ..Report::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table(),
            Format::Machine => self.machine(),
        }
    }

    fn valid(&self) -> String {
        match self.valid_degrees {
            Some((lo, hi)) if lo <= hi => format!("{lo}..{hi}"),
            Some(_) => "none".into(),
            None => "not applicable".into(),
        }
    }

    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for m in &self.models {
            let _ = writeln!(s, "model: {m}");
        }
        let _ = writeln!(s, "valid degrees: {}", self.valid());
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for t in &self.tables {
            let _ = writeln!(s, "\n{}", t.title);
            let _ = writeln!(s, "  {:>6}  {:>6}", "degree", "dim H");
            for (d, h) in &t.rows {
                let _ = writeln!(s, "  {d:>6}  {h:>6}");
            }
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(s, "\nverdicts:");
            for v in &self.verdicts {
                let _ = writeln!(s, "  {}  {}", if v.pass { "PASS" } else { "FAIL" }, v.name);
                if let Some(w) = &v.witness {
                    let _ = writeln!(s, "        witness: {w}");
                }
            }
        }
        let _ = writeln!(s, "\nresult: {}", if self.passed() { "pass" } else { "fail" });
        s
    }

    /// One record per line, tab-separated `key=value` fields; `witness` is
    /// always the last field.
    fn machine(&self) -> String {
        let clean = |x: &str| x.replace(['\t', '\n'], " ");
        let mut s = String::new();
        let _ = writeln!(s, "command={}", clean(&self.command));
        for m in &self.models {
            let _ = writeln!(s, "model={}", clean(m));
        }
        match self.valid_degrees {
            Some((lo, hi)) => {
                let _ = writeln!(s, "valid_lo={lo}\tvalid_hi={hi}");
            }
            None => {
                let _ = writeln!(s, "valid_lo=-\tvalid_hi=-");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note={}", clean(n));
        }
        for t in &self.tables {
            for (d, h) in &t.rows {
                let _ = writeln!(s, "table={}\tdegree={d}\tdim_H={h}", clean(&t.title));
            }
        }
        for v in &self.verdicts {
            let _ = writeln!(
                s,
                "verdict={}\tresult={}\twitness={}",
                clean(&v.name),
                if v.pass { "pass" } else { "fail" },
                v.witness.as_deref().map(clean).unwrap_or_else(|| "-".into())
            );
        }
        let _ = writeln!(s, "result={}", if self.passed() { "pass" } else { "fail" });
        s
    }
}
