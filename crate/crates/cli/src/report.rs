//! Report CSV with provenance columns, and atomic file output.
//!
//! Every report line has the columns
//! `section,item,x,value,mode,threshold,cutoff,tail_bound`. `threshold` is
//! the zero test of floating tables, `cutoff` a prime cutoff or truncation
//! level, `tail_bound` a certified or declared tail; each is empty where it
//! does not apply.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use nupair_core::{ValueMode, ZeroTest};

pub const HEADER: &str = "section,item,x,value,mode,threshold,cutoff,tail_bound";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    pub section: String,
    pub item: String,
    pub x: Option<u64>,
    pub value: String,
    pub mode: String,
    pub threshold: String,
    pub cutoff: String,
    pub tail_bound: String,
}

impl Row {
    pub fn new(section: &str, item: impl Into<String>, value: impl ToString) -> Self {
        Row {
            section: section.into(),
            item: item.into(),
            value: value.to_string(),
            ..Row::default()
        }
    }

    pub fn at(mut self, x: u64) -> Self {
        self.x = Some(x);
        self
    }

    /// Mode and threshold from a table's zero test.
    pub fn mode(mut self, mode: ValueMode, zero_test: ZeroTest) -> Self {
        self.mode = mode.as_str().into();
        self.threshold = zero_test.describe();
        self
    }

    pub fn cutoff(mut self, cutoff: impl ToString) -> Self {
        self.cutoff = cutoff.to_string();
        self
    }

    pub fn tail(mut self, tail: impl ToString) -> Self {
        self.tail_bound = tail.to_string();
        self
    }

    fn render(&self) -> String {
        let x = self.x.map(|x| x.to_string()).unwrap_or_default();
        [
            self.section.as_str(),
            &self.item,
            &x,
            &self.value,
            &self.mode,
            &self.threshold,
            &self.cutoff,
            &self.tail_bound,
        ]
        .join(",")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub rows: Vec<Row>,
    pub summary: Vec<String>,
}

impl Report {
    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.render());
            out.push('\n');
        }
        out
    }

    pub fn summary_text(&self) -> String {
        self.summary.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp: PathBuf = path.to_path_buf();
    let name = path
        .file_name()
        .map(|n| format!(".{}.tmp", n.to_string_lossy()))
        .unwrap_or_else(|| ".nupair.tmp".into());
    tmp.set_file_name(name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, contents: &str) -> io::Result<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            use io::Write;
            io::stdout().lock().write_all(contents.as_bytes())
        }
    }
}
