//! Append-only diagnostics sink. Extraction never aborts on bad input;
//! everything skipped or repaired lands here and is flushed in
//! deterministic order.

use std::fmt::Write as _;

use crate::model::SourceFormat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagEntry {
    /// `member<TAB>byte-offset<TAB>message`
    Parse {
        member: String,
        offset: usize,
        message: String,
    },
    /// `year<TAB>format<TAB>replacement_count`
    Replacements {
        year: i32,
        format: SourceFormat,
        count: u64,
    },
}

#[derive(Debug, Default, Clone)]
pub struct Diagnostics {
    entries: Vec<DiagEntry>,
}

impl Diagnostics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(&mut self, member: &str, offset: usize, message: impl Into<String>) {
        self.entries.push(DiagEntry::Parse {
            member: member.to_string(),
            offset,
            message: message.into(),
        });
    }

    pub fn replacements(&mut self, year: i32, format: SourceFormat, count: u64) {
        if count > 0 {
            self.entries.push(DiagEntry::Replacements {
                year,
                format,
                count,
            });
        }
    }

    pub fn entries(&self) -> &[DiagEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merges another sink's entries after this one's, preserving order.
    pub fn absorb(&mut self, other: Diagnostics) {
        self.entries.extend(other.entries);
    }

    /// Tab-separated lines in insertion order, one entry per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match e {
                DiagEntry::Parse {
                    member,
                    offset,
                    message,
                } => {
                    let _ = writeln!(out, "{member}\t{offset}\t{message}");
                }
                DiagEntry::Replacements {
                    year,
                    format,
                    count,
                } => {
                    let _ = writeln!(out, "{year}\t{format}\t{count}");
                }
            }
        }
        out
    }
}
