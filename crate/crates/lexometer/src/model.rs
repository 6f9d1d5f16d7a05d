//! Shared domain types. All of them are immutable value objects and safe
//! to copy or share across concurrent workers.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::numeric::{ratio, Rat};

/// Source archive family. `Src` covers the legacy one-file-per-year
/// plain-text payloads extracted from the annual ISO images (1991-2009);
/// `Xhtml` covers the annual XHTML ZIP archives (1994-2024). The overlap
/// 1994-2009 is legal and used for calibration and cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SourceFormat {
    Src,
    Xhtml,
}

impl SourceFormat {
    pub fn year_span(self) -> (i32, i32) {
        match self {
            SourceFormat::Src => (1991, 2009),
            SourceFormat::Xhtml => (1994, 2024),
        }
    }

    pub fn covers_year(self, year: i32) -> bool {
        let (lo, hi) = self.year_span();
        (lo..=hi).contains(&year)
    }
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::Src => "src",
            SourceFormat::Xhtml => "xhtml",
        })
    }
}

impl std::str::FromStr for SourceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "src" | "iso" => Ok(SourceFormat::Src),
            "xhtml" | "htm" | "html" => Ok(SourceFormat::Xhtml),
            other => Err(Error::Input(format!("unknown format: {other:?}"))),
        }
    }
}

/// One member file of a year's bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveFile {
    /// Path relative to the container, `/`-separated.
    pub path: String,
    /// Decompressed length in bytes.
    pub len: u64,
}

/// One year's source bundle, resolved to a concrete container on disk.
#[derive(Debug, Clone)]
pub struct YearArchive {
    /// Edition year: the year whose changes the version contains.
    pub year: i32,
    pub format: SourceFormat,
    /// The ZIP file, the `USC<year>` directory, or the bare `.SRC` file.
    pub container: PathBuf,
    /// Sorted by relative path, never empty.
    pub files: Vec<ArchiveFile>,
}

/// One US Code section's countable span after exclusions: the headline
/// plus the statutory body, with notes, source credits, amendment
/// history and charts/figures already removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionText {
    /// Title identifier as a string; appendix titles carry an `a` suffix
    /// (e.g. `"5a"`), so this is deliberately not numeric.
    pub title_number: String,
    pub section_id: String,
    pub countable_text: String,
}

/// Word and character totals for any text aggregate.
///
/// `chars` follows the leading-whitespace convention: every token is
/// charged its own length plus exactly one separator character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TokenStats {
    pub words: u64,
    pub chars: u64,
}

impl TokenStats {
    pub fn new(words: u64, chars: u64) -> Self {
        TokenStats { words, chars }
    }

    /// Undefined (None) when `words == 0`.
    pub fn chars_per_word(&self) -> Option<Rat> {
        if self.words == 0 {
            None
        } else {
            Some(ratio(self.chars, self.words).expect("words > 0"))
        }
    }

    /// Component-wise sum. Associative and commutative, so any parallel
    /// reduction order yields the same totals.
    pub fn merge(self, other: TokenStats) -> TokenStats {
        TokenStats {
            words: self.words + other.words,
            chars: self.chars + other.chars,
        }
    }
}

/// Per-year consolidated numbers.
#[derive(Debug, Clone)]
pub struct YearMetrics {
    pub year: i32,
    pub raw_word_count: BTreeMap<SourceFormat, u64>,
    pub raw_chars_per_word: BTreeMap<SourceFormat, Rat>,
    /// The single comprehensive value: adjusted SRC before the splice
    /// year, raw XHTML from it onward.
    pub adjusted_word_count: u64,
    pub chosen_chars_per_word: Rat,
}

/// One row of the consolidated series.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub year: i32,
    pub word_count: u64,
    pub chars_per_word: Rat,
    /// Absent exactly for the earliest year.
    pub growth_word_percent: Option<Rat>,
    pub growth_chars_permille: Option<Rat>,
}

/// Ordered yearly rows with growth columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    rows: Vec<ReportRow>,
}

impl SeriesReport {
    /// Validates the structural invariants: rows strictly ordered by
    /// year with no gaps, growth fields absent exactly for the earliest
    /// year.
    pub fn new(rows: Vec<ReportRow>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if i == 0 {
                if row.growth_word_percent.is_some() || row.growth_chars_permille.is_some() {
                    return Err(Error::Input(format!(
                        "first row ({}) must not carry growth fields",
                        row.year
                    )));
                }
                continue;
            }
            if row.year != rows[i - 1].year + 1 {
                return Err(Error::Input(format!(
                    "year gap between {} and {}",
                    rows[i - 1].year,
                    row.year
                )));
            }
            if row.growth_word_percent.is_none() || row.growth_chars_permille.is_none() {
                return Err(Error::Input(format!(
                    "row {} is missing growth fields",
                    row.year
                )));
            }
        }
        Ok(SeriesReport { rows })
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}
