//! Archive discovery, unpacking and text decoding.
//!
//! Corpus root convention: `<root>/<year>.zip` for the annual XHTML
//! archives; `<root>/USC<year>/...​.SRC` or `<root>/USC<year>.SRC` for
//! the extracted legacy payloads. ISO9660 images are consumed after
//! external extraction, never read directly.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use zip::ZipArchive;

use crate::error::{Error, Result};
use crate::model::{ArchiveFile, SourceFormat, YearArchive};

/// Discovered per-year containers under one corpus root.
#[derive(Debug, Clone)]
pub struct CorpusLayout {
    pub root: PathBuf,
    /// Sorted by (year, format); each (year, format) pair appears once.
    pub entries: Vec<LayoutEntry>,
}

#[derive(Debug, Clone)]
pub struct LayoutEntry {
    pub year: i32,
    pub format: SourceFormat,
    pub container: PathBuf,
}

impl CorpusLayout {
    pub fn find(&self, year: i32, format: SourceFormat) -> Option<&LayoutEntry> {
        self.entries
            .iter()
            .find(|e| e.year == year && e.format == format)
    }

    pub fn years(&self) -> Vec<i32> {
        let mut years: Vec<i32> = self.entries.iter().map(|e| e.year).collect();
        years.dedup();
        years
    }
}

fn parse_zip_year(name: &str) -> Option<i32> {
    let stem = name.strip_suffix(".zip").or_else(|| name.strip_suffix(".ZIP"))?;
    if stem.len() != 4 || !stem.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    stem.parse().ok()
}

fn parse_usc_year(stem: &str) -> Option<i32> {
    let rest = stem
        .strip_prefix("USC")
        .or_else(|| stem.strip_prefix("usc"))
        .or_else(|| stem.strip_prefix("Usc"))?;
    if rest.len() != 4 || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn is_src_file(name: &str) -> bool {
    Path::new(name)
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("src"))
}

fn dir_contains_src(dir: &Path) -> Result<bool> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in rd {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_dir() {
            if dir_contains_src(&path)? {
                return Ok(true);
            }
        } else if path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(is_src_file)
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Scans one directory level of `root` for recognizable year containers:
/// `<year>.zip` files become XHTML entries; `USC<year>` directories
/// holding a `.SRC` file (any depth) or bare `USC<year>.SRC` files
/// become SRC entries. Only edition years 1991-2024 are recognized.
/// Deterministic: identical trees yield identical layouts.
pub fn discover_years(root: &Path) -> Result<CorpusLayout> {
    let rd = std::fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut found: BTreeMap<(i32, SourceFormat), PathBuf> = BTreeMap::new();
    let mut names: Vec<PathBuf> = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        names.push(entry.path());
    }
    names.sort();

    for path in names {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let mut matches: Vec<(i32, SourceFormat)> = Vec::new();
        if path.is_file() {
            if let Some(year) = parse_zip_year(name) {
                if (1991..=2024).contains(&year) {
                    matches.push((year, SourceFormat::Xhtml));
                }
            }
            if is_src_file(name) {
                if let Some(year) = Path::new(name)
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .and_then(parse_usc_year)
                {
                    if (1991..=2024).contains(&year) {
                        matches.push((year, SourceFormat::Src));
                    }
                }
            }
        } else if path.is_dir() {
            if let Some(year) = parse_usc_year(name) {
                if (1991..=2024).contains(&year) && dir_contains_src(&path)? {
                    matches.push((year, SourceFormat::Src));
                }
            }
        }
        if matches.len() > 1 {
            return Err(Error::LayoutConflict {
                year: matches[0].0,
                message: format!("{} matches multiple formats", path.display()),
            });
        }
        for key in matches {
            if let Some(existing) = found.get(&key) {
                return Err(Error::LayoutConflict {
                    year: key.0,
                    message: format!(
                        "both {} and {} provide ({}, {})",
                        existing.display(),
                        path.display(),
                        key.0,
                        key.1
                    ),
                });
            }
            found.insert(key, path.clone());
        }
    }

    let entries = found
        .into_iter()
        .map(|((year, format), container)| LayoutEntry {
            year,
            format,
            container,
        })
        .collect();
    Ok(CorpusLayout {
        root: root.to_path_buf(),
        entries,
    })
}

fn collect_src_files(dir: &Path, base: &Path, out: &mut Vec<ArchiveFile>) -> Result<()> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in rd {
        paths.push(entry.map_err(|e| Error::io(dir, e))?.path());
    }
    paths.sort();
    for path in paths {
        if path.is_dir() {
            collect_src_files(&path, base, out)?;
        } else if path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(is_src_file)
        {
            let meta = std::fs::metadata(&path).map_err(|e| Error::io(&path, e))?;
            let rel = path
                .strip_prefix(base)
                .expect("under base")
                .to_string_lossy()
                .replace('\\', "/");
            out.push(ArchiveFile {
                path: rel,
                len: meta.len(),
            });
        }
    }
    Ok(())
}

/// Opens a layout entry and lists its member files, sorted by relative
/// path with decompressed byte lengths recorded.
pub fn load_year(layout: &CorpusLayout, year: i32, format: SourceFormat) -> Result<YearArchive> {
    let entry = layout.find(year, format).ok_or_else(|| Error::NotFound {
        year,
        format: format.to_string(),
    })?;
    let container = entry.container.clone();
    let mut files = Vec::new();
    match format {
        SourceFormat::Xhtml => {
            let file = File::open(&container).map_err(|e| Error::io(&container, e))?;
            let mut archive = ZipArchive::new(file).map_err(|e| Error::Archive {
                container: container.clone(),
                member: None,
                message: e.to_string(),
            })?;
            for i in 0..archive.len() {
                let member = archive.by_index(i).map_err(|e| Error::Archive {
                    container: container.clone(),
                    member: Some(format!("#{i}")),
                    message: e.to_string(),
                })?;
                if member.is_dir() {
                    continue;
                }
                files.push(ArchiveFile {
                    path: member.name().replace('\\', "/"),
                    len: member.size(),
                });
            }
            files.sort_by(|a, b| a.path.cmp(&b.path));
        }
        SourceFormat::Src => {
            if container.is_dir() {
                collect_src_files(&container, &container, &mut files)?;
            } else {
                let meta = std::fs::metadata(&container).map_err(|e| Error::io(&container, e))?;
                files.push(ArchiveFile {
                    path: container
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    len: meta.len(),
                });
            }
        }
    }
    if files.is_empty() {
        return Err(Error::Archive {
            container,
            member: None,
            message: "no member files".into(),
        });
    }
    Ok(YearArchive {
        year,
        format,
        container,
        files,
    })
}

/// Reads one member's bytes from the archive's container.
pub fn read_member(archive: &YearArchive, rel_path: &str) -> Result<Vec<u8>> {
    match archive.format {
        SourceFormat::Xhtml => {
            let file =
                File::open(&archive.container).map_err(|e| Error::io(&archive.container, e))?;
            let mut zip = ZipArchive::new(file).map_err(|e| Error::Archive {
                container: archive.container.clone(),
                member: None,
                message: e.to_string(),
            })?;
            let mut member = zip.by_name(rel_path).map_err(|e| Error::Archive {
                container: archive.container.clone(),
                member: Some(rel_path.to_string()),
                message: e.to_string(),
            })?;
            let mut buf = Vec::with_capacity(member.size() as usize);
            member.read_to_end(&mut buf).map_err(|e| Error::Archive {
                container: archive.container.clone(),
                member: Some(rel_path.to_string()),
                message: e.to_string(),
            })?;
            Ok(buf)
        }
        SourceFormat::Src => {
            let path = if archive.container.is_dir() {
                archive.container.join(rel_path)
            } else {
                archive.container.clone()
            };
            std::fs::read(&path).map_err(|e| Error::io(&path, e))
        }
    }
}

/// Decoded text plus the number of undecodable byte sequences replaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub text: String,
    pub replacements: u64,
}

/// Windows-1252 graphics for 0x80-0x9F; the five unassigned bytes fall
/// through to their Latin-1 C1 positions so that every byte decodes.
pub(crate) const CP1252_HIGH: [char; 32] = [
    '\u{20ac}', '\u{81}', '\u{201a}', '\u{192}', '\u{201e}', '\u{2026}', '\u{2020}', '\u{2021}',
    '\u{2c6}', '\u{2030}', '\u{160}', '\u{2039}', '\u{152}', '\u{8d}', '\u{17d}', '\u{8f}',
    '\u{90}', '\u{2018}', '\u{2019}', '\u{201c}', '\u{201d}', '\u{2022}', '\u{2013}', '\u{2014}',
    '\u{2dc}', '\u{2122}', '\u{161}', '\u{203a}', '\u{153}', '\u{9d}', '\u{17e}', '\u{178}',
];

fn decode_western(raw: &[u8]) -> String {
    raw.iter()
        .map(|&b| match b {
            0x80..=0x9f => CP1252_HIGH[(b - 0x80) as usize],
            _ => b as char,
        })
        .collect()
}

fn decode_utf8_lossy_counted(raw: &[u8]) -> Decoded {
    let mut text = String::with_capacity(raw.len());
    let mut replacements = 0u64;
    let mut rest = raw;
    loop {
        match std::str::from_utf8(rest) {
            Ok(s) => {
                text.push_str(s);
                break;
            }
            Err(e) => {
                let valid = e.valid_up_to();
                text.push_str(std::str::from_utf8(&rest[..valid]).expect("valid prefix"));
                text.push('\u{fffd}');
                replacements += 1;
                let skip = valid + e.error_len().unwrap_or(rest.len() - valid);
                rest = &rest[skip..];
                if rest.is_empty() {
                    break;
                }
            }
        }
    }
    Decoded { text, replacements }
}

/// Scans the document prolog (first 2 KiB) for a `charset=` or XML
/// `encoding=` declaration.
pub fn sniff_charset(raw: &[u8]) -> Option<String> {
    let window = &raw[..raw.len().min(2048)];
    let lower: Vec<u8> = window.iter().map(|b| b.to_ascii_lowercase()).collect();
    for key in [b"charset=".as_slice(), b"encoding=".as_slice()] {
        if let Some(pos) = lower.windows(key.len()).position(|w| w == key) {
            let mut start = pos + key.len();
            while start < lower.len() && (lower[start] == b'"' || lower[start] == b'\'') {
                start += 1;
            }
            let mut end = start;
            while end < lower.len()
                && (lower[end].is_ascii_alphanumeric() || lower[end] == b'-' || lower[end] == b'_')
            {
                end += 1;
            }
            if end > start {
                return Some(String::from_utf8_lossy(&lower[start..end]).into_owned());
            }
        }
    }
    None
}

fn is_utf8_label(label: &str) -> bool {
    matches!(
        label.trim().to_ascii_lowercase().as_str(),
        "utf-8" | "utf8"
    )
}

/// Decodes raw bytes to text. XHTML honors a declared charset (the
/// parameter first, then the document prolog); everything else,
/// including all SRC payloads, uses the 8-bit Western fallback where
/// every byte decodes. Decoding never aborts: undecodable UTF-8
/// sequences become replacement characters and are tallied.
pub fn decode_text(
    raw: &[u8],
    format: SourceFormat,
    declared_charset: Option<&str>,
) -> Decoded {
    match format {
        SourceFormat::Src => Decoded {
            text: decode_western(raw),
            replacements: 0,
        },
        SourceFormat::Xhtml => {
            let label = declared_charset
                .map(str::to_string)
                .or_else(|| sniff_charset(raw));
            match label {
                Some(l) if is_utf8_label(&l) => decode_utf8_lossy_counted(raw),
                _ => Decoded {
                    text: decode_western(raw),
                    replacements: 0,
                },
            }
        }
    }
}
