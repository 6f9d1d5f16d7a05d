//! Section extraction from the legacy one-file-per-year SRC payloads
//! (1991-2009).
//!
//! The files interleave typesetting locator codes with field marker
//! lines (`-CITE-`, `-HEAD-`, `-STATUTE-`, `-SOURCE-`, `-MISC1-`, ...).
//! The marker classification lives in the rule table under the
//! `marker:` namespace and mirrors the XHTML block kinds; one grammar
//! serves all years, since the calibration multiplier presumes a
//! systematic, stable bias on this side.

use crate::counter::{count_text_with, SeparatorSet};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::ingest::{decode_text, read_member};
use crate::model::{SectionText, SourceFormat, TokenStats, YearArchive};
use crate::rules::{BlockKind, RuleTable};
use crate::xhtml::{normalize_ws, parse_section_id};

/// One raw line split into its leading locator-code run and the
/// payload; concatenating the two reproduces the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatorLine<'a> {
    pub control_prefix: &'a str,
    pub payload: &'a str,
}

fn is_locator_control(c: char) -> bool {
    c.is_control() && c != '\t'
}

/// Splits off the maximal leading run of locator units. A unit is one
/// control character followed by up to eight uppercase-alphanumeric
/// code characters; lowercase text after a control char stays payload.
pub fn split_locator(line: &str) -> LocatorLine<'_> {
    let mut i = 0;
    while let Some(c) = line[i..].chars().next() {
        if !is_locator_control(c) {
            break;
        }
        i += c.len_utf8();
        let mut taken = 0;
        while taken < 8 {
            match line[i..].chars().next() {
                Some(c2) if c2.is_ascii_uppercase() || c2.is_ascii_digit() => {
                    i += 1;
                    taken += 1;
                }
                _ => break,
            }
        }
    }
    LocatorLine {
        control_prefix: &line[..i],
        payload: &line[i..],
    }
}

/// A field marker line like `-HEAD-`: at least two characters between
/// the dashes, the first alphabetic.
fn marker_name(payload: &str) -> Option<&str> {
    let inner = payload.trim().strip_prefix('-')?.strip_suffix('-')?;
    if inner.len() >= 2
        && inner.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && inner.chars().all(|c| c.is_ascii_alphanumeric())
    {
        Some(inner)
    } else {
        None
    }
}

/// Matches the section-headline grammar: an optional bracket, then a
/// section sign or a `Sec.`/`Secs.` designator, then an identifier.
fn is_section_headline(text: &str) -> bool {
    let mut rest = text.trim_start();
    rest = rest.trim_start_matches(['[', '(']).trim_start();
    let mut designated = false;
    while let Some(r) = rest.strip_prefix('\u{a7}') {
        rest = r.trim_start();
        designated = true;
    }
    if !designated {
        let lower = rest.to_ascii_lowercase();
        for prefix in ["secs.", "sec."] {
            if lower.starts_with(prefix) {
                rest = rest[prefix.len()..].trim_start();
                designated = true;
                break;
            }
        }
    }
    designated && rest.chars().next().is_some_and(|c| c.is_ascii_alphanumeric())
}

fn parse_src_title(line: &str) -> Option<String> {
    let upper = line.trim().to_ascii_uppercase();
    let after = upper.strip_prefix("TITLE ")?;
    let token: String = after
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect();
    if token.is_empty() || !token.chars().next().unwrap().is_ascii_digit() {
        return None;
    }
    let mut title = token.to_ascii_lowercase();
    let stripped = title.trim_start_matches('0').to_string();
    title = if stripped.is_empty() { "0".into() } else { stripped };
    if upper.contains("APPENDIX") && !title.ends_with('a') {
        title.push('a');
    }
    Some(title)
}

struct SrcSection {
    title: String,
    raw: String,
    head: String,
}

impl SrcSection {
    fn finish(self) -> Option<SectionText> {
        let countable = normalize_ws(&self.raw);
        if countable.is_empty() {
            return None;
        }
        Some(SectionText {
            title_number: self.title,
            section_id: parse_section_id(&normalize_ws(&self.head)),
            countable_text: countable,
        })
    }
}

/// Extracts every section's countable span from one decoded SRC
/// document. Nothing here is fatal; unmatched regions are diagnosed
/// and skipped.
pub fn extract_sections_src(
    document: &str,
    member: &str,
    rules: &RuleTable,
    diag: &mut Diagnostics,
) -> Vec<SectionText> {
    let mut sections = Vec::new();
    let mut open: Option<SrcSection> = None;
    let mut excluded_since_head = false;
    let mut title = String::new();
    let mut field: Option<(String, BlockKind)> = None;
    let mut head_buf = String::new();
    let mut orphan_diagnosed = false;
    let mut offset = 0usize;

    fn close(open: &mut Option<SrcSection>, out: &mut Vec<SectionText>) {
        if let Some(s) = open.take() {
            if let Some(sec) = s.finish() {
                out.push(sec);
            }
        }
    }

    // Finalizes a completed -HEAD- field: a headline opens a section,
    // anything else is a structural head and closes the window.
    fn finish_head(
        head_buf: &mut String,
        open: &mut Option<SrcSection>,
        sections: &mut Vec<SectionText>,
        excluded: &mut bool,
        title: &str,
    ) {
        let headline = normalize_ws(head_buf);
        head_buf.clear();
        close(open, sections);
        *excluded = false;
        if is_section_headline(&headline) {
            let mut s = SrcSection {
                title: title.to_string(),
                raw: String::new(),
                head: headline.clone(),
            };
            s.raw.push_str(&headline);
            *open = Some(s);
        }
    }

    for line in document.split('\n') {
        let line_offset = offset;
        offset += line.len() + 1;
        let payload = split_locator(line.strip_suffix('\r').unwrap_or(line)).payload;

        if let Some(name) = marker_name(payload) {
            if let Some((_, BlockKind::SectionHead)) = field {
                finish_head(
                    &mut head_buf,
                    &mut open,
                    &mut sections,
                    &mut excluded_since_head,
                    &title,
                );
            }
            let kind = match rules.match_marker(name) {
                Some(k) => k,
                None => {
                    diag.parse(
                        member,
                        line_offset,
                        format!("unknown marker -{name}- treated as annotation"),
                    );
                    BlockKind::Note
                }
            };
            match kind {
                BlockKind::SectionHead => head_buf.clear(),
                BlockKind::Note | BlockKind::SourceCredit | BlockKind::AmendmentHistory => {
                    close(&mut open, &mut sections);
                    excluded_since_head = true;
                }
                BlockKind::StructuralHead => {
                    close(&mut open, &mut sections);
                    excluded_since_head = false;
                }
                BlockKind::StatutoryBody | BlockKind::ChartOrFigure | BlockKind::Other => {}
            }
            field = Some((name.to_string(), kind));
            orphan_diagnosed = false;
            continue;
        }

        match field.as_ref().map(|(_, k)| *k) {
            Some(BlockKind::SectionHead) => {
                head_buf.push_str(payload);
                head_buf.push('\n');
            }
            Some(BlockKind::StatutoryBody) => {
                if let Some(s) = open.as_mut() {
                    s.raw.push('\n');
                    s.raw.push_str(payload);
                } else if excluded_since_head && !orphan_diagnosed && !payload.trim().is_empty() {
                    diag.parse(
                        member,
                        line_offset,
                        "orphan statute text after excluded region skipped",
                    );
                    orphan_diagnosed = true;
                }
            }
            Some(BlockKind::StructuralHead) => {
                if let Some(t) = parse_src_title(payload) {
                    title = t;
                }
            }
            _ => {}
        }
    }
    if let Some((_, BlockKind::SectionHead)) = field {
        finish_head(
            &mut head_buf,
            &mut open,
            &mut sections,
            &mut excluded_since_head,
            &title,
        );
    }
    close(&mut open, &mut sections);
    sections
}

/// Extracts the sections of every member of an SRC year, in member
/// order.
pub fn extract_year_sections_src(
    archive: &YearArchive,
    rules: &RuleTable,
    diag: &mut Diagnostics,
) -> Result<Vec<SectionText>> {
    if archive.format != SourceFormat::Src {
        return Err(Error::Input(format!(
            "SRC extraction needs an SRC archive, got {}",
            archive.format
        )));
    }
    let mut out = Vec::new();
    for file in &archive.files {
        let bytes = read_member(archive, &file.path)?;
        let decoded = decode_text(&bytes, SourceFormat::Src, None);
        diag.replacements(archive.year, SourceFormat::Src, decoded.replacements);
        out.extend(extract_sections_src(&decoded.text, &file.path, rules, diag));
    }
    Ok(out)
}

/// Token statistics over all extracted sections of the year.
pub fn count_year_src(
    archive: &YearArchive,
    rules: &RuleTable,
    seps: &SeparatorSet,
    diag: &mut Diagnostics,
) -> Result<TokenStats> {
    let sections = extract_year_sections_src(archive, rules, diag)?;
    Ok(sections
        .iter()
        .map(|s| count_text_with(&s.countable_text, seps))
        .fold(TokenStats::default(), TokenStats::merge))
}
