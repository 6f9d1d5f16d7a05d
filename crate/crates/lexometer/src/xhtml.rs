//! Section extraction from the annual XHTML document sets.
//!
//! The counting window of a section runs from its headline block to the
//! last statutory-body block before an excluded region (source credit,
//! note, amendment history) or the next section/structural head. Charts
//! and figures are skipped wholesale without closing the window. The
//! markup handling is deliberately lenient: an unparseable region is
//! skipped with a diagnostic and extraction continues.
//!
//! Only the block/inline distinction matters. Block boundaries
//! contribute one whitespace separator; inline markup is stripped with
//! no separator so that footnote markers and similar glue to their
//! word, exactly as a plain tag-strip would behave.

use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::counter::{count_text_with, SeparatorSet};
use crate::diag::Diagnostics;
use crate::error::{Error, Result};
use crate::ingest::{decode_text, read_member, CP1252_HIGH};
use crate::model::{SectionText, SourceFormat, TokenStats, YearArchive};
use crate::rules::{BlockKind, RuleTable};

/// Totals for one year with the per-title breakdown.
#[derive(Debug, Clone, Default)]
pub struct YearCount {
    pub total: TokenStats,
    pub per_title: BTreeMap<String, TokenStats>,
    pub sections: u64,
}

// ---------------------------------------------------------------------
// Lenient tokenizer
// ---------------------------------------------------------------------

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Start {
        name: &'a str,
        class: Option<&'a str>,
        self_closing: bool,
    },
    End {
        name: &'a str,
    },
    Comment(&'a str),
    Text(&'a str),
}

struct Tokenizer<'a> {
    doc: &'a str,
    pos: usize,
    issues: Vec<(usize, &'static str)>,
}

fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'-' || b == b':' || b == b'_'
}

impl<'a> Tokenizer<'a> {
    fn new(doc: &'a str) -> Self {
        Tokenizer {
            doc,
            pos: 0,
            issues: Vec::new(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.doc[self.pos..]
    }

    fn find_from(&self, needle: &str) -> Option<usize> {
        self.rest().find(needle).map(|i| self.pos + i)
    }

    fn next_token(&mut self) -> Option<(usize, Tok<'a>)> {
        let bytes = self.doc.as_bytes();
        if self.pos >= bytes.len() {
            return None;
        }
        let start = self.pos;
        if bytes[self.pos] != b'<' {
            let end = self.find_from("<").unwrap_or(self.doc.len());
            self.pos = end;
            return Some((start, Tok::Text(&self.doc[start..end])));
        }

        let rest = self.rest();
        if let Some(body) = rest.strip_prefix("<!--") {
            return Some(match body.find("-->") {
                Some(i) => {
                    let inner = &self.doc[self.pos + 4..self.pos + 4 + i];
                    self.pos += 4 + i + 3;
                    (start, Tok::Comment(inner))
                }
                None => {
                    self.issues.push((start, "unterminated comment"));
                    let inner = &self.doc[self.pos + 4..];
                    self.pos = self.doc.len();
                    (start, Tok::Comment(inner))
                }
            });
        }
        if rest.starts_with("<![CDATA[") {
            return Some(match self.rest()[9..].find("]]>") {
                Some(i) => {
                    let inner = &self.doc[self.pos + 9..self.pos + 9 + i];
                    self.pos += 9 + i + 3;
                    (start, Tok::Text(inner))
                }
                None => {
                    self.issues.push((start, "unterminated CDATA section"));
                    let inner = &self.doc[self.pos + 9..];
                    self.pos = self.doc.len();
                    (start, Tok::Text(inner))
                }
            });
        }
        if rest.starts_with("<!") || rest.starts_with("<?") {
            match self.find_from(">") {
                Some(i) => self.pos = i + 1,
                None => {
                    self.issues.push((start, "unterminated declaration"));
                    self.pos = self.doc.len();
                }
            }
            return self.next_token();
        }
        if let Some(after) = rest.strip_prefix("</") {
            let name_len = after.bytes().take_while(|&b| is_name_byte(b)).count();
            let name = &self.doc[self.pos + 2..self.pos + 2 + name_len];
            match self.find_from(">") {
                Some(i) => self.pos = i + 1,
                None => {
                    self.issues.push((start, "unterminated end tag"));
                    self.pos = self.doc.len();
                }
            }
            return Some((start, Tok::End { name }));
        }
        if rest.len() > 1 && rest.as_bytes()[1].is_ascii_alphabetic() {
            return Some((start, self.parse_start_tag()));
        }
        // Stray '<': emit as literal text.
        self.pos += 1;
        Some((start, Tok::Text(&self.doc[start..start + 1])))
    }

    fn parse_start_tag(&mut self) -> Tok<'a> {
        let bytes = self.doc.as_bytes();
        let tag_start = self.pos;
        self.pos += 1; // consume '<'
        let name_start = self.pos;
        while self.pos < bytes.len() && is_name_byte(bytes[self.pos]) {
            self.pos += 1;
        }
        let name = &self.doc[name_start..self.pos];
        let mut class = None;
        let mut self_closing = false;
        loop {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos >= bytes.len() {
                self.issues.push((tag_start, "unterminated start tag"));
                break;
            }
            match bytes[self.pos] {
                b'>' => {
                    self.pos += 1;
                    break;
                }
                b'/' => {
                    self_closing = true;
                    self.pos += 1;
                }
                _ => {
                    let attr_start = self.pos;
                    while self.pos < bytes.len()
                        && !bytes[self.pos].is_ascii_whitespace()
                        && !matches!(bytes[self.pos], b'=' | b'>' | b'/')
                    {
                        self.pos += 1;
                    }
                    let attr_name = &self.doc[attr_start..self.pos];
                    while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
                        self.pos += 1;
                    }
                    let mut value = None;
                    if self.pos < bytes.len() && bytes[self.pos] == b'=' {
                        self.pos += 1;
                        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
                            self.pos += 1;
                        }
                        if self.pos < bytes.len()
                            && (bytes[self.pos] == b'"' || bytes[self.pos] == b'\'')
                        {
                            let quote = bytes[self.pos];
                            self.pos += 1;
                            let v_start = self.pos;
                            while self.pos < bytes.len() && bytes[self.pos] != quote {
                                self.pos += 1;
                            }
                            value = Some(&self.doc[v_start..self.pos]);
                            if self.pos < bytes.len() {
                                self.pos += 1; // closing quote
                            } else {
                                self.issues.push((tag_start, "unterminated attribute value"));
                            }
                        } else {
                            let v_start = self.pos;
                            while self.pos < bytes.len()
                                && !bytes[self.pos].is_ascii_whitespace()
                                && !matches!(bytes[self.pos], b'>' | b'/')
                            {
                                self.pos += 1;
                            }
                            value = Some(&self.doc[v_start..self.pos]);
                        }
                    }
                    if attr_name.eq_ignore_ascii_case("class") {
                        class = value;
                    }
                    if attr_name.is_empty() {
                        // Junk byte that is neither name nor delimiter.
                        self.pos += 1;
                    }
                }
            }
        }
        Tok::Start {
            name,
            class,
            self_closing,
        }
    }
}

// ---------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------

fn named_entity(name: &str) -> Option<char> {
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => '\u{a0}',
        "ensp" => '\u{2002}',
        "emsp" => '\u{2003}',
        "thinsp" => '\u{2009}',
        "shy" => '\u{ad}',
        "zwnj" => '\u{200c}',
        "zwj" => '\u{200d}',
        "lrm" => '\u{200e}',
        "rlm" => '\u{200f}',
        "ndash" => '\u{2013}',
        "mdash" => '\u{2014}',
        "horbar" => '\u{2015}',
        "hyphen" => '\u{2010}',
        "lsquo" => '\u{2018}',
        "rsquo" => '\u{2019}',
        "sbquo" => '\u{201a}',
        "ldquo" => '\u{201c}',
        "rdquo" => '\u{201d}',
        "bdquo" => '\u{201e}',
        "dagger" => '\u{2020}',
        "Dagger" => '\u{2021}',
        "bull" => '\u{2022}',
        "hellip" => '\u{2026}',
        "permil" => '\u{2030}',
        "prime" => '\u{2032}',
        "Prime" => '\u{2033}',
        "lsaquo" => '\u{2039}',
        "rsaquo" => '\u{203a}',
        "oline" => '\u{203e}',
        "frasl" => '\u{2044}',
        "euro" => '\u{20ac}',
        "trade" => '\u{2122}',
        "minus" => '\u{2212}',
        "lowast" => '\u{2217}',
        "radic" => '\u{221a}',
        "prop" => '\u{221d}',
        "infin" => '\u{221e}',
        "asymp" => '\u{2248}',
        "ne" => '\u{2260}',
        "equiv" => '\u{2261}',
        "le" => '\u{2264}',
        "ge" => '\u{2265}',
        "times" => '\u{d7}',
        "divide" => '\u{f7}',
        "fnof" => '\u{192}',
        "circ" => '\u{2c6}',
        "tilde" => '\u{2dc}',
        "OElig" => '\u{152}',
        "oelig" => '\u{153}',
        "Scaron" => '\u{160}',
        "scaron" => '\u{161}',
        "Yuml" => '\u{178}',
        "iexcl" => '\u{a1}',
        "cent" => '\u{a2}',
        "pound" => '\u{a3}',
        "curren" => '\u{a4}',
        "yen" => '\u{a5}',
        "brvbar" => '\u{a6}',
        "sect" => '\u{a7}',
        "uml" => '\u{a8}',
        "copy" => '\u{a9}',
        "ordf" => '\u{aa}',
        "laquo" => '\u{ab}',
        "not" => '\u{ac}',
        "reg" => '\u{ae}',
        "macr" => '\u{af}',
        "deg" => '\u{b0}',
        "plusmn" => '\u{b1}',
        "sup2" => '\u{b2}',
        "sup3" => '\u{b3}',
        "acute" => '\u{b4}',
        "micro" => '\u{b5}',
        "para" => '\u{b6}',
        "middot" => '\u{b7}',
        "cedil" => '\u{b8}',
        "sup1" => '\u{b9}',
        "ordm" => '\u{ba}',
        "raquo" => '\u{bb}',
        "frac14" => '\u{bc}',
        "frac12" => '\u{bd}',
        "frac34" => '\u{be}',
        "iquest" => '\u{bf}',
        "Agrave" => '\u{c0}',
        "Aacute" => '\u{c1}',
        "Acirc" => '\u{c2}',
        "Atilde" => '\u{c3}',
        "Auml" => '\u{c4}',
        "Aring" => '\u{c5}',
        "AElig" => '\u{c6}',
        "Ccedil" => '\u{c7}',
        "Egrave" => '\u{c8}',
        "Eacute" => '\u{c9}',
        "Ecirc" => '\u{ca}',
        "Euml" => '\u{cb}',
        "Igrave" => '\u{cc}',
        "Iacute" => '\u{cd}',
        "Icirc" => '\u{ce}',
        "Iuml" => '\u{cf}',
        "ETH" => '\u{d0}',
        "Ntilde" => '\u{d1}',
        "Ograve" => '\u{d2}',
        "Oacute" => '\u{d3}',
        "Ocirc" => '\u{d4}',
        "Otilde" => '\u{d5}',
        "Ouml" => '\u{d6}',
        "Oslash" => '\u{d8}',
        "Ugrave" => '\u{d9}',
        "Uacute" => '\u{da}',
        "Ucirc" => '\u{db}',
        "Uuml" => '\u{dc}',
        "Yacute" => '\u{dd}',
        "THORN" => '\u{de}',
        "szlig" => '\u{df}',
        "agrave" => '\u{e0}',
        "aacute" => '\u{e1}',
        "acirc" => '\u{e2}',
        "atilde" => '\u{e3}',
        "auml" => '\u{e4}',
        "aring" => '\u{e5}',
        "aelig" => '\u{e6}',
        "ccedil" => '\u{e7}',
        "egrave" => '\u{e8}',
        "eacute" => '\u{e9}',
        "ecirc" => '\u{ea}',
        "euml" => '\u{eb}',
        "igrave" => '\u{ec}',
        "iacute" => '\u{ed}',
        "icirc" => '\u{ee}',
        "iuml" => '\u{ef}',
        "eth" => '\u{f0}',
        "ntilde" => '\u{f1}',
        "ograve" => '\u{f2}',
        "oacute" => '\u{f3}',
        "ocirc" => '\u{f4}',
        "otilde" => '\u{f5}',
        "ouml" => '\u{f6}',
        "oslash" => '\u{f8}',
        "ugrave" => '\u{f9}',
        "uacute" => '\u{fa}',
        "ucirc" => '\u{fb}',
        "uuml" => '\u{fc}',
        "yacute" => '\u{fd}',
        "thorn" => '\u{fe}',
        "yuml" => '\u{ff}',
        _ => return None,
    })
}

fn numeric_entity(body: &str) -> Option<char> {
    let cp = if let Some(hex) = body.strip_prefix('x').or_else(|| body.strip_prefix('X')) {
        u32::from_str_radix(hex, 16).ok()?
    } else {
        body.parse::<u32>().ok()?
    };
    // Legacy numeric references in the 0x80-0x9F window mean the
    // Windows-1252 graphics (an em dash is often &#151;).
    if (0x80..=0x9f).contains(&cp) {
        return Some(CP1252_HIGH[(cp - 0x80) as usize]);
    }
    char::from_u32(cp)
}

/// Decodes character references; unknown names pass through literally.
pub fn decode_entities(text: &str) -> Cow<'_, str> {
    if !text.contains('&') {
        return Cow::Borrowed(text);
    }
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp + 1..];
        let semi = tail
            .char_indices()
            .take(40)
            .find(|(_, c)| !c.is_ascii_alphanumeric() && *c != '#')
            .filter(|(_, c)| *c == ';')
            .map(|(i, _)| i);
        match semi {
            Some(i) => {
                let body = &tail[..i];
                let decoded = body
                    .strip_prefix('#')
                    .map_or_else(|| named_entity(body), numeric_entity);
                match decoded {
                    Some(c) => out.push(c),
                    None => {
                        out.push('&');
                        out.push_str(body);
                        out.push(';');
                    }
                }
                rest = &tail[i + 1..];
            }
            None => {
                out.push('&');
                rest = tail;
            }
        }
    }
    out.push_str(rest);
    Cow::Owned(out)
}

// ---------------------------------------------------------------------
// Section extraction
// ---------------------------------------------------------------------

const BLOCK_ELEMENTS: &[&str] = &[
    "address", "article", "aside", "blockquote", "caption", "center", "dd", "div", "dl", "dt",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "header", "li", "nav", "ol", "p", "pre", "section", "table", "tbody", "td", "tfoot", "th",
    "thead", "tr", "ul",
];

const VOID_ELEMENTS: &[&str] = &[
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source",
    "track", "wbr",
];

fn is_block_element(name: &str) -> bool {
    BLOCK_ELEMENTS.iter().any(|b| name.eq_ignore_ascii_case(b))
}

fn is_void_element(name: &str) -> bool {
    VOID_ELEMENTS.iter().any(|v| name.eq_ignore_ascii_case(v))
}

struct OpenBlock {
    name: String,
    kind: BlockKind,
}

struct SectionBuilder {
    title: String,
    raw: String,
    head_raw: String,
    in_head: bool,
}

impl SectionBuilder {
    fn new(title: String) -> Self {
        SectionBuilder {
            title,
            raw: String::new(),
            head_raw: String::new(),
            in_head: true,
        }
    }

    fn push_text(&mut self, text: &str) {
        self.raw.push_str(text);
        if self.in_head {
            self.head_raw.push_str(text);
        }
    }

    fn push_boundary(&mut self) {
        self.raw.push('\n');
    }

    fn finish(self) -> Option<SectionText> {
        let countable: String = normalize_ws(&self.raw);
        if countable.is_empty() {
            return None;
        }
        let headline = normalize_ws(&self.head_raw);
        Some(SectionText {
            title_number: self.title,
            section_id: parse_section_id(&headline),
            countable_text: countable,
        })
    }
}

pub(crate) fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Extracts the section identifier from a headline such as
/// `§ 1401. Definitions` or `Sec. 2000aa-1. Policy`.
pub(crate) fn parse_section_id(headline: &str) -> String {
    let mut rest = headline.trim_start();
    rest = rest.trim_start_matches(['[', '(']).trim_start();
    loop {
        if let Some(r) = rest.strip_prefix('\u{a7}') {
            rest = r.trim_start();
            continue;
        }
        let lower = rest.to_ascii_lowercase();
        if lower.starts_with("secs.") {
            rest = rest["secs.".len()..].trim_start();
            continue;
        }
        if lower.starts_with("sec.") {
            rest = rest["sec.".len()..].trim_start();
            continue;
        }
        break;
    }
    rest.chars()
        .take_while(|c| c.is_ascii_alphanumeric() || *c == '-' || *c == '\u{2013}')
        .collect::<String>()
        .trim_end_matches('.')
        .to_string()
}

/// Parses the title designator from an `expcite:` comment, e.g.
/// `TITLE 26-INTERNAL REVENUE CODE!@!...` yields `26`; appendix volumes
/// carry an `a` suffix.
fn parse_expcite_title(body: &str) -> Option<String> {
    let body = body.trim();
    let rest = body.strip_prefix("expcite:")?.trim_start();
    let upper = rest.to_ascii_uppercase();
    let after = upper.strip_prefix("TITLE ")?;
    let token: String = after
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect();
    if token.is_empty() {
        return None;
    }
    let head_segment = after.split("!@!").next().unwrap_or(after);
    let mut title = normalize_title_token(&token);
    if head_segment.contains("APPENDIX") && !title.ends_with('a') {
        title.push('a');
    }
    Some(title)
}

fn normalize_title_token(token: &str) -> String {
    let t = token.to_ascii_lowercase();
    let trimmed = t.trim_start_matches('0');
    if trimmed.is_empty() {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

/// Derives a title key from a member path like `2018usc05A.htm`.
fn title_from_member(member: &str) -> Option<String> {
    let stem = member
        .rsplit('/')
        .next()
        .unwrap_or(member)
        .rsplit_once('.')
        .map(|(s, _)| s)
        .unwrap_or(member);
    let lower = stem.to_ascii_lowercase();
    let pos = lower.find("usc")?;
    let token: String = lower[pos + 3..]
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect();
    if token.is_empty() || !token.chars().next().unwrap().is_ascii_digit() {
        return None;
    }
    Some(normalize_title_token(&token))
}

/// Extracts every section's countable span from one decoded document.
pub fn extract_sections(
    document: &str,
    member: &str,
    rules: &RuleTable,
    diag: &mut Diagnostics,
) -> Vec<SectionText> {
    let mut tok = Tokenizer::new(document);
    let mut sections: Vec<SectionText> = Vec::new();
    let mut stack: Vec<OpenBlock> = Vec::new();
    let mut fields: Vec<String> = Vec::new();
    let mut skip_from: Option<usize> = None;
    let mut open: Option<SectionBuilder> = None;
    let mut excluded_since_head = false;
    let mut title = String::new();

    fn close(open: &mut Option<SectionBuilder>, out: &mut Vec<SectionText>) {
        if let Some(b) = open.take() {
            if let Some(s) = b.finish() {
                out.push(s);
            }
        }
    }

    while let Some((offset, t)) = tok.next_token() {
        match t {
            Tok::Comment(body) => {
                let trimmed = body.trim();
                if let Some(name) = trimmed.strip_prefix("field-start:") {
                    fields.push(name.trim().to_ascii_lowercase());
                } else if let Some(name) = trimmed.strip_prefix("field-end:") {
                    let name = name.trim().to_ascii_lowercase();
                    if let Some(i) = fields.iter().rposition(|f| *f == name) {
                        fields.truncate(i);
                    }
                } else if let Some(t) = parse_expcite_title(trimmed) {
                    title = t;
                }
            }
            Tok::Start {
                name,
                class,
                self_closing,
            } => {
                if is_void_element(name) {
                    if skip_from.is_some() {
                        continue;
                    }
                    // A void element is a boundary, not content. Images
                    // classify as charts and contribute nothing anyway.
                    if let Some(b) = open.as_mut() {
                        b.push_boundary();
                    }
                    continue;
                }
                if !is_block_element(name) {
                    continue; // inline markup is stripped, no separator
                }
                if skip_from.is_some() {
                    if !self_closing {
                        stack.push(OpenBlock {
                            name: name.to_ascii_lowercase(),
                            kind: BlockKind::ChartOrFigure,
                        });
                    }
                    continue;
                }
                let kind = rules.classify_block(name, class, fields.last().map(String::as_str));
                match kind {
                    BlockKind::SectionHead => {
                        close(&mut open, &mut sections);
                        open = Some(SectionBuilder::new(title.clone()));
                        excluded_since_head = false;
                    }
                    BlockKind::StatutoryBody => {
                        // An exclusion transition closed the window, so
                        // a body block here is an orphan.
                        if excluded_since_head {
                            diag.parse(
                                member,
                                offset,
                                "orphan statutory block after excluded region skipped",
                            );
                        } else if let Some(b) = open.as_mut() {
                            b.push_boundary();
                        }
                    }
                    BlockKind::StructuralHead => {
                        close(&mut open, &mut sections);
                        excluded_since_head = false;
                    }
                    BlockKind::Note | BlockKind::SourceCredit | BlockKind::AmendmentHistory => {
                        close(&mut open, &mut sections);
                        excluded_since_head = true;
                    }
                    BlockKind::ChartOrFigure => {
                        if !self_closing {
                            skip_from = Some(stack.len());
                        }
                    }
                    BlockKind::Other => {
                        if let Some(b) = open.as_mut() {
                            b.push_boundary();
                        }
                    }
                }
                if !self_closing {
                    stack.push(OpenBlock {
                        name: name.to_ascii_lowercase(),
                        kind,
                    });
                }
            }
            Tok::End { name } => {
                if is_void_element(name) || !is_block_element(name) {
                    continue;
                }
                let lower = name.to_ascii_lowercase();
                if let Some(i) = stack.iter().rposition(|b| b.name == lower) {
                    let popped_head = stack[i..].iter().any(|b| b.kind == BlockKind::SectionHead);
                    stack.truncate(i);
                    if let Some(from) = skip_from {
                        if stack.len() <= from {
                            skip_from = None;
                        }
                    }
                    if let Some(b) = open.as_mut() {
                        if popped_head {
                            b.in_head = false;
                        }
                        b.push_boundary();
                    }
                }
            }
            Tok::Text(raw) => {
                if skip_from.is_some() {
                    continue;
                }
                let countable = stack
                    .last()
                    .map(|b| b.kind.is_countable())
                    .unwrap_or(false);
                if !countable {
                    continue;
                }
                if let Some(b) = open.as_mut() {
                    b.push_text(&decode_entities(raw));
                }
            }
        }
    }
    close(&mut open, &mut sections);
    for (offset, message) in tok.issues {
        diag.parse(member, offset, message);
    }
    sections
}

fn is_document_member(path: &str) -> bool {
    let lower = path.to_ascii_lowercase();
    lower.ends_with(".htm") || lower.ends_with(".html")
}

/// Extracts the sections of every candidate document member, in member
/// order.
pub fn extract_year_sections(
    archive: &YearArchive,
    rules: &RuleTable,
    diag: &mut Diagnostics,
) -> Result<Vec<SectionText>> {
    let mut out = Vec::new();
    let mut replacements = 0u64;
    for file in &archive.files {
        if !is_document_member(&file.path) {
            diag.parse(&file.path, 0, "ignored non-document member");
            continue;
        }
        let bytes = read_member(archive, &file.path)?;
        let decoded = decode_text(&bytes, SourceFormat::Xhtml, None);
        replacements += decoded.replacements;
        let member_title = title_from_member(&file.path);
        for mut section in extract_sections(&decoded.text, &file.path, rules, diag) {
            if section.title_number.is_empty() {
                if let Some(t) = &member_title {
                    section.title_number = t.clone();
                }
            }
            out.push(section);
        }
    }
    diag.replacements(archive.year, SourceFormat::Xhtml, replacements);
    Ok(out)
}

/// Sums token statistics over all sections of every candidate member.
/// Member processing order never affects the totals.
pub fn count_year_xhtml(
    archive: &YearArchive,
    rules: &RuleTable,
    seps: &SeparatorSet,
    diag: &mut Diagnostics,
) -> Result<YearCount> {
    if archive.format != SourceFormat::Xhtml {
        return Err(Error::Input(format!(
            "count_year_xhtml needs an XHTML archive, got {}",
            archive.format
        )));
    }
    let mut count = YearCount::default();
    let mut replacements = 0u64;
    for file in &archive.files {
        if !is_document_member(&file.path) {
            diag.parse(&file.path, 0, "ignored non-document member");
            continue;
        }
        let bytes = read_member(archive, &file.path)?;
        let decoded = decode_text(&bytes, SourceFormat::Xhtml, None);
        replacements += decoded.replacements;
        let member_title = title_from_member(&file.path);
        for section in extract_sections(&decoded.text, &file.path, rules, diag) {
            let stats = count_text_with(&section.countable_text, seps);
            let key = if !section.title_number.is_empty() {
                section.title_number.clone()
            } else {
                member_title
                    .clone()
                    .unwrap_or_else(|| file.path.clone())
            };
            count.total = count.total.merge(stats);
            let slot = count.per_title.entry(key).or_default();
            *slot = slot.merge(stats);
            count.sections += 1;
        }
    }
    diag.replacements(archive.year, SourceFormat::Xhtml, replacements);
    Ok(count)
}
