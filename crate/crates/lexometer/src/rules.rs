//! The block classification table. Class vocabularies drift across 31
//! annual editions, so the mapping is data rather than code: an
//! embedded default table that an override file (first match wins) can
//! extend or reverse, line format `pattern<TAB>BlockKind`, `#` comments.
//!
//! Patterns are namespaced by prefix:
//!
//! * bare pattern - case-insensitive substring of the class attribute
//! * `field:` - substring of the comment-delimited field name
//! * `element:` - exact element name
//! * `marker:` - prefix of an SRC marker name (`-HEAD-`, `-MISC1-`, ...)

use std::path::Path;

use crate::error::{Error, Result};

/// Classification of one document block. Exactly `SectionHead` and
/// `StatutoryBody` are countable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    SectionHead,
    StatutoryBody,
    Note,
    SourceCredit,
    AmendmentHistory,
    ChartOrFigure,
    StructuralHead,
    Other,
}

impl BlockKind {
    pub fn is_countable(self) -> bool {
        matches!(self, BlockKind::SectionHead | BlockKind::StatutoryBody)
    }

    /// Kinds whose content is excluded from counts; entering one of
    /// these (except charts, which are merely skipped) terminates the
    /// open section's text window.
    pub fn is_excluded(self) -> bool {
        matches!(
            self,
            BlockKind::Note
                | BlockKind::SourceCredit
                | BlockKind::AmendmentHistory
                | BlockKind::ChartOrFigure
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::SectionHead => "SectionHead",
            BlockKind::StatutoryBody => "StatutoryBody",
            BlockKind::Note => "Note",
            BlockKind::SourceCredit => "SourceCredit",
            BlockKind::AmendmentHistory => "AmendmentHistory",
            BlockKind::ChartOrFigure => "ChartOrFigure",
            BlockKind::StructuralHead => "StructuralHead",
            BlockKind::Other => "Other",
        }
    }

    fn parse(s: &str) -> Option<BlockKind> {
        Some(match s {
            "SectionHead" => BlockKind::SectionHead,
            "StatutoryBody" => BlockKind::StatutoryBody,
            "Note" => BlockKind::Note,
            "SourceCredit" => BlockKind::SourceCredit,
            "AmendmentHistory" => BlockKind::AmendmentHistory,
            "ChartOrFigure" => BlockKind::ChartOrFigure,
            "StructuralHead" => BlockKind::StructuralHead,
            "Other" => BlockKind::Other,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Class,
    Field,
    Element,
    Marker,
}

#[derive(Debug, Clone)]
struct Rule {
    target: Target,
    pattern: String,
    kind: BlockKind,
}

/// Default rules, in match order. Field rules for amendment notes must
/// precede the generic note rule; the `statute` and `head` field rules
/// are fallbacks for unclassed blocks and sit at the bottom.
const DEFAULT_RULES: &[(&str, &str)] = &[
    // XHTML class attribute substrings.
    ("section-head", "SectionHead"),
    ("statutory-body", "StatutoryBody"),
    ("source-credit", "SourceCredit"),
    ("sourcecredit", "SourceCredit"),
    ("note-", "Note"),
    ("amendment", "AmendmentHistory"),
    ("figure", "ChartOrFigure"),
    ("graphic", "ChartOrFigure"),
    ("title-head", "StructuralHead"),
    ("subtitle-head", "StructuralHead"),
    ("chapter-head", "StructuralHead"),
    ("part-head", "StructuralHead"),
    ("division-head", "StructuralHead"),
    ("analysis", "StructuralHead"),
    // XHTML element names.
    ("element:img", "ChartOrFigure"),
    ("element:image", "ChartOrFigure"),
    ("element:figure", "ChartOrFigure"),
    // Comment-delimited field names.
    ("field:amendment-note", "AmendmentHistory"),
    ("field:note", "Note"),
    ("field:sourcecredit", "SourceCredit"),
    ("field:source-credit", "SourceCredit"),
    ("field:figure", "ChartOrFigure"),
    ("field:graphic", "ChartOrFigure"),
    ("field:analysis", "StructuralHead"),
    ("field:statute", "StatutoryBody"),
    ("field:head", "StructuralHead"),
    // SRC marker names (prefix match).
    ("marker:HEAD", "SectionHead"),
    ("marker:STATUTE", "StatutoryBody"),
    ("marker:SOURCE", "SourceCredit"),
    ("marker:AMEND", "AmendmentHistory"),
    ("marker:MISC", "Note"),
    ("marker:COD", "Note"),
    ("marker:TRANS", "Note"),
    ("marker:REFTEXT", "Note"),
    ("marker:SECREF", "Note"),
    ("marker:CROSS", "Note"),
    ("marker:CHANGE", "Note"),
    ("marker:CITE", "StructuralHead"),
    ("marker:EXPCITE", "StructuralHead"),
    ("marker:END", "StructuralHead"),
];

/// Ordered classification rules, first match wins. Override rules are
/// consulted before the defaults.
#[derive(Debug, Clone)]
pub struct RuleTable {
    rules: Vec<Rule>,
}

impl Default for RuleTable {
    fn default() -> Self {
        Self::builtin()
    }
}

impl RuleTable {
    pub fn builtin() -> Self {
        let rules = DEFAULT_RULES
            .iter()
            .map(|(p, k)| parse_rule(p, k).expect("default table is well-formed"))
            .collect();
        RuleTable { rules }
    }

    /// Builds a table from override text; override rules precede the
    /// embedded defaults.
    pub fn with_override_text(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (pattern, kind) = line.split_once('\t').ok_or(Error::Rules {
                line: i + 1,
                message: "expected pattern<TAB>BlockKind".into(),
            })?;
            rules.push(parse_rule(pattern.trim(), kind.trim()).ok_or(Error::Rules {
                line: i + 1,
                message: format!("unknown BlockKind {:?}", kind.trim()),
            })?);
        }
        rules.extend(Self::builtin().rules);
        Ok(RuleTable { rules })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::with_override_text(&text)
    }

    fn first_match(&self, target: Target, probe: impl Fn(&str) -> bool) -> Option<BlockKind> {
        self.rules
            .iter()
            .find(|r| r.target == target && probe(&r.pattern))
            .map(|r| r.kind)
    }

    pub fn match_class(&self, class: &str) -> Option<BlockKind> {
        let c = class.to_ascii_lowercase();
        self.first_match(Target::Class, |p| c.contains(p))
    }

    pub fn match_field(&self, field: &str) -> Option<BlockKind> {
        let f = field.to_ascii_lowercase();
        self.first_match(Target::Field, |p| f.contains(p))
    }

    pub fn match_element(&self, name: &str) -> Option<BlockKind> {
        let n = name.to_ascii_lowercase();
        self.first_match(Target::Element, |p| p == n)
    }

    pub fn match_marker(&self, name: &str) -> Option<BlockKind> {
        let m = name.to_ascii_uppercase();
        self.first_match(Target::Marker, |p| m.starts_with(&p.to_ascii_uppercase()))
    }

    /// Classifies one block from its element name, class attribute and
    /// the enclosing comment-delimited field, in that precedence:
    /// an excluded-kind field dominates everything (a statutory-looking
    /// paragraph inside a notes field is a note), then element rules,
    /// then class rules, then non-dominant field fallbacks. Total:
    /// unknown input classifies as `Other`.
    pub fn classify_block(
        &self,
        element_name: &str,
        class_attribute: Option<&str>,
        field_context: Option<&str>,
    ) -> BlockKind {
        let field_kind = field_context.and_then(|f| self.match_field(f));
        if let Some(kind) = field_kind {
            if kind.is_excluded() {
                return kind;
            }
        }
        if let Some(kind) = self.match_element(element_name) {
            return kind;
        }
        if let Some(kind) = class_attribute.and_then(|c| self.match_class(c)) {
            return kind;
        }
        field_kind.unwrap_or(BlockKind::Other)
    }
}

fn parse_rule(pattern: &str, kind: &str) -> Option<Rule> {
    let kind = BlockKind::parse(kind)?;
    let (target, pattern) = if let Some(p) = pattern.strip_prefix("field:") {
        (Target::Field, p.to_ascii_lowercase())
    } else if let Some(p) = pattern.strip_prefix("element:") {
        (Target::Element, p.to_ascii_lowercase())
    } else if let Some(p) = pattern.strip_prefix("marker:") {
        (Target::Marker, p.to_ascii_uppercase())
    } else {
        (Target::Class, pattern.to_ascii_lowercase())
    };
    if pattern.is_empty() {
        return None;
    }
    Some(Rule {
        target,
        pattern,
        kind,
    })
}
