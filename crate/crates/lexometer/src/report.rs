//! Serialization of the consolidated results: the tab-separated results
//! table, the counts interchange format, the validation text and the
//! SVG line charts. Everything here is byte-deterministic: no
//! timestamps, no random identifiers, pinned geometry and precision.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::calibration::{CalibrationFactor, ValidationReport};
use crate::error::{Error, Result};
use crate::model::{ReportRow, SeriesReport, SourceFormat, TokenStats};
use crate::numeric::{parse_decimal, to_decimal, Rat, Rounding};

const TSV_HEADER: &str = "Year\tWordCount\tCharsPerWord\tGrowthWordPct\tGrowthCharsPermille";
const COUNTS_HEADER: &str = "year\tformat\twords\tchars\tchars_per_word";

fn growth_cell(value: Option<Rat>) -> String {
    match value {
        Some(v) => to_decimal(v, 2, Rounding::HalfUp),
        None => "-".to_string(),
    }
}

/// The consolidated results table. Word counts are plain integers,
/// characters per word carries exactly 5 decimals, growth columns
/// exactly 2; absent growth renders as `-`. Newline-terminated and
/// byte-identical across runs.
pub fn emit_tsv(report: &SeriesReport) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(TSV_HEADER);
    out.push('\n');
    for row in report.rows() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            row.year,
            row.word_count,
            to_decimal(row.chars_per_word, 5, Rounding::HalfUp),
            growth_cell(row.growth_word_percent),
            growth_cell(row.growth_chars_permille),
        );
    }
    out.into_bytes()
}

/// Inverse of [`emit_tsv`] at the declared precision.
pub fn parse_tsv(text: &str) -> Result<SeriesReport> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == TSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                what: "results tsv",
                line: 1,
                message: format!("expected header {TSV_HEADER:?}"),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            what: "results tsv",
            line: i + 1,
            message,
        };
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != 5 {
            return Err(err(format!("expected 5 cells, got {}", cells.len())));
        }
        let growth = |cell: &str| -> Result<Option<Rat>> {
            if cell == "-" {
                Ok(None)
            } else {
                parse_decimal(cell).map(Some)
            }
        };
        rows.push(ReportRow {
            year: cells[0].parse().map_err(|_| err("bad year".into()))?,
            word_count: cells[1].parse().map_err(|_| err("bad word count".into()))?,
            chars_per_word: parse_decimal(cells[2])?,
            growth_word_percent: growth(cells[3])?,
            growth_chars_permille: growth(cells[4])?,
        });
    }
    SeriesReport::new(rows)
}

/// Per-(year, format) raw counts, the interchange between the count and
/// report phases.
pub fn emit_counts_tsv(counts: &BTreeMap<(i32, SourceFormat), TokenStats>) -> String {
    let mut out = String::new();
    out.push_str(COUNTS_HEADER);
    out.push('\n');
    for (&(year, format), stats) in counts {
        let cpw = match stats.chars_per_word() {
            Some(r) => to_decimal(r, 5, Rounding::HalfUp),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "{year}\t{format}\t{}\t{}\t{cpw}",
            stats.words, stats.chars
        );
    }
    out
}

/// Inverse of [`emit_counts_tsv`]; the chars-per-word column is
/// informational and recomputed from the integer columns.
pub fn parse_counts_tsv(text: &str) -> Result<BTreeMap<(i32, SourceFormat), TokenStats>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == COUNTS_HEADER => {}
        _ => {
            return Err(Error::Parse {
                what: "counts tsv",
                line: 1,
                message: format!("expected header {COUNTS_HEADER:?}"),
            })
        }
    }
    let mut out = BTreeMap::new();
    for (i, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            what: "counts tsv",
            line: i + 1,
            message,
        };
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() < 4 {
            return Err(err(format!("expected at least 4 cells, got {}", cells.len())));
        }
        let year: i32 = cells[0].parse().map_err(|_| err("bad year".into()))?;
        let format: SourceFormat = cells[1].parse()?;
        let words: u64 = cells[2].parse().map_err(|_| err("bad words".into()))?;
        let chars: u64 = cells[3].parse().map_err(|_| err("bad chars".into()))?;
        if out
            .insert((year, format), TokenStats::new(words, chars))
            .is_some()
        {
            return Err(err(format!("duplicate row for {year}/{format}")));
        }
    }
    Ok(out)
}

fn pct(r: Rat) -> String {
    format!("{}%", to_decimal(r * Rat::from_integer(100), 3, Rounding::HalfUp))
}

fn flag(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Renders the validation report: the multiplier, the SRC/XHTML
/// cross-validation ratios against the 3.1% band, and the external
/// reference comparison against the 18.5% band.
pub fn render_validation(
    factor: &CalibrationFactor,
    validation: &ValidationReport,
    src_counts: &BTreeMap<i32, u64>,
    htm_counts: &BTreeMap<i32, u64>,
    reference: &BTreeMap<i32, u64>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "calibration multiplier (1994-1996)");
    let _ = writeln!(out, "src_sum\t{}", factor.iso_sum_1994_96);
    let _ = writeln!(out, "xhtml_sum\t{}", factor.htm_sum_1994_96);
    let _ = writeln!(
        out,
        "exact_ratio\t{}",
        to_decimal(factor.exact_ratio, 6, Rounding::HalfUp)
    );
    let _ = writeln!(
        out,
        "exact_ratio_rounded\t{}",
        to_decimal(factor.exact_ratio, 2, Rounding::HalfUp)
    );
    let _ = writeln!(
        out,
        "applied_divisor\t{}",
        to_decimal(factor.applied_divisor, 6, Rounding::HalfUp)
    );
    let _ = writeln!(out);

    let _ = writeln!(out, "cross-validation src/xhtml (band 3.1% over 2007-2009)");
    if validation.cross.ratios.is_empty() {
        let _ = writeln!(out, "(no overlap years present)");
    }
    for (year, ratio) in &validation.cross.ratios {
        let _ = writeln!(
            out,
            "{year}\t{}\t{}\t{}",
            src_counts.get(year).copied().unwrap_or_default(),
            htm_counts.get(year).copied().unwrap_or_default(),
            pct(*ratio)
        );
    }
    let _ = writeln!(out, "result\t{}", flag(validation.cross.pass));
    let _ = writeln!(out);

    let _ = writeln!(out, "external reference / xhtml (band 18.5%)");
    if validation.external.ratios.is_empty() {
        let _ = writeln!(out, "(no reference years present)");
    }
    for (year, ratio) in &validation.external.ratios {
        let _ = writeln!(
            out,
            "{year}\t{}\t{}\t{}",
            reference.get(year).copied().unwrap_or_default(),
            htm_counts.get(year).copied().unwrap_or_default(),
            pct(*ratio)
        );
    }
    let _ = writeln!(out, "result\t{}", flag(validation.external.pass));
    out
}

// ---------------------------------------------------------------------
// SVG charts
// ---------------------------------------------------------------------

/// Which stroke a series group renders with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorRole {
    /// Blue: values derived from the SRC/ISO side.
    SrcSeries,
    /// Black: values from the XHTML side.
    HtmSeries,
    /// Dashed blue: the calibration splice connector.
    Splice,
}

impl ColorRole {
    fn stroke(self) -> &'static str {
        match self {
            ColorRole::SrcSeries | ColorRole::Splice => "blue",
            ColorRole::HtmSeries => "black",
        }
    }

    fn dash(self) -> Option<&'static str> {
        match self {
            ColorRole::Splice => Some("6 4"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChartGroup {
    pub label: String,
    pub role: ColorRole,
    /// (year, value) points in x order.
    pub points: Vec<(f64, f64)>,
}

const CANVAS_W: f64 = 960.0;
const CANVAS_H: f64 = 540.0;
const MARGIN_TOP: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 40.0;
const MARGIN_LEFT: f64 = 70.0;

fn nice_step(span: f64, target_ticks: f64) -> f64 {
    let raw = span / target_ticks;
    let mag = 10f64.powf(raw.log10().floor());
    for m in [1.0, 2.0, 5.0] {
        if m * mag >= raw {
            return m * mag;
        }
    }
    10.0 * mag
}

fn fmt_tick(value: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    format!("{value:.decimals$}")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A standalone deterministic SVG 1.1 line chart. Groups render as
/// polylines with point markers; a single-point group renders as one
/// marker with no segment.
pub fn emit_svg_chart(groups: &[ChartGroup], title: &str, y_axis: &str) -> Result<Vec<u8>> {
    if groups.is_empty() {
        return Err(Error::Input("chart needs at least one series group".into()));
    }
    if let Some(empty) = groups.iter().find(|g| g.points.is_empty()) {
        return Err(Error::Input(format!(
            "chart group {:?} has no points",
            empty.label
        )));
    }

    let xs = groups.iter().flat_map(|g| g.points.iter().map(|p| p.0));
    let ys = groups.iter().flat_map(|g| g.points.iter().map(|p| p.1));
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in xs {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
    }
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for y in ys {
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if x_min == x_max {
        x_min -= 1.0;
        x_max += 1.0;
    }
    let pad = if y_lo == y_hi {
        if y_lo == 0.0 {
            1.0
        } else {
            y_lo.abs() * 0.05
        }
    } else {
        (y_hi - y_lo) * 0.05
    };
    let (y_min, y_max) = (y_lo - pad, y_hi + pad);

    let plot_w = CANVAS_W - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = CANVAS_H - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS_W}\" height=\"{CANVAS_H}\" viewBox=\"0 0 {CANVAS_W} {CANVAS_H}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{CANVAS_W}\" height=\"{CANVAS_H}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">{}</text>",
        CANVAS_W / 2.0,
        xml_escape(title)
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 {:.2})\">{}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        xml_escape(y_axis)
    );

    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_TOP + plot_h
    );

    // X ticks on integer years.
    let x_span = x_max - x_min;
    let x_step = (x_span / 10.0).ceil().max(1.0);
    let mut year = x_min.ceil();
    while year <= x_max {
        let x = sx(year);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            MARGIN_TOP + plot_h + 18.0,
            year as i64
        );
        year += x_step;
    }

    // Y ticks on nice values.
    let y_step = nice_step(y_max - y_min, 6.0);
    let mut tick = (y_min / y_step).ceil() * y_step;
    while tick <= y_max {
        let y = sy(tick);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/>",
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"lightgray\"/>",
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>",
            MARGIN_LEFT - 8.0,
            y + 4.0,
            fmt_tick(tick, y_step)
        );
        tick += y_step;
    }

    // Legend, one swatch per non-splice group.
    let mut legend_x = MARGIN_LEFT;
    for g in groups.iter().filter(|g| g.role != ColorRole::Splice) {
        let _ = writeln!(
            svg,
            "<rect x=\"{legend_x:.2}\" y=\"44\" width=\"14\" height=\"4\" fill=\"{}\"/>",
            g.role.stroke()
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"50\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            legend_x + 18.0,
            xml_escape(&g.label)
        );
        legend_x += 18.0 + 8.0 * g.label.len() as f64 + 24.0;
    }

    // Series.
    for g in groups {
        let stroke = g.role.stroke();
        if g.points.len() >= 2 {
            let pts: Vec<String> = g
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let dash = g
                .role
                .dash()
                .map(|d| format!(" stroke-dasharray=\"{d}\""))
                .unwrap_or_default();
            let _ = writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>",
                pts.join(" ")
            );
        }
        if g.role != ColorRole::Splice {
            for &(x, y) in &g.points {
                let _ = writeln!(
                    svg,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{stroke}\"/>",
                    sx(x),
                    sy(y)
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg.into_bytes())
}

fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn split_groups(
    report: &SeriesReport,
    splice_year: Option<i32>,
    value: impl Fn(&ReportRow) -> f64,
) -> Vec<ChartGroup> {
    let rows = report.rows();
    let splice = splice_year.unwrap_or(i32::MIN);
    let src: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.year < splice)
        .map(|r| (r.year as f64, value(r)))
        .collect();
    let htm: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.year >= splice)
        .map(|r| (r.year as f64, value(r)))
        .collect();
    let mut groups = Vec::new();
    if !src.is_empty() {
        groups.push(ChartGroup {
            label: "SRC".into(),
            role: ColorRole::SrcSeries,
            points: src.clone(),
        });
    }
    if !src.is_empty() && !htm.is_empty() {
        groups.push(ChartGroup {
            label: "splice".into(),
            role: ColorRole::Splice,
            points: vec![*src.last().expect("non-empty"), htm[0]],
        });
    }
    if !htm.is_empty() {
        groups.push(ChartGroup {
            label: "XHTML".into(),
            role: ColorRole::HtmSeries,
            points: htm,
        });
    }
    groups
}

/// Figure one: word count by year, SRC-derived years in blue, XHTML in
/// black, a dashed connector across the calibration splice.
pub fn word_count_chart(report: &SeriesReport, splice_year: Option<i32>) -> Vec<ChartGroup> {
    split_groups(report, splice_year, |r| r.word_count as f64)
}

/// Figure two: characters per word by year.
pub fn chars_per_word_chart(report: &SeriesReport, splice_year: Option<i32>) -> Vec<ChartGroup> {
    split_groups(report, splice_year, |r| rat_f64(r.chars_per_word))
}

pub const WORD_COUNT_TITLE: &str = "Word count by year";
pub const CHARS_PER_WORD_TITLE: &str = "Characters per word by year";
