use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use lexometer::calibration::{
    self, builtin_reference_counts, compare_external, compute_multiplier, consolidate,
    cross_validate, MetricsMap, ValidationReport,
};
use lexometer::counter::SeparatorSet;
use lexometer::ingest::{discover_years, load_year, CorpusLayout};
use lexometer::locator::{count_year_src, extract_year_sections_src};
use lexometer::model::{SourceFormat, TokenStats};
use lexometer::numeric::{to_decimal, Rounding};
use lexometer::report::{
    chars_per_word_chart, emit_counts_tsv, emit_svg_chart, emit_tsv, parse_counts_tsv,
    render_validation, word_count_chart, CHARS_PER_WORD_TITLE, WORD_COUNT_TITLE,
};
use lexometer::rules::RuleTable;
use lexometer::xhtml::{count_year_xhtml, extract_year_sections};
use lexometer::{Diagnostics, Error};

use crate::{fail, DivisorMode, Failure, FormatFilter};

type CmdResult = Result<(), Failure>;

fn load_rules(flag: Option<PathBuf>) -> Result<RuleTable, Failure> {
    let path = flag.or_else(|| std::env::var_os("LEXOMETER_RULES").map(PathBuf::from));
    match path {
        Some(p) => RuleTable::from_file(&p).map_err(|e| fail(1, e)),
        None => Ok(RuleTable::builtin()),
    }
}

fn parse_years_spec(spec: &str) -> Result<Vec<i32>, Failure> {
    let mut years = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some((a, b)) = part.split_once('-') {
            let lo: i32 = a
                .trim()
                .parse()
                .map_err(|_| fail(2, format!("bad year range {part:?}")))?;
            let hi: i32 = b
                .trim()
                .parse()
                .map_err(|_| fail(2, format!("bad year range {part:?}")))?;
            if lo > hi {
                return Err(fail(2, format!("inverted year range {part:?}")));
            }
            years.extend(lo..=hi);
        } else {
            years.push(
                part.parse()
                    .map_err(|_| fail(2, format!("bad year {part:?}")))?,
            );
        }
    }
    years.sort_unstable();
    years.dedup();
    Ok(years)
}

fn wanted_formats(filter: FormatFilter) -> &'static [SourceFormat] {
    match filter {
        FormatFilter::Xhtml => &[SourceFormat::Xhtml],
        FormatFilter::Src => &[SourceFormat::Src],
        FormatFilter::Both => &[SourceFormat::Src, SourceFormat::Xhtml],
    }
}

/// Tasks from the layout and the year/format filters. Explicitly
/// requested years must exist in the requested format(s).
fn resolve_tasks(
    layout: &CorpusLayout,
    years: Option<&str>,
    filter: FormatFilter,
) -> Result<Vec<(i32, SourceFormat)>, Failure> {
    let formats = wanted_formats(filter);
    let mut tasks = Vec::new();
    match years {
        Some(spec) => {
            for year in parse_years_spec(spec)? {
                let mut any = false;
                for &format in formats {
                    if layout.find(year, format).is_some() {
                        tasks.push((year, format));
                        any = true;
                    }
                }
                if !any {
                    return Err(fail(2, format!("no archive for year {year} in layout")));
                }
            }
        }
        None => {
            for entry in &layout.entries {
                if formats.contains(&entry.format) {
                    tasks.push((entry.year, entry.format));
                }
            }
        }
    }
    tasks.sort_unstable();
    tasks.dedup();
    if tasks.is_empty() {
        return Err(fail(2, "no matching (year, format) pairs in layout"));
    }
    Ok(tasks)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| fail(1, e))
}

fn count_one(
    layout: &CorpusLayout,
    year: i32,
    format: SourceFormat,
    rules: &RuleTable,
    seps: &SeparatorSet,
) -> Result<(TokenStats, Diagnostics), Error> {
    let archive = load_year(layout, year, format)?;
    let mut diag = Diagnostics::new();
    let stats = match format {
        SourceFormat::Xhtml => count_year_xhtml(&archive, rules, seps, &mut diag)?.total,
        SourceFormat::Src => count_year_src(&archive, rules, seps, &mut diag)?,
    };
    Ok((stats, diag))
}

/// Counts the requested (year, format) pairs, possibly in parallel, and
/// collects results in deterministic (year, format) order.
fn run_counts(
    layout: &CorpusLayout,
    tasks: &[(i32, SourceFormat)],
    rules: &RuleTable,
    jobs: usize,
) -> Result<Vec<(i32, SourceFormat, Result<(TokenStats, Diagnostics), Error>)>, Failure> {
    let seps = SeparatorSet::new();
    let pool = pool(jobs)?;
    Ok(pool.install(|| {
        tasks
            .par_iter()
            .map(|&(year, format)| {
                (
                    year,
                    format,
                    count_one(layout, year, format, rules, &seps),
                )
            })
            .collect()
    }))
}

fn flush_diagnostics(diagnostics: bool, results: &[(i32, SourceFormat, Result<(TokenStats, Diagnostics), Error>)]) {
    if !diagnostics {
        return;
    }
    for (_, _, outcome) in results {
        if let Ok((_, diag)) = outcome {
            eprint!("{}", diag.render());
        }
    }
}

pub fn count(
    root: &Path,
    years: Option<&str>,
    format: FormatFilter,
    jobs: usize,
    rules: Option<PathBuf>,
    diagnostics: bool,
) -> CmdResult {
    let rules = load_rules(rules)?;
    let layout = discover_years(root).map_err(|e| fail(2, e))?;
    let tasks = resolve_tasks(&layout, years, format)?;
    let results = run_counts(&layout, &tasks, &rules, jobs)?;

    let mut table: BTreeMap<(i32, SourceFormat), TokenStats> = BTreeMap::new();
    let mut failures = Vec::new();
    for (year, format, outcome) in &results {
        match outcome {
            Ok((stats, _)) => {
                table.insert((*year, *format), *stats);
            }
            Err(e) => failures.push(format!("{year}/{format}: {e}")),
        }
    }
    print!("{}", emit_counts_tsv(&table));
    flush_diagnostics(diagnostics, &results);
    if !failures.is_empty() {
        for f in &failures {
            eprintln!("failed: {f}");
        }
        return Err(fail(3, format!("{} year(s) failed", failures.len())));
    }
    Ok(())
}

fn split_by_format(
    counts: &BTreeMap<(i32, SourceFormat), TokenStats>,
) -> (BTreeMap<i32, TokenStats>, BTreeMap<i32, TokenStats>) {
    let mut src = BTreeMap::new();
    let mut htm = BTreeMap::new();
    for (&(year, format), &stats) in counts {
        match format {
            SourceFormat::Src => src.insert(year, stats),
            SourceFormat::Xhtml => htm.insert(year, stats),
        };
    }
    (src, htm)
}

fn metrics_of(side: &BTreeMap<i32, TokenStats>) -> Result<MetricsMap, Failure> {
    let mut out = MetricsMap::new();
    for (&year, stats) in side {
        let cpw = stats.chars_per_word().ok_or_else(|| {
            fail(3, format!("year {year} counted zero words; cannot consolidate"))
        })?;
        out.insert(year, (stats.words, cpw));
    }
    Ok(out)
}

fn words_of(side: &BTreeMap<i32, TokenStats>) -> BTreeMap<i32, u64> {
    side.iter().map(|(&y, s)| (y, s.words)).collect()
}

#[allow(clippy::too_many_arguments)]
pub fn report(
    root: Option<&Path>,
    counts_file: Option<&Path>,
    out_dir: &Path,
    divisor: DivisorMode,
    jobs: usize,
    rules: Option<PathBuf>,
    reference_file: Option<&Path>,
    diagnostics: bool,
) -> CmdResult {
    let counts = match (root, counts_file) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| fail(1, format!("{}: {e}", path.display())))?;
            parse_counts_tsv(&text).map_err(|e| fail(1, e))?
        }
        (Some(root), None) => {
            let rules = load_rules(rules)?;
            let layout = discover_years(root).map_err(|e| fail(2, e))?;
            let tasks = resolve_tasks(&layout, None, FormatFilter::Both)?;
            let results = run_counts(&layout, &tasks, &rules, jobs)?;
            flush_diagnostics(diagnostics, &results);
            let mut table = BTreeMap::new();
            for (year, format, outcome) in results {
                match outcome {
                    Ok((stats, _)) => {
                        table.insert((year, format), stats);
                    }
                    Err(e) => return Err(fail(3, format!("{year}/{format}: {e}"))),
                }
            }
            table
        }
        (None, None) => return Err(fail(1, "report needs --root or --counts")),
    };

    let (src, htm) = split_by_format(&counts);
    let src_words = words_of(&src);
    let htm_words = words_of(&htm);
    for year in calibration::CALIBRATION_YEARS {
        if !src_words.contains_key(&year) || !htm_words.contains_key(&year) {
            return Err(fail(
                4,
                format!(
                    "insufficient year coverage for calibration: {year} must be counted in both formats (src years: {:?}, xhtml years: {:?})",
                    src_words.keys().collect::<Vec<_>>(),
                    htm_words.keys().collect::<Vec<_>>()
                ),
            ));
        }
    }

    let mut factor = compute_multiplier(&src_words, &htm_words).map_err(|e| fail(4, e))?;
    if divisor == DivisorMode::Exact {
        factor = factor.with_exact_divisor();
    }

    let src_metrics = metrics_of(&src)?;
    let htm_metrics = metrics_of(&htm)?;
    let report = consolidate(&src_metrics, &htm_metrics, &factor).map_err(|e| fail(4, e))?;

    let overlap: Vec<i32> = src_words
        .keys()
        .filter(|y| htm_words.contains_key(y))
        .copied()
        .collect();
    let cross = cross_validate(&src_words, &htm_words, &overlap).map_err(|e| fail(1, e))?;

    let reference_all = match reference_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| fail(1, format!("{}: {e}", path.display())))?;
            calibration::parse_reference_file(&text).map_err(|e| fail(1, e))?
        }
        None => builtin_reference_counts(),
    };
    let reference: BTreeMap<i32, u64> = reference_all
        .iter()
        .filter(|(y, _)| htm_words.contains_key(y))
        .map(|(&y, &c)| (y, c))
        .collect();
    let external = compare_external(&htm_words, &reference).map_err(|e| fail(1, e))?;
    let validation = ValidationReport { cross, external };

    let splice_year = htm_metrics.keys().next().copied();
    std::fs::create_dir_all(out_dir)
        .map_err(|e| fail(1, format!("{}: {e}", out_dir.display())))?;
    let write = |name: &str, bytes: &[u8]| -> CmdResult {
        let path = out_dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| fail(1, format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
        Ok(())
    };
    write("results.tsv", &emit_tsv(&report))?;
    write(
        "fig1.svg",
        &emit_svg_chart(
            &word_count_chart(&report, splice_year),
            WORD_COUNT_TITLE,
            "words",
        )
        .map_err(|e| fail(1, e))?,
    )?;
    write(
        "fig2.svg",
        &emit_svg_chart(
            &chars_per_word_chart(&report, splice_year),
            CHARS_PER_WORD_TITLE,
            "characters per word",
        )
        .map_err(|e| fail(1, e))?,
    )?;
    write(
        "validation.txt",
        render_validation(&factor, &validation, &src_words, &htm_words, &reference).as_bytes(),
    )?;
    Ok(())
}

pub fn audit(
    root: &Path,
    year: i32,
    format: Option<FormatFilter>,
    rules: Option<PathBuf>,
    pattern: &str,
) -> CmdResult {
    let rules = load_rules(rules)?;
    let layout = discover_years(root).map_err(|e| fail(2, e))?;
    let format = match format {
        Some(FormatFilter::Xhtml) => SourceFormat::Xhtml,
        Some(FormatFilter::Src) => SourceFormat::Src,
        Some(FormatFilter::Both) | None => {
            if layout.find(year, SourceFormat::Xhtml).is_some() {
                SourceFormat::Xhtml
            } else {
                SourceFormat::Src
            }
        }
    };
    let archive = load_year(&layout, year, format).map_err(|e| fail(2, e))?;
    let mut diag = Diagnostics::new();
    let sections = match format {
        SourceFormat::Xhtml => {
            extract_year_sections(&archive, &rules, &mut diag).map_err(|e| fail(2, e))?
        }
        SourceFormat::Src => {
            extract_year_sections_src(&archive, &rules, &mut diag).map_err(|e| fail(2, e))?
        }
    };

    let seps = SeparatorSet::new();
    let mut matched = 0usize;
    for section in &sections {
        let key = format!("{}:{}", section.title_number, section.section_id);
        if !pattern.is_empty() && !key.contains(pattern) && !section.section_id.contains(pattern) {
            continue;
        }
        matched += 1;
        let stats = lexometer::counter::count_text_with(&section.countable_text, &seps);
        let cpw = stats
            .chars_per_word()
            .map(|r| to_decimal(r, 5, Rounding::HalfUp))
            .unwrap_or_else(|| "-".into());
        println!(
            "== title {} \u{a7} {} words={} chars={} chars_per_word={}",
            section.title_number, section.section_id, stats.words, stats.chars, cpw
        );
        println!("{}", section.countable_text);
        println!();
    }
    if matched == 0 {
        return Err(fail(1, format!("no section matches pattern {pattern:?}")));
    }
    Ok(())
}
