//! Command-line orchestration: `count` parses archives into per-year
//! raw counts, `report` consolidates counts into the results table,
//! validation report and charts, `audit` prints individual sections for
//! manual comparison. The two-phase count/report split keeps the
//! expensive parse phase cacheable and the arithmetic phase testable
//! offline from a counts file.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "lexometer", version, about = "Measures US Code growth 1991-2024")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatFilter {
    Xhtml,
    Src,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DivisorMode {
    /// The exact 1994-1996 ratio.
    Exact,
    /// The paper-compatible rounded divisor.
    #[value(name = "1.45")]
    Rounded,
}

#[derive(Subcommand)]
enum Command {
    /// Count words and characters per (year, format) pair.
    Count {
        /// Corpus root: <root>/<year>.zip and <root>/USC<year>[.SRC]
        #[arg(long)]
        root: PathBuf,
        /// Year selection: single, comma list, or range (1994-1996)
        #[arg(long)]
        years: Option<String>,
        #[arg(long, value_enum, default_value_t = FormatFilter::Both)]
        format: FormatFilter,
        /// Parallel year workers; 0 uses all cores
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Classification rule overrides (fallback: LEXOMETER_RULES)
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Write decode/parse diagnostics to standard error
        #[arg(long)]
        diagnostics: bool,
    },
    /// Consolidate counts into results.tsv, fig1.svg, fig2.svg and
    /// validation.txt.
    Report {
        /// Corpus root for a full run
        #[arg(long, conflicts_with = "counts")]
        root: Option<PathBuf>,
        /// Precomputed counts TSV for an arithmetic-only run
        #[arg(long)]
        counts: Option<PathBuf>,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = DivisorMode::Rounded)]
        divisor: DivisorMode,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Replacement external reference data: aligned_year<TAB>count
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        diagnostics: bool,
    },
    /// Print matched sections with their counts for manual comparison.
    Audit {
        #[arg(long)]
        root: PathBuf,
        #[arg(long)]
        year: i32,
        /// Defaults to xhtml when present, else src
        #[arg(long, value_enum)]
        format: Option<FormatFilter>,
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Substring of `title:section_id` (empty matches everything)
        pattern: Option<String>,
    },
}

/// A failure that carries its process exit code: 2 layout, 3 partial
/// count failures, 4 insufficient calibration coverage, 1 otherwise.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count {
            root,
            years,
            format,
            jobs,
            rules,
            diagnostics,
        } => commands::count(&root, years.as_deref(), format, jobs, rules, diagnostics),
        Command::Report {
            root,
            counts,
            out,
            divisor,
            jobs,
            rules,
            reference,
            diagnostics,
        } => commands::report(
            root.as_deref(),
            counts.as_deref(),
            &out,
            divisor,
            jobs,
            rules,
            reference.as_deref(),
            diagnostics,
        ),
        Command::Audit {
            root,
            year,
            format,
            rules,
            pattern,
        } => commands::audit(&root, year, format, rules, pattern.as_deref().unwrap_or("")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
