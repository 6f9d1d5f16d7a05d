//! Corpus analytics for the United States Code, 1991-2024.
//!
//! The pipeline discovers per-year archives (annual XHTML ZIPs and legacy
//! SRC plain-text payloads), extracts the countable span of every section
//! (headline plus statutory body, annotations excluded), counts words and
//! characters, splices the two series with a calibration multiplier, and
//! emits the consolidated table, validation report and charts.
//!
//! Modules map one-to-one onto pipeline stages:
//!
//! * [`model`] - shared value types ([`TokenStats`], [`SeriesReport`], ...)
//! * [`ingest`] - archive discovery, unpacking and text decoding
//! * [`rules`] - the overridable block/field/marker classification table
//! * [`xhtml`] - section extraction from annual XHTML document sets
//! * [`locator`] - section extraction from legacy SRC locator files
//! * [`counter`] - word segmentation and character accounting
//! * [`calibration`] - multiplier, growth columns, validation checks
//! * [`report`] - TSV serialization and SVG chart rendering

pub mod calibration;
pub mod counter;
pub mod diag;
pub mod error;
pub mod ingest;
pub mod locator;
pub mod model;
pub mod numeric;
pub mod report;
pub mod rules;
pub mod xhtml;

pub use diag::Diagnostics;
pub use error::{Error, Result};
pub use model::{SectionText, SeriesReport, SourceFormat, TokenStats, YearArchive};
pub use numeric::Rat;
pub use rules::{BlockKind, RuleTable};
