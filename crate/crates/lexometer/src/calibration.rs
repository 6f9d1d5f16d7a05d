//! Splices the SRC and XHTML word-count series via the 1994-1996
//! calibration multiplier, computes the growth columns and runs the
//! validation checks (cross-validation of the two parsers over the
//! overlap years, comparison against the published external reference
//! counts).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{ReportRow, SeriesReport, SourceFormat, YearMetrics};
use crate::numeric::{ratio, round_half_up_i128, Rat};

/// Years whose summed counts define the multiplier.
pub const CALIBRATION_YEARS: [i32; 3] = [1994, 1995, 1996];

/// Overlap years the cross-validation band applies to.
pub const CROSS_VALIDATION_YEARS: [i32; 3] = [2007, 2008, 2009];

/// Source-to-target ratio over the calibration window.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationFactor {
    pub iso_sum_1994_96: u64,
    pub htm_sum_1994_96: u64,
    pub exact_ratio: Rat,
    /// What division actually uses: the exact ratio or the rounded 1.45.
    pub applied_divisor: Rat,
}

/// The paper-compatible rounded divisor, 1.45.
pub fn rounded_divisor() -> Rat {
    Rat::new(29, 20)
}

/// Sums both sides over 1994-1996 and derives the ratio. The applied
/// divisor defaults to the rounded 1.45; call [`CalibrationFactor::with_exact_divisor`]
/// for sensitivity runs.
pub fn compute_multiplier(
    src_counts: &BTreeMap<i32, u64>,
    htm_counts: &BTreeMap<i32, u64>,
) -> Result<CalibrationFactor> {
    let mut iso_sum = 0u64;
    let mut htm_sum = 0u64;
    for year in CALIBRATION_YEARS {
        iso_sum += *src_counts
            .get(&year)
            .ok_or_else(|| Error::Input(format!("src counts missing year {year}")))?;
        htm_sum += *htm_counts
            .get(&year)
            .ok_or_else(|| Error::Input(format!("htm counts missing year {year}")))?;
    }
    if htm_sum == 0 || iso_sum == 0 {
        return Err(Error::ArithmeticDomain(
            "calibration sums must be positive".into(),
        ));
    }
    let exact_ratio = Rat::new(iso_sum as i128, htm_sum as i128);
    Ok(CalibrationFactor {
        iso_sum_1994_96: iso_sum,
        htm_sum_1994_96: htm_sum,
        exact_ratio,
        applied_divisor: rounded_divisor(),
    })
}

impl CalibrationFactor {
    pub fn with_exact_divisor(mut self) -> Self {
        self.applied_divisor = self.exact_ratio;
        self
    }

    /// A divisor must shrink the SRC counts, never grow them.
    pub fn is_valid(&self) -> bool {
        self.applied_divisor > Rat::from_integer(1)
    }
}

/// Divides each raw value by the applied divisor, rounding half-up to
/// an integer.
pub fn adjust_src_series(
    raw: &BTreeMap<i32, u64>,
    factor: &CalibrationFactor,
) -> BTreeMap<i32, u64> {
    raw.iter()
        .map(|(&year, &value)| {
            let adjusted = Rat::from_integer(value as i128) / factor.applied_divisor;
            (year, round_half_up_i128(adjusted) as u64)
        })
        .collect()
}

/// Year-over-year growth in percent: `(v / v_prev - 1) * 100`, absent
/// for the first element. Errors on a nonpositive predecessor.
pub fn growth_percent(series: &[(i32, Rat)]) -> Result<Vec<(i32, Option<Rat>)>> {
    growth_scaled(series, 100)
}

/// As [`growth_percent`] with a factor of 1000 (permille).
pub fn growth_permille(series: &[(i32, Rat)]) -> Result<Vec<(i32, Option<Rat>)>> {
    growth_scaled(series, 1000)
}

fn growth_scaled(series: &[(i32, Rat)], scale: i128) -> Result<Vec<(i32, Option<Rat>)>> {
    let mut out = Vec::with_capacity(series.len());
    for (i, &(year, value)) in series.iter().enumerate() {
        if i == 0 {
            out.push((year, None));
            continue;
        }
        let (_, prev) = series[i - 1];
        if prev <= Rat::from_integer(0) {
            return Err(Error::ArithmeticDomain(format!(
                "nonpositive predecessor before year {year}"
            )));
        }
        out.push((year, Some((value / prev - 1) * Rat::from_integer(scale))));
    }
    Ok(out)
}

/// Counts strictly positive year-over-year deltas: `(positive, total)`
/// with `total = len - 1`.
pub fn count_growth_years(series: &[(i32, Rat)]) -> (usize, usize) {
    let positive = series
        .windows(2)
        .filter(|w| w[1].1 > w[0].1)
        .count();
    (positive, series.len().saturating_sub(1))
}

/// One ratio-band check: per-year ratios plus the derived pass flag.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCheck {
    pub ratios: BTreeMap<i32, Rat>,
    /// Maximum allowed |ratio - 1|.
    pub band: Rat,
    pub pass: bool,
}

/// Validation results: parser cross-validation over the overlap years
/// and comparison against the external reference counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub cross: RatioCheck,
    pub external: RatioCheck,
}

fn band_check(ratios: BTreeMap<i32, Rat>, band: Rat, checked: &[i32]) -> RatioCheck {
    let one = Rat::from_integer(1);
    let pass = ratios
        .iter()
        .filter(|(y, _)| checked.is_empty() || checked.contains(y))
        .all(|(_, &r)| {
            let dev = if r > one { r - one } else { one - r };
            dev <= band
        });
    RatioCheck { ratios, band, pass }
}

/// SRC/XHTML ratio per overlap year. The pass flag applies the 3.1%
/// band (`|ratio - 1| <= 0.031`) to the 2007-2009 subset of `years`.
pub fn cross_validate(
    src: &BTreeMap<i32, u64>,
    htm: &BTreeMap<i32, u64>,
    years: &[i32],
) -> Result<RatioCheck> {
    let mut ratios = BTreeMap::new();
    for &year in years {
        let s = *src
            .get(&year)
            .ok_or_else(|| Error::Input(format!("src counts missing year {year}")))?;
        let h = *htm
            .get(&year)
            .ok_or_else(|| Error::Input(format!("htm counts missing year {year}")))?;
        ratios.insert(year, ratio(s, h)?);
    }
    Ok(band_check(ratios, Rat::new(31, 1000), &CROSS_VALIDATION_YEARS))
}

/// Reference/XHTML ratio per aligned year; pass iff all deviations are
/// strictly below 18.5%. The reference map is keyed by the edition year
/// the measurement corresponds to (a measurement dated year Y+1
/// compares to edition year Y).
pub fn compare_external(
    htm: &BTreeMap<i32, u64>,
    reference: &BTreeMap<i32, u64>,
) -> Result<RatioCheck> {
    let mut ratios = BTreeMap::new();
    for (&year, &ref_count) in reference {
        let h = *htm
            .get(&year)
            .ok_or_else(|| Error::Input(format!("htm counts missing year {year}")))?;
        ratios.insert(year, ratio(ref_count, h)?);
    }
    let one = Rat::from_integer(1);
    let band = Rat::new(185, 1000);
    let pass = ratios.values().all(|&r| {
        let dev = if r > one { r - one } else { one - r };
        dev < band
    });
    Ok(RatioCheck {
        ratios,
        band,
        pass,
    })
}

/// The built-in external reference dataset: published word counts,
/// keyed by the edition year each measurement corresponds to (the
/// measurements are dated the following year).
pub fn builtin_reference_counts() -> BTreeMap<i32, u64> {
    BTreeMap::from([
        (2007, 22_823_405), // measured 2008, October
        (2008, 23_919_248), // measured 2009, November
        (2009, 24_224_985), // measured 2010, March
    ])
}

/// Parses a replacement reference dataset: lines
/// `aligned_year<TAB>word_count`, `#` comments.
pub fn parse_reference_file(text: &str) -> Result<BTreeMap<i32, u64>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            what: "reference data",
            line: i + 1,
            message,
        };
        let (year, count) = line
            .split_once('\t')
            .ok_or_else(|| err("expected aligned_year<TAB>word_count".into()))?;
        out.insert(
            year.trim().parse().map_err(|_| err("bad year".into()))?,
            count.trim().parse().map_err(|_| err("bad count".into()))?,
        );
    }
    Ok(out)
}

/// Estimated letters-per-word interval for a characters-per-word value:
/// `(cpw - 1.5, cpw - 1.01)`. Requires `cpw > 1.5`.
pub fn letters_per_word_interval(chars_per_word: Rat) -> Result<(Rat, Rat)> {
    if chars_per_word <= Rat::new(3, 2) {
        return Err(Error::ArithmeticDomain(format!(
            "chars per word must exceed 1.5, got {chars_per_word}"
        )));
    }
    Ok((
        chars_per_word - Rat::new(3, 2),
        chars_per_word - Rat::new(101, 100),
    ))
}

/// Per-year word count and characters-per-word for one format.
pub type MetricsMap = BTreeMap<i32, (u64, Rat)>;

/// Builds the per-year consolidated metrics: years before the earliest
/// XHTML year take the adjusted SRC word count and the SRC
/// characters-per-word; XHTML years take the raw XHTML values.
pub fn build_year_metrics(
    src_metrics: &MetricsMap,
    htm_metrics: &MetricsMap,
    factor: &CalibrationFactor,
) -> Result<Vec<YearMetrics>> {
    if htm_metrics.is_empty() {
        return Err(Error::InsufficientCoverage(
            "no XHTML years to anchor the series".into(),
        ));
    }
    let splice_year = *htm_metrics.keys().next().expect("non-empty");
    let src_words: BTreeMap<i32, u64> = src_metrics
        .iter()
        .filter(|(&y, _)| y < splice_year)
        .map(|(&y, &(w, _))| (y, w))
        .collect();
    let adjusted = adjust_src_series(&src_words, factor);

    let mut out = Vec::new();
    for (&year, &(words, cpw)) in src_metrics.iter().filter(|(&y, _)| y < splice_year) {
        let mut raw_w = BTreeMap::new();
        let mut raw_c = BTreeMap::new();
        raw_w.insert(SourceFormat::Src, words);
        raw_c.insert(SourceFormat::Src, cpw);
        out.push(YearMetrics {
            year,
            raw_word_count: raw_w,
            raw_chars_per_word: raw_c,
            adjusted_word_count: adjusted[&year],
            chosen_chars_per_word: cpw,
        });
    }
    for (&year, &(words, cpw)) in htm_metrics {
        let mut raw_w = BTreeMap::new();
        let mut raw_c = BTreeMap::new();
        raw_w.insert(SourceFormat::Xhtml, words);
        raw_c.insert(SourceFormat::Xhtml, cpw);
        if let Some(&(sw, sc)) = src_metrics.get(&year) {
            raw_w.insert(SourceFormat::Src, sw);
            raw_c.insert(SourceFormat::Src, sc);
        }
        out.push(YearMetrics {
            year,
            raw_word_count: raw_w,
            raw_chars_per_word: raw_c,
            adjusted_word_count: words,
            chosen_chars_per_word: cpw,
        });
    }
    out.sort_by_key(|m| m.year);
    Ok(out)
}

/// Splices the two series into the consolidated report with growth
/// columns appended. Growth is computed on the exact internal
/// rationals, never on presentation-rounded values.
pub fn consolidate(
    src_metrics: &MetricsMap,
    htm_metrics: &MetricsMap,
    factor: &CalibrationFactor,
) -> Result<SeriesReport> {
    let metrics = build_year_metrics(src_metrics, htm_metrics, factor)?;
    let words: Vec<(i32, Rat)> = metrics
        .iter()
        .map(|m| (m.year, Rat::from_integer(m.adjusted_word_count as i128)))
        .collect();
    let cpw: Vec<(i32, Rat)> = metrics
        .iter()
        .map(|m| (m.year, m.chosen_chars_per_word))
        .collect();
    let g_words = growth_percent(&words)?;
    let g_cpw = growth_permille(&cpw)?;

    let rows = metrics
        .iter()
        .zip(g_words)
        .zip(g_cpw)
        .map(|((m, (_, gw)), (_, gc))| ReportRow {
            year: m.year,
            word_count: m.adjusted_word_count,
            chars_per_word: m.chosen_chars_per_word,
            growth_word_percent: gw,
            growth_chars_permille: gc,
        })
        .collect();
    SeriesReport::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{parse_decimal, to_decimal, Rounding};

    fn pct3(r: Rat) -> String {
        to_decimal(r * Rat::from_integer(100), 3, Rounding::HalfUp)
    }

    #[test]
    fn multiplier_constructed_ratio() {
        let src = BTreeMap::from([(1994, 1450u64), (1995, 2900), (1996, 4350)]);
        let htm = BTreeMap::from([(1994, 1000u64), (1995, 2000), (1996, 3000)]);
        let f = compute_multiplier(&src, &htm).unwrap();
        assert_eq!(f.exact_ratio, Rat::new(29, 20));
        assert_eq!(f.applied_divisor, rounded_divisor());
        assert!(f.is_valid());
    }

    #[test]
    fn multiplier_missing_year_is_input_error() {
        let src = BTreeMap::from([(1994, 10u64), (1996, 10)]);
        let htm = BTreeMap::from([(1994, 10u64), (1995, 10), (1996, 10)]);
        assert!(matches!(
            compute_multiplier(&src, &htm),
            Err(Error::Input(_))
        ));
    }

    fn paper_divisor_factor() -> CalibrationFactor {
        CalibrationFactor {
            iso_sum_1994_96: 29,
            htm_sum_1994_96: 20,
            exact_ratio: Rat::new(29, 20),
            applied_divisor: rounded_divisor(),
        }
    }

    #[test]
    fn adjustment_inverts_the_published_1991_value() {
        // 26,749,174 / 1.45 = 18,447,706.2069 -> 18,447,706
        let raw = BTreeMap::from([(1991, 26_749_174u64)]);
        let adjusted = adjust_src_series(&raw, &paper_divisor_factor());
        assert_eq!(adjusted[&1991], 18_447_706);
    }

    #[test]
    fn adjustment_identity_and_exact_division() {
        let mut f = paper_divisor_factor();
        f.applied_divisor = Rat::from_integer(1);
        let raw = BTreeMap::from([(1991, 12345u64)]);
        assert_eq!(adjust_src_series(&raw, &f)[&1991], 12345);

        let raw = BTreeMap::from([(1992, 1450u64)]);
        assert_eq!(
            adjust_src_series(&raw, &paper_divisor_factor())[&1992],
            1000
        );
    }

    #[test]
    fn growth_percent_published_cells() {
        let series = [
            (1991, Rat::from_integer(18_447_706)),
            (1992, Rat::from_integer(17_048_645)),
        ];
        let g = growth_percent(&series).unwrap();
        assert_eq!(g[0].1, None);
        assert_eq!(
            to_decimal(g[1].1.unwrap(), 2, Rounding::HalfUp),
            "-7.58"
        );

        let series = [
            (2007, Rat::from_integer(19_519_644)),
            (2008, Rat::from_integer(20_188_975)),
        ];
        let g = growth_percent(&series).unwrap();
        assert_eq!(to_decimal(g[1].1.unwrap(), 2, Rounding::HalfUp), "3.43");
    }

    #[test]
    fn growth_constant_series_is_zero() {
        let series: Vec<(i32, Rat)> = (1991..1995)
            .map(|y| (y, Rat::from_integer(7)))
            .collect();
        for (_, g) in growth_percent(&series).unwrap().into_iter().skip(1) {
            assert_eq!(g, Some(Rat::from_integer(0)));
        }
    }

    #[test]
    fn growth_nonpositive_predecessor_errors() {
        let series = [(1991, Rat::from_integer(0)), (1992, Rat::from_integer(5))];
        assert!(matches!(
            growth_percent(&series),
            Err(Error::ArithmeticDomain(_))
        ));
    }

    #[test]
    fn growth_permille_published_cells() {
        let series = [
            (1991, parse_decimal("6.09994").unwrap()),
            (1992, parse_decimal("6.11779").unwrap()),
        ];
        let g = growth_permille(&series).unwrap();
        assert_eq!(to_decimal(g[1].1.unwrap(), 2, Rounding::HalfUp), "2.93");

        let series = [
            (1995, parse_decimal("6.26076").unwrap()),
            (1996, parse_decimal("6.26367").unwrap()),
        ];
        let g = growth_permille(&series).unwrap();
        assert_eq!(to_decimal(g[1].1.unwrap(), 2, Rounding::HalfUp), "0.46");
    }

    #[test]
    fn growth_is_scale_invariant() {
        let a = [
            (1991, Rat::from_integer(100)),
            (1992, Rat::from_integer(150)),
        ];
        let b = [
            (1991, Rat::from_integer(700)),
            (1992, Rat::from_integer(1050)),
        ];
        assert_eq!(
            growth_percent(&a).unwrap()[1].1,
            growth_percent(&b).unwrap()[1].1
        );
    }

    #[test]
    fn count_growth_years_strictly_decreasing() {
        let series = [
            (1991, Rat::from_integer(3)),
            (1992, Rat::from_integer(2)),
            (1993, Rat::from_integer(1)),
        ];
        assert_eq!(count_growth_years(&series), (0, 2));
    }

    #[test]
    fn cross_validation_published_ratios() {
        let src = BTreeMap::from([
            (2007, 19_553_788u64),
            (2008, 19_580_762),
            (2009, 20_599_050),
        ]);
        let htm = BTreeMap::from([
            (2007, 19_519_644u64),
            (2008, 20_188_975),
            (2009, 20_477_455),
        ]);
        let check = cross_validate(&src, &htm, &[2007, 2008, 2009]).unwrap();
        assert_eq!(pct3(check.ratios[&2007]), "100.175");
        assert_eq!(pct3(check.ratios[&2008]), "96.987");
        assert_eq!(pct3(check.ratios[&2009]), "100.594");
        assert!(check.pass, "the published counts sit inside the 3.1% band");
    }

    #[test]
    fn cross_validation_equal_counts_pass() {
        let m = BTreeMap::from([(2007, 100u64)]);
        let check = cross_validate(&m, &m, &[2007]).unwrap();
        assert_eq!(check.ratios[&2007], Rat::from_integer(1));
        assert!(check.pass);
    }

    #[test]
    fn cross_validation_band_is_exceeded_at_3_2_percent() {
        let src = BTreeMap::from([(2007, 1032u64)]);
        let htm = BTreeMap::from([(2007, 1000u64)]);
        assert!(!cross_validate(&src, &htm, &[2007]).unwrap().pass);
    }

    #[test]
    fn external_comparison_published_ratios() {
        let htm = BTreeMap::from([
            (2007, 19_519_644u64),
            (2008, 20_188_975),
            (2009, 20_477_455),
        ]);
        let check = compare_external(&htm, &builtin_reference_counts()).unwrap();
        assert_eq!(pct3(check.ratios[&2007]), "116.925");
        assert_eq!(pct3(check.ratios[&2008]), "118.477");
        assert_eq!(pct3(check.ratios[&2009]), "118.301");
        assert!(check.pass, "all deviations are below 18.5%");
    }

    #[test]
    fn external_comparison_identical_maps() {
        let htm = BTreeMap::from([(2007, 500u64)]);
        let check = compare_external(&htm, &htm).unwrap();
        assert_eq!(check.ratios[&2007], Rat::from_integer(1));
        assert!(check.pass);
    }

    #[test]
    fn letters_interval_examples() {
        let (lo, hi) = letters_per_word_interval(parse_decimal("6.35444").unwrap()).unwrap();
        assert_eq!(to_decimal(lo, 5, Rounding::HalfUp), "4.85444");
        assert_eq!(to_decimal(hi, 5, Rounding::HalfUp), "5.34444");

        let (lo, hi) = letters_per_word_interval(parse_decimal("2.51").unwrap()).unwrap();
        assert_eq!(lo, Rat::new(101, 100));
        assert_eq!(hi, Rat::new(3, 2));

        assert!(letters_per_word_interval(parse_decimal("1.4").unwrap()).is_err());
    }

    #[test]
    fn consolidate_synthetic_hand_computed() {
        // SRC 1991-1993 raw 1450/2900/1450, divisor 1.45 -> 1000/2000/1000.
        // XHTML 1994-1996 anchor the splice.
        let src: MetricsMap = BTreeMap::from([
            (1991, (1450u64, Rat::new(6, 1))),
            (1992, (2900, Rat::new(13, 2))),
            (1993, (1450, Rat::new(7, 1))),
            (1994, (2175, Rat::new(7, 1))),
            (1995, (1450, Rat::new(7, 1))),
            (1996, (725, Rat::new(7, 1))),
        ]);
        let htm: MetricsMap = BTreeMap::from([
            (1994, (1500u64, Rat::new(6, 1))),
            (1995, (1000, Rat::new(6, 1))),
            (1996, (500, Rat::new(6, 1))),
        ]);
        let src_w: BTreeMap<i32, u64> = src.iter().map(|(&y, &(w, _))| (y, w)).collect();
        let htm_w: BTreeMap<i32, u64> = htm.iter().map(|(&y, &(w, _))| (y, w)).collect();
        let factor = compute_multiplier(&src_w, &htm_w).unwrap();
        assert_eq!(factor.exact_ratio, Rat::new(29, 20));

        let report = consolidate(&src, &htm, &factor).unwrap();
        let rows = report.rows();
        assert_eq!(rows.len(), 6);
        assert_eq!(
            rows.iter().map(|r| r.word_count).collect::<Vec<_>>(),
            vec![1000, 2000, 1000, 1500, 1000, 500]
        );
        // 1991 row has no growth; 1992 row: 2000/1000 - 1 = +100%.
        assert_eq!(rows[0].growth_word_percent, None);
        assert_eq!(rows[1].growth_word_percent, Some(Rat::from_integer(100)));
        // 1992 cpw growth: (6.5/6 - 1) * 1000 = 250/3 permille.
        assert_eq!(rows[1].growth_chars_permille, Some(Rat::new(250, 3)));
        // Splice year 1994 uses XHTML values: cpw drops from 7 to 6.
        assert_eq!(rows[3].chars_per_word, Rat::new(6, 1));
    }

    #[test]
    fn consolidate_single_year() {
        let src: MetricsMap = BTreeMap::new();
        let htm: MetricsMap = BTreeMap::from([(2018, (100u64, Rat::new(6, 1)))]);
        let factor = paper_divisor_factor();
        let report = consolidate(&src, &htm, &factor).unwrap();
        assert_eq!(report.rows().len(), 1);
        assert_eq!(report.rows()[0].growth_word_percent, None);
    }

    #[test]
    fn year_metrics_invariants_on_both_sides_of_the_splice() {
        let src: MetricsMap = BTreeMap::from([
            (1993, (1450u64, Rat::new(7, 1))),
            (1994, (1450, Rat::new(7, 1))),
        ]);
        let htm: MetricsMap = BTreeMap::from([(1994, (1000u64, Rat::new(6, 1)))]);
        let m = build_year_metrics(&src, &htm, &paper_divisor_factor()).unwrap();
        assert_eq!(m.len(), 2);
        // 1993: adjusted from SRC raw, SRC cpw chosen.
        assert_eq!(m[0].adjusted_word_count, 1000);
        assert_eq!(m[0].chosen_chars_per_word, Rat::new(7, 1));
        assert!(!m[0].raw_word_count.contains_key(&SourceFormat::Xhtml));
        // 1994: XHTML raw wins, both raw entries retained.
        assert_eq!(m[1].adjusted_word_count, 1000);
        assert_eq!(m[1].chosen_chars_per_word, Rat::new(6, 1));
        assert_eq!(m[1].raw_word_count[&SourceFormat::Src], 1450);
    }

    #[test]
    fn divisor_monotonicity() {
        let raw = BTreeMap::from([(1991, 1_000_000u64)]);
        let mut small = paper_divisor_factor();
        small.applied_divisor = Rat::new(29, 20);
        let mut large = paper_divisor_factor();
        large.applied_divisor = Rat::new(3, 2);
        assert!(adjust_src_series(&raw, &large)[&1991] <= adjust_src_series(&raw, &small)[&1991]);
    }
}
