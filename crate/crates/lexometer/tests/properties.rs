//! Property suites runnable with zero corpus data: counting algebra,
//! separator normalization, exclusion soundness, locator round-trips
//! and serialization identity.

use proptest::prelude::*;

use lexometer::counter::{count_text, segment_words, SeparatorSet};
use lexometer::locator::split_locator;
use lexometer::model::{ReportRow, SeriesReport, TokenStats};
use lexometer::numeric::Rat;
use lexometer::report::{emit_tsv, parse_tsv};
use lexometer::rules::RuleTable;
use lexometer::xhtml::extract_sections;
use lexometer::Diagnostics;

/// A word token: printable, no separators (whitespace, em dash,
/// horizontal bar).
fn token() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-zA-Z0-9.,;:()'\\-\u{2013}\u{a7}]{1,12}").unwrap()
}

fn separator() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(" ".to_string()),
        Just("\t".to_string()),
        Just("\n".to_string()),
        Just("\u{a0}".to_string()),
        Just("\u{2014}".to_string()),
        Just("\u{2015}".to_string()),
        Just(" \u{2014} ".to_string()),
        Just("  ".to_string()),
        Just("\u{2014}\u{2014}".to_string()),
    ]
}

/// Tokens plus the separators between them; the text is their
/// interleaving.
fn token_text() -> impl Strategy<Value = (Vec<String>, String)> {
    proptest::collection::vec(token(), 0..24).prop_flat_map(|tokens| {
        let n = tokens.len().saturating_sub(1);
        proptest::collection::vec(separator(), n..=n).prop_map(move |seps| {
            let mut text = String::new();
            for (i, t) in tokens.iter().enumerate() {
                if i > 0 {
                    text.push_str(&seps[i - 1]);
                }
                text.push_str(t);
            }
            (tokens.clone(), text)
        })
    })
}

proptest! {
    /// Brute-force oracle: words must equal the constructed token count
    /// and chars their summed lengths plus one separator charge each.
    #[test]
    fn count_matches_constructed_tokens((tokens, text) in token_text()) {
        let stats = count_text(&text);
        let expected_words = tokens.len() as u64;
        let expected_chars: u64 = tokens
            .iter()
            .map(|t| t.chars().count() as u64 + 1)
            .sum();
        prop_assert_eq!(stats.words, expected_words);
        prop_assert_eq!(stats.chars, expected_chars);
    }

    #[test]
    fn concatenation_consistency((_, a) in token_text(), (_, b) in token_text()) {
        let joined = format!("{a} {b}");
        prop_assert_eq!(
            count_text(&joined),
            count_text(&a).merge(count_text(&b))
        );
    }

    /// Replacing any separator run by a single space changes neither
    /// words nor chars.
    #[test]
    fn separator_run_idempotence((_, text) in token_text()) {
        let seps = SeparatorSet::new();
        let normalized = segment_words(&text, &seps).join(" ");
        prop_assert_eq!(count_text(&normalized), count_text(&text));
    }

    #[test]
    fn chars_per_word_at_least_two((_, text) in token_text()) {
        let stats = count_text(&text);
        if stats.words > 0 {
            prop_assert!(stats.chars >= 2 * stats.words);
            prop_assert!(stats.chars_per_word().unwrap() >= Rat::from_integer(2));
        } else {
            prop_assert_eq!(stats.chars, 0);
        }
    }

    /// Merge over any permutation and association of a fixture's pieces
    /// equals the sequential total.
    #[test]
    fn merge_permutation_and_association(
        pieces in proptest::collection::vec(token_text(), 1..12),
        seed in 0u64..1000,
    ) {
        let stats: Vec<TokenStats> = pieces.iter().map(|(_, t)| count_text(t)).collect();
        let sequential = stats
            .iter()
            .fold(TokenStats::default(), |acc, &s| acc.merge(s));

        // Deterministic pseudo-shuffle.
        let mut shuffled = stats.clone();
        let mut state = seed.wrapping_add(1);
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let permuted = shuffled
            .iter()
            .fold(TokenStats::default(), |acc, &s| acc.merge(s));
        prop_assert_eq!(permuted, sequential);

        // Tree-shaped reduction.
        fn tree(parts: &[TokenStats]) -> TokenStats {
            match parts.len() {
                0 => TokenStats::default(),
                1 => parts[0],
                n => tree(&parts[..n / 2]).merge(tree(&parts[n / 2..])),
            }
        }
        prop_assert_eq!(tree(&stats), sequential);
    }

    /// prefix + payload always reproduces the raw line.
    #[test]
    fn locator_round_trip(line in "[^\n]{0,60}") {
        let l = split_locator(&line);
        prop_assert_eq!(format!("{}{}", l.control_prefix, l.payload), line);
    }

    /// Injecting arbitrary text inside note, credit and figure regions
    /// never changes the counted totals.
    #[test]
    fn exclusion_soundness(
        noise in proptest::collection::vec("[a-zA-Z0-9]{1,10}", 1..8),
        body in proptest::collection::vec("[a-zA-Z0-9]{1,10}", 1..8),
    ) {
        let rules = RuleTable::builtin();
        let noise = noise.join(" ");
        let body = body.join(" ");
        let clean = format!(
            "<h3 class=\"section-head\">\u{a7} 1. T</h3>\
             <p class=\"statutory-body\">{body}</p>"
        );
        let noisy = format!(
            "<h3 class=\"section-head\">\u{a7} 1. T</h3>\
             <p class=\"statutory-body\">{body}</p>\
             <table class=\"figure\"><tr><td>{noise}</td></tr></table>\
             <p class=\"source-credit\">({noise})</p>\
             <!-- field-start:notes --><p>{noise}</p><!-- field-end:notes -->\
             <p class=\"note-body\">{noise}</p>"
        );
        let total = |doc: &str| {
            let mut diag = Diagnostics::new();
            extract_sections(doc, "m.htm", &rules, &mut diag)
                .iter()
                .map(|s| count_text(&s.countable_text))
                .fold(TokenStats::default(), TokenStats::merge)
        };
        prop_assert_eq!(total(&noisy), total(&clean));
    }

    /// The figure region sits between two body blocks here, so skipping
    /// must not terminate the window either.
    #[test]
    fn chart_injection_between_body_blocks(
        noise in "[a-zA-Z0-9 ]{0,40}",
    ) {
        let rules = RuleTable::builtin();
        let clean = "<h3 class=\"section-head\">\u{a7} 1. T</h3>\
             <p class=\"statutory-body\">alpha</p>\
             <p class=\"statutory-body\">omega</p>";
        let noisy = format!(
            "<h3 class=\"section-head\">\u{a7} 1. T</h3>\
             <p class=\"statutory-body\">alpha</p>\
             <table class=\"figure\"><tr><td>{noise}</td></tr></table>\
             <p class=\"statutory-body\">omega</p>"
        );
        let total = |doc: &str| {
            let mut diag = Diagnostics::new();
            extract_sections(doc, "m.htm", &rules, &mut diag)
                .iter()
                .map(|s| count_text(&s.countable_text))
                .fold(TokenStats::default(), TokenStats::merge)
        };
        prop_assert_eq!(total(&noisy), total(clean));
    }

    /// Serializing then parsing through the TSV format is the identity
    /// at declared precision.
    #[test]
    fn tsv_round_trip_identity(
        first_year in 1991i32..2010,
        cells in proptest::collection::vec(
            (1u64..100_000_000, 150_001i128..899_999, -9_999i128..9_999, -9_999i128..9_999),
            1..20,
        ),
    ) {
        let rows: Vec<ReportRow> = cells
            .iter()
            .enumerate()
            .map(|(i, &(words, cpw, gw, gc))| ReportRow {
                year: first_year + i as i32,
                word_count: words,
                chars_per_word: Rat::new(cpw, 100_000),
                growth_word_percent: (i > 0).then(|| Rat::new(gw, 100)),
                growth_chars_permille: (i > 0).then(|| Rat::new(gc, 100)),
            })
            .collect();
        let report = SeriesReport::new(rows).unwrap();
        let bytes = emit_tsv(&report);
        let parsed = parse_tsv(std::str::from_utf8(&bytes).unwrap()).unwrap();
        prop_assert_eq!(emit_tsv(&parsed), bytes.clone());
        prop_assert_eq!(parsed, report);
    }
}
