//! Fixture corpus builder and published reference tables shared by the
//! CLI and acceptance tests.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::Path;

use zip::write::SimpleFileOptions;
use zip::CompressionMethod;

/// The published consolidated series:
/// (year, word count, chars/word, growth %, growth permille).
pub const TABLE_3: [(i32, u64, &str, &str, &str); 34] = [
    (1991, 18_447_706, "6.09994", "-", "-"),
    (1992, 17_048_645, "6.11779", "-7.58", "2.93"),
    (1993, 15_053_688, "6.14434", "-11.70", "4.34"),
    (1994, 15_357_213, "6.25813", "2.02", "18.52"),
    (1995, 15_747_251, "6.26076", "2.54", "0.42"),
    (1996, 16_162_383, "6.26367", "2.64", "0.46"),
    (1997, 16_424_834, "6.26386", "1.62", "0.03"),
    (1998, 16_676_295, "6.26464", "1.53", "0.13"),
    (1999, 16_836_511, "6.26696", "0.96", "0.37"),
    (2000, 17_308_741, "6.27057", "2.80", "0.58"),
    (2001, 17_516_122, "6.27199", "1.20", "0.23"),
    (2002, 17_938_097, "6.27577", "2.41", "0.60"),
    (2003, 18_277_526, "6.27929", "1.89", "0.56"),
    (2004, 18_579_468, "6.28236", "1.65", "0.49"),
    (2005, 18_957_299, "6.28611", "2.03", "0.60"),
    (2006, 19_179_051, "6.29206", "1.17", "0.95"),
    (2007, 19_519_644, "6.29769", "1.78", "0.89"),
    (2008, 20_188_975, "6.30363", "3.43", "0.94"),
    (2009, 20_477_455, "6.30586", "1.43", "0.35"),
    (2010, 21_190_616, "6.31277", "3.48", "1.10"),
    (2011, 21_231_510, "6.31286", "0.19", "0.01"),
    (2012, 21_445_800, "6.31487", "1.01", "0.32"),
    (2013, 21_510_087, "6.31552", "0.30", "0.10"),
    (2014, 21_811_339, "6.31909", "1.40", "0.56"),
    (2015, 21_671_536, "6.32280", "-0.64", "0.59"),
    (2016, 21_974_198, "6.32916", "1.40", "1.01"),
    (2017, 22_072_574, "6.33054", "0.45", "0.22"),
    (2018, 22_498_981, "6.33507", "1.93", "0.72"),
    (2019, 22_714_272, "6.33695", "0.96", "0.30"),
    (2020, 23_393_543, "6.34386", "2.99", "1.09"),
    (2021, 23_603_906, "6.34600", "0.90", "0.34"),
    (2022, 24_226_168, "6.35316", "2.64", "1.13"),
    (2023, 24_338_455, "6.35388", "0.46", "0.11"),
    (2024, 24_409_969, "6.35444", "0.29", "0.09"),
];

/// The published 2007-2009 comparison: (year, htm, iso, reference).
pub const TABLE_2: [(i32, u64, u64, u64); 3] = [
    (2007, 19_519_644, 19_553_788, 22_823_405),
    (2008, 20_188_975, 19_580_762, 23_919_248),
    (2009, 20_477_455, 20_599_050, 24_224_985),
];

/// Deterministic word stream seeded per (year, title, section).
fn body_words(seed: u64, n: usize) -> String {
    const POOL: [&str; 16] = [
        "the", "of", "law", "act", "section", "term", "united", "states", "person", "any",
        "shall", "may", "commerce", "court", "public", "rule",
    ];
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut out = String::new();
    for i in 0..n {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        if i > 0 {
            out.push(' ');
        }
        out.push_str(POOL[(state >> 33) as usize % POOL.len()]);
    }
    out.push('.');
    out
}

fn xhtml_member(title: u32, sections: &[(String, String)]) -> String {
    let mut doc = String::new();
    doc.push_str("<!DOCTYPE html>\n<html>\n<head>\n");
    doc.push_str(
        "<meta http-equiv=\"Content-Type\" content=\"text/html; charset=UTF-8\">\n</head>\n<body>\n",
    );
    let _ = writeln!(doc, "<!-- expcite:TITLE {title}-EXAMPLE -->");
    let _ = writeln!(
        doc,
        "<h1 class=\"usc-title-head\">TITLE {title}&mdash;EXAMPLE</h1>"
    );
    for (id, body) in sections {
        doc.push_str("<!-- field-start:head -->\n");
        let _ = writeln!(doc, "<h3 class=\"section-head\">&sect;{id}. Heading</h3>");
        doc.push_str("<!-- field-end:head -->\n<!-- field-start:statute -->\n");
        let _ = writeln!(doc, "<p class=\"statutory-body\">{body}</p>");
        doc.push_str("<!-- field-end:statute -->\n<!-- field-start:sourcecredit -->\n");
        doc.push_str("<p class=\"source-credit\">(Pub. L. 90-321.)</p>\n");
        doc.push_str("<!-- field-end:sourcecredit -->\n<!-- field-start:notes -->\n");
        doc.push_str("<p class=\"note-body\">Annotation that never counts.</p>\n");
        doc.push_str("<!-- field-end:notes -->\n");
    }
    doc.push_str("</body>\n</html>\n");
    doc
}

fn src_member(title: u32, sections: &[(String, String)]) -> String {
    let mut doc = String::new();
    for (id, body) in sections {
        let _ = writeln!(doc, "-CITE-");
        let _ = writeln!(doc, "    {title} USC Sec. {id}");
        let _ = writeln!(doc, "-EXPCITE-");
        let _ = writeln!(doc, "    TITLE {title} - EXAMPLE");
        let _ = writeln!(doc, "-HEAD-");
        let _ = writeln!(doc, "    Sec. {id}. Heading");
        let _ = writeln!(doc, "-STATUTE-");
        let _ = writeln!(doc, "    {body}");
        let _ = writeln!(doc, "-SOURCE-");
        let _ = writeln!(doc, "    (Pub. L. 90-321.)");
        let _ = writeln!(doc, "-MISC1-");
        let _ = writeln!(doc, "    Annotation that never counts.");
        let _ = writeln!(doc, "-End-");
    }
    doc
}

fn sections(year: i32, title: u32, words_per_body: usize) -> Vec<(String, String)> {
    (1..=3u64)
        .map(|i| {
            let seed = (year as u64) << 20 | (title as u64) << 8 | i;
            (i.to_string(), body_words(seed, words_per_body + i as usize))
        })
        .collect()
}

pub fn write_zip(path: &Path, members: &[(String, String)]) {
    let file = File::create(path).expect("create zip");
    let mut writer = zip::ZipWriter::new(file);
    let options = SimpleFileOptions::default().compression_method(CompressionMethod::Deflated);
    for (name, content) in members {
        writer.start_file(name.as_str(), options).expect("member");
        writer.write_all(content.as_bytes()).expect("write");
    }
    writer.finish().expect("finish");
}

/// A miniature corpus rich enough for a full report run: SRC years
/// 1991-1996 (bodies scaled so the 1994-1996 ratio lands near 1.45) and
/// XHTML years 1994-1997.
pub fn build_fixture_corpus(root: &Path) {
    for year in 1994..=1997 {
        let base = 40 + (year - 1994) as usize * 8;
        let members: Vec<(String, String)> = (1..=2u32)
            .map(|t| {
                (
                    format!("{year}usc{t:02}.htm"),
                    xhtml_member(t, &sections(year, t, base)),
                )
            })
            .collect();
        write_zip(&root.join(format!("{year}.zip")), &members);
    }
    for year in 1991..=1996 {
        let base = 40 + (year - 1994).max(0) as usize * 8;
        let scaled = base * 29 / 20;
        let dir = root.join(format!("USC{year}"));
        std::fs::create_dir_all(&dir).expect("src dir");
        let mut text = String::new();
        for t in 1..=2u32 {
            text.push_str(&src_member(t, &sections(year, t, scaled)));
        }
        std::fs::write(dir.join(format!("USC{year}.SRC")), text).expect("src file");
    }
}
