//! Fixture builders: miniature USC-style documents and archives.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use zip::write::SimpleFileOptions;
use zip::CompressionMethod;

pub fn write_zip(path: &Path, members: &[(&str, &str)]) {
    let file = File::create(path).expect("create zip");
    let mut writer = zip::ZipWriter::new(file);
    let options = SimpleFileOptions::default().compression_method(CompressionMethod::Deflated);
    for (name, content) in members {
        writer.start_file(*name, options).expect("start member");
        writer.write_all(content.as_bytes()).expect("write member");
    }
    writer.finish().expect("finish zip");
}

/// One USC-style XHTML title document with the standard field comments
/// and class vocabulary. `sections` are (id, headline, body) triples.
pub fn xhtml_member(title: u32, sections: &[(&str, &str, &str)]) -> String {
    let mut doc = String::new();
    doc.push_str("<!DOCTYPE html>\n<html>\n<head>\n");
    doc.push_str(
        "<meta http-equiv=\"Content-Type\" content=\"text/html; charset=UTF-8\">\n</head>\n<body>\n",
    );
    doc.push_str(&format!(
        "<!-- expcite:TITLE {title}-EXAMPLE PROVISIONS -->\n"
    ));
    doc.push_str(&format!(
        "<h1 class=\"usc-title-head\">TITLE {title}&mdash;EXAMPLE PROVISIONS</h1>\n"
    ));
    doc.push_str("<!-- field-start:analysis -->\n<table class=\"analysis\"><tr><td>Sec.</td><td>Table of contents entry</td></tr></table>\n<!-- field-end:analysis -->\n");
    for (id, headline, body) in sections {
        doc.push_str(&format!(
            "<!-- expcite:TITLE {title}-EXAMPLE PROVISIONS!@!Sec. {id} -->\n"
        ));
        doc.push_str("<!-- field-start:head -->\n");
        doc.push_str(&format!(
            "<h3 class=\"section-head\">&sect;{id}. {headline}</h3>\n"
        ));
        doc.push_str("<!-- field-end:head -->\n<!-- field-start:statute -->\n");
        doc.push_str(&format!("<p class=\"statutory-body\">{body}</p>\n"));
        doc.push_str("<!-- field-end:statute -->\n<!-- field-start:sourcecredit -->\n");
        doc.push_str("<p class=\"source-credit\">(Pub. L. 90-321, title I, &sect;101.)</p>\n");
        doc.push_str("<!-- field-end:sourcecredit -->\n<!-- field-start:notes -->\n");
        doc.push_str("<h4 class=\"note-head\">Editorial Notes</h4>\n");
        doc.push_str("<p class=\"note-body\">Annotation words that must never be counted.</p>\n");
        doc.push_str("<!-- field-end:notes -->\n");
    }
    doc.push_str("</body>\n</html>\n");
    doc
}

/// One USC-style SRC document in the marker-line format.
pub fn src_member(title: u32, sections: &[(&str, &str, &str)]) -> String {
    let mut doc = String::new();
    for (id, headline, body) in sections {
        doc.push_str("-CITE-\n");
        doc.push_str(&format!("    {title} USC Sec. {id}\n"));
        doc.push_str("-EXPCITE-\n");
        doc.push_str(&format!("    TITLE {title} - EXAMPLE PROVISIONS\n"));
        doc.push_str("-HEAD-\n");
        doc.push_str(&format!("    Sec. {id}. {headline}\n"));
        doc.push_str("-STATUTE-\n");
        doc.push_str(&format!("    {body}\n"));
        doc.push_str("-SOURCE-\n");
        doc.push_str("    (Pub. L. 90-321, title I, Sec. 101.)\n");
        doc.push_str("-MISC1-\n");
        doc.push_str("    Annotation words that must never be counted.\n");
        doc.push_str("-End-\n");
    }
    doc
}
