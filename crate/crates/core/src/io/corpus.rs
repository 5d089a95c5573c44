use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{content_lines, escape, unescape};
use crate::error::FormatError;
use crate::model::{ConceptId, DocId};
use crate::retrieval::{Corpus, Document};

/// Parses `doc <id> title="<string>" terms=<id>{,<id>}` lines.
pub fn parse_corpus(text: &str) -> Result<Corpus, FormatError> {
    let mut corpus = Corpus::new();
    for (line, content) in content_lines(text) {
        let doc = parse_doc_line(content, line)?;
        if corpus.contains(doc.id.as_str()) {
            return Err(FormatError::DuplicateId { line, id: doc.id.to_string() });
        }
        corpus.insert(doc);
    }
    Ok(corpus)
}

fn parse_doc_line(content: &str, line: usize) -> Result<Document, FormatError> {
    let err = |m: &str| FormatError::syntax(line, m);
    let rest = content.strip_prefix("doc").ok_or_else(|| err("expected `doc`"))?;
    if !rest.starts_with(char::is_whitespace) {
        return Err(err("expected `doc`"));
    }
    let rest = rest.trim_start();
    let id_end = rest.find(char::is_whitespace).ok_or_else(|| err("missing title"))?;
    let id = DocId::new(&rest[..id_end]).map_err(|e| FormatError::syntax(line, e.to_string()))?;

    let rest = rest[id_end..].trim_start();
    let body = rest.strip_prefix("title=\"").ok_or_else(|| err("expected title=\"...\""))?;
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() && bytes[i] != b'"' {
        i += if bytes[i] == b'\\' { 2 } else { 1 };
    }
    if i >= bytes.len() {
        return Err(err("unterminated title"));
    }
    let title = unescape(&body[..i], line)?;

    let rest = &body[i + 1..];
    if !rest.starts_with(char::is_whitespace) {
        return Err(err("expected whitespace before terms="));
    }
    let list = rest.trim_start().strip_prefix("terms=").ok_or_else(|| err("expected terms="))?;
    if list.is_empty() {
        return Err(err("document has no index terms"));
    }
    if list.contains(char::is_whitespace) {
        return Err(err("unexpected trailing tokens"));
    }
    let terms = list
        .split(',')
        .map(|t| ConceptId::new(t).map_err(|e| FormatError::syntax(line, e.to_string())))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(Document { id, title, terms })
}

/// Writes one line per document in id order, terms sorted.
pub fn serialize_corpus(corpus: &Corpus) -> String {
    let mut out = String::new();
    for d in corpus.documents() {
        let terms: Vec<&str> = d.terms.iter().map(ConceptId::as_str).collect();
        let _ = writeln!(out, "doc {} title=\"{}\" terms={}", d.id, escape(&d.title, false), terms.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::SONGBIRD_DOCS;

    #[test]
    fn single_document() {
        let c = parse_corpus("doc d1 title=\"Titmice handbook\" terms=titmice").unwrap();
        assert_eq!(c.len(), 1);
        let d = c.document("d1").unwrap();
        assert_eq!(d.title, "Titmice handbook");
        assert_eq!(d.terms, [ConceptId::new("titmice").unwrap()].into());
    }

    #[test]
    fn rejects_bad_lines() {
        let e = parse_corpus("doc d9 title=\"x\" terms=").unwrap_err();
        assert!(matches!(e, FormatError::Syntax { line: 1, .. }));
        let e = parse_corpus("doc d1 title=\"a\" terms=x\n\ndoc d1 title=\"b\" terms=y\n").unwrap_err();
        assert_eq!(e, FormatError::DuplicateId { line: 3, id: "d1".into() });
        for bad in [
            "document d1 title=\"a\" terms=x",
            "doc d1 title=a terms=x",
            "doc d1 title=\"a terms=x",
            "doc d1 title=\"a\"terms=x",
            "doc d1 title=\"a\" terms=x,,y",
            "doc d1 title=\"a\" terms=x y",
            "doc d1",
        ] {
            assert!(parse_corpus(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn fixture_round_trips() {
        let c = parse_corpus(SONGBIRD_DOCS).unwrap();
        assert_eq!(c.len(), 4);
        let again = parse_corpus(&serialize_corpus(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn title_escapes() {
        let c = parse_corpus(r#"doc d1 title="The \"big\" one" terms=a,b"#).unwrap();
        assert_eq!(c.document("d1").unwrap().title, "The \"big\" one");
        assert_eq!(parse_corpus(&serialize_corpus(&c)).unwrap(), c);
    }
}
