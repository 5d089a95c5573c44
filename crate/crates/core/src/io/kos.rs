use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use super::{content_lines, escape, split_alternatives, tokenize, unescape, Token};
use crate::algebra::RelationType;
use crate::error::FormatError;
use crate::model::{
    BuildError, Concept, ConceptId, Edge, Facet, FacetId, HierKind, KnowledgeBase, KnowledgeBaseBuilder,
};

fn word<'a>(tokens: &[Token<'a>], i: usize, what: &str, line: usize) -> Result<&'a str, FormatError> {
    match tokens.get(i) {
        Some(Token::Word(w)) => Ok(w),
        Some(Token::Quoted(_)) => Err(FormatError::syntax(line, format!("expected {what}, found quoted string"))),
        None => Err(FormatError::syntax(line, format!("missing {what}"))),
    }
}

fn quoted<'a>(tokens: &[Token<'a>], i: usize, what: &str, line: usize) -> Result<&'a str, FormatError> {
    match tokens.get(i) {
        Some(Token::Quoted(q)) => Ok(q),
        Some(Token::Word(w)) => Err(FormatError::syntax(line, format!("expected quoted {what}, found `{w}`"))),
        None => Err(FormatError::syntax(line, format!("missing {what}"))),
    }
}

fn id<T: FromStr>(tokens: &[Token<'_>], i: usize, what: &str, line: usize) -> Result<T, FormatError> {
    let w = word(tokens, i, what, line)?;
    w.parse().map_err(|_| FormatError::syntax(line, format!("invalid {what} `{w}`")))
}

fn expect_len(tokens: &[Token<'_>], n: usize, line: usize) -> Result<(), FormatError> {
    if tokens.len() > n {
        return Err(FormatError::syntax(line, "unexpected trailing tokens"));
    }
    Ok(())
}

fn build_error(e: BuildError, line: usize) -> FormatError {
    match e {
        BuildError::DuplicateFacet(id) => FormatError::DuplicateId { line, id: id.to_string() },
        BuildError::DuplicateConcept(id) => FormatError::DuplicateId { line, id: id.to_string() },
        other => FormatError::syntax(line, other.to_string()),
    }
}

fn edge(source: ConceptId, target: ConceptId, rel: RelationType, line: usize) -> Result<Edge, FormatError> {
    Edge::new(source, target, rel).map_err(|e| FormatError::syntax(line, e.to_string()))
}

/// Parses a knowledge base file.
///
/// References to undeclared facets or concepts are kept and surface as
/// `E_DANGLING` from [`KnowledgeBase::validate`].
pub fn parse_kos(text: &str) -> Result<KnowledgeBase, FormatError> {
    let mut builder = KnowledgeBaseBuilder::new();
    for (line, content) in content_lines(text) {
        let tokens = tokenize(content, line)?;
        let keyword = word(&tokens, 0, "keyword", line)?;
        match keyword {
            "facet" => {
                let id: FacetId = id(&tokens, 1, "facet id", line)?;
                let label = unescape(quoted(&tokens, 2, "facet label", line)?, line)?;
                expect_len(&tokens, 3, line)?;
                builder.add_facet(Facet { id, label }).map_err(|e| build_error(e, line))?;
            }
            "concept" => {
                let cid: ConceptId = id(&tokens, 1, "concept id", line)?;
                let facet: FacetId = id(&tokens, 2, "facet id", line)?;
                if word(&tokens, 3, "`pref`", line)? != "pref" {
                    return Err(FormatError::syntax(line, "expected `pref`"));
                }
                let pref_label = unescape(quoted(&tokens, 4, "preferred label", line)?, line)?;
                let mut alt_labels = BTreeSet::new();
                if tokens.len() > 5 {
                    if word(&tokens, 5, "`alt`", line)? != "alt" {
                        return Err(FormatError::syntax(line, "expected `alt`"));
                    }
                    let raw = quoted(&tokens, 6, "alternative labels", line)?;
                    alt_labels.extend(split_alternatives(raw, line)?);
                    expect_len(&tokens, 7, line)?;
                }
                builder
                    .add_concept(Concept { id: cid, facet, pref_label, alt_labels })
                    .map_err(|e| build_error(e, line))?;
            }
            "broader" => {
                let child = id(&tokens, 1, "child id", line)?;
                let parent = id(&tokens, 2, "parent id", line)?;
                let kind_token = word(&tokens, 3, "hierarchy kind", line)?;
                let kind: HierKind = kind_token.parse().map_err(|e| FormatError::syntax(line, format!("{e}")))?;
                expect_len(&tokens, 4, line)?;
                builder.add_edge(edge(child, parent, kind.relation(), line)?).map_err(|e| build_error(e, line))?;
            }
            "before" => {
                let earlier = id(&tokens, 1, "earlier id", line)?;
                let later = id(&tokens, 2, "later id", line)?;
                expect_len(&tokens, 3, line)?;
                builder
                    .add_edge(edge(earlier, later, RelationType::EarlierLater, line)?)
                    .map_err(|e| build_error(e, line))?;
            }
            "rel" => {
                let source = id(&tokens, 1, "source id", line)?;
                let target = id(&tokens, 2, "target id", line)?;
                let token = word(&tokens, 3, "associative type", line)?;
                let rel = token
                    .parse::<RelationType>()
                    .ok()
                    .filter(|r| r.is_associative())
                    .ok_or_else(|| FormatError::syntax(line, format!("unknown associative type `{token}`")))?;
                expect_len(&tokens, 4, line)?;
                builder.add_edge(edge(source, target, rel, line)?).map_err(|e| build_error(e, line))?;
            }
            other => return Err(FormatError::syntax(line, format!("unknown line kind `{other}`"))),
        }
    }
    Ok(builder.build())
}

/// Writes the canonical form: facets by id, concepts by id, then edges by
/// (relation token, source, target).
pub fn serialize_kos(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for f in kb.facets() {
        let _ = writeln!(out, "facet {} \"{}\"", f.id, escape(&f.label, false));
    }
    for c in kb.concepts() {
        let _ = write!(out, "concept {} {} pref \"{}\"", c.id, c.facet, escape(&c.pref_label, false));
        if !c.alt_labels.is_empty() {
            let alts: Vec<String> = c.alt_labels.iter().map(|a| escape(a, true)).collect();
            let _ = write!(out, " alt \"{}\"", alts.join("|"));
        }
        out.push('\n');
    }
    let mut edges: Vec<&Edge> = kb.edges().collect();
    edges.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
    for e in edges {
        let _ = match HierKind::of(e.rel) {
            Some(kind) => writeln!(out, "broader {} {} {}", e.source, e.target, kind),
            None if e.rel == RelationType::EarlierLater => writeln!(out, "before {} {}", e.source, e.target),
            None => writeln!(out, "rel {} {} {}", e.source, e.target, e.rel),
        };
    }
    out
}
