//! Import of a SKOS subset written as N-Triples.
//!
//! Recognized predicates:
//!
//! | predicate                      | effect                                  |
//! |--------------------------------|-----------------------------------------|
//! | `skos:broader`                 | generic edge subject -> object          |
//! | `skos:narrower`                | generic edge object -> subject          |
//! | `skos:related`                 | `assoc` edge subject -> object          |
//! | `skos:prefLabel`               | preferred label (first one wins)        |
//! | `skos:altLabel`                | alternative label                       |
//! | `skos:inScheme`                | facet assignment (first one wins)       |
//! | `rdf:type skos:Concept`        | declares a concept                      |
//! | `rdf:type skos:ConceptScheme`  | declares a facet                        |
//!
//! Every other triple is counted in [`SkosImport::skipped`]. Concepts without
//! a scheme are placed in the facet [`DEFAULT_FACET`].

use std::collections::{BTreeSet, HashMap, HashSet};

use super::content_lines;
use crate::algebra::RelationType;
use crate::error::FormatError;
use crate::model::{is_valid_id, Concept, ConceptId, Edge, Facet, FacetId, KnowledgeBase, KnowledgeBaseBuilder};

const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// Facet receiving concepts that are not in any scheme.
pub const DEFAULT_FACET: &str = "_default";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkosImport {
    pub kb: KnowledgeBase,
    /// Number of triples with an unrecognized predicate (or `rdf:type` object).
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Term {
    Iri(String),
    Literal(String),
}

struct Triple {
    line: usize,
    subject: String,
    predicate: String,
    object: Term,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> FormatError {
        FormatError::syntax(self.line, msg)
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn iri(&mut self) -> Result<String, FormatError> {
        self.skip_ws();
        match self.peek() {
            Some(b'<') => {
                let rest = &self.text[self.pos + 1..];
                let end = rest.find('>').ok_or_else(|| self.err("unterminated IRI"))?;
                let iri = &rest[..end];
                if iri.is_empty() || iri.contains(char::is_whitespace) {
                    return Err(self.err(format!("invalid IRI <{iri}>")));
                }
                self.pos += end + 2;
                Ok(iri.to_owned())
            }
            Some(b'_') if self.text[self.pos..].starts_with("_:") => {
                let rest = &self.text[self.pos..];
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                self.pos += end;
                Ok(rest[..end].to_owned())
            }
            _ => Err(self.err("expected IRI")),
        }
    }

    fn literal(&mut self) -> Result<String, FormatError> {
        let bytes = self.text.as_bytes();
        let mut out = String::new();
        let mut i = self.pos + 1;
        loop {
            match bytes.get(i) {
                None => return Err(self.err("unterminated literal")),
                Some(b'"') => break,
                Some(b'\\') => {
                    let (ch, used) = match bytes.get(i + 1) {
                        Some(b't') => ('\t', 2),
                        Some(b'n') => ('\n', 2),
                        Some(b'r') => ('\r', 2),
                        Some(b'"') => ('"', 2),
                        Some(b'\'') => ('\'', 2),
                        Some(b'\\') => ('\\', 2),
                        Some(b'u') => (self.hex(i + 2, 4)?, 6),
                        Some(b'U') => (self.hex(i + 2, 8)?, 10),
                        _ => return Err(self.err("invalid escape in literal")),
                    };
                    out.push(ch);
                    i += used;
                }
                Some(_) => {
                    let ch = self.text[i..].chars().next().expect("char boundary");
                    out.push(ch);
                    i += ch.len_utf8();
                }
            }
        }
        self.pos = i + 1;
        // language tag or datatype
        if self.peek() == Some(b'@') {
            let rest = &self.text[self.pos..];
            let end = rest.find(|c: char| c.is_whitespace() || c == '.').unwrap_or(rest.len());
            if end < 2 {
                return Err(self.err("empty language tag"));
            }
            self.pos += end;
        } else if self.text[self.pos..].starts_with("^^") {
            self.pos += 2;
            self.iri()?;
        }
        Ok(out)
    }

    fn hex(&self, at: usize, len: usize) -> Result<char, FormatError> {
        self.text
            .get(at..at + len)
            .and_then(|h| u32::from_str_radix(h, 16).ok())
            .and_then(char::from_u32)
            .ok_or_else(|| self.err("invalid unicode escape"))
    }

    fn object(&mut self) -> Result<Term, FormatError> {
        self.skip_ws();
        if self.peek() == Some(b'"') {
            self.literal().map(Term::Literal)
        } else {
            self.iri().map(Term::Iri)
        }
    }

    fn end(&mut self) -> Result<(), FormatError> {
        self.skip_ws();
        if self.peek() != Some(b'.') {
            return Err(self.err("expected terminating `.`"));
        }
        self.pos += 1;
        self.skip_ws();
        match self.peek() {
            None | Some(b'#') => Ok(()),
            Some(_) => Err(self.err("unexpected content after `.`")),
        }
    }
}

fn parse_triples(text: &str) -> Result<Vec<Triple>, FormatError> {
    content_lines(text)
        .map(|(line, content)| {
            let mut cur = Cursor { text: content, pos: 0, line };
            let subject = cur.iri()?;
            let predicate = cur.iri()?;
            let object = cur.object()?;
            cur.end()?;
            Ok(Triple { line, subject, predicate, object })
        })
        .collect()
}

/// Maps IRIs to identifiers derived from their local names, disambiguating
/// collisions with a numeric suffix in order of first appearance.
#[derive(Default)]
struct IdMinter {
    assigned: HashMap<String, String>,
    taken: BTreeSet<String>,
}

impl IdMinter {
    fn mint(&mut self, iri: &str) -> String {
        if let Some(id) = self.assigned.get(iri) {
            return id.clone();
        }
        let local = iri.rsplit(['#', '/', ':']).find(|s| !s.is_empty()).unwrap_or(iri);
        let mut base: String = local
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-') { c } else { '_' })
            .collect();
        if !is_valid_id(&base) {
            base = "_".into();
        }
        let mut candidate = base.clone();
        let mut n = 2;
        while self.taken.contains(&candidate) {
            candidate = format!("{base}_{n}");
            n += 1;
        }
        self.taken.insert(candidate.clone());
        self.assigned.insert(iri.to_owned(), candidate.clone());
        candidate
    }
}

#[derive(Default)]
struct Labels {
    pref: Option<String>,
    alt: BTreeSet<String>,
}

/// Imports concepts, schemes, labels and relations from N-Triples lines.
pub fn import_skos_subset(text: &str) -> Result<SkosImport, FormatError> {
    let triples = parse_triples(text)?;

    let skos = |name: &str| format!("{SKOS}{name}");
    let (broader, narrower, related) = (skos("broader"), skos("narrower"), skos("related"));
    let (pref_label, alt_label, in_scheme) = (skos("prefLabel"), skos("altLabel"), skos("inScheme"));
    let (concept_class, scheme_class) = (skos("Concept"), skos("ConceptScheme"));

    // First pass: schemes, in order of first appearance.
    let mut schemes = Vocabulary::default();
    for t in &triples {
        match (&t.predicate, &t.object) {
            (p, Term::Iri(o)) if *p == in_scheme => schemes.note(o),
            (p, Term::Iri(o)) if p == RDF_TYPE && *o == scheme_class => schemes.note(&t.subject),
            _ => {}
        }
    }

    // Second pass: concepts, labels, scheme membership and edges.
    let mut concepts = Vocabulary::default();
    let mut labels: HashMap<&str, Labels> = HashMap::new();
    let mut scheme_of: HashMap<&str, &str> = HashMap::new();
    let mut edges: Vec<(usize, &str, &str, RelationType)> = Vec::new();
    let mut skipped = 0;

    for t in &triples {
        let iri_object = || match &t.object {
            Term::Iri(o) => Ok(o.as_str()),
            Term::Literal(_) => Err(FormatError::syntax(t.line, "expected an IRI object")),
        };
        let literal_object = || match &t.object {
            Term::Literal(l) => Ok(l.as_str()),
            Term::Iri(_) => Err(FormatError::syntax(t.line, "expected a literal object")),
        };
        let concept = |iri: &str| {
            if schemes.contains(iri) {
                Err(FormatError::syntax(t.line, format!("<{iri}> is a concept scheme, not a concept")))
            } else {
                Ok(())
            }
        };
        let p = t.predicate.as_str();
        let subject = t.subject.as_str();
        if p == broader || p == narrower || p == related {
            let o = iri_object()?;
            if o == subject {
                return Err(FormatError::syntax(t.line, "relation from a concept to itself"));
            }
            let (source, target) = if p == narrower { (o, subject) } else { (subject, o) };
            let rel = if p == related { RelationType::UnspecificAssociation } else { RelationType::HierGeneric };
            concept(source)?;
            concept(target)?;
            concepts.note(source);
            concepts.note(target);
            edges.push((t.line, source, target, rel));
        } else if p == pref_label || p == alt_label {
            let l = literal_object()?;
            if l.is_empty() {
                continue;
            }
            let entry = labels.entry(subject).or_default();
            if p == pref_label && entry.pref.is_none() {
                entry.pref = Some(l.to_owned());
            } else {
                entry.alt.insert(l.to_owned());
            }
            if !schemes.contains(subject) {
                concepts.note(subject);
            }
        } else if p == in_scheme {
            let o = iri_object()?;
            concept(subject)?;
            scheme_of.entry(subject).or_insert(o);
            concepts.note(subject);
        } else if p == RDF_TYPE && matches!(&t.object, Term::Iri(o) if *o == concept_class) {
            concept(subject)?;
            concepts.note(subject);
        } else if p == RDF_TYPE && matches!(&t.object, Term::Iri(o) if *o == scheme_class) {
            // handled in the first pass
        } else {
            skipped += 1;
        }
    }

    let mut builder = KnowledgeBaseBuilder::new();
    let mut facet_ids = IdMinter::default();
    let mut facet_of_scheme: HashMap<&str, FacetId> = HashMap::new();
    for s in &schemes.order {
        let id = FacetId::new(&facet_ids.mint(s)).expect("minted ids are valid");
        let label = labels.get(s).and_then(|l| l.pref.clone()).unwrap_or_else(|| id.to_string());
        builder.add_facet(Facet { id: id.clone(), label }).expect("scheme iris are unique");
        facet_of_scheme.insert(s, id);
    }

    let mut concept_ids = IdMinter::default();
    let id_of: HashMap<&str, ConceptId> = concepts
        .order
        .iter()
        .map(|c| (*c, ConceptId::new(&concept_ids.mint(c)).expect("minted ids are valid")))
        .collect();
    let default_facet = FacetId::new(DEFAULT_FACET).expect("valid id");
    let mut uses_default = false;
    for c in &concepts.order {
        let facet = match scheme_of.get(c) {
            Some(s) => facet_of_scheme[s].clone(),
            None => {
                uses_default = true;
                default_facet.clone()
            }
        };
        let id = id_of[c].clone();
        let l = labels.remove(c).unwrap_or_default();
        let pref_label = l.pref.unwrap_or_else(|| id.to_string());
        let mut alt_labels = l.alt;
        alt_labels.remove(&pref_label);
        builder.add_concept(Concept { id, facet, pref_label, alt_labels }).expect("concept iris are unique");
    }
    if uses_default && !builder.contains_facet(DEFAULT_FACET) {
        builder.add_facet(Facet { id: default_facet, label: "Default".into() }).expect("default facet is added once");
    }

    // broader and narrower stating the same link collapse to one edge
    let mut stored = BTreeSet::new();
    for (line, s, t, rel) in edges {
        let edge =
            Edge::new(id_of[s].clone(), id_of[t].clone(), rel).map_err(|e| FormatError::syntax(line, e.to_string()))?;
        if stored.insert(edge.clone()) {
            builder.add_edge(edge).expect("edge inserted once");
        }
    }

    Ok(SkosImport { kb: builder.build(), skipped })
}

/// IRIs in order of first appearance.
#[derive(Default)]
struct Vocabulary<'a> {
    order: Vec<&'a str>,
    seen: HashSet<&'a str>,
}

impl<'a> Vocabulary<'a> {
    fn note(&mut self, iri: &'a str) {
        if self.seen.insert(iri) {
            self.order.push(iri);
        }
    }

    fn contains(&self, iri: &str) -> bool {
        self.seen.contains(iri)
    }
}
