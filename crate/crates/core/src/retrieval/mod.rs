//! Post-coordinate document retrieval.
//!
//! Documents are indexed with concept ids. A query term matches documents
//! indexed with the concept or anything below it; `=term` disables the
//! expansion. `base WITH [rel: target]` matches documents indexed with the
//! concepts selected by [`select_constrained`](crate::inference::select_constrained),
//! so neither the base nor the target has to be an index term.

mod query;

pub use query::{parse_query, Query, TermRef};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::KosError;
use crate::inference::{descendants, select_constrained_with, ConceptSet};
use crate::model::{ConceptId, DocId, HierKind, KnowledgeBase};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: DocId,
    pub title: String,
    pub terms: BTreeSet<ConceptId>,
}

/// Documents plus an inverted index from concept to documents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: BTreeMap<DocId, Document>,
    index: BTreeMap<ConceptId, BTreeSet<DocId>>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a document and updates the index.
    pub fn insert(&mut self, doc: Document) -> Option<Document> {
        let previous = self.documents.remove(doc.id.as_str());
        if let Some(old) = &previous {
            for t in &old.terms {
                if let Some(ids) = self.index.get_mut(t.as_str()) {
                    ids.remove(old.id.as_str());
                    if ids.is_empty() {
                        self.index.remove(t.as_str());
                    }
                }
            }
        }
        for t in &doc.terms {
            self.index.entry(t.clone()).or_default().insert(doc.id.clone());
        }
        self.documents.insert(doc.id.clone(), doc);
        previous
    }

    pub fn contains(&self, id: &str) -> bool {
        self.documents.contains_key(id)
    }

    pub fn document(&self, id: &str) -> Option<&Document> {
        self.documents.get(id)
    }

    /// Documents in id order.
    pub fn documents(&self) -> impl Iterator<Item = &Document> {
        self.documents.values()
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn index(&self) -> &BTreeMap<ConceptId, BTreeSet<DocId>> {
        &self.index
    }

    /// Documents indexed with `term` itself.
    pub fn docs_with(&self, term: &str) -> impl Iterator<Item = &DocId> {
        self.index.get(term).into_iter().flatten()
    }

    /// Recomputes the inverted index from the documents.
    pub fn rebuild_index(&self) -> Corpus {
        let mut index: BTreeMap<ConceptId, BTreeSet<DocId>> = BTreeMap::new();
        for d in self.documents.values() {
            for t in &d.terms {
                index.entry(t.clone()).or_default().insert(d.id.clone());
            }
        }
        Corpus { documents: self.documents.clone(), index }
    }

    /// Fails on the first index term that is not a concept of `kb`.
    pub fn check_terms(&self, kb: &KnowledgeBase) -> Result<(), KosError> {
        for d in self.documents.values() {
            if let Some(t) = d.terms.iter().find(|t| kb.concept(t.as_str()).is_none()) {
                return Err(KosError::UnknownTerm { doc: d.id.to_string(), term: t.to_string() });
            }
        }
        Ok(())
    }
}

/// Matching documents in id order, and the index terms through which they
/// matched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResultSet {
    pub docs: Vec<DocId>,
    pub matched_terms: ConceptSet,
}

struct Partial {
    docs: BTreeSet<DocId>,
    concepts: ConceptSet,
}

/// Evaluates a parsed query.
pub fn eval_query(kb: &KnowledgeBase, corpus: &Corpus, query: &Query) -> Result<ResultSet, KosError> {
    let partial = eval(kb, corpus, query)?;
    let mut matched_terms = ConceptSet::new();
    for d in &partial.docs {
        let doc = corpus.document(d.as_str()).expect("result documents come from the corpus");
        matched_terms.extend(doc.terms.intersection(&partial.concepts).cloned());
    }
    Ok(ResultSet { docs: partial.docs.into_iter().collect(), matched_terms })
}

fn docs_for(corpus: &Corpus, concepts: ConceptSet) -> Partial {
    let docs = concepts.iter().flat_map(|c| corpus.docs_with(c.as_str())).cloned().collect();
    Partial { docs, concepts }
}

fn eval(kb: &KnowledgeBase, corpus: &Corpus, query: &Query) -> Result<Partial, KosError> {
    Ok(match query {
        Query::Term(t) => {
            let c = kb.resolve_ref(&t.reference)?;
            let concepts =
                if t.exact { ConceptSet::from([c]) } else { descendants(kb, c.as_str(), &HierKind::BOTH, true)? };
            docs_for(corpus, concepts)
        }
        Query::With { base, rel, target } => {
            let base = kb.resolve_ref(&base.reference)?;
            let target_id = kb.resolve_ref(&target.reference)?;
            let selected = select_constrained_with(kb, base.as_str(), *rel, target_id.as_str(), !target.exact)?;
            docs_for(corpus, selected)
        }
        Query::And(l, r) => {
            let (l, r) = (eval(kb, corpus, l)?, eval(kb, corpus, r)?);
            Partial {
                docs: l.docs.intersection(&r.docs).cloned().collect(),
                concepts: l.concepts.union(&r.concepts).cloned().collect(),
            }
        }
        Query::Or(l, r) => {
            let (l, r) = (eval(kb, corpus, l)?, eval(kb, corpus, r)?);
            Partial {
                docs: l.docs.union(&r.docs).cloned().collect(),
                concepts: l.concepts.union(&r.concepts).cloned().collect(),
            }
        }
        Query::AndNot(l, r) => {
            let (l, r) = (eval(kb, corpus, l)?, eval(kb, corpus, r)?);
            Partial { docs: l.docs.difference(&r.docs).cloned().collect(), concepts: l.concepts }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{SONGBIRD_DOCS, SONGBIRD_KOS};
    use crate::io::{parse_corpus, parse_kos};

    fn run(q: &str) -> Result<ResultSet, KosError> {
        let kb = parse_kos(SONGBIRD_KOS).unwrap();
        let corpus = parse_corpus(SONGBIRD_DOCS).unwrap();
        eval_query(&kb, &corpus, &parse_query(q).unwrap())
    }

    fn docs(q: &str) -> Vec<String> {
        run(q).unwrap().docs.iter().map(|d| d.to_string()).collect()
    }

    #[test]
    fn query_examples() {
        assert_eq!(docs("songbirds"), ["d1", "d2", "d3", "d4"]);
        assert_eq!(docs("songbirds WITH [assoc: mig_instinct]"), ["d2", "d3"]);
        assert_eq!(docs("=songbirds"), ["d4"]);
        assert_eq!(docs("songbirds AND europe"), ["d3"]);
    }

    #[test]
    fn boolean_operators() {
        assert_eq!(docs("songbirds ANDNOT warblers"), ["d1", "d2", "d4"]);
        assert_eq!(docs("titmice OR nightingale"), ["d1", "d2"]);
        assert_eq!(docs("(titmice OR europe) AND warblers"), ["d3"]);
        assert_eq!(docs("\"Singing birds\" ANDNOT =songbirds"), ["d1", "d2", "d3"]);
        assert!(docs("migration").is_empty());
    }

    #[test]
    fn matched_terms() {
        let r = run("songbirds WITH [assoc: mig_instinct]").unwrap();
        let terms: Vec<&str> = r.matched_terms.iter().map(|c| c.as_str()).collect();
        assert_eq!(terms, ["blackcap", "nightingale"]);
        let r = run("songbirds AND europe").unwrap();
        let terms: Vec<&str> = r.matched_terms.iter().map(|c| c.as_str()).collect();
        assert_eq!(terms, ["blackcap", "europe"]);
    }

    #[test]
    fn exact_target_is_not_expanded() {
        assert!(docs("songbirds WITH [assoc: =migration]").is_empty());
        assert_eq!(docs("songbirds WITH [assoc: migration]"), ["d2", "d3"]);
    }

    #[test]
    fn evaluation_errors() {
        assert!(matches!(run("nosuch"), Err(KosError::NotFound(_))));
        assert!(matches!(run("songbirds WITH [generic: migration]"), Err(KosError::BadRelType(_))));
    }

    #[test]
    fn index_rebuild() {
        let corpus = parse_corpus(SONGBIRD_DOCS).unwrap();
        let rebuilt = corpus.rebuild_index();
        assert_eq!(rebuilt, corpus);
        assert_eq!(rebuilt.rebuild_index(), rebuilt);
        let titmice: Vec<_> = rebuilt.docs_with("titmice").map(|d| d.as_str()).collect();
        assert_eq!(titmice, ["d1"]);
        assert!(Corpus::new().rebuild_index().index().is_empty());
    }

    #[test]
    fn replacing_a_document_updates_the_index() {
        let mut corpus = parse_corpus(SONGBIRD_DOCS).unwrap();
        let d1 = DocId::new("d1").unwrap();
        let old = corpus.insert(Document {
            id: d1,
            title: "Now about warblers".into(),
            terms: [ConceptId::new("warblers").unwrap()].into(),
        });
        assert!(old.is_some());
        assert_eq!(corpus.docs_with("titmice").count(), 0);
        assert_eq!(corpus, corpus.rebuild_index());
    }

    #[test]
    fn unknown_terms_are_reported() {
        let kb = parse_kos(SONGBIRD_KOS).unwrap();
        let corpus = parse_corpus("doc x title=\"t\" terms=songbirds,dodo").unwrap();
        assert_eq!(corpus.check_terms(&kb), Err(KosError::UnknownTerm { doc: "x".into(), term: "dodo".into() }));
    }
}
