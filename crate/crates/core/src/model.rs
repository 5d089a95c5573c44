//! Faceted knowledge base: facets, concepts with their labels, and typed
//! edges between concepts.
//!
//! Hierarchical edges point from child to parent, chronological edges from
//! the earlier to the later concept, associative edges in the direction named
//! by their type. A [`KnowledgeBase`] is immutable once built; adjacency and
//! label indexes are computed by [`KnowledgeBaseBuilder::build`].

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::RelationType;
use crate::error::{InvalidId, KosError, UnknownToken};

pub(crate) fn is_valid_id(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

macro_rules! identifier {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: &str) -> Result<Self, InvalidId> {
                if is_valid_id(s) {
                    Ok($name(Arc::from(s)))
                } else {
                    Err(InvalidId(s.to_owned()))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl FromStr for $name {
            type Err = InvalidId;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::new(s)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

identifier!(
    /// Identifier of a facet.
    FacetId
);
identifier!(
    /// Identifier of a concept.
    ConceptId
);
identifier!(
    /// Identifier of a document.
    DocId
);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub id: FacetId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub id: ConceptId,
    pub facet: FacetId,
    pub pref_label: String,
    pub alt_labels: BTreeSet<String>,
}

/// Kind of hierarchical relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HierKind {
    Generic,
    Partitive,
}

impl HierKind {
    pub const BOTH: [HierKind; 2] = [HierKind::Generic, HierKind::Partitive];

    pub fn relation(self) -> RelationType {
        match self {
            HierKind::Generic => RelationType::HierGeneric,
            HierKind::Partitive => RelationType::HierPartitive,
        }
    }

    pub fn of(rel: RelationType) -> Option<HierKind> {
        match rel {
            RelationType::HierGeneric => Some(HierKind::Generic),
            RelationType::HierPartitive => Some(HierKind::Partitive),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        self.relation().token()
    }
}

impl fmt::Display for HierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for HierKind {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "generic" => Ok(HierKind::Generic),
            "partitive" => Ok(HierKind::Partitive),
            _ => Err(UnknownToken::new("hierarchy kind", s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeError {
    #[error("edge from `{0}` to itself")]
    SelfLoop(ConceptId),
    #[error("`{0}` edges are not stored")]
    NotStorable(RelationType),
}

/// A stored, directed, typed edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: ConceptId,
    pub target: ConceptId,
    pub rel: RelationType,
}

impl Edge {
    /// Synonymy lives in concept labels and chronology is stored earlier to
    /// later only, so `Synonym` and `LaterEarlier` edges are rejected.
    pub fn new(source: ConceptId, target: ConceptId, rel: RelationType) -> Result<Self, EdgeError> {
        if matches!(rel, RelationType::Synonym | RelationType::LaterEarlier) {
            return Err(EdgeError::NotStorable(rel));
        }
        if source == target {
            return Err(EdgeError::SelfLoop(source));
        }
        Ok(Edge { source, target, rel })
    }

    /// Canonical ordering key: relation token, then source, then target.
    pub fn canonical_key(&self) -> (&'static str, &str, &str) {
        (self.rel.token(), self.source.as_str(), self.target.as_str())
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.source, self.rel, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("duplicate facet `{0}`")]
    DuplicateFacet(FacetId),
    #[error("duplicate concept `{0}`")]
    DuplicateConcept(ConceptId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("concept `{0}` has an empty label")]
    EmptyLabel(ConceptId),
    #[error("concept `{0}` lists its preferred label as an alternative label")]
    AltIsPref(ConceptId),
}

/// Collects facets, concepts and edges for a [`KnowledgeBase`].
///
/// Edge endpoints and concept facets are not resolved here; dangling
/// references are reported by [`KnowledgeBase::validate`].
#[derive(Debug, Default)]
pub struct KnowledgeBaseBuilder {
    facets: BTreeMap<FacetId, Facet>,
    concepts: BTreeMap<ConceptId, Concept>,
    edges: BTreeSet<Edge>,
}

impl KnowledgeBaseBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_facet(&mut self, facet: Facet) -> Result<&mut Self, BuildError> {
        if self.facets.contains_key(&facet.id) {
            return Err(BuildError::DuplicateFacet(facet.id));
        }
        self.facets.insert(facet.id.clone(), facet);
        Ok(self)
    }

    pub fn add_concept(&mut self, concept: Concept) -> Result<&mut Self, BuildError> {
        if self.concepts.contains_key(&concept.id) {
            return Err(BuildError::DuplicateConcept(concept.id));
        }
        if concept.pref_label.is_empty() || concept.alt_labels.iter().any(String::is_empty) {
            return Err(BuildError::EmptyLabel(concept.id));
        }
        if concept.alt_labels.contains(&concept.pref_label) {
            return Err(BuildError::AltIsPref(concept.id));
        }
        self.concepts.insert(concept.id.clone(), concept);
        Ok(self)
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<&mut Self, BuildError> {
        if self.edges.contains(&edge) {
            return Err(BuildError::DuplicateEdge(edge));
        }
        self.edges.insert(edge);
        Ok(self)
    }

    pub fn contains_facet(&self, id: &str) -> bool {
        self.facets.contains_key(id)
    }

    pub fn contains_concept(&self, id: &str) -> bool {
        self.concepts.contains_key(id)
    }

    pub fn build(self) -> KnowledgeBase {
        KnowledgeBase::from_parts(self.facets, self.concepts, self.edges)
    }
}

/// An immutable faceted knowledge base.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    facets: BTreeMap<FacetId, Facet>,
    concepts: BTreeMap<ConceptId, Concept>,
    edges: BTreeSet<Edge>,
    outgoing: HashMap<ConceptId, Vec<Edge>>,
    incoming: HashMap<ConceptId, Vec<Edge>>,
    by_label: HashMap<String, BTreeSet<ConceptId>>,
}

impl PartialEq for KnowledgeBase {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets && self.concepts == other.concepts && self.edges == other.edges
    }
}

impl Eq for KnowledgeBase {}

impl Default for KnowledgeBase {
    fn default() -> Self {
        KnowledgeBaseBuilder::new().build()
    }
}

const NO_EDGES: &[Edge] = &[];

impl KnowledgeBase {
    fn from_parts(
        facets: BTreeMap<FacetId, Facet>,
        concepts: BTreeMap<ConceptId, Concept>,
        edges: BTreeSet<Edge>,
    ) -> Self {
        let mut outgoing: HashMap<ConceptId, Vec<Edge>> = HashMap::new();
        let mut incoming: HashMap<ConceptId, Vec<Edge>> = HashMap::new();
        // `edges` iterates in (source, target, rel) order, so both lists
        // come out sorted.
        for e in &edges {
            outgoing.entry(e.source.clone()).or_default().push(e.clone());
            incoming.entry(e.target.clone()).or_default().push(e.clone());
        }
        for list in incoming.values_mut() {
            list.sort_by(|a, b| (&a.source, a.rel).cmp(&(&b.source, b.rel)));
        }
        let mut by_label: HashMap<String, BTreeSet<ConceptId>> = HashMap::new();
        for c in concepts.values() {
            for label in std::iter::once(&c.pref_label).chain(&c.alt_labels) {
                by_label.entry(label.clone()).or_default().insert(c.id.clone());
            }
        }
        KnowledgeBase { facets, concepts, edges, outgoing, incoming, by_label }
    }

    /// Rebuilds a knowledge base with a different edge set.
    pub fn with_edges(&self, edges: impl IntoIterator<Item = Edge>) -> KnowledgeBase {
        KnowledgeBase::from_parts(self.facets.clone(), self.concepts.clone(), edges.into_iter().collect())
    }

    pub fn facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.values()
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    /// All edges in (source, target, relation) order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn facet(&self, id: &str) -> Option<&Facet> {
        self.facets.get(id)
    }

    pub fn concept(&self, id: &str) -> Option<&Concept> {
        self.concepts.get(id)
    }

    pub fn contains_edge(&self, edge: &Edge) -> bool {
        self.edges.contains(edge)
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty() && self.concepts.is_empty() && self.edges.is_empty()
    }

    /// Looks up a declared concept, returning its shared id.
    pub fn concept_id(&self, id: &str) -> Result<&ConceptId, KosError> {
        self.concepts.get_key_value(id).map(|(k, _)| k).ok_or_else(|| KosError::NotFound(id.to_owned()))
    }

    /// Edges leaving `c`, sorted by (target, relation).
    pub fn outgoing(&self, c: &str) -> &[Edge] {
        self.outgoing.get(c).map_or(NO_EDGES, Vec::as_slice)
    }

    /// Edges entering `c`, sorted by (source, relation).
    pub fn incoming(&self, c: &str) -> &[Edge] {
        self.incoming.get(c).map_or(NO_EDGES, Vec::as_slice)
    }

    /// Resolves a concept reference: an id, or a label (optionally in double
    /// quotes) matching exactly one concept's preferred or alternative label.
    pub fn resolve_ref(&self, reference: &str) -> Result<ConceptId, KosError> {
        if let Some((id, _)) = self.concepts.get_key_value(reference) {
            return Ok(id.clone());
        }
        let label = unquote(reference);
        match self.by_label.get(label.as_ref()) {
            None => Err(KosError::NotFound(reference.to_owned())),
            Some(ids) if ids.len() == 1 => Ok(ids.iter().next().cloned().unwrap()),
            Some(ids) => {
                Err(KosError::Ambiguous { reference: reference.to_owned(), candidates: ids.iter().cloned().collect() })
            }
        }
    }

    /// Direct parents of `c` of the given kind.
    pub fn parents_of(&self, c: &str, kind: HierKind) -> Result<BTreeSet<ConceptId>, KosError> {
        self.concept_id(c)?;
        let rel = kind.relation();
        Ok(self.outgoing(c).iter().filter(|e| e.rel == rel).map(|e| e.target.clone()).collect())
    }

    /// Direct children of `c` of the given kind.
    pub fn children_of(&self, c: &str, kind: HierKind) -> Result<BTreeSet<ConceptId>, KosError> {
        self.concept_id(c)?;
        let rel = kind.relation();
        Ok(self.incoming(c).iter().filter(|e| e.rel == rel).map(|e| e.source.clone()).collect())
    }
}

/// Strips surrounding double quotes and resolves `\"` and `\\` escapes.
pub(crate) fn unquote(s: &str) -> std::borrow::Cow<'_, str> {
    let Some(inner) = s.strip_prefix('"').and_then(|r| r.strip_suffix('"')) else {
        return s.into();
    };
    if !inner.contains('\\') {
        return inner.into();
    }
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(ch) = chars.next() {
        if ch == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(ch);
        }
    }
    out.into()
}
