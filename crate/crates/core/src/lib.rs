//! Faceted knowledge organization with typed relations.
//!
//! - [`model`]: facets, concepts, typed edges, and reference resolution
//! - [`validate`](KnowledgeBase::validate): structural diagnostics
//! - [`algebra`]: the relation inventory and its composition table
//! - [`inference`]: closures, inheritance, constraint selection, materialization
//! - [`retrieval`]: corpus index and the query language
//! - [`io`]: `.kos` and corpus text formats, SKOS subset import
//! - [`dot`]: Graphviz rendering

pub mod algebra;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod inference;
pub mod io;
pub mod model;
pub mod retrieval;
pub mod validate;

pub use algebra::{compose, invert, path_status, CompositionEntry, RelationType, TableSource, TransitivityStatus};
pub use error::{FormatError, KosError, QueryParseError};
pub use inference::{
    ancestors, descendants, lint_redundant, materialize_inferences, redundant_edges, related_via, select_constrained,
    ConceptSet, InferredEdge,
};
pub use model::{Concept, ConceptId, DocId, Edge, Facet, FacetId, HierKind, KnowledgeBase, KnowledgeBaseBuilder};
pub use retrieval::{eval_query, parse_query, Corpus, Document, Query, ResultSet};
pub use validate::{Diagnostic, DiagnosticCode, Severity};
