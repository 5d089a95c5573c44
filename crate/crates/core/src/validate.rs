//! Structural validation of a knowledge base.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::model::{ConceptId, HierKind, KnowledgeBase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

/// Closed list of diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    /// Cycle among hierarchical edges of one kind within a facet.
    Cycle,
    /// Edge endpoint or concept facet that is not declared.
    Dangling,
    /// Hierarchical edge between concepts of different facets.
    CrossFacetHierarchy,
    /// Two concepts of one facet share a preferred label.
    DuplicatePrefLabel,
    /// Concept with more than one parent of the same kind.
    PolyHierarchy,
    /// Concept with both generic and partitive parents.
    MixedDimension,
    /// Associative edge already implied by inheritance or chaining.
    RedundantEdge,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::Cycle => "E_CYCLE",
            DiagnosticCode::Dangling => "E_DANGLING",
            DiagnosticCode::CrossFacetHierarchy => "E_XFACET_HIER",
            DiagnosticCode::DuplicatePrefLabel => "E_DUP_PREF",
            DiagnosticCode::PolyHierarchy => "W_POLYHIER",
            DiagnosticCode::MixedDimension => "W_MIXED_DIM",
            DiagnosticCode::RedundantEdge => "W_REDUNDANT_EDGE",
        }
    }

    pub fn severity(self) -> Severity {
        if self.as_str().starts_with("E_") {
            Severity::Error
        } else {
            Severity::Warning
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    pub subjects: Vec<String>,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, subjects: Vec<String>, message: impl Into<String>) -> Self {
        Diagnostic { severity: code.severity(), code, message: message.into(), subjects }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `SEV CODE subjects... message`
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.severity, self.code)?;
        for s in &self.subjects {
            write!(f, " {s}")?;
        }
        write!(f, " {}", self.message)
    }
}

pub(crate) fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| (a.code.as_str(), &a.subjects).cmp(&(b.code.as_str(), &b.subjects)));
}

impl KnowledgeBase {
    /// Checks every structural rule and returns the findings sorted by code,
    /// then subjects. An empty list means the knowledge base is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();

        for c in self.concepts() {
            if self.facet(c.facet.as_str()).is_none() {
                out.push(Diagnostic::new(
                    DiagnosticCode::Dangling,
                    vec![c.id.to_string(), c.facet.to_string()],
                    format!("concept `{}` belongs to undeclared facet `{}`", c.id, c.facet),
                ));
            }
        }

        for e in self.edges() {
            let (src, tgt) = (self.concept(e.source.as_str()), self.concept(e.target.as_str()));
            for (id, found) in [(&e.source, src), (&e.target, tgt)] {
                if found.is_none() {
                    out.push(Diagnostic::new(
                        DiagnosticCode::Dangling,
                        vec![e.source.to_string(), e.target.to_string()],
                        format!("{} edge refers to undeclared concept `{id}`", e.rel),
                    ));
                }
            }
            if let (Some(s), Some(t)) = (src, tgt) {
                if e.rel.is_hierarchical() && s.facet != t.facet {
                    out.push(Diagnostic::new(
                        DiagnosticCode::CrossFacetHierarchy,
                        vec![e.source.to_string(), e.target.to_string()],
                        format!("{} edge crosses facets `{}` and `{}`", e.rel, s.facet, t.facet),
                    ));
                }
            }
        }

        let mut labels: BTreeMap<(&str, &str), Vec<&ConceptId>> = BTreeMap::new();
        for c in self.concepts() {
            labels.entry((c.facet.as_str(), c.pref_label.as_str())).or_default().push(&c.id);
        }
        for ((facet, label), ids) in labels {
            if ids.len() > 1 {
                out.push(Diagnostic::new(
                    DiagnosticCode::DuplicatePrefLabel,
                    ids.iter().map(|c| c.to_string()).collect(),
                    format!("preferred label \"{label}\" used more than once in facet `{facet}`"),
                ));
            }
        }

        for kind in HierKind::BOTH {
            for scc in hierarchy_cycles(self, kind) {
                out.push(Diagnostic::new(
                    DiagnosticCode::Cycle,
                    scc.iter().map(|c| c.to_string()).collect(),
                    format!("{kind} hierarchy contains a cycle"),
                ));
            }
        }

        for c in self.concepts() {
            let mut kinds_present = 0;
            for kind in HierKind::BOTH {
                let parents = self.parents_of(c.id.as_str(), kind).unwrap_or_default();
                if !parents.is_empty() {
                    kinds_present += 1;
                }
                if parents.len() > 1 {
                    let mut subjects = vec![c.id.to_string()];
                    subjects.extend(parents.iter().map(|p| p.to_string()));
                    out.push(Diagnostic::new(
                        DiagnosticCode::PolyHierarchy,
                        subjects,
                        format!("concept has {} {kind} parents", parents.len()),
                    ));
                }
            }
            if kinds_present == 2 {
                out.push(Diagnostic::new(
                    DiagnosticCode::MixedDimension,
                    vec![c.id.to_string()],
                    "concept has both generic and partitive parents",
                ));
            }
        }

        sort_diagnostics(&mut out);
        out
    }

    pub fn has_errors(&self) -> bool {
        self.validate().iter().any(Diagnostic::is_error)
    }
}

/// Strongly connected components with two or more members in the graph of
/// intra-facet hierarchical edges of `kind`, each sorted, listed in order.
/// Uses an iterative Tarjan traversal.
pub(crate) fn hierarchy_cycles(kb: &KnowledgeBase, kind: HierKind) -> Vec<Vec<ConceptId>> {
    let rel = kind.relation();
    let nodes: Vec<&ConceptId> = kb.concepts().map(|c| &c.id).collect();
    let index_of: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let facet_of = |c: &ConceptId| kb.concept(c.as_str()).map(|x| &x.facet);
    let succ: Vec<Vec<usize>> = nodes
        .iter()
        .map(|c| {
            kb.outgoing(c.as_str())
                .iter()
                .filter(|e| e.rel == rel && facet_of(&e.source) == facet_of(&e.target))
                .filter_map(|e| index_of.get(e.target.as_str()).copied())
                .collect()
        })
        .collect();

    const UNVISITED: usize = usize::MAX;
    let n = nodes.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut components: BTreeSet<Vec<ConceptId>> = BTreeSet::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*child) {
                *child += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut scc = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    scc.push(nodes[w].clone());
                    if w == v {
                        break;
                    }
                }
                if scc.len() > 1 {
                    scc.sort();
                    components.insert(scc);
                }
            }
        }
    }
    components.into_iter().collect()
}
