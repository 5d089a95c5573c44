//! Hierarchical closures, downward inheritance of typed relations,
//! constraint selection, and materialization of every edge the composition
//! table licenses.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::algebra::{compose, RelationType};
use crate::error::KosError;
use crate::model::{ConceptId, Edge, HierKind, KnowledgeBase};
use crate::validate::{sort_diagnostics, Diagnostic, DiagnosticCode};

/// Concept ids in lexicographic order.
pub type ConceptSet = BTreeSet<ConceptId>;

/// An edge derivable from the stored edges, with one witnessing walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferredEdge {
    pub source: ConceptId,
    pub target: ConceptId,
    pub rel: RelationType,
    /// Walk from `source` to `target`; a stored edge is its own witness.
    pub via: Vec<Edge>,
}

impl InferredEdge {
    pub fn triple(&self) -> (ConceptId, ConceptId, RelationType) {
        (self.source.clone(), self.target.clone(), self.rel)
    }

    pub fn is_direct(&self) -> bool {
        self.via.len() == 1
    }
}

/// `source reltype target  via: a -r-> b -r-> c`
impl fmt::Display for InferredEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}  via: {}", self.source, self.rel, self.target, self.source)?;
        for e in &self.via {
            write!(f, " -{}-> {}", e.rel, e.target)?;
        }
        Ok(())
    }
}

enum Direction {
    Down,
    Up,
}

fn closure(
    kb: &KnowledgeBase,
    c: &str,
    kinds: &[HierKind],
    include_self: bool,
    dir: Direction,
) -> Result<ConceptSet, KosError> {
    let start = kb.concept_id(c)?.clone();
    let rels: Vec<RelationType> = kinds.iter().map(|k| k.relation()).collect();
    let mut seen = ConceptSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(cur) = queue.pop_front() {
        let next: Box<dyn Iterator<Item = &ConceptId>> = match dir {
            Direction::Down => {
                Box::new(kb.incoming(cur.as_str()).iter().filter(|e| rels.contains(&e.rel)).map(|e| &e.source))
            }
            Direction::Up => {
                Box::new(kb.outgoing(cur.as_str()).iter().filter(|e| rels.contains(&e.rel)).map(|e| &e.target))
            }
        };
        for n in next {
            if seen.insert(n.clone()) {
                queue.push_back(n.clone());
            }
        }
    }
    if include_self {
        seen.insert(start);
    } else {
        // reachable again only through a cycle
        seen.remove(&start);
    }
    Ok(seen)
}

/// Everything below `c` along child-to-parent edges of the given kinds.
pub fn descendants(
    kb: &KnowledgeBase,
    c: &str,
    kinds: &[HierKind],
    include_self: bool,
) -> Result<ConceptSet, KosError> {
    closure(kb, c, kinds, include_self, Direction::Down)
}

/// Everything above `c` along child-to-parent edges of the given kinds.
pub fn ancestors(kb: &KnowledgeBase, c: &str, kinds: &[HierKind], include_self: bool) -> Result<ConceptSet, KosError> {
    closure(kb, c, kinds, include_self, Direction::Up)
}

fn check_constraint_rel(rel: RelationType) -> Result<(), KosError> {
    if rel.is_associative() || rel.is_chronological() {
        Ok(())
    } else {
        Err(KosError::BadRelType(rel))
    }
}

/// Targets of `rel` edges carried by `c` or inherited from any of its
/// ancestors (generic or partitive). Inheritance only flows downward.
///
/// `LaterEarlier` follows stored `EarlierLater` edges backwards. With
/// `expand_target`, each target is replaced by its descendants (self
/// included).
pub fn related_via(
    kb: &KnowledgeBase,
    c: &str,
    rel: RelationType,
    expand_target: bool,
) -> Result<ConceptSet, KosError> {
    check_constraint_rel(rel)?;
    let mut targets = ConceptSet::new();
    for a in ancestors(kb, c, &HierKind::BOTH, true)? {
        if rel == RelationType::LaterEarlier {
            targets.extend(
                kb.incoming(a.as_str())
                    .iter()
                    .filter(|e| e.rel == RelationType::EarlierLater)
                    .map(|e| e.source.clone()),
            );
        } else {
            targets.extend(kb.outgoing(a.as_str()).iter().filter(|e| e.rel == rel).map(|e| e.target.clone()));
        }
    }
    if !expand_target {
        return Ok(targets);
    }
    let mut expanded = ConceptSet::new();
    for t in &targets {
        // dangling targets only occur in invalid knowledge bases
        match descendants(kb, t.as_str(), &HierKind::BOTH, true) {
            Ok(d) => expanded.extend(d),
            Err(_) => {
                expanded.insert(t.clone());
            }
        }
    }
    Ok(expanded)
}

/// Concepts strictly below `under` that carry (directly or by inheritance)
/// a `rel` edge into `target` or anything below it.
///
/// Neither `under` nor `target` is part of the result: the selection is
/// meant to be searched with the selected concepts only.
pub fn select_constrained(
    kb: &KnowledgeBase,
    under: &str,
    rel: RelationType,
    target: &str,
) -> Result<ConceptSet, KosError> {
    select_constrained_with(kb, under, rel, target, true)
}

/// As [`select_constrained`]; `expand_target = false` matches `target` only,
/// not its descendants.
pub fn select_constrained_with(
    kb: &KnowledgeBase,
    under: &str,
    rel: RelationType,
    target: &str,
    expand_target: bool,
) -> Result<ConceptSet, KosError> {
    check_constraint_rel(rel)?;
    let candidates = descendants(kb, under, &HierKind::BOTH, false)?;
    let accepted = if expand_target {
        descendants(kb, target, &HierKind::BOTH, true)?
    } else {
        ConceptSet::from([kb.concept_id(target)?.clone()])
    };
    let mut out = ConceptSet::new();
    for x in candidates {
        if !related_via(kb, x.as_str(), rel, false)?.is_disjoint(&accepted) {
            out.insert(x);
        }
    }
    Ok(out)
}

fn require_valid(kb: &KnowledgeBase) -> Result<(), KosError> {
    let errors = kb.validate().iter().filter(|d| d.is_error()).count();
    if errors > 0 {
        return Err(KosError::InvalidKb(errors));
    }
    Ok(())
}

/// Search state: a concept from which the walk to the fixed end concept
/// composes to the given relation type.
type State = (ConceptId, RelationType);

/// Walks from every concept into `end`, found breadth-first by extending
/// walks at their start (the composition fold runs from the end of a walk
/// back to its start). For each reachable state the witness is a shortest
/// walk, ties broken by comparing walks edge by edge from the start.
fn walks_into(kb: &KnowledgeBase, end: &ConceptId, excluded: Option<&Edge>) -> BTreeMap<State, Vec<Edge>> {
    let usable = |e: &&Edge| Some(*e) != excluded;
    let mut found: BTreeMap<State, Vec<Edge>> = BTreeMap::new();
    let mut layer: BTreeMap<State, Vec<Edge>> = BTreeMap::new();
    for e in kb.incoming(end.as_str()).iter().filter(usable) {
        offer(&mut layer, (e.source.clone(), e.rel), vec![e.clone()]);
    }
    while !layer.is_empty() {
        for (state, walk) in &layer {
            found.insert(state.clone(), walk.clone());
        }
        let mut next: BTreeMap<State, Vec<Edge>> = BTreeMap::new();
        for ((node, acc), walk) in &layer {
            for e in kb.incoming(node.as_str()).iter().filter(usable) {
                let Some(result) = compose(*acc, e.rel).result else { continue };
                let state = (e.source.clone(), result);
                if found.contains_key(&state) {
                    continue;
                }
                let mut extended = Vec::with_capacity(walk.len() + 1);
                extended.push(e.clone());
                extended.extend(walk.iter().cloned());
                offer(&mut next, state, extended);
            }
        }
        layer = next;
    }
    found
}

fn walk_key(walk: &[Edge]) -> impl Iterator<Item = (&str, &str, &'static str)> + '_ {
    walk.iter().map(|e| (e.source.as_str(), e.target.as_str(), e.rel.token()))
}

fn offer(layer: &mut BTreeMap<State, Vec<Edge>>, state: State, walk: Vec<Edge>) {
    match layer.get_mut(&state) {
        Some(current) if walk_key(&walk).lt(walk_key(current)) => *current = walk,
        Some(_) => {}
        None => {
            layer.insert(state, walk);
        }
    }
}

/// Every edge derivable from the stored edges by composition along walks,
/// stored edges included. Covers hierarchical closure per kind,
/// chronological closure, downward inheritance of associations through both
/// hierarchy kinds, and chaining of the self-transitive associations
/// (raw material / product, causality), plus the positive hierarchy and
/// chronology combinations. Reflexive results are dropped.
///
/// Output is sorted by (source, relation token, target).
pub fn materialize_inferences(kb: &KnowledgeBase) -> Result<Vec<InferredEdge>, KosError> {
    require_valid(kb)?;
    let mut out = Vec::new();
    for end in kb.concepts().map(|c| &c.id) {
        for ((source, rel), via) in walks_into(kb, end, None) {
            if &source != end {
                out.push(InferredEdge { source, target: end.clone(), rel, via });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.source.as_str(), a.rel.token(), a.target.as_str()).cmp(&(
            b.source.as_str(),
            b.rel.token(),
            b.target.as_str(),
        ))
    });
    Ok(out)
}

/// Stored associative edges that stay derivable without themselves,
/// typically because an ancestor of the source already carries the same
/// edge. Each is returned with a witness that avoids it.
///
/// Edges are examined in canonical order and each one is tested against
/// the stored edges minus those already found, so removing all of them at
/// once leaves the materialized inferences unchanged.
pub fn redundant_edges(kb: &KnowledgeBase) -> Result<Vec<InferredEdge>, KosError> {
    require_valid(kb)?;
    let mut assoc: Vec<&Edge> = kb.edges().filter(|e| e.rel.is_associative()).collect();
    assoc.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));

    let mut flagged: HashSet<Edge> = HashSet::new();
    let mut current = kb.clone();
    let mut out = Vec::new();
    for e in assoc {
        let walks = walks_into(&current, &e.target, Some(e));
        let Some(witness) = walks.get(&(e.source.clone(), e.rel)) else { continue };
        out.push(InferredEdge { source: e.source.clone(), target: e.target.clone(), rel: e.rel, via: witness.clone() });
        flagged.insert(e.clone());
        current = kb.with_edges(kb.edges().filter(|x| !flagged.contains(*x)).cloned());
    }
    Ok(out)
}

/// `W_REDUNDANT_EDGE` diagnostics for [`redundant_edges`].
pub fn lint_redundant(kb: &KnowledgeBase) -> Result<Vec<Diagnostic>, KosError> {
    let mut out: Vec<Diagnostic> = redundant_edges(kb)?
        .into_iter()
        .map(|r| {
            let shown = r.to_string();
            let path = shown.split_once("via: ").map_or("", |(_, p)| p);
            Diagnostic::new(
                DiagnosticCode::RedundantEdge,
                vec![r.source.to_string(), r.target.to_string()],
                format!("{} edge is already implied via {path}", r.rel),
            )
        })
        .collect();
    sort_diagnostics(&mut out);
    Ok(out)
}
