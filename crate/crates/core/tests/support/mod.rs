//! Shared test support: random knowledge bases and independent oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use kos_core::{
    path_status, Concept, ConceptId, Edge, Facet, FacetId, HierKind, KnowledgeBase, KnowledgeBaseBuilder, RelationType,
    TransitivityStatus,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub type Triple = (ConceptId, ConceptId, RelationType);

const LABEL_PIECES: &[&str] = &["bird", "Zug", "\"quoted\"", "pipe|bar", "back\\slash", "vögel", "a b", "x"];

/// A random knowledge base that validates without errors: at most
/// `max_concepts` concepts and `max_edges` edges, hierarchies acyclic per
/// facet and kind, labels unique per facet.
pub fn random_kb(seed: u64, max_concepts: usize, max_edges: usize) -> KnowledgeBase {
    let mut rng = StdRng::seed_from_u64(seed);
    let n_facets = rng.gen_range(1..=4);
    let n_concepts = rng.gen_range(1..=max_concepts);
    let n_edges = rng.gen_range(0..=max_edges);

    let mut b = KnowledgeBaseBuilder::new();
    let facets: Vec<FacetId> = (0..n_facets).map(|i| FacetId::new(&format!("F{i}")).unwrap()).collect();
    for f in &facets {
        let label = format!("Facet {} {}", f, LABEL_PIECES.choose(&mut rng).unwrap());
        b.add_facet(Facet { id: f.clone(), label }).unwrap();
    }

    let ids: Vec<ConceptId> = (0..n_concepts).map(|i| ConceptId::new(&format!("c{i:02}")).unwrap()).collect();
    let facet_of: Vec<usize> = (0..n_concepts).map(|_| rng.gen_range(0..n_facets)).collect();
    for (i, id) in ids.iter().enumerate() {
        let piece = LABEL_PIECES.choose(&mut rng).unwrap();
        let pref_label = format!("{piece} {i}");
        let alt_labels = (0..rng.gen_range(0..3))
            .map(|k| format!("{} alt{i}.{k}", LABEL_PIECES.choose(&mut rng).unwrap()))
            .collect();
        b.add_concept(Concept { id: id.clone(), facet: facets[facet_of[i]].clone(), pref_label, alt_labels }).unwrap();
    }

    // one random rank per kind; parents always rank lower than children
    let mut ranks: BTreeMap<HierKind, Vec<usize>> = BTreeMap::new();
    for kind in HierKind::BOTH {
        let mut r: Vec<usize> = (0..n_concepts).collect();
        r.shuffle(&mut rng);
        ranks.insert(kind, r);
    }

    let mut edges = BTreeSet::new();
    let mut attempts = 0;
    while edges.len() < n_edges && attempts < n_edges * 20 {
        attempts += 1;
        let (s, t) = (rng.gen_range(0..n_concepts), rng.gen_range(0..n_concepts));
        if s == t {
            continue;
        }
        let roll = rng.gen_range(0..100);
        let rel = if roll < 45 {
            let kind = if rng.gen_bool(0.6) { HierKind::Generic } else { HierKind::Partitive };
            let rank = &ranks[&kind];
            if facet_of[s] != facet_of[t] || rank[s] <= rank[t] {
                continue;
            }
            kind.relation()
        } else if roll < 57 {
            RelationType::EarlierLater
        } else if roll < 75 {
            // bias toward the chaining types so chains actually occur
            *[RelationType::Causality, RelationType::RawMaterialProduct].choose(&mut rng).unwrap()
        } else {
            *RelationType::ASSOCIATIVE.choose(&mut rng).unwrap()
        };
        edges.insert(Edge::new(ids[s].clone(), ids[t].clone(), rel).unwrap());
    }
    for e in edges {
        b.add_edge(e).unwrap();
    }
    b.build()
}

/// Brute-force enumeration of every walk ending at each concept.
///
/// Walks are grown backwards one edge at a time and the full type sequence
/// (walk types in reverse order) is re-folded from scratch with
/// `path_status` at every step; a walk is kept while it folds to `Given`.
/// A walk that revisits the same (concept, folded type) pair is cut, since
/// the continuation from a repeated pair is identical.
pub fn oracle_inferences(kb: &KnowledgeBase) -> BTreeSet<Triple> {
    let mut out = BTreeSet::new();
    for end in kb.concepts().map(|c| c.id.clone()) {
        let mut on_walk: Vec<(ConceptId, RelationType)> = Vec::new();
        let mut types: Vec<RelationType> = Vec::new();
        extend(kb, &end, &end, &mut types, &mut on_walk, &mut out);
    }
    out
}

fn extend(
    kb: &KnowledgeBase,
    end: &ConceptId,
    at: &ConceptId,
    types: &mut Vec<RelationType>,
    on_walk: &mut Vec<(ConceptId, RelationType)>,
    out: &mut BTreeSet<Triple>,
) {
    for e in kb.incoming(at.as_str()) {
        types.push(e.rel);
        if let Some((TransitivityStatus::Given, Some(result))) = path_status(types) {
            let state = (e.source.clone(), result);
            if !on_walk.contains(&state) {
                if &e.source != end {
                    out.insert((e.source.clone(), end.clone(), result));
                }
                on_walk.push(state);
                extend(kb, end, &e.source, types, on_walk, out);
                on_walk.pop();
            }
        }
        types.pop();
    }
}

/// Kahn topological sort over one kind's intra-facet hierarchy; `true` when
/// every concept can be ordered.
pub fn hierarchy_sorts(kb: &KnowledgeBase, kind: HierKind) -> bool {
    let rel = kind.relation();
    let facet = |c: &ConceptId| kb.concept(c.as_str()).map(|x| x.facet.clone());
    let edges: Vec<&Edge> = kb
        .edges()
        .filter(|e| e.rel == rel && facet(&e.source).is_some() && facet(&e.source) == facet(&e.target))
        .collect();
    let mut indegree: BTreeMap<&ConceptId, usize> = kb.concepts().map(|c| (&c.id, 0)).collect();
    for e in &edges {
        *indegree.get_mut(&e.target).unwrap() += 1;
    }
    let mut queue: VecDeque<&ConceptId> = indegree.iter().filter(|(_, d)| **d == 0).map(|(c, _)| *c).collect();
    let mut sorted = 0;
    while let Some(c) = queue.pop_front() {
        sorted += 1;
        for e in edges.iter().filter(|e| &e.source == c) {
            let d = indegree.get_mut(&e.target).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push_back(&e.target);
            }
        }
    }
    sorted == indegree.len()
}

/// Triples of the engine's materialization.
pub fn engine_triples(kb: &KnowledgeBase) -> BTreeSet<Triple> {
    kos_core::materialize_inferences(kb).unwrap().iter().map(|e| e.triple()).collect()
}

/// The knowledge base with every edge reported redundant removed.
pub fn without_redundant(kb: &KnowledgeBase) -> (KnowledgeBase, usize) {
    let drop: HashSet<Edge> = kos_core::inference::redundant_edges(kb)
        .unwrap()
        .into_iter()
        .map(|r| Edge::new(r.source, r.target, r.rel).unwrap())
        .collect();
    for e in &drop {
        assert!(kb.contains_edge(e), "flagged edge {e} is not stored");
    }
    let kept = kb.edges().filter(|e| !drop.contains(*e)).cloned();
    (kb.with_edges(kept), drop.len())
}
