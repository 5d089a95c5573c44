//! Graphviz DOT rendering: one cluster per facet, solid arrows for
//! hierarchy (child to parent), dashed labeled arrows for typed relations.

use std::fmt::Write as _;

use crate::model::{HierKind, KnowledgeBase};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n"))
}

pub fn export_dot(kb: &KnowledgeBase) -> String {
    let mut out = String::from("digraph kos {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, f) in kb.facets().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{");
        let _ = writeln!(out, "    label={};", quote(&format!("{} ({})", f.label, f.id)));
        for c in kb.concepts().filter(|c| c.facet == f.id) {
            let _ = writeln!(out, "    {} [label={}];", quote(c.id.as_str()), quote(&c.pref_label));
        }
        out.push_str("  }\n");
    }
    // concepts whose facet is undeclared
    for c in kb.concepts().filter(|c| kb.facet(c.facet.as_str()).is_none()) {
        let _ = writeln!(out, "  {} [label={}];", quote(c.id.as_str()), quote(&c.pref_label));
    }
    for e in kb.edges() {
        let (s, t) = (quote(e.source.as_str()), quote(e.target.as_str()));
        let _ = match HierKind::of(e.rel) {
            Some(HierKind::Generic) => writeln!(out, "  {s} -> {t} [style=solid];"),
            Some(HierKind::Partitive) => writeln!(out, "  {s} -> {t} [style=solid, arrowhead=diamond];"),
            None => writeln!(out, "  {s} -> {t} [style=dashed, label={}];", quote(e.rel.token())),
        };
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::SONGBIRD_KOS;
    use crate::io::parse_kos;

    #[test]
    fn fixture_rendering() {
        let dot = export_dot(&parse_kos(SONGBIRD_KOS).unwrap());
        assert!(dot.starts_with("digraph kos {"));
        assert_eq!(dot.matches("subgraph cluster_").count(), 3);
        assert!(dot.contains("\"blackcap\" -> \"warblers\" [style=solid];"));
        assert!(dot.contains("\"warblers\" -> \"mig_instinct\" [style=dashed, label=\"assoc\"];"));
        assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    }

    #[test]
    fn labels_are_escaped() {
        let kb = parse_kos("facet F \"The \\\"F\\\"\"\nconcept a F pref \"say \\\"a\\\"\"\n").unwrap();
        let dot = export_dot(&kb);
        assert!(dot.contains(r#"label="say \"a\""];"#), "{dot}");
    }
}
