use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use kos_core::fixtures::{SONGBIRD_DOCS, SONGBIRD_KOS};
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Workspace { dir: tempfile::tempdir().unwrap() };
        ws.write("fixture.kos", SONGBIRD_KOS);
        ws.write("fixture.docs", SONGBIRD_DOCS);
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        fs::write(self.path(name), text).unwrap();
        self.path(name).to_str().unwrap().to_owned()
    }

    fn kos(&self, args: &[&str]) -> Output {
        let args: Vec<String> = args
            .iter()
            .map(|a| if self.path(a).exists() { self.path(a).to_str().unwrap().to_owned() } else { a.to_string() })
            .collect();
        Command::new(env!("CARGO_BIN_EXE_kos")).args(&args).output().unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<String> {
    stdout(o).lines().map(str::to_owned).collect()
}

#[test]
fn compose_prints_status_and_result() {
    let ws = Workspace::new();
    let o = ws.kos(&["compose", "--r1", "generic", "--r2", "generic"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "+ generic\n");
    assert_eq!(stdout(&ws.kos(&["compose", "--r1", "generic", "--r2", "partitive"])), "-\n");
    assert_eq!(stdout(&ws.kos(&["compose", "--r1", "synonym", "--r2", "synonym"])), "O\n");
    assert_eq!(stdout(&ws.kos(&["compose", "--r1", "causality", "--r2", "synonym"])), "?\n");
    assert_eq!(stdout(&ws.kos(&["compose", "--r1", "assoc", "--r2", "generic"])), "+ assoc\n");
}

#[test]
fn usage_errors_exit_2() {
    let ws = Workspace::new();
    let o = ws.kos(&["compose", "--r1", "generic", "--r2", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"), "{}", stderr(&o));
    assert_eq!(ws.kos(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ws.kos(&["validate", "fixture.kos", "--loud"]).status.code(), Some(2));
    assert_eq!(
        ws.kos(&["closure", "fixture.kos", "--concept", "songbirds", "--dir", "sideways"]).status.code(),
        Some(2)
    );
}

#[test]
fn select_on_fixture() {
    let ws = Workspace::new();
    let o = ws.kos(&["select", "fixture.kos", "--under", "songbirds", "--rel", "assoc", "--target", "mig_instinct"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o), ["blackcap", "nightingale", "warblers"]);
}

#[test]
fn query_on_fixture() {
    let ws = Workspace::new();
    let o = ws.kos(&["query", "fixture.kos", "fixture.docs", "--q", "songbirds WITH [assoc: mig_instinct]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lines(&o), ["d2", "d3", "matched-terms: blackcap nightingale"]);
    let o = ws.kos(&["query", "fixture.kos", "fixture.docs", "--q", "songbirds"]);
    assert_eq!(lines(&o), ["d1", "d2", "d3", "d4", "matched-terms: blackcap nightingale songbirds titmice"]);
    let o = ws.kos(&["query", "fixture.kos", "fixture.docs", "--q", "migration"]);
    assert_eq!(lines(&o), ["matched-terms: "]);
}

#[test]
fn query_errors() {
    let ws = Workspace::new();
    let o = ws.kos(&["query", "fixture.kos", "fixture.docs", "--q", "songbirds WITH [assoc mig_instinct]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR E_QUERY: "), "{}", stderr(&o));
    let o = ws.kos(&["query", "fixture.kos", "fixture.docs", "--q", "dodo"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o), "ERROR E_NOT_FOUND: no concept matches `dodo`\n");
    ws.write("bad.docs", "doc x title=\"t\" terms=dodo\n");
    let o = ws.kos(&["query", "fixture.kos", "bad.docs", "--q", "songbirds"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("ERROR E_UNKNOWN_TERM: "));
}

#[test]
fn validate_reports_errors_with_exit_1() {
    let ws = Workspace::new();
    let o = ws.kos(&["validate", "fixture.kos"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
    ws.write(
        "cycle.kos",
        "facet F \"F\"\nconcept a F pref \"A\"\nconcept b F pref \"B\"\nbroader a b generic\nbroader b a generic\n",
    );
    let o = ws.kos(&["validate", "cycle.kos"]);
    assert_eq!(o.status.code(), Some(1));
    let out = lines(&o);
    assert_eq!(out.len(), 1);
    assert!(out[0].starts_with("ERROR E_CYCLE a b "), "{}", out[0]);
}

#[test]
fn format_errors_exit_2() {
    let ws = Workspace::new();
    ws.write("broken.kos", "facet F \"F\"\nconcept a F\n");
    let o = ws.kos(&["validate", "broken.kos"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR E_FORMAT: "), "{}", stderr(&o));
    assert!(stderr(&o).contains("line 2"));
    let o = ws.kos(&["validate", "missing.kos"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR E_IO: "));
}

#[test]
fn invalid_kb_is_a_domain_error() {
    let ws = Workspace::new();
    ws.write(
        "cycle.kos",
        "facet F \"F\"\nconcept a F pref \"A\"\nconcept b F pref \"B\"\nbroader a b generic\nbroader b a generic\n",
    );
    let o = ws.kos(&["infer", "cycle.kos"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("ERROR E_INVALID_KB: "));
}

#[test]
fn closure_directions_and_kinds() {
    let ws = Workspace::new();
    let o = ws.kos(&["closure", "fixture.kos", "--concept", "songbirds"]);
    assert_eq!(lines(&o), ["blackcap", "nightingale", "songbirds", "titmice", "warblers"]);
    let o = ws.kos(&["closure", "fixture.kos", "--concept", "\"Singing birds\"", "--no-self"]);
    assert_eq!(lines(&o), ["blackcap", "nightingale", "titmice", "warblers"]);
    let o = ws.kos(&["closure", "fixture.kos", "--concept", "blackcap", "--dir", "up", "--kinds", "generic"]);
    assert_eq!(lines(&o), ["blackcap", "songbirds", "warblers"]);
    let o = ws.kos(&["closure", "fixture.kos", "--concept", "blackcap", "--dir", "up", "--kinds", "partitive"]);
    assert_eq!(lines(&o), ["blackcap"]);
}

#[test]
fn infer_prints_witnesses() {
    let ws = Workspace::new();
    let o = ws.kos(&["infer", "fixture.kos"]);
    assert_eq!(o.status.code(), Some(0));
    let out = lines(&o);
    assert_eq!(out.len(), 9);
    assert_eq!(out[0], "blackcap assoc mig_instinct  via: blackcap -generic-> warblers -assoc-> mig_instinct");
    let mut sorted = out.clone();
    sorted.sort();
    assert_eq!(sorted, out);
}

#[test]
fn lint_prints_warnings_and_exits_0() {
    let ws = Workspace::new();
    assert_eq!(stdout(&ws.kos(&["lint", "fixture.kos"])), "");
    ws.write(
        "leaf.kos",
        concat!(
            "facet F \"F\"\n",
            "concept warblers F pref \"Warblers\"\n",
            "concept blackcap F pref \"Blackcap\"\n",
            "concept instinct F pref \"Migratory instinct\"\n",
            "broader blackcap warblers generic\n",
            "rel warblers instinct assoc\n",
            "rel blackcap instinct assoc\n",
        ),
    );
    let o = ws.kos(&["lint", "leaf.kos"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "WARNING W_REDUNDANT_EDGE blackcap instinct assoc edge is already implied via blackcap -generic-> warblers -assoc-> instinct\n"
    );
}

#[test]
fn import_skos_writes_canonical_kos() {
    let ws = Workspace::new();
    let nt = ws.write(
        "voc.nt",
        concat!(
            "<http://ex.org/birds#songbirds> <http://www.w3.org/2004/02/skos/core#prefLabel> \"Songbirds\"@en .\n",
            "<http://ex.org/birds#warblers> <http://www.w3.org/2004/02/skos/core#prefLabel> \"Warblers\"@en .\n",
            "<http://ex.org/birds#warblers> <http://www.w3.org/2004/02/skos/core#broader> <http://ex.org/birds#songbirds> .\n",
            "<http://ex.org/birds#warblers> <http://purl.org/dc/terms/created> \"2020\" .\n",
        ),
    );
    let out = ws.path("out.kos");
    let o = ws.kos(&["import-skos", &nt, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "skipped: 1\n");
    let written = fs::read_to_string(&out).unwrap();
    assert!(written.contains("broader warblers songbirds generic\n"), "{written}");
    assert_eq!(ws.kos(&["validate", out.to_str().unwrap()]).status.code(), Some(0));

    let bad = ws.write("bad.nt", "<http://ex.org/a> <http://www.w3.org/2004/02/skos/core#broader> \"x\" .\n");
    let o = ws.kos(&["import-skos", &bad, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR E_FORMAT: "));
}

#[test]
fn export_dot_has_one_cluster_per_facet() {
    let ws = Workspace::new();
    let o = ws.kos(&["export-dot", "fixture.kos"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph kos {"));
    assert_eq!(dot.matches("subgraph cluster_").count(), 3);
    assert!(dot.contains("style=dashed"));
}

#[test]
fn output_is_deterministic() {
    let ws = Workspace::new();
    for args in [
        &["infer", "fixture.kos"][..],
        &["export-dot", "fixture.kos"],
        &["closure", "fixture.kos", "--concept", "songbirds"],
    ] {
        assert_eq!(stdout(&ws.kos(args)), stdout(&ws.kos(args)));
    }
}
