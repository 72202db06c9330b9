//! End-to-end tests of the command-line surface against the shipped
//! fixture files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn kgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Builders behind each shipped fixture file.
fn builders() -> Vec<(&'static str, kgraph::KGraph)> {
    vec![
        ("g1.kgraph", kgraph::fixtures::g1()),
        ("g2.kgraph", kgraph::fixtures::g2()),
        ("g3.kgraph", kgraph::fixtures::g3()),
        ("g3-extended.kgraph", kgraph::fixtures::g3_extended()),
        ("g4.kgraph", kgraph::fixtures::g4()),
        ("g5.kgraph", kgraph::fixtures::g5()),
    ]
}

/// Regenerate the fixture files from the builders:
/// `cargo test -p kgraph-cli --test cli regenerate_fixture_files -- --ignored`
#[test]
#[ignore]
fn regenerate_fixture_files() {
    for (name, g) in builders() {
        std::fs::write(fixture(name), kgraph::io::serialise(&g)).unwrap();
    }
}

#[test]
fn fixture_files_match_builders() {
    for (name, g) in builders() {
        let on_disk = std::fs::read_to_string(fixture(name))
            .unwrap_or_else(|e| panic!("fixture {name} unreadable: {e}"));
        assert_eq!(on_disk, kgraph::io::serialise(&g), "fixture {name} drifted");
    }
}

#[test]
fn validate_reports_convexity() {
    let out = kgraph(&["validate", fixture("g1.kgraph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("valid: k=2, 12 vertices, 17 edges, 6 squares"));
    assert!(text.contains("locally convex"));

    let out = kgraph(&["validate", fixture("g2.kgraph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.contains("not locally convex"));
    assert!(text.contains("witness (v, 1, 2, e, f)"));
}

#[test]
fn validate_rejects_malformed_input() {
    let dir = std::env::temp_dir().join("kgraph-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.kgraph");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = kgraph(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.join("does-not-exist.kgraph");
    let out = kgraph(&["validate", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // structurally broken square table: drop one square from g3
    let g3 = kgraph::fixtures::g3();
    let mut doc = kgraph::io::document(&g3);
    doc.squares.pop();
    let broken = dir.join("g3-missing-square.kgraph");
    std::fs::write(&broken, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = kgraph(&["validate", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn paths_and_le_paths() {
    let g1 = fixture("g1.kgraph");
    let out = kgraph(&[
        "paths",
        g1.to_str().unwrap(),
        "--vertex",
        "0_0",
        "--degree",
        "3,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("1 path(s)"));

    let out = kgraph(&[
        "le-paths",
        g1.to_str().unwrap(),
        "--vertex",
        "2_1",
        "--cap",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("1 maximally-extended path(s)"));

    // degree of the wrong rank is an input error
    let out = kgraph(&[
        "paths",
        g1.to_str().unwrap(),
        "--vertex",
        "0_0",
        "--degree",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = kgraph(&[
        "paths",
        g1.to_str().unwrap(),
        "--vertex",
        "nope",
        "--degree",
        "3,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn boundary_counts() {
    let out = kgraph(&[
        "boundary",
        fixture("g2.kgraph").to_str().unwrap(),
        "--vertex",
        "v",
        "--cap",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("0 boundary path(s)"));
}

#[test]
fn squares_enumeration() {
    let out = kgraph(&[
        "squares",
        fixture("g3-extended.kgraph").to_str().unwrap(),
        "--enumerate",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("2 square set(s)"));

    let out = kgraph(&[
        "squares",
        fixture("g3.kgraph").to_str().unwrap(),
        "--enumerate",
    ]);
    assert!(stdout_of(&out).contains("1 square set(s)"));
}

#[test]
fn ck_verify_fixtures() {
    let out = kgraph(&[
        "ck-verify",
        fixture("g1.kgraph").to_str().unwrap(),
        "--cap",
        "3,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_of(&out),
        "relations (1)-(4) verified; spanning formula verified; span dimension 144\n"
    );

    // cyclic skeleton: guard exit
    let out = kgraph(&[
        "ck-verify",
        fixture("g5.kgraph").to_str().unwrap(),
        "--cap",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // concave: property failure
    let out = kgraph(&[
        "ck-verify",
        fixture("g2.kgraph").to_str().unwrap(),
        "--cap",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn forced_zeros_exit_codes() {
    let out = kgraph(&["forced-zeros", fixture("g2.kgraph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    for name in ["e", "f", "[v]"] {
        assert!(text.contains(name), "missing {name} in {text}");
    }
    let out = kgraph(&["forced-zeros", fixture("g1.kgraph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn core_report_output() {
    let out = kgraph(&[
        "core",
        fixture("g4.kgraph").to_str().unwrap(),
        "--q",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("total dimension 4"));
}

#[test]
fn condition_b_verdicts() {
    let out = kgraph(&[
        "condition-b",
        fixture("g4.kgraph").to_str().unwrap(),
        "--depth",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out).matches("PROVEN").count(), 4);

    let out = kgraph(&[
        "condition-b",
        fixture("g5.kgraph").to_str().unwrap(),
        "--depth",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("REFUTED_TO_DEPTH"));
}

#[test]
fn ideals_listing() {
    let out = kgraph(&[
        "ideals",
        fixture("g4.kgraph").to_str().unwrap(),
        "--list",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("2 saturated hereditary set(s)"));
    assert!(text.contains("{}"));
    assert!(text.contains("{0_0, 0_1, 1_0, 1_1}"));
}

#[test]
fn quotient_and_restrict() {
    // quotient by the empty set reproduces the document
    let g4 = fixture("g4.kgraph");
    let out = kgraph(&["quotient", g4.to_str().unwrap(), "--set", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), std::fs::read_to_string(&g4).unwrap());

    // a non-saturated set is a property failure
    let out = kgraph(&["quotient", g4.to_str().unwrap(), "--set", "1_1"]);
    assert_eq!(out.status.code(), Some(1));

    // restriction of g2 to {w}
    let out = kgraph(&[
        "restrict",
        fixture("g2.kgraph").to_str().unwrap(),
        "--set",
        "w",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("\"vertices\": [\n    \"w\"\n  ]"));

    // unknown vertex in the set is an input error
    let out = kgraph(&["restrict", g4.to_str().unwrap(), "--set", "zzz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_dot_runs() {
    let out = kgraph(&["export-dot", fixture("g1.kgraph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("digraph kgraph {"));
    assert_eq!(text.matches(" -> ").count(), 17);
}

#[test]
fn json_outputs_carry_schema() {
    let g4 = fixture("g4.kgraph");
    let g4 = g4.to_str().unwrap();
    for command in ["validate", "forced-zeros", "ideals"] {
        let out = kgraph(&[command, g4, "--json"]);
        let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(value["schema"], "kgraph-cli/v1");
    }
}
