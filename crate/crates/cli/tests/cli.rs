use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Output};

use splitdecomp::branchings::{good_pair_from_sad, verify_good_pair};
use splitdecomp::split_sad::decompose_split;
use splitdecomp::testkit::{gen_random, Enforce, GenSpec};
use splitdecomp::verify::verify_decomposition;
use splitdecomp::{Digraph, StrongArcDecomposition};
use splitdecomp_cli::commands::{self, DecomposeOptions, PairMethod, StressSpec};
use splitdecomp_cli::graphfile::{GraphFile, ParseError};
use splitdecomp_cli::report::{Payload, Status, Verification};

const S4: &str = "v1:\nv2: a b c d\narcs:\na b\nb c\nc d\nd a\na c\nc a\nb d\nd b\n";

/// S4 with one extra vertex forming 2-cycles with all four.
const S4_HUB: &str = "\
# S4 plus a hub
v1: t
v2: a b c d
arcs:
a b
b c
c d
d a
a c
c a
b d
d b
t a
a t
t b
b t
t c
c t
t d
d t
";

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_splitdecomp"));
    cmd.args(args);
    if let Some(input) = stdin {
        let mut child = cmd.stdin(std::process::Stdio::piped()).stdout(std::process::Stdio::piped()).spawn().unwrap();
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
        return child.wait_with_output().unwrap();
    }
    cmd.output().unwrap()
}

fn temp_file(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("splitdecomp-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn random_file(seed: u64) -> String {
    let spec = GenSpec::new(2, 5, seed).enforce(&[Enforce::TwoArcStrong, Enforce::V1Degree3]);
    GraphFile::from_split_default_names(&gen_random(&spec).unwrap()).write()
}

#[test]
fn parses_headers_comments_and_names() {
    let f = GraphFile::parse(S4_HUB).unwrap();
    assert_eq!(f.names, ["t", "a", "b", "c", "d"]);
    assert_eq!((f.v1.clone(), f.v2.clone()), (vec![0], vec![1, 2, 3, 4]));
    assert_eq!(f.graph.arc_count(), 16);
    assert_eq!(f.arc_lines[0], 5);
    assert!(f.split_digraph().is_ok());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let cases = [
        ("v1: t\nv2: a b\narcs:\na b c\n", 4),
        ("v1: t\nv2: a b\narcs:\na z\n", 4),
        ("v1: t\nv2: a b\nv2: c\narcs:\n", 3),
        ("v1: t\nv2: a a\narcs:\n", 2),
        ("v1: t\nv2: a b\nedges:\n", 3),
        ("v1: t\nv2: a b\narcs:\na a\n", 4),
        ("v1: t\nv2: a b\na b\n", 3),
    ];
    for (text, line) in cases {
        match GraphFile::parse(text) {
            Err(ParseError::Line { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    assert!(matches!(GraphFile::parse("v1: t\narcs:\n"), Err(ParseError::File(_))));
}

#[test]
fn structural_errors_point_at_the_arc() {
    let text = "v1: s t\nv2: a b\narcs:\na b\n# a comment\ns t\n";
    let f = GraphFile::parse(text).unwrap();
    assert_eq!(
        f.split_digraph().unwrap_err(),
        ParseError::Line { line: 6, message: "arc s -> t joins two V1 vertices".into() }
    );
    let dup = GraphFile::parse("v1: t\nv2: a b\narcs:\na b\na b\n").unwrap();
    assert!(matches!(dup.split_digraph(), Err(ParseError::Line { line: 5, .. })));
    let gap = GraphFile::parse("v1: t\nv2: a b\narcs:\n").unwrap();
    assert!(matches!(gap.split_digraph(), Err(ParseError::File(m)) if m.contains("not adjacent")));
}

#[test]
fn write_parse_write_is_byte_identical() {
    for seed in 0..20 {
        let text = random_file(seed);
        assert_eq!(GraphFile::parse(&text).unwrap().write(), text);
    }
    for family in ["d1", "d2"] {
        for w in ["1", "2", "3"] {
            let out = run(&["generate", "family", family, "--w-size", w], None);
            assert!(out.status.success());
            let text = String::from_utf8(out.stdout).unwrap();
            assert_eq!(GraphFile::parse(&text).unwrap().write(), text);
        }
    }
}

#[test]
fn generate_is_seeded() {
    let args = |seed: &'static str| ["generate", "random", "--n1", "3", "--n2", "6", "--seed", seed];
    let a = run(&args("7"), None);
    let b = run(&args("7"), None);
    let c = run(&args("8"), None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let f = GraphFile::parse(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!((f.v1.len(), f.v2.len()), (3, 6));
    let d = f.split_digraph().unwrap();
    assert!(Enforce::TwoArcStrong.holds(&d) && Enforce::V1Degree3.holds(&d));
    let bad = run(&["generate", "random", "--n1", "1", "--n2", "4", "--enforce", "nonsense"], None);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn family_sizes() {
    // the anchor of W doubles as the vertex between the two hubs
    for (family, w, order) in [("d1", "1", 8), ("d1", "2", 9), ("d2", "1", 7), ("d2", "3", 9)] {
        let out = run(&["generate", "family", family, "--w-size", w], None);
        let f = GraphFile::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
        assert_eq!(f.names.len(), order, "{family} {w}");
    }
}

/// Checks a JSON decomposition against the file independently of the CLI.
fn check_json_decomposition(text: &str, report: &serde_json::Value) {
    let f = GraphFile::parse(text).unwrap();
    let id: HashMap<&str, usize> = f.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut pool: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (a, arc) in f.graph.arcs() {
        pool.entry((arc.tail, arc.head)).or_default().push(a.0);
    }
    let mut take = |class: &serde_json::Value| -> Vec<splitdecomp::ArcId> {
        class
            .as_array()
            .unwrap()
            .iter()
            .map(|pair| {
                let (t, h) = (id[pair[0].as_str().unwrap()], id[pair[1].as_str().unwrap()]);
                splitdecomp::ArcId(pool.get_mut(&(t, h)).unwrap().pop().unwrap())
            })
            .collect()
    };
    let a1 = take(&report["payload"]["a1"]);
    let a2 = take(&report["payload"]["a2"]);
    assert!(pool.values().all(|v| v.is_empty()));
    verify_decomposition(&f.graph, &StrongArcDecomposition::new(a1, a2)).unwrap();
}

#[test]
fn decompose_json_round_trip() {
    for (i, text) in [S4_HUB.to_string(), random_file(3), random_file(4)].iter().enumerate() {
        let path = temp_file(&format!("dec{i}.txt"), text);
        let out = run(&["decompose", path.to_str().unwrap(), "--json"], None);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let report = json(&out);
        assert_eq!(report["status"], "decomposed");
        assert_eq!(report["verification"], "pass");
        assert_eq!(report["command"], "decompose");
        assert!(report["timing_ms"].is_number());
        check_json_decomposition(text, &report);
    }
}

#[test]
fn decompose_reads_stdin_and_reports_route() {
    let out = run(&["decompose", "/dev/stdin", "--no-timing"], Some(S4_HUB));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(
        text.starts_with("status: decomposed\nroute: semicomplete part already 2-arc-strong, exceptional core S4\n")
    );
    assert!(text.ends_with("verification: pass\n"));
    assert!(!text.contains("time:"));
}

#[test]
fn verify_only_omits_arcs() {
    let out = run(&["decompose", "/dev/stdin", "--verify-only", "--json", "--no-timing"], Some(S4_HUB));
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["payload"], serde_json::json!({}));
    assert_eq!(report["verification"], "pass");
    assert!(report.get("timing_ms").is_none());
}

#[test]
fn catalog_members_exit_one() {
    let out = run(&["decompose", "/dev/stdin", "--semicomplete", "--json"], Some(S4));
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["status"], "exception");
    assert_eq!(report["payload"]["exception"], "S4");
    // the witness maps catalog vertices onto input names bijectively
    let w = report["payload"]["witness"].as_object().unwrap();
    let mut names: Vec<&str> = w.values().map(|v| v.as_str().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["a", "b", "c", "d"]);
    let plain = run(&["decompose", "/dev/stdin"], Some(S4));
    assert_eq!(plain.status.code(), Some(2));
}

#[test]
fn semicomplete_mode_decomposes_and_flags_gap_members() {
    let k4: String = "v1:\nv2: a b c d\narcs:\n".to_string()
        + &["a", "b", "c", "d"]
            .iter()
            .flat_map(|x| ["a", "b", "c", "d"].iter().filter(move |y| *y != x).map(move |y| format!("{x} {y}\n")))
            .collect::<String>();
    let r = commands::decompose(&k4, DecomposeOptions { verify_only: false, semicomplete: true });
    assert_eq!((r.status, r.verification), (Status::Decomposed, Verification::Pass));
    // S4 plus two more copies of a cycle arc has no decomposition either
    let gap = format!("{S4}a b\na b\n");
    let r = commands::decompose(&gap, DecomposeOptions { verify_only: false, semicomplete: true });
    assert_eq!(r.status, Status::Exception);
    assert!(matches!(r.payload, Payload::Error { .. }));
    let with_v1 = commands::decompose(S4_HUB, DecomposeOptions { verify_only: false, semicomplete: true });
    assert_eq!(with_v1.status, Status::Invalid);
}

#[test]
fn malformed_input_exits_two_with_line() {
    let out = run(&["decompose", "/dev/stdin", "--json"], Some("v1: t\nv2: a b\narcs:\na\n"));
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    assert_eq!(report["status"], "invalid");
    assert_eq!(report["payload"]["line"], 4);
    let missing = run(&["decompose", "/nonexistent/graph.txt"], None);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn unmet_degree_hypothesis_is_reported_by_name() {
    let out = run(&["generate", "family", "d1"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let r = commands::decompose(&text, DecomposeOptions::default());
    assert_eq!(r.status, Status::ViolatedPrecondition);
    match r.payload {
        Payload::Error { error, .. } => assert!(error.contains("vertex v_t of V1"), "{error}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn counterexample_has_no_pair() {
    for family in ["d1", "d2"] {
        let out = run(&["generate", "family", family], None);
        let path = temp_file(&format!("{family}.txt"), std::str::from_utf8(&out.stdout).unwrap());
        let out = run(
            &["good-pair", path.to_str().unwrap(), "--root-out", "u", "--root-in", "v", "--method", "oracle", "--json"],
            None,
        );
        assert_eq!(out.status.code(), Some(1));
        assert_eq!(json(&out)["status"], "no-pair");
        // other roots do have pairs
        let out = run(&["good-pair", path.to_str().unwrap(), "--root-out", "v", "--root-in", "u", "--json"], None);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["verification"], "pass");
    }
}

#[test]
fn equal_roots_use_the_uu_construction() {
    let spec = GenSpec::new(2, 5, 11).enforce(&[Enforce::TwoArcStrong, Enforce::SemicompleteSplit]);
    let text = GraphFile::from_split_default_names(&gen_random(&spec).unwrap()).write();
    for root in ["s0", "s1", "s2", "s3", "s4"] {
        let r = commands::good_pair(&text, root, root, PairMethod::Auto, 0);
        assert_eq!((r.status, r.verification), (Status::Pair, Verification::Pass), "{r:?}");
        match &r.payload {
            Payload::Pair { route, out_parent, in_parent, .. } => {
                assert_eq!(route, "(u,u) construction");
                assert_eq!((out_parent.len(), in_parent.len()), (6, 6));
                assert!(!out_parent.contains_key(root) && !in_parent.contains_key(root));
            }
            other => panic!("{other:?}"),
        }
    }
    let r = commands::good_pair(&text, "s0", "s1", PairMethod::Uu, 0);
    assert_eq!(r.status, Status::ViolatedPrecondition);
    let r = commands::good_pair(&text, "s0", "nope", PairMethod::Auto, 0);
    assert_eq!(r.status, Status::Invalid);
}

#[test]
fn three_arc_strong_fixture_has_every_pair() {
    let spec = GenSpec::new(2, 5, 5).enforce(&[Enforce::ThreeArcStrong, Enforce::V1Degree3]);
    let d = gen_random(&spec).unwrap();
    let text = GraphFile::from_split_default_names(&d).write();
    let f = GraphFile::parse(&text).unwrap();
    for u in &f.names {
        for v in &f.names {
            let r = commands::good_pair(&text, u, v, PairMethod::Decomposition, 0);
            assert_eq!((r.status, r.verification), (Status::Pair, Verification::Pass));
        }
    }
    // the same through the library on the generated digraph
    let g: &Digraph = d.graph();
    let sad = decompose_split(&d).unwrap();
    for u in g.vertices() {
        for v in g.vertices() {
            assert!(verify_good_pair(g, &good_pair_from_sad(g, &sad, u, v).unwrap()).is_ok());
        }
    }
}

fn stress_spec(count: usize, enforce: &[Enforce]) -> StressSpec {
    let template = GenSpec::new(1, 4, 0).enforce(enforce);
    StressSpec { count, n1: (1, 5), n2: (4, 9), seed: 42, template, oracle_bound: 18 }
}

#[test]
fn stress_is_deterministic_and_clean() {
    let spec = stress_spec(120, &[Enforce::TwoArcStrong, Enforce::V1Degree3]);
    let a = commands::stress(&spec, false);
    let b = commands::stress(&spec, false);
    assert_eq!(a.to_text(), b.to_text());
    assert!(a.ok(), "{}", a.to_text());
    assert_eq!(a.decomposed, a.generated);
    assert_eq!(a.oracle_agreements, a.oracle_checked);
    let out = run(&["stress", "--count", "40", "--seed", "3", "--no-timing", "--json", "--threads", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&out);
    assert_eq!(summary["instances"], 40);
    assert_eq!(summary["failures"], serde_json::json!([]));
    assert!(summary.get("total_ms").is_none());
}

#[test]
fn stress_three_arc_strong() {
    let spec = stress_spec(200, &[Enforce::ThreeArcStrong, Enforce::V1Degree3]);
    let s = commands::stress(&spec, true);
    assert!(s.ok(), "{}", s.to_text());
    assert_eq!(s.decomposed, s.generated);
    assert!(s.generated > 150, "{}", s.to_text());
    assert!(s.total_ms.is_some());
}
