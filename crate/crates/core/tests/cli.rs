use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ppslab::cli::{exit, HvtModelFile, ReportDocument, ScenarioFile};
use ppslab::toybox::build_box_model;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ppslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = ppslab(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn abl_prints_twelve_decimals() {
    let (code, out, _) = run(&["abl", &path("three_box.json"), "M", "1"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("1.000000000000"), "{out}");

    let (code, out, _) = run(&["abl", &path("fine_grained.json"), "F", "1"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("0.333333333333"), "{out}");

    // post-selection on the identity: the Born value |⟨1|ψ⟩|² = 1/3
    let (code, out, _) = run(&["abl", &path("born.json"), "M", "1"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("0.333333333333"), "{out}");
}

#[test]
fn paradox_exit_codes() {
    let (code, out, _) = run(&["paradox", &path("three_box.json")]);
    assert_eq!(code, exit::PARADOX);
    assert!(out.starts_with("verdict: logical-paradox"));
    let named = out
        .lines()
        .any(|l| l.trim_start().starts_with("ac0") && l.contains("|1⟩⟨1|") && l.contains("|2⟩⟨2|"));
    assert!(named, "{out}");

    let (code, _, _) = run(&["paradox", &path("trivial_consistent.json")]);
    assert_eq!(code, exit::OK);
    let (code, _, _) = run(&["paradox", &path("fine_grained.json")]);
    assert_eq!(code, exit::INCONCLUSIVE);
}

#[test]
fn parse_errors_exit_2() {
    let (code, _, err) = run(&["abl", &path("malformed.json"), "M", "1"]);
    assert_eq!(code, exit::PARSE);
    assert!(err.contains("line 4 column"), "{err}");

    let (code, _, _) = run(&["paradox", &path("does_not_exist.json")]);
    assert_eq!(code, exit::PARSE);
    let (code, _, _) = run(&["abl", &path("three_box.json"), "Q", "1"]);
    assert_eq!(code, exit::PARSE);
    let (code, _, _) = run(&["paradox"]);
    assert_eq!(code, exit::PARSE);
    let (code, _, _) = run(&["toybox", "--trials", "many"]);
    assert_eq!(code, exit::PARSE);
}

#[test]
fn invalid_projector_reports_its_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let mut s: ScenarioFile = ScenarioFile::parse(&std::fs::read_to_string(fixture("three_box.json")).unwrap()).unwrap();
    s.pvms[1].outcomes[0].projector = ppslab::cli::ProjectorSpec::Matrix(vec![vec![[2.0, 0.0]; 3]; 3]);
    std::fs::write(&file, s.to_json()).unwrap();
    let (code, _, err) = run(&["abl", file.to_str().unwrap(), "M", "1"]);
    assert_eq!(code, exit::PARSE);
    assert!(err.contains("pvms[1].outcomes[0]"), "{err}");
}

#[test]
fn impossible_post_selection_exits_3() {
    let (code, _, err) = run(&["abl", &path("impossible.json"), "M", "1"]);
    assert_eq!(code, exit::IMPOSSIBLE);
    assert!(err.contains("impossible"), "{err}");
    let (code, _, _) = run(&["paradox", &path("impossible.json")]);
    assert_eq!(code, exit::IMPOSSIBLE);
}

#[test]
fn caps_exit_4() {
    let (code, _, err) = run(&["disturbance", &path("three_box.json"), "--max-ontic", "2"]);
    assert_eq!(code, exit::CAP);
    assert!(err.contains("ontic"), "{err}");
    let (code, _, _) = run(&["ks", &path("three_box.json"), "--max-free", "3"]);
    assert_eq!(code, exit::CAP);
}

#[test]
fn disturbance_reports() {
    let (code, out, _) = run(&["disturbance", &path("three_box.json")]);
    assert_eq!(code, exit::OK);
    assert!(out.starts_with("INFEASIBLE"), "{out}");
    assert!(out.contains("  M/1 = 1.000000000000\n  N/1 = 1.000000000000\n"), "{out}");

    let (code, out, _) = run(&["disturbance", &path("three_box_single_context.json")]);
    assert_eq!(code, exit::OK);
    assert!(out.starts_with("FEASIBLE"), "{out}");
}

#[test]
fn feasible_disturbance_report_carries_a_loadable_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, _, _) = run(&[
        "disturbance",
        &path("three_box_single_context.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, exit::OK);
    let doc = ReportDocument::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let file: HvtModelFile = serde_json::from_value(doc.results["model"].clone()).unwrap();
    let model = file.load().unwrap();
    let m = model.measurement("M").unwrap();
    assert!((ppslab::hvt::hvt_pps_probability(&model, m, "1").unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn ks_lists_assignments() {
    let (code, out, _) = run(&["ks", &path("fine_grained.json")]);
    assert_eq!(code, exit::OK);
    assert!(out.starts_with("3 assignments"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("  ")).count(), 3);
}

#[test]
fn hvt_on_the_toy_box_model() {
    let (code, out, _) = run(&["hvt", &path("toybox_model.json"), "check-left", "found"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("= 1.000000000000"), "{out}");
    let (code, _, _) = run(&["hvt", &path("toybox_model.json"), "check-front", "found"]);
    assert_eq!(code, exit::IMPOSSIBLE);
}

#[test]
fn toybox_exact_column() {
    let (code, out, _) = run(&["toybox", "--trials", "2000", "--seed", "1"]);
    assert_eq!(code, exit::OK);
    let row = out.lines().find(|l| l.starts_with("check-left   found")).unwrap();
    let exact = row.split_whitespace().nth(2).unwrap();
    assert_eq!(exact, "1.000000000000");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let invocations: [&[&str]; 3] = [
        &["toybox", "--trials", "5000", "--seed", "42"],
        &["paradox", &path("three_box.json")],
        &["disturbance", &path("three_box.json")],
    ];
    for (i, args) in invocations.iter().enumerate() {
        let a = dir.path().join(format!("{i}a.json"));
        let b = dir.path().join(format!("{i}b.json"));
        let first = ppslab(&[args, &["--out", a.to_str().unwrap()][..]].concat());
        let second = ppslab(&[args, &["--out", b.to_str().unwrap()][..]].concat());
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(first.status.code(), second.status.code());
        let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(ja, jb, "{args:?}");

        let doc = ReportDocument::parse(std::str::from_utf8(&ja).unwrap()).unwrap();
        assert_eq!(doc.to_json().as_bytes(), &ja[..]);
        assert_eq!(doc.command, args.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    }

    let other = ppslab(&["toybox", "--trials", "5000", "--seed", "43"]);
    let base = ppslab(&["toybox", "--trials", "5000", "--seed", "42"]);
    assert_ne!(other.stdout, base.stdout);
}

#[test]
fn failures_still_write_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, _, _) = run(&["abl", &path("impossible.json"), "M", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code, exit::IMPOSSIBLE);
    let doc = ReportDocument::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.exit_code, exit::IMPOSSIBLE);
    assert!(doc.results["error"].is_string());
}

#[test]
fn scenario_fixtures_round_trip() {
    for name in [
        "three_box.json",
        "three_box_single_context.json",
        "fine_grained.json",
        "born.json",
        "trivial_consistent.json",
        "impossible.json",
        "qubit_phase.json",
    ] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let parsed = ScenarioFile::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        parsed.load().unwrap_or_else(|e| panic!("{name}: {e}"));
        let original: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_value(&parsed).unwrap(), original, "{name}");
        assert_eq!(ScenarioFile::parse(&parsed.to_json()).unwrap(), parsed);
    }
}

#[test]
fn toybox_model_fixture_matches_library() {
    let text = std::fs::read_to_string(fixture("toybox_model.json")).unwrap();
    let parsed = HvtModelFile::parse(&text).unwrap();
    let original: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_value(&parsed).unwrap(), original);
    let model = build_box_model().unwrap().scenario;
    assert_eq!(parsed, HvtModelFile::from_scenario(&model));
    assert_eq!(parsed.load().unwrap(), model);
}

#[test]
fn malformed_fixture_does_not_parse() {
    let text = std::fs::read_to_string(fixture("malformed.json")).unwrap();
    assert!(ScenarioFile::parse(&text).is_err());
}
