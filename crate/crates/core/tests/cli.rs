use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-minres")).args(args).output().unwrap()
}

fn run_on(sub: &str, input: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn minres_report_on_weighted_projective_plane() {
    let o = run_on("minres", &data("p311.json"), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    let m = &r["minimal_resolution"];
    assert_eq!(m["ranks"], serde_json::json!([1, 2, 1]));
    let classes: Vec<String> = m["terms"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|t| t.as_array().unwrap().iter().map(|g| g["class"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(classes, ["[0]", "[-3]", "[-1]", "[-4]"]);
    assert_eq!(r["quadruple"]["group"], "mu_3");
    assert_eq!(r["contraction"]["provenance"], "moore-penrose");
}

#[test]
fn reports_are_byte_identical() {
    let a = run_on("verify", &data("p311.json"), &[]);
    let b = run_on("verify", &data("p311.json"), &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let checks = json(&a)["checks"].as_array().unwrap().clone();
    assert!(checks.iter().all(|c| c["result"] == "ok"));
}

#[test]
fn embedding_input_matches_quadruple_input() {
    let a = json(&run_on("hhl", &data("p311.json"), &[]));
    let b = json(&run_on("hhl", &data("p311_embedding.json"), &[]));
    assert_eq!(a["hhl"], b["hhl"]);
    assert_eq!(a["quadruple"]["psi"], b["quadruple"]["psi"]);
}

#[test]
fn contraction_path_in_input_is_relative_to_the_input() {
    let o = run_on("minres", &data("p311_morse_input.json"), &["--emit", "matrices"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("min_d1 = [[y^3 - x, -y + z]]"));
}

#[test]
fn flags_override_input_options() {
    let morse = data("p311_morse.json");
    let o = run_on("minres", &data("p311.json"), &["--contraction", morse.to_str().unwrap(), "--emit", "report"]);
    assert_eq!(json(&o)["contraction"]["provenance"], "user-supplied");
    let o = run_on("minres", &data("p311_morse_input.json"), &["--contraction", "mp", "--emit", "report"]);
    assert_eq!(json(&o)["contraction"]["provenance"], "moore-penrose");
}

#[test]
fn writes_all_artifacts_to_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_on("minres", &data("p311.json"), &["--emit", "report,matrices,m2,svg", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["report.json", "matrices.txt", "complexes.m2", "stratification.svg"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let m2 = std::fs::read_to_string(dir.path().join("complexes.m2")).unwrap();
    assert!(m2.starts_with("R = QQ[x,y,z];\n"));
    assert!(m2.contains("assert(mind1 * mind2 == 0);"));
}

#[test]
fn svg_of_the_example() {
    let o = run_on("svg", &data("p311.json"), &[]);
    let svg = stdout(&o);
    assert_eq!(svg.matches("class=\"cell vertex\"").count(), 3);
    assert_eq!(svg.matches("class=\"cell edge\"").count(), 7);
    assert_eq!(svg.matches("class=\"cell face\"").count(), 4);
    let circle = stdout(&run_on("svg", &data("p1.json"), &[]));
    assert!(circle.starts_with("circle: V1(0) - E1(1/2)"));
}

#[test]
fn svg_refuses_three_dimensional_tori() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p3.json");
    std::fs::write(&p, r#"{"psi": [[1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]}"#).unwrap();
    let o = run_on("svg", &p, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no figure for k = 3"));
}

#[test]
fn exit_codes_for_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{\n  \"psi\": [[1, -1]],\n  \"extra\": 1\n}").unwrap();
    let o = run_on("stratify", &bad_json, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let rank = dir.path().join("rank.json");
    std::fs::write(&rank, r#"{"psi": [[1, 2], [2, 4]]}"#).unwrap();
    assert_eq!(run_on("stratify", &rank, &[]).status.code(), Some(3));

    let missing = dir.path().join("missing.json");
    assert_eq!(run_on("stratify", &missing, &[]).status.code(), Some(1));

    let no_grading = run_on("betti", &data("affine_plane.json"), &[]);
    assert_eq!(no_grading.status.code(), Some(4));
    let r = json(&no_grading);
    assert!(r["hhl"].is_object());
    assert!(r["error"].as_str().unwrap().contains("no positive grading"));
}

#[test]
fn invalid_contraction_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("h.json");
    std::fs::write(&c, r#"{"homotopy": [{"from": "E1", "to": "F2", "value": 1}]}"#).unwrap();
    let o = run_on("minres", &data("p311.json"), &["--contraction", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn paths_between_two_cells() {
    let o = run_on("paths", &data("p311.json"), &["--from", "F4", "--to", "E5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("F4 -> E5: 4 paths\n"));
    assert!(text.contains("sum: 1/4*y^2*z + 1/2*y*z^2 + 1/4*z^3"));
    let all = stdout(&run_on("paths", &data("p1.json"), &[]));
    assert!(all.contains("E1 -> V1: 1 path"));
    let wrong = run_on("paths", &data("p311.json"), &["--from", "F4", "--to", "V1"]);
    assert_eq!(wrong.status.code(), Some(3));
}

#[test]
fn pseudoinverse_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, "[[1], [1], [1]]").unwrap();
    for extra in [&[][..], &["--hedge"][..]] {
        let mut args = vec!["mp", "--input", m.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(stdout(&o), "[[\"1/3\",\"1/3\",\"1/3\"]]\n");
    }
}

#[test]
fn seeded_random_suite() {
    let o = run(&["verify", "--seed", "3", "--count", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("quadruples: 5 passed"));
}
