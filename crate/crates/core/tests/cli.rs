use std::path::PathBuf;
use std::process::{Command, Output};

fn spindiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spindiff")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

#[test]
fn verify_all_exits_zero() {
    let o = spindiff(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 fail"));
}

#[test]
fn verify_commutators_lists_four_items() {
    let o = spindiff(&["verify", "--suite", "commutators"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 4);
}

#[test]
fn verify_json_is_deterministic() {
    let a = spindiff(&["verify", "--format", "json", "--seed", "5"]);
    let b = spindiff(&["verify", "--format", "json", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_suite_is_usage_error() {
    assert_eq!(spindiff(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn apply_sz_on_z_plus() {
    let o = spindiff(&["apply", "--op", "Sz", "--spinor", "z+"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("factor: 1/2"), "{out}");
    assert!(out.starts_with("top: (1/4)*exp(i*(theta - phi)/2) + (1/4)*exp(i*(-theta - phi)/2)"), "{out}");
}

#[test]
fn apply_trig_style() {
    let o = spindiff(&["apply", "--op", "Sx", "--spinor", "x-", "--style", "trig"]);
    assert!(stdout(&o).contains("factor: -1/2"));
}

#[test]
fn apply_unknown_identifiers() {
    assert_eq!(spindiff(&["apply", "--op", "Sw", "--spinor", "z+"]).status.code(), Some(2));
    let o = spindiff(&["apply", "--op", "Sz", "--spinor", "w+"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown spinor identifier `w+`"));
}

#[test]
fn commutator_of_equal_ops_is_zero() {
    let o = spindiff(&["commutator", "--ops", "Sx,Sx"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[1,1]: 0\n[1,2]: 0\n[2,1]: 0\n[2,2]: 0\n");
}

#[test]
fn commutator_sx_sy() {
    let o = spindiff(&["commutator", "--ops", "Sx,Sy"]);
    assert_eq!(
        stdout(&o),
        "[1,1]: -i*sin(theta)*d_theta - cos(theta)*d_phi\n[1,2]: 0\n[2,1]: 0\n[2,2]: i*sin(theta)*d_theta - cos(theta)*d_phi\n"
    );
}

#[test]
fn commutator_needs_two_ops() {
    assert_eq!(spindiff(&["commutator", "--ops", "Sx"]).status.code(), Some(2));
    assert_eq!(spindiff(&["commutator", "--ops", "Sx,Sq"]).status.code(), Some(2));
}

#[test]
fn eval_half_angle_cosine() {
    let o = spindiff(&["eval", "--expr", "cos(theta/2)", "--theta", "0"]);
    assert_eq!(stdout(&o), "1.0\n");
}

#[test]
fn eval_with_initial_angles() {
    let o = spindiff(&["eval", "--expr", "exp(i*(phi - phi_p)/2)", "--theta", "0", "--phi", "1", "--phi-p", "1"]);
    assert_eq!(stdout(&o), "1.0\n");
    let o = spindiff(&["eval", "--expr", "i", "--theta", "-0.5"]);
    assert_eq!(stdout(&o), "0.0 + 1.0i\n");
}

#[test]
fn eval_parse_errors_report_position() {
    for (text, offset) in [("cos(theta/2", 11), ("sin(theta/3)", 4), ("exp(theta)", 4), ("1/(cos(theta))", 2)] {
        let o = spindiff(&["eval", "--expr", text, "--theta", "0"]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(stderr(&o).contains(&format!("offset {offset}")), "{text}: {}", stderr(&o));
    }
}

#[test]
fn solve_bundled_z() {
    let o = spindiff(&["solve", &data("z.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("status: unique"));
    assert!(out.contains("A [1, 0]: -sin(theta)"));
    assert!(out.contains("A [0, 1]: i*cos(theta)"));
    assert!(out.contains("D [1, 0]: sin(theta)"));
    assert!(out.contains("D [0, 1]: i*cos(theta)"));
}

#[test]
fn solve_bundled_z_full_is_parametric() {
    let out = stdout(&spindiff(&["solve", &data("z-full.json")]));
    assert!(out.starts_with("status: parametric"));
    assert!(out.contains("nullspace dimension: 24"));
}

#[test]
fn solve_bundled_x() {
    let out = stdout(&spindiff(&["solve", &data("x.json")]));
    assert!(out.contains("[1,1]: cos(theta)*d_theta + i*sin(theta)*d_phi"));
    assert!(out.contains("[2,2]: -cos(theta)*d_theta + i*sin(theta)*d_phi"));
}

#[test]
fn solve_bundled_y_files() {
    let out = stdout(&spindiff(&["solve", &data("y-no-phase.json")]));
    assert!(out.starts_with("status: infeasible"));
    assert!(out.contains("witness (valid: true)"));
    let out = stdout(&spindiff(&["solve", &data("y-printed.json")]));
    assert!(out.starts_with("status: infeasible"));
    let out = stdout(&spindiff(&["solve", &data("y-corrected.json")]));
    assert!(out.contains("[1,1]: -i*d_theta"));
    assert!(out.contains("[2,2]: -i*d_theta"));
}

#[test]
fn solve_json_output() {
    let o = spindiff(&["solve", &data("z.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "unique");
    assert_eq!(v["operator"][0][1], "0");
}

#[test]
fn solve_rejects_bad_files() {
    let dir = std::env::temp_dir().join(format!("spindiff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("empty.json", r#"{"eigenpairs": [], "pattern": ["A", "D"]}"#, "must not be empty"),
        ("corrupt.json", r#"{"eigenpairs": [{"spinor": "z+""#, "not valid JSON"),
        (
            "badexpr.json",
            r#"{"eigenpairs": [{"spinor": {"top": "cos(theta/3)", "bottom": "1"}, "eigenvalue": "1/2"}], "pattern": ["A"]}"#,
            "offset 4",
        ),
    ];
    for (name, body, needle) in cases {
        let path = dir.join(name);
        std::fs::write(&path, body).unwrap();
        let o = spindiff(&["solve", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(needle), "{name}: {}", stderr(&o));
    }
    let o = spindiff(&["solve", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn list_identifiers() {
    let out = stdout(&spindiff(&["list"]));
    assert!(out.contains("S2closed"));
    assert!(out.contains("ycorr-"));
}
