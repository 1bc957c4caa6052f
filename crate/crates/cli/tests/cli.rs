use std::path::PathBuf;
use std::process::{Command, Output};

use orbitdx_core::{CanonicalCoords, Chart, GaussianRational, JordanStructure, Mat};
use serde_json::{json, Value};
use tempfile::TempDir;

struct Workdir {
    dir: TempDir,
}

impl Workdir {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, value: &Value) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, value.to_string()).unwrap();
        path
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_orbitdx"))
            .args(args)
            .current_dir(self.dir.path())
            .env_remove("ORBITDX_SEED")
            .output()
            .unwrap()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn mat(rows: &[&[i64]]) -> Value {
    json!({ "rows": rows.len(), "cols": rows[0].len(), "entries": rows })
}

fn structure(pairs: &[(i64, &[usize])]) -> Value {
    let list: Vec<Value> = pairs.iter().map(|(v, c)| json!({ "value": v, "chains": c })).collect();
    json!({ "eigenvalues": list })
}

fn example4() -> Value {
    structure(&[(0, &[3, 2]), (1, &[1])])
}

fn two_by_two(r: i64) -> Value {
    json!({ "steps": [{ "lambda": 0, "n": 1 }, { "lambda": r, "n": 1 }] })
}

fn coords_2x2(r: i64, p: i64, q: i64) -> Value {
    json!({
        "type_sequence": two_by_two(r),
        "q": { "2,1": mat(&[&[q]]) },
        "p": { "1,2": mat(&[&[p]]) },
    })
}

#[test]
fn param_reproduces_the_2x2_formula() {
    let w = Workdir::new();
    let s = w.file("s.json", &two_by_two(1));
    let c = w.file("c.json", &coords_2x2(1, 1, 1));
    let out = w.run(&["param", "--structure", s.to_str().unwrap(), "--coords", c.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let a: Mat = serde_json::from_value(stdout(&out)).unwrap();
    assert_eq!(a, Mat::from_rows(&[vec![-1, 1], vec![-2, 2]]));
}

#[test]
fn param_at_zero_is_block_diagonal() {
    let w = Workdir::new();
    let t = json!({ "steps": [{ "lambda": 3, "n": 2 }, { "lambda": -1, "n": 1 }] });
    let c = w.file(
        "c.json",
        &json!({
            "type_sequence": t,
            "q": { "2,1": mat(&[&[0, 0]]) },
            "p": { "1,2": mat(&[&[0], &[0]]) },
        }),
    );
    let out = w.run(&["param", "--coords", c.to_str().unwrap()]);
    let a: Mat = serde_json::from_value(stdout(&out)).unwrap();
    assert_eq!(a, Mat::from_rows(&[vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, -1]]));
}

#[test]
fn param_rejects_misshapen_blocks() {
    let w = Workdir::new();
    let s = w.file("s.json", &two_by_two(1));
    let mut bad = coords_2x2(1, 1, 1);
    bad["q"]["2,1"] = mat(&[&[1, 2]]);
    let c = w.file("c.json", &bad);
    let out = w.run(&["param", "--structure", s.to_str().unwrap(), "--coords", c.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("q"), "{}", stderr(&out));
    // coordinates for a different structure
    let other = w.file("o.json", &two_by_two(5));
    let c = w.file("c2.json", &coords_2x2(1, 1, 1));
    let out = w.run(&["param", "--structure", other.to_str().unwrap(), "--coords", c.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn extract_inverts_param() {
    let w = Workdir::new();
    let s = w.file("s.json", &two_by_two(-3));
    let c = w.file("c.json", &coords_2x2(-3, 7, -2));
    let out = w.run(&["param", "--structure", "s.json", "--coords", "c.json"]);
    std::fs::write(w.dir.path().join("a.json"), &out.stdout).unwrap();
    let out = w.run(&["extract", "--structure", s.to_str().unwrap(), "--matrix", "a.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = stdout(&out);
    let back: CanonicalCoords = serde_json::from_value(v["coords"].clone()).unwrap();
    let original: CanonicalCoords = serde_json::from_str(&std::fs::read_to_string(c).unwrap()).unwrap();
    assert_eq!(back, original);
    let chart: Chart = serde_json::from_value(v["chart"].clone()).unwrap();
    assert!(chart.is_identity());
}

#[test]
fn lower_triangular_point_needs_a_chart() {
    let w = Workdir::new();
    w.file("s.json", &structure(&[(0, &[2])]));
    w.file("a.json", &mat(&[&[0, 0], &[4, 0]]));
    w.file("id.json", &json!({ "perm": [1, 2] }));
    let out = w.run(&["extract", "--structure", "s.json", "--matrix", "a.json", "--chart", "id.json"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("flight 1"), "{}", stderr(&out));
    let out = w.run(&["extract", "--structure", "s.json", "--matrix", "a.json", "--chart", "auto"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = stdout(&out);
    assert_eq!(v["chart"]["perm"], json!([2, 1]));
    let c: CanonicalCoords = serde_json::from_value(v["coords"].clone()).unwrap();
    let chart: Chart = serde_json::from_value(v["chart"].clone()).unwrap();
    let a = chart.unapply(&orbitdx_core::orbit::parameterize(&c)).unwrap();
    assert_eq!(a, Mat::from_rows(&[vec![0, 0], vec![4, 0]]));
}

#[test]
fn off_orbit_matrices_fail_extraction() {
    let w = Workdir::new();
    w.file("s.json", &structure(&[(0, &[2])]));
    w.file("zero.json", &mat(&[&[0, 0], &[0, 0]]));
    let out = w.run(&["extract", "--structure", "s.json", "--matrix", "zero.json"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    // kernel sizes fit but the last step is not scalar
    w.file("t.json", &json!({ "steps": [{ "lambda": 1, "n": 1 }, { "lambda": 2, "n": 1 }] }));
    w.file("d.json", &mat(&[&[1, 0], &[0, 3]]));
    let out = w.run(&["extract", "--structure", "t.json", "--matrix", "d.json"]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    w.file("big.json", &mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    let out = w.run(&["extract", "--structure", "t.json", "--matrix", "big.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_darboux_matches_and_detects_corruption() {
    let w = Workdir::new();
    w.file("s.json", &two_by_two(2));
    w.file("c.json", &coords_2x2(2, 5, -4));
    let out = w.run(&["verify-darboux", "--structure", "s.json", "--coords", "c.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out)["match"], json!(true));

    w.file("ex4.json", &example4());
    let out = w.run(&["verify-darboux", "--structure", "ex4.json", "--seed", "11"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out)["match"], json!(true));

    let out = w.run(&["verify-darboux", "--structure", "s.json", "--seed", "3", "--corrupt-tangent", "0"]);
    assert_eq!(code(&out), 5);
    assert!(stderr(&out).contains("expected 1"), "{}", stderr(&out));
}

#[test]
fn project_follows_the_chain_rules() {
    let w = Workdir::new();
    w.file("a.json", &structure(&[(0, &[2, 1])]));
    let out = w.run(&["project", "--structure", "a.json", "--eigenvalue", "0"]);
    let j: JordanStructure = serde_json::from_value(stdout(&out)).unwrap();
    assert_eq!(j, JordanStructure::from_pairs([(GaussianRational::from_int(0), vec![1])]).unwrap());

    w.file("b.json", &structure(&[(5, &[1])]));
    let out = w.run(&["project", "--structure", "b.json", "--eigenvalue", "5"]);
    assert_eq!(code(&out), 0);
    let j: JordanStructure = serde_json::from_value(stdout(&out)).unwrap();
    assert!(j.is_empty());

    let out = w.run(&["project", "--structure", "a.json", "--eigenvalue", "-1/2"]);
    assert_eq!(code(&out), 2);

    // follow the type sequence of example4 step by step
    w.file("cur.json", &example4());
    for lambda in ["0", "0", "0"] {
        let out = w.run(&["project", "--structure", "cur.json", "--eigenvalue", lambda]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        std::fs::write(w.dir.path().join("cur.json"), &out.stdout).unwrap();
    }
    let out = w.run(&["info", "--structure", "cur.json"]);
    let v = stdout(&out);
    assert_eq!(v["type_sequence"]["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["N"], json!(1));
}

#[test]
fn info_reports_dimensions() {
    let w = Workdir::new();
    w.file("ex4.json", &example4());
    let v = stdout(&w.run(&["info", "--structure", "ex4.json"]));
    assert_eq!(v["N"], json!(6));
    assert_eq!(v["orbit_dim"], json!(26));
    assert_eq!(v["coordinate_count"], json!(26));
    let steps: Vec<(String, u64)> = v["type_sequence"]["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["lambda"].as_str().unwrap().to_owned(), s["n"].as_u64().unwrap()))
        .collect();
    let expected = [("0", 2), ("0", 2), ("0", 1), ("1", 1)].map(|(l, n)| (l.to_owned(), n));
    assert_eq!(steps, expected);

    w.file("one.json", &structure(&[(7, &[1])]));
    let v = stdout(&w.run(&["info", "--structure", "one.json"]));
    assert_eq!(v["orbit_dim"], json!(0));
    assert_eq!(v["blocks"], json!([]));

    w.file("four.json", &structure(&[(4, &[1]), (3, &[1]), (2, &[1]), (1, &[1])]));
    let v = stdout(&w.run(&["info", "--structure", "four.json"]));
    assert_eq!(v["orbit_dim"], json!(12));

    w.file("bad.json", &json!({ "eigenvalues": [{ "value": 0, "chains": [] }] }));
    assert_eq!(code(&w.run(&["info", "--structure", "bad.json"])), 2);
    std::fs::write(w.dir.path().join("junk.json"), "{ not json").unwrap();
    assert_eq!(code(&w.run(&["info", "--structure", "junk.json"])), 2);
    assert_eq!(code(&w.run(&["info", "--structure", "missing.json"])), 2);
}

#[test]
fn random_points_are_deterministic_and_on_the_orbit() {
    let w = Workdir::new();
    w.file("ex4.json", &example4());
    for mode in ["coords", "conjugate"] {
        let args = ["random-point", "--structure", "ex4.json", "--seed", "42", "--mode", mode];
        let first = w.run(&args);
        let second = w.run(&args);
        assert_eq!(code(&first), 0, "{}", stderr(&first));
        assert_eq!(first.stdout, second.stdout);
        std::fs::write(w.dir.path().join("p.json"), &first.stdout).unwrap();
        let out = w.run(&["jordan-verify", "--matrix", "p.json", "--eigenvalues", "0,1", "--structure", "ex4.json"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert_eq!(stdout(&out)["match"], json!(true));
        let out = w.run(&["extract", "--structure", "ex4.json", "--matrix", "p.json"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let other = w.run(&["random-point", "--structure", "ex4.json", "--seed", "43"]);
    let base = w.run(&["random-point", "--structure", "ex4.json", "--seed", "42"]);
    assert_ne!(other.stdout, base.stdout);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let w = Workdir::new();
    w.file("s.json", &structure(&[(0, &[2]), (1, &[1])]));
    let flag = w.run(&["random-point", "--structure", "s.json", "--seed", "9"]);
    let env = Command::new(env!("CARGO_BIN_EXE_orbitdx"))
        .args(["random-point", "--structure", "s.json"])
        .current_dir(w.dir.path())
        .env("ORBITDX_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn persistent_degeneracy_exits_6() {
    let w = Workdir::new();
    // with bound 0 every coordinate is zero, which collapses the nilpotent box
    w.file("box.json", &structure(&[(0, &[3])]));
    let out = w.run(&["random-point", "--structure", "box.json", "--bound", "0"]);
    assert_eq!(code(&out), 6, "{}", stderr(&out));
    let out = w.run(&["verify-darboux", "--structure", "box.json", "--bound", "0"]);
    assert_eq!(code(&out), 6);
}

#[test]
fn jordan_verify_reads_off_chains() {
    let w = Workdir::new();
    let j = mat(&[
        &[0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1],
    ]);
    w.file("j.json", &j);
    let out = w.run(&["jordan-verify", "--matrix", "j.json", "--eigenvalues", "0,1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = stdout(&out);
    let found: JordanStructure = serde_json::from_value(v["found"].clone()).unwrap();
    let g = GaussianRational::from_int;
    assert_eq!(found, JordanStructure::from_pairs([(g(0), vec![3, 2]), (g(1), vec![1])]).unwrap());
    assert_eq!(v["weyr"]["0"], json!([2, 4, 5, 5]));

    w.file("d.json", &mat(&[&[1, 0], &[0, 2]]));
    let v = stdout(&w.run(&["jordan-verify", "--matrix", "d.json", "--eigenvalues", "1,2"]));
    assert_eq!(v["found"]["eigenvalues"].as_array().unwrap().len(), 2);

    w.file("n.json", &mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]));
    let v = stdout(&w.run(&["jordan-verify", "--matrix", "n.json", "--eigenvalues", "0"]));
    assert_eq!(v["found"]["eigenvalues"][0]["chains"], json!([3]));

    let out = w.run(&["jordan-verify", "--matrix", "d.json", "--eigenvalues", "1"]);
    assert_eq!(code(&out), 2);
    w.file("wrong.json", &structure(&[(1, &[1]), (2, &[1])]));
    let out = w.run(&["jordan-verify", "--matrix", "n.json", "--eigenvalues", "0", "--structure", "wrong.json"]);
    assert_eq!(code(&out), 5);
}

#[test]
fn roundtrip_passes_on_the_reference_structures() {
    let w = Workdir::new();
    let structures = [
        structure(&[(4, &[1]), (3, &[1]), (2, &[1]), (1, &[1])]),
        structure(&[(5, &[1]), (4, &[1]), (3, &[1]), (2, &[1]), (1, &[1])]),
        structure(&[(0, &[4])]),
        example4(),
    ];
    for (k, s) in structures.iter().enumerate() {
        let name = format!("s{k}.json");
        w.file(&name, s);
        let out = w.run(&["roundtrip", "--structure", &name, "--trials", "100", "--seed", "5"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let v = stdout(&out);
        assert_eq!(v["trials"], json!(100));
        assert_eq!(v["passed"].as_u64().unwrap() + v["degenerate"].as_u64().unwrap(), 100);
    }
}

#[test]
fn roundtrip_edge_cases() {
    let w = Workdir::new();
    w.file("one.json", &structure(&[(2, &[1])]));
    let out = w.run(&["roundtrip", "--structure", "one.json", "--trials", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out)["passed"], json!(5));

    w.file("ex4.json", &example4());
    let out = w.run(&["roundtrip", "--structure", "ex4.json", "--trials", "3", "--seed", "77", "--corrupt-extract"]);
    assert_eq!(code(&out), 5);
    let err = stderr(&out);
    assert!(err.contains("seed 77") && err.contains("expected"), "{err}");
}
