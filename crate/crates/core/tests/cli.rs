use std::path::PathBuf;
use std::process::Command;

fn job(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qorder-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn qorder(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qorder")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

const PLANE: &str = "algebra.kind = twisted\nalgebra.S = [[0, 1], [-1, 0]]\nalgebra.n_poly = 2\nroot.l = 3\n";

#[test]
fn check_plane() {
    let spec = job("check.job", PLANE);
    let (code, out, _) = qorder(&["check", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("result.admissible = true"));
    assert!(out.contains("result.poisson_shape = log-canonical"));
    assert!(out.contains("result.constant_kappa = [-9,-9]"));
}

#[test]
fn verify_plane_with_extras() {
    let spec = job("verify.job", &format!("{PLANE}character.witness.x1 = eps\ncharacter.witness.x2 = 0\n"));
    let (code, out, _) = qorder(&["verify", "--spec", spec.to_str().unwrap(), "--format", "data", "--seed", "11", "--jobs", "2"]);
    assert_eq!(code, 0, "{out}");
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result.verdict"], "PASS");
    assert_eq!(doc["result.mismatch"], 0);
    for row in doc["result.characters"].as_array().unwrap() {
        let oracle = row["outcome"]["oracle"].as_u64().unwrap();
        assert!(oracle == 1 || oracle == 3);
        assert_eq!(row["outcome"]["oracle"], row["outcome"]["predicted"]);
    }
}

#[test]
fn weyl_edge_is_flagged() {
    let spec = job("weyl.job", "algebra.kind = weyl\nalgebra.S = [[0]]\nalgebra.exponents = [1]\nroot.l = 3\n");
    let (code, out, _) = qorder(&["verify", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("result.verdict = PASS-with-flag"));
    assert!(out.contains("result.uncovered = 2"));
}

#[test]
fn writes_out_file() {
    let spec = job("oracle.job", &format!("{PLANE}character.x1 = 0\ncharacter.x2 = 1\n"));
    let target = spec.with_file_name("oracle.out");
    let (code, out, _) = qorder(&["oracle", "--spec", spec.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.contains("result.oracle = 3"));
}

#[test]
fn exit_codes() {
    let bad = job("bad.job", "algebra.kind = twisted\nalgebra.S = [[0, 1], [1, 0]]\nroot.l = 3\n");
    let (code, out, err) = qorder(&["check", "--spec", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("error.kind = parse") && err.contains("algebra.S"));

    let inadmissible = job("inadm.job", "algebra.kind = twisted\nalgebra.S = [[0, 3], [-3, 0]]\nroot.l = 3\n");
    let (code, out, _) = qorder(&["check", "--spec", inadmissible.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("result.admissible = false"));

    let (code, _, _) = qorder(&["frobnicate", "--spec", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    let missing = job("nochar.job", PLANE);
    let (code, out, _) = qorder(&["locate", "--spec", missing.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("missing field character"));
}
