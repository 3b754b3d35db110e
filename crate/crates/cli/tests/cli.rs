use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wedderburn"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn decompose_c3_over_f7() {
    let out = run(&["decompose", s(&fixture("c3_p7.alg")), "--seed", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "block 0: M_1(D), dim D = 1\nblock 1: M_1(D), dim D = 1\nblock 2: M_1(D), dim D = 1\n"
    );
}

#[test]
fn decompose_s3_over_f5() {
    let out = run(&["decompose", s(&fixture("s3_p5.alg"))]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "block 0: M_1(D), dim D = 1\nblock 1: M_1(D), dim D = 1\nblock 2: M_2(D), dim D = 1\n"
    );
}

#[test]
fn decompose_rejects_radical() {
    let out = run(&["decompose", s(&fixture("triangular_p5.alg"))]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("radical has dimension 1"), "{err}");
    assert!(err.contains("[0, 1, 0]"), "{err}");
}

#[test]
fn decompose_modular_group_algebra_is_rejected() {
    let dir = TempDir::new().unwrap();
    let alg = dir.path().join("c3_p3.alg");
    assert_eq!(code(&run(&["gen", "group", "--cayley", s(&fixture("c3.cayley")), "-p", "3", "-o", s(&alg)])), 0);
    let out = run(&["decompose", s(&alg)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("radical has dimension 2"));
}

#[test]
fn split_cap_exhaustion_exits_5() {
    let dir = TempDir::new().unwrap();
    let alg = dir.path().join("m2.alg");
    assert_eq!(code(&run(&["gen", "matrix", "-n", "2", "-p", "7", "-o", s(&alg)])), 0);
    let out = run(&["decompose", s(&alg), "--max-split-iters", "0"]);
    assert_eq!(code(&out), 5, "{}", stderr(&out));
    assert!(stderr(&out).contains("--seed"));
}

#[test]
fn invalid_inputs_exit_4() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.alg");
    assert_eq!(code(&run(&["decompose", s(&missing)])), 4);

    let garbage = dir.path().join("garbage.alg");
    std::fs::write(&garbage, "{\"p\": 5").unwrap();
    assert_eq!(code(&run(&["decompose", s(&garbage)])), 4);

    let not_prime = dir.path().join("np.alg");
    std::fs::write(&not_prime, r#"{"p": 9, "dim": 1, "structure_constants": [[[1]]]}"#).unwrap();
    assert_eq!(code(&run(&["decompose", s(&not_prime)])), 4);

    let no_one = dir.path().join("zero.alg");
    std::fs::write(&no_one, r#"{"p": 5, "dim": 1, "structure_constants": [[[0]]]}"#).unwrap();
    assert_eq!(code(&run(&["decompose", s(&no_one)])), 4);

    assert_eq!(code(&run(&["decompose"])), 4);
    assert_eq!(code(&run(&["frobnicate"])), 4);
    assert_eq!(code(&run(&["decompose", s(&fixture("s3_p5.alg")), "--verify-level", "medium"])), 4);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn decompose_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let mut algebras = vec![fixture("c3_p7.alg"), fixture("s3_p5.alg")];
    for (name, p) in [("q8", "5"), ("d4", "7"), ("c4", "5"), ("s3", "11")] {
        let path = dir.path().join(format!("{name}_{p}.alg"));
        let out = run(&["gen", "group", "--cayley", s(&fixture(&format!("{name}.cayley"))), "-p", p, "-o", s(&path)]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        algebras.push(path);
    }
    for (i, alg) in algebras.iter().enumerate() {
        let report = dir.path().join(format!("r{i}.json"));
        let out = run(&["decompose", s(alg), "--seed", "3", "-o", s(&report)]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let doc = read_json(&report);
        for key in ["unit", "multiplicative", "bijective", "orthogonality"] {
            assert_eq!(doc["verification"][key], Value::Bool(true));
        }
        let out = run(&["verify", s(alg), s(&report)]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
}

#[test]
fn report_document_shape() {
    let out = run(&["decompose", s(&fixture("s3_p5.alg")), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["p"], 5);
    assert_eq!(doc["dim"], 6);
    assert_eq!(doc["seed"], 0);
    let blocks = doc["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 3);
    for b in blocks {
        for key in [
            "n",
            "division_degree",
            "central_idempotent",
            "representative_idempotent",
            "connecting_a",
            "connecting_b",
            "matrix_units",
            "division_basis",
        ] {
            assert!(b.get(key).is_some(), "missing {key}");
        }
    }
    assert_eq!(doc["iso_matrix"].as_array().unwrap().len(), 6);
    assert_eq!(doc["iso_inverse"].as_array().unwrap().len(), 6);
    assert_eq!(doc["layout"].as_array().unwrap().len(), 6);
}

#[test]
fn reports_are_byte_identical_per_seed() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        assert_eq!(code(&run(&["decompose", s(&fixture("s3_p5.alg")), "--seed", "17", "-o", s(path)])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn verify_detects_altered_matrix_unit() {
    let dir = TempDir::new().unwrap();
    let alg = fixture("s3_p5.alg");
    let report = dir.path().join("r.json");
    assert_eq!(code(&run(&["decompose", s(&alg), "-o", s(&report)])), 0);
    let mut doc = read_json(&report);
    let blocks = doc["blocks"].as_array_mut().unwrap();
    let big = blocks.iter_mut().find(|b| b["n"] == 2).unwrap();
    let unit = big["matrix_units"][0][1].as_array_mut().unwrap();
    let k = unit.iter().position(|c| c != 0).unwrap_or(0);
    unit[k] = Value::from((unit[k].as_u64().unwrap() + 1) % 5);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&["verify", s(&alg), s(&bad)]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("verification failed: multiplicative: block"), "{err}");
    assert!(err.contains("units["), "{err}");
}

#[test]
fn verify_rejects_mismatched_documents() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    assert_eq!(code(&run(&["decompose", s(&fixture("c3_p7.alg")), "-o", s(&report)])), 0);
    let other = dir.path().join("c3_p5.alg");
    assert_eq!(code(&run(&["gen", "group", "--cayley", s(&fixture("c3.cayley")), "-p", "5", "-o", s(&other)])), 0);
    assert_eq!(code(&run(&["verify", s(&other), s(&report)])), 4);

    let malformed = dir.path().join("m.json");
    std::fs::write(&malformed, "[]").unwrap();
    assert_eq!(code(&run(&["verify", s(&fixture("c3_p7.alg")), s(&malformed)])), 4);

    let mut doc = read_json(&report);
    doc["iso_matrix"][0][0] = Value::from(7);
    std::fs::write(&malformed, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(code(&run(&["verify", s(&fixture("c3_p7.alg")), s(&malformed)])), 4);
}

#[test]
fn gen_group_document() {
    let out = run(&["gen", "group", "--cayley", s(&fixture("s3.cayley")), "-p", "5"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["p"], 5);
    assert_eq!(doc["dim"], 6);
    assert_eq!(doc["structure_constants"].as_array().unwrap().len(), 6);
    let identity: Vec<u64> = serde_json::from_value(doc["identity"].clone()).unwrap();
    assert_eq!(identity, vec![1, 0, 0, 0, 0, 0]);
}

#[test]
fn gen_matrix_scrambled_with_sidecar() {
    let dir = TempDir::new().unwrap();
    let plain = dir.path().join("m2.alg");
    let scrambled = dir.path().join("m2s.alg");
    assert_eq!(code(&run(&["gen", "matrix", "-n", "2", "-p", "5", "-o", s(&plain)])), 0);
    let out = run(&["gen", "matrix", "-n", "2", "-p", "5", "--scramble", "--seed", "9", "-o", s(&scrambled)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let sidecar = dir.path().join("m2s.alg.basis.json");
    let basis = read_json(&sidecar);
    assert_eq!(basis["seed"], 9);
    let m: Vec<Vec<u64>> = serde_json::from_value(basis["matrix"].clone()).unwrap();

    // b'_j = sum_i m[i][j] b_i, so c'[i][j] mapped through m equals the
    // product of the mapped basis vectors in the original algebra.
    let sc = |v: &Value| -> Vec<Vec<Vec<u64>>> { serde_json::from_value(v["structure_constants"].clone()).unwrap() };
    let old = sc(&read_json(&plain));
    let new = sc(&read_json(&scrambled));
    let p = 5u64;
    let n = 4;
    let column = |j: usize| -> Vec<u64> { (0..n).map(|i| m[i][j]).collect() };
    let mul_old = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[k] = (out[k] + x[i] * y[j] % p * old[i][j][k]) % p;
                }
            }
        }
        out
    };
    for i in 0..n {
        for j in 0..n {
            let lhs = mul_old(&column(i), &column(j));
            let mut rhs = vec![0; n];
            for k in 0..n {
                for (r, v) in rhs.iter_mut().enumerate() {
                    *v = (*v + new[i][j][k] * m[r][k]) % p;
                }
            }
            assert_eq!(lhs, rhs, "pair ({i}, {j})");
        }
    }

    let out = run(&["decompose", s(&scrambled)]);
    assert_eq!(stdout(&out), "block 0: M_2(D), dim D = 1\n");
}

#[test]
fn gen_matrix_over_extension() {
    let out = run(&["gen", "matrix", "-n", "2", "-p", "5", "--ext-poly", "2,0,1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("m2f25.alg");
    std::fs::write(&path, stdout(&out)).unwrap();
    let out = run(&["decompose", s(&path)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "block 0: M_2(D), dim D = 2\n");

    // T^2 + 1 = (T - 2)(T - 3) over F_5.
    assert_eq!(code(&run(&["gen", "matrix", "-n", "2", "-p", "5", "--ext-poly", "1,0,1"])), 4);
    assert_eq!(code(&run(&["gen", "matrix", "-n", "2", "-p", "5", "--ext-poly", "3"])), 4);
    assert_eq!(code(&run(&["gen", "matrix", "-n", "2", "-p", "6"])), 4);
}

#[test]
fn gen_sum_adds_dimensions() {
    let dir = TempDir::new().unwrap();
    let sum = dir.path().join("sum.alg");
    let out = run(&["gen", "sum", s(&fixture("c3_p7.alg")), s(&fixture("c3_p7.alg")), "-o", s(&sum)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(read_json(&sum)["dim"], 6);
    let out = run(&["decompose", s(&sum)]);
    assert_eq!(stdout(&out).lines().count(), 6);

    assert_eq!(code(&run(&["gen", "sum", s(&fixture("c3_p7.alg")), s(&fixture("s3_p5.alg"))])), 4);
    assert_eq!(code(&run(&["gen", "sum"])), 4);
}

#[test]
fn gen_scramble_needs_a_destination() {
    assert_eq!(code(&run(&["gen", "matrix", "-n", "2", "-p", "5", "--scramble"])), 4);
}

#[test]
fn bad_cayley_table_exits_4() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.cayley");
    std::fs::write(&path, r#"{"order": 2, "identity": 0, "table": [[0, 1], [0, 1]]}"#).unwrap();
    assert_eq!(code(&run(&["gen", "group", "--cayley", s(&path), "-p", "5"])), 4);
}
