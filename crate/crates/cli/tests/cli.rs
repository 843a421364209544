//! End-to-end tests against the compiled binary: exit codes, JSON shape,
//! CSV determinism and the error paths.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn depolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depolar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    let text = String::from_utf8_lossy(&output.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON ({e}): {text}"))
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn check_partial_transpose_point_fails_cp() {
    let out = depolar(&["check", "--dim", "2", "--nu", "1,-1,1"]);
    assert_eq!(exit_code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["is_cp"], false);
    assert_eq!(doc["classification"], "exterior");
    assert_eq!(doc["dim"], 2);
    // numeric spectrum {-1, 1, 1, 1}
    let eigs: Vec<f64> = doc["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!((eigs[0] + 1.0).abs() < 1e-12);
    assert!(doc["agreement_max_delta"].as_f64().unwrap() < 1e-9);
}

#[test]
fn check_fully_depolarizing_qutrit_is_cp() {
    let out = depolar(&["check", "--dim", "3", "--nu", "0,0,0,0,0,0,0,0"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["is_cp"], true);
    assert_eq!(doc["basis"], "gell_mann");
    for e in doc["eigenvalues"].as_array().unwrap() {
        assert!((e.as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    }
    assert_eq!(doc["closed_form"]["values"]["h7"].as_f64().unwrap(), 1.0);
}

#[test]
fn check_identity_two_qubit_channel() {
    let ones = vec!["1"; 15].join(",");
    let out = depolar(&["check", "--dim", "4", "--nu", &ones]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["basis"], "pauli_tensor");
    let eigs: Vec<f64> = doc["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(eigs.len(), 16);
    assert!((eigs[15] - 4.0).abs() < 1e-9);
    assert!(eigs[..15].iter().all(|e| e.abs() < 1e-9));
}

#[test]
fn check_reads_nu_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nu.txt");
    std::fs::write(&path, "0.5\n 0.5\n0.5 \n").unwrap();
    let out = depolar(&["check", "--dim", "2", "--nu-file", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_json(&out)["is_cp"], true);
}

#[test]
fn check_rejects_malformed_input() {
    // wrong arity
    let out = depolar(&["check", "--dim", "2", "--nu", "1,0"]);
    assert_eq!(exit_code(&out), 2);
    assert!(!out.stderr.is_empty());
    // unparseable token
    let out = depolar(&["check", "--dim", "2", "--nu", "1,zebra,0"]);
    assert_eq!(exit_code(&out), 2);
    // missing nu entirely
    let out = depolar(&["check", "--dim", "2"]);
    assert_eq!(exit_code(&out), 2);
    // both dim and qubits
    let out = depolar(&["check", "--dim", "2", "--qubits", "1", "--nu", "1,1,1"]);
    assert_eq!(exit_code(&out), 2);
    // malformed nu file
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "1.0\nnot-a-number\n1.0\n").unwrap();
    let out = depolar(&["check", "--dim", "2", "--nu-file", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    // missing file
    let out = depolar(&["check", "--dim", "2", "--nu-file", "/nonexistent/nu.txt"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn formulas_matches_check_for_qutrit() {
    let nu = "0.1,-0.2,0.3,0.0,0.25,-0.15,0.05,0.4";
    let f = depolar(&["formulas", "--dim", "3", "--nu", nu]);
    let c = depolar(&["check", "--dim", "3", "--nu", nu]);
    let fd = stdout_json(&f);
    let cd = stdout_json(&c);
    assert_eq!(fd["closed_form"]["values"], cd["closed_form"]["values"]);
    assert_eq!(fd["is_cp_closed_form"], cd["is_cp"]);
}

#[test]
fn formulas_rejects_unsupported_dim() {
    let out = depolar(&["formulas", "--dim", "5", "--nu", "0,0,0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn check_accepts_qubits_flag() {
    let ones = vec!["1"; 15].join(",");
    let out = depolar(&["check", "--qubits", "2", "--nu", &ones]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["dim"], 4);
    assert_eq!(doc["basis"], "pauli_tensor");
}

#[test]
fn check_gell_mann_override_skips_closed_form_for_dim_4() {
    let ones = vec!["1"; 15].join(",");
    let out = depolar(&[
        "check", "--dim", "4", "--basis", "gell-mann", "--nu", &ones,
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["basis"], "gell_mann");
    assert!(doc["closed_form"].is_null());
    assert!(doc["agreement_max_delta"].is_null());
}

#[test]
fn sample_summary_and_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    let run = |p: &Path| {
        depolar(&[
            "sample", "--dim", "2", "--n", "5000", "--seed", "7", "--out",
            p.to_str().unwrap(),
        ])
    };
    let out1 = run(&p1);
    assert_eq!(exit_code(&out1), 0);
    let doc = stdout_json(&out1);
    let frac = doc["cp_fraction"].as_f64().unwrap();
    assert!((frac - 1.0 / 3.0).abs() < 0.03, "{frac}");
    let out2 = run(&p2);
    assert_eq!(exit_code(&out2), 0);
    let c1 = std::fs::read(&p1).unwrap();
    let c2 = std::fs::read(&p2).unwrap();
    assert!(!c1.is_empty());
    assert_eq!(c1, c2, "CSV output must be byte-identical across runs");
    // header + strict parse: every row has 5 columns, flags in {true,false}
    let text = String::from_utf8(c1).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "nu_1,nu_2,nu_3,min_eigenvalue,is_cp");
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5, "{line}");
        for c in &cols[..4] {
            c.parse::<f64>().unwrap();
        }
        assert!(cols[4] == "true" || cols[4] == "false");
        rows += 1;
    }
    assert_eq!(rows, 5000);
}

#[test]
fn sample_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sample.json");
    let out = depolar(&[
        "sample", "--dim", "3", "--n", "50", "--seed", "3", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["points"].as_array().unwrap().len(), 50);
    assert_eq!(doc["points"][0]["nu"].as_array().unwrap().len(), 8);
}

#[test]
fn sample_rejects_zero_samples_and_bad_path() {
    let out = depolar(&["sample", "--dim", "2", "--n", "0", "--seed", "7"]);
    assert_eq!(exit_code(&out), 2);
    let out = depolar(&[
        "sample", "--dim", "2", "--n", "10", "--seed", "7", "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn vertices_one_qubit_tetrahedron() {
    let out = depolar(&["vertices", "--qubits", "1"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    let vertices = doc["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 4);
    let patterns: Vec<Vec<i64>> = vertices
        .iter()
        .map(|v| {
            v["nu_pattern"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_i64().unwrap())
                .collect()
        })
        .collect();
    assert!(patterns.contains(&vec![1, 1, 1]));
    assert!(patterns.contains(&vec![1, -1, -1]));
    assert!(patterns.contains(&vec![-1, 1, -1]));
    assert!(patterns.contains(&vec![-1, -1, 1]));
    for v in vertices {
        assert_eq!(v["choi_rank_one"], true);
    }
}

#[test]
fn vertices_two_qubits_sixteen_distinct() {
    let out = depolar(&["vertices", "--qubits", "2"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    let vertices = doc["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 16);
    let mut seen = std::collections::HashSet::new();
    for v in vertices {
        assert_eq!(v["choi_rank_one"], true);
        let pattern: Vec<i64> = v["nu_pattern"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_i64().unwrap())
            .collect();
        assert!(seen.insert(pattern), "duplicate pattern");
    }
}

#[test]
fn conjecture_exit_codes_and_guard() {
    let out = depolar(&["conjecture", "--qubits", "1"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["simplex_consistent"], true);
    assert!(doc["max_commutator"].as_f64().unwrap() <= 1e-10);

    let out = depolar(&["conjecture", "--qubits", "2", "--n", "5"]);
    assert_eq!(exit_code(&out), 0);

    let out = depolar(&["conjecture", "--qubits", "4"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
}

#[test]
fn unknown_flags_exit_with_usage_error() {
    let out = depolar(&["check", "--dim", "2", "--nu", "1,1,1", "--frobnicate"]);
    assert_eq!(exit_code(&out), 2);
    let out = depolar(&["no-such-command"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn vertices_three_qubits_all_rank_one() {
    let out = depolar(&["vertices", "--qubits", "3"]);
    assert_eq!(exit_code(&out), 0);
    let doc = stdout_json(&out);
    let vertices = doc["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 64);
    for v in vertices {
        assert_eq!(v["choi_rank_one"], true, "{}", v["label"]);
    }
}
