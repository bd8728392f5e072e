use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qchannel_core::io::{ChannelDoc, MatrixDoc};
use qchannel_core::qcore::{embed_single, gate, Gate};
use qchannel_core::{KrausChannel, Matrix};
use serde_json::{json, Value};
use tempfile::TempDir;

fn qchannel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchannel")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = qchannel(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn failure(args: &[&str]) -> (i32, Value) {
    let out = qchannel(args);
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).expect("error line is JSON");
    (out.status.code().expect("exit code"), err)
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn xflips(dir: &Path) -> String {
    let gates: Vec<Value> = [("I", 1), ("X", 1), ("X", 2), ("X", 3)]
        .iter()
        .map(|(g, q)| json!({"gate": g, "qubit": q}))
        .collect();
    write(dir, "xflips.json", &json!({"qubits": 3, "gates": gates}))
}

fn matrix(v: &Value) -> Matrix {
    qchannel_core::io::matrix_from_value(v).unwrap()
}

#[test]
fn deutsch_report() {
    let r = qchannel(&["deutsch", "--oracle", "builtin:constant0"]);
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.starts_with(r#"{"verdict":"constant","probability":1.0,"#), "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["paper_ref"].is_string());

    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", &json!({"m": 1, "k": 1, "table": [1, 0]}));
    assert_eq!(report(&["deutsch", "--oracle", &f])["verdict"], "balanced");
}

#[test]
fn repetition_code_pipeline() {
    let dir = TempDir::new().unwrap();
    let errors = xflips(dir.path());
    let c = report(&["correctable", "--code", "repetition3", "--errors", &errors]);
    assert_eq!(c["correctable"], true);
    assert!(matrix(&c["lambda"]).dist(&Matrix::identity(4)) <= 1e-10);
    assert_eq!(c["offending"], Value::Null);

    let rec = dir.path().join("rec.json");
    let out = qchannel(&["recovery", "--code", "builtin:repetition3", "--errors", &errors, "--out", rec.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());

    let x = |k| embed_single(&gate(Gate::X), k, 3).unwrap();
    let ch = KrausChannel::new(vec![
        Matrix::identity(8).scale_real(0.85f64.sqrt()),
        x(1).scale_real(0.05f64.sqrt()),
        x(2).scale_real(0.05f64.sqrt()),
        x(3).scale_real(0.05f64.sqrt()),
    ])
    .unwrap();
    let chan = write(dir.path(), "noise.json", &serde_json::to_value(ChannelDoc::from_channel(&ch)).unwrap());
    let v = report(&["verify-recovery", "--channel", &chan, "--recovery", rec.to_str().unwrap(), "--code", "repetition3"]);
    assert_eq!(v["states"], 20);
    assert!(v["deviation"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["restored"], true);
}

#[test]
fn offending_pairs_are_one_based() {
    let dir = TempDir::new().unwrap();
    let errors = write(
        dir.path(),
        "iz.json",
        &json!({"qubits": 3, "gates": [{"gate": "I", "qubit": 1}, {"gate": "Z", "qubit": 1}]}),
    );
    let c = report(&["correctable", "--code", "repetition3", "--errors", &errors]);
    assert_eq!(c["correctable"], false);
    assert_eq!(c["offending"], json!([1, 2]));
    let (code, err) = failure(&["recovery", "--code", "repetition3", "--errors", &errors]);
    assert_eq!((code, err["error"].as_str().unwrap()), (3, "ConditionViolated"));
}

#[test]
fn shor_code_single_qubit_errors() {
    let dir = TempDir::new().unwrap();
    let errors = write(
        dir.path(),
        "q5.json",
        &json!({"qubits": 9, "gates": [
            {"gate": "I", "qubit": 5}, {"gate": "X", "qubit": 5}, {"gate": "Y", "qubit": 5}, {"gate": "Z", "qubit": 5}
        ]}),
    );
    let c = report(&["correctable", "--code", "builtin:shor9", "--errors", &errors]);
    assert_eq!(c["correctable"], true);
    assert!(matrix(&c["lambda"]).dist(&Matrix::identity(4)) <= 1e-10);
}

#[test]
fn noise_commutant_reports() {
    let r = report(&["noiseless", "--channel", "builtin:zz_dephasing"]);
    assert_eq!(r["commutant_dim"], 8);
    assert_eq!(r["blocks"], json!([{"m": 1, "n": 2}, {"m": 1, "n": 2}]));
    assert_eq!(r["subsystems"].as_array().unwrap().len(), 2);

    let s = report(&["structure", "--channel", "builtin:collective_rotation"]);
    assert_eq!(s["dim"], 5);
    assert_eq!(s["blocks"], json!([{"m": 2, "n": 2}, {"m": 4, "n": 1}]));
    let u = matrix(&s["basis_change"]);
    assert!(u.adjoint_mul(&u).dist(&Matrix::identity(8)) <= 1e-9);

    let f = report(&["fix-vs-commutant", "--channel", "builtin:amplitude_damping"]);
    assert_eq!((f["equal"].as_bool(), f["unital"].as_bool()), (Some(false), Some(false)));
    assert_eq!(report(&["commutant", "--channel", "builtin:phase_flip"])["dimension"], 2);
    assert_eq!(report(&["interaction-algebra", "--channel", "builtin:amplitude_damping"])["dimension"], 4);
    assert_eq!(report(&["fix", "--channel", "builtin:bit_flip"])["dimension"], 2);
}

#[test]
fn structure_of_given_operators() {
    let dir = TempDir::new().unwrap();
    let ops = vec![MatrixDoc::from(&Matrix::unit(2, 0, 0)), MatrixDoc::from(&Matrix::unit(2, 1, 1))];
    let path = write(dir.path(), "diag.json", &serde_json::to_value(ops).unwrap());
    let s = report(&["structure", "--algebra", &path]);
    assert_eq!(s["blocks"], json!([{"m": 1, "n": 1}, {"m": 1, "n": 1}]));
}

#[test]
fn dead_subspace_reports() {
    let dir = TempDir::new().unwrap();
    let p0 = write(dir.path(), "p0.json", &json!([{"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [0, 0]]}]));
    let d = report(&["dead-subspace", "--channel", &p0]);
    assert_eq!(d["singular"], true);
    assert_eq!(d["dead_dimension"], 1);
    assert_eq!(d["hypothesis_holds"], true);
    assert_eq!(d["annihilation_residual"], 0.0);

    let d = report(&["dead-subspace", "--channel", "builtin:dead_row"]);
    assert_eq!(d["hypothesis_holds"], false);
    assert!(matrix(&d["identity_image"]).dist(&Matrix::unit(4, 0, 0).scale_real(4.0)) == 0.0);
    assert_eq!(report(&["dead-subspace", "--channel", "builtin:bit_flip"])["singular"], false);
}

#[test]
fn choi_round_trip() {
    let dir = TempDir::new().unwrap();
    for name in ["amplitude_damping", "collective_rotation", "entanglement_breaking"] {
        let choi = dir.path().join(format!("{name}.choi.json"));
        let builtin = format!("builtin:{name}");
        let out = qchannel(&["choi", "--channel", &builtin, "--out", choi.to_str().unwrap()]);
        assert!(out.status.success());
        let c = report(&["classify", "--choi", choi.to_str().unwrap()]);
        assert_eq!(c["completely_positive"], true);
        assert_eq!(c["trace_preserving"], true);

        let kraus = dir.path().join(format!("{name}.kraus.json"));
        let out = qchannel(&["kraus-from-choi", "--choi", choi.to_str().unwrap(), "--out", kraus.to_str().unwrap()]);
        assert!(out.status.success());
        let eq = report(&["channels-equal", "--a", kraus.to_str().unwrap(), "--b", &builtin]);
        assert_eq!(eq["equal"], true, "{name}");
        assert!(eq["choi_distance"].as_f64().unwrap() <= 1e-9);
    }
}

#[test]
fn reports_are_json_fixed_points() {
    let dir = TempDir::new().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["choi", "--channel", "builtin:bit_flip"],
        vec!["noiseless", "--channel", "builtin:permutation"],
        vec!["parallelism", "--oracle", "builtin:identity"],
        vec!["adder", "--n", "2"],
    ];
    for args in cases {
        let text = String::from_utf8(qchannel(&args).stdout).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again, "{args:?}");
    }
    // A Kraus report is itself a channel document.
    let choi = write(dir.path(), "c.json", &report(&["choi", "--channel", "builtin:phase_flip"]));
    let kraus = report(&["kraus-from-choi", "--choi", &choi]);
    let mut doc = kraus.clone();
    doc.as_object_mut().unwrap().remove("paper_ref");
    let ch = serde_json::from_value::<ChannelDoc>(doc).unwrap().to_channel().unwrap();
    assert!(ch.is_trace_preserving());
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for args in [
        vec!["structure", "--channel", "builtin:collective_rotation", "--seed", "7"],
        vec!["noiseless", "--channel", "builtin:zz_dephasing"],
        vec!["recovery", "--code", "repetition3", "--errors", "builtin:bit_flip"],
    ] {
        let a = qchannel(&args);
        let b = qchannel(&args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}

#[test]
fn algorithm_reports() {
    let dir = TempDir::new().unwrap();
    let balanced = write(dir.path(), "b.json", &json!({"m": 2, "k": 1, "table": [0, 1, 1, 0]}));
    let r = report(&["deutsch-jozsa", "--oracle", &balanced]);
    assert_eq!(r["verdict"], "balanced");
    assert_eq!(r["zero_probability"], 0.0);

    let p = report(&["parallelism", "--oracle", &balanced]);
    let terms = p["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 4);
    assert!(terms.iter().all(|t| (t["amplitude"][0].as_f64().unwrap() - 0.5).abs() <= 1e-15));

    let a = report(&["adder", "--n", "2"]);
    assert_eq!(a["permutation_matrix"], true);
    // |x=1⟩|y=3⟩ (index 7) goes to |1⟩|0⟩ (index 4).
    assert_eq!(a["images"][7], 4);
}

#[test]
fn quiet_suppresses_stdout() {
    let out = qchannel(&["--quiet", "deutsch", "--oracle", "builtin:identity"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let (code, err) = failure(&["deutsch", "--oracle", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!((code, err["error"].as_str().unwrap()), (2, "Io"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let (code, err) = failure(&["deutsch", "--oracle", bad.to_str().unwrap()]);
    assert_eq!((code, err["error"].as_str().unwrap()), (2, "Parse"));

    let (code, err) = failure(&["noiseless", "--channel", "builtin:amplitude_damping"]);
    assert_eq!((code, err["error"].as_str().unwrap()), (3, "NotUnital"));

    let unbalanced = write(dir.path(), "u.json", &json!({"m": 2, "k": 1, "table": [0, 0, 0, 1]}));
    let (code, err) = failure(&["deutsch-jozsa", "--oracle", &unbalanced]);
    assert_eq!((code, err["error"].as_str().unwrap()), (3, "PromiseViolated"));

    // Transpose map on a qubit: Choi matrix is the swap, eigenvalue −1.
    let swap = Matrix::from_fn(4, 4, |r, c| {
        let (i, a) = (r / 2, r % 2);
        let (j, b) = (c / 2, c % 2);
        if i == b && j == a { num_complex::Complex::new(1.0, 0.0) } else { num_complex::Complex::new(0.0, 0.0) }
    });
    let swap = write(dir.path(), "swap.json", &json!({"block_dim": 2, "matrix": MatrixDoc::from(&swap)}));
    let c = report(&["classify", "--choi", &swap]);
    assert_eq!(c["completely_positive"], false);
    let (code, err) = failure(&["kraus-from-choi", "--choi", &swap]);
    assert_eq!((code, err["error"].as_str().unwrap()), (3, "NotPSD"));

    let (code, err) = failure(&["correctable", "--code", "builtin:steane", "--errors", "builtin:bit_flip"]);
    assert_eq!((code, err["error"].as_str().unwrap()), (2, "UnknownCode"));

    let (code, err) = failure(&["adder", "--n", "9"]);
    assert_eq!((code, err["error"].as_str().unwrap()), (2, "InvalidParameter"));

    let out = qchannel(&["no-such-verb"]);
    assert_eq!(out.status.code(), Some(2));
}
