use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wmtc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wmtc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_of(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON error");
    assert_eq!(v["error"]["exit_code"].as_i64(), out.status.code().map(i64::from));
    v
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn roots_reports_e8() {
    let v = json(&wmtc(&["roots", "--type", "E8"]));
    assert_eq!(v["positive_roots"].as_array().unwrap().len(), 120);
    assert_eq!(v["weyl_order"], 696729600u64);
    assert_eq!(v["dual_coxeter"], 30);
    assert_eq!(v["header"]["tool"], "wmtc");
    assert_eq!(v["header"]["config"]["cartan"], "E8");
}

#[test]
fn integrable_smatrix_is_unitary() {
    let v = json(&wmtc(&["smatrix", "--variant", "integrable", "--type", "A1", "--level", "1"]));
    assert_eq!(v["labels"].as_array().unwrap().len(), 2);
    assert!(v["unitarity_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["normalization"], "unitary");
    let m = &v["matrix"];
    assert!((m[1][1][0].as_f64().unwrap() + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
}

#[test]
fn d6_subregular_fusion_is_ising_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    let out = wmtc(&["smatrix", "--variant", "subregular", "--type", "D6", "--p", "11", "--q", "8", "--out", path_str(&s)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&wmtc(&["fusion", "--from", path_str(&s)]));
    assert_eq!(v["labels"].as_array().unwrap().len(), 3);
    let mut dims: Vec<f64> = v["frobenius_perron_dimensions"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    dims.sort_by(f64::total_cmp);
    assert!((dims[2] - 2f64.sqrt()).abs() < 1e-9 && (dims[0] - 1.0).abs() < 1e-9);
    assert_eq!(v["max_coefficient"], 1);

    let csv = dir.path().join("f.csv");
    assert!(wmtc(&["fusion", "--from", path_str(&s), "--out", path_str(&csv)]).status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("a,b,c,N\n"));
    assert_eq!(text.lines().count(), 1 + 10);
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        &["smatrix", "--variant", "principal", "--type", "A1", "--p", "4", "--q", "5"][..],
        &["char", "--type", "A2", "--level", "1", "--order", "6", "--two-var"][..],
        &["ope", "--preset", "sugawara", "--type", "A2"][..],
    ] {
        let a = wmtc(args);
        let b = wmtc(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn weights_lists_labels() {
    let v = json(&wmtc(&["weights", "--type", "E8", "--variant", "subregular", "--p", "30", "--q", "29"]));
    assert_eq!(v["count"], 44);
    assert!(v["labels"][0]["wall"].is_u64());
    let v = json(&wmtc(&["weights", "--type", "A1", "--p", "3", "--q", "4"]));
    assert_eq!(v["count"], 3);
    assert!(v["labels"][0]["wall"].is_null());
}

#[test]
fn char_schema() {
    let v = json(&wmtc(&["char", "--type", "A1", "--level", "1", "--order", "4"]));
    assert_eq!(v["exponent_den"], 1);
    let coeffs: Vec<(String, String)> = serde_json::from_value(v["coeffs"].clone()).unwrap();
    let want = [("0/1", "1/1"), ("1/1", "3/1"), ("2/1", "4/1"), ("3/1", "7/1"), ("4/1", "13/1")];
    assert_eq!(coeffs, want.map(|(a, b)| (a.to_string(), b.to_string())));

    let v = json(&wmtc(&["char", "--kind", "brst", "--order", "5"]));
    let y1: Vec<(String, String)> = serde_json::from_value(v["coeffs"].clone()).unwrap();
    // prod_{n >= 2} (1 - q^n)^{-1} = 1 + q^2 + q^3 + 2q^4 + 2q^5; zero coefficients are omitted
    let want = [("0/1", "1/1"), ("2/1", "1/1"), ("3/1", "1/1"), ("4/1", "2/1"), ("5/1", "2/1")];
    assert_eq!(y1, want.map(|(a, b)| (a.to_string(), b.to_string())));

    let v = json(&wmtc(&["char", "--kind", "w-vacuum", "--type", "A2", "--order", "4"]));
    let c: Vec<&str> = v["coeffs"].as_array().unwrap().iter().map(|c| c[1].as_str().unwrap()).collect();
    assert_eq!(c, ["1/1", "1/1", "2/1", "3/1"]);
}

#[test]
fn ope_text_and_ast() {
    let v = json(&wmtc(&["ope", "--preset", "heisenberg"]));
    let texts: Vec<&str> = v["brackets"].as_array().unwrap().iter().map(|b| b["text"].as_str().unwrap()).collect();
    assert_eq!(texts[0], "[h_λ h] = λ 1");
    assert_eq!(texts[1], "[L_λ h] = ∂h + λ h");
    assert!(texts[2].ends_with("λ^3 1/12"), "{}", texts[2]);
    assert_eq!(v["central_charge"], "1");
    assert!(v["brackets"][2]["ast"].as_array().unwrap().len() == 3);

    let v = json(&wmtc(&["ope", "--preset", "sugawara", "--param", "k=1"]));
    assert_eq!(v["central_charge"], "1");
    let v = json(&wmtc(&["ope", "--preset", "brst-sl2"]));
    assert_eq!(v["nilpotent"], true);
}

#[test]
fn exit_codes() {
    let out = wmtc(&["smatrix", "--type", "Q3", "--level", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"]["kind"], "validation");

    let out = wmtc(&["smatrix", "--variant", "subregular", "--type", "B3", "--p", "7", "--q", "5"]);
    assert_eq!(out.status.code(), Some(4));
    error_of(&out);

    let out = wmtc(&["ope", "--preset", "brst-sl2", "--type", "A2"]);
    assert_eq!(out.status.code(), Some(4));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"labels":[{"lambda":[0]},{"lambda":[1]}],"matrix":[[[1,0],[1,0]],[[1,0],[1,0]]]}"#).unwrap();
    let out = wmtc(&["fusion", "--from", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["error"]["kind"], "tolerance");

    let out = wmtc(&["char", "--level", "1", "--p", "3", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_dir_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wmtc"))
        .env("WMTC_OUT_DIR", dir.path())
        .args(["roots", "--type", "A3", "--out", "nested/a3.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("nested/a3.json")).unwrap()).unwrap();
    assert_eq!(v["rank"], 3);
}

#[test]
fn verify_quick_passes() {
    let out = wmtc(&["verify", "--quick"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(!text.contains("FAIL"));
    assert!(text.lines().filter(|l| l.contains("PASS")).count() >= 9);
}
