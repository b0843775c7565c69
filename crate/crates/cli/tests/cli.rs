use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn isopair(args: &[&str]) -> Output {
    let args: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".json") { fixture(a).display().to_string() } else { a.to_string() })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_isopair")).args(&args).output().expect("binary runs")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn text_of(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_examples() {
    let o = isopair(&["classify", "neil.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["inner_toral"], "Yes");

    let o = isopair(&["classify", "onemzw.json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["toral"], true);
    assert_eq!(v["inner_toral"], "No");

    let o = isopair(&["classify", "neil.json", "--format", "text"]);
    assert!(text_of(&o).starts_with("INNER TORAL: yes (max torus deviation "));
}

#[test]
fn minpoly_example() {
    let o = isopair(&["minpoly", "phi_example.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    // w^2 - z^3: rows are powers of z
    assert_eq!(v["q_min"]["bidegree"], serde_json::json!([3, 2]));
    let q = isopair::bipoly::json::poly_from_value(&v["q_min"], "$").unwrap().to_exact().unwrap();
    assert!(q.eq_up_to_scalar(&isopair::bipoly::parse_int_poly("w^2 - z^3").unwrap()));
}

#[test]
fn exit_codes_match_verdicts_on_corpus() {
    let cases: &[(&[&str], i32)] = &[
        (&["classify", "two_lines.json"], 0),
        (&["classify", "diagonal.json"], 0),
        (&["classify", "float_neil.json"], 0),
        (&["classify", "not_toral.json"], 1),
        (&["convexity", "onemzw.json"], 0),
        (&["convexity", "neil.json"], 1),
        (&["convexity", "unimodular_line.json"], 1),
        (&["convexity", "far_line.json"], 0),
        (&["verify", "phi_example.json", "--identity", "annihilation"], 0),
        (&["verify", "phi_mobius.json", "--identity", "annihilation"], 0),
        (&["verify", "phi_mobius.json", "--identity", "qmatrix"], 0),
        (&["verify", "phi_swap.json", "--identity", "symmetry"], 0),
        (&["verify", "phi_example.json", "--identity", "inner", "--tol", "1e-10"], 0),
        (&["verify", "phi_example.json", "--identity", "pure"], 0),
        (&["verify", "phi_reducible.json", "--identity", "pure"], 1),
        (&["recover", "mu_neil.json", "--search", "3", "2"], 0),
        (&["recover", "mu_neil.json", "--search", "2", "2"], 1),
        (&["bpe", "mu_neil.json", "--zeta", "0.25,0,0.125,0"], 0),
        (&["bpe", "mu_neil.json", "--zeta", "0.3,0,0.4,0", "--maxdeg", "8"], 1),
        (&["bpe", "mu_neil.json", "--zeta", "1.5,0,0,0"], 3),
        (&["gram", "mu_weighted.json", "--maxdeg", "2", "2"], 0),
        (&["conjcheck", "phi_example.json", "phi_example.json", "identity2.json"], 0),
        (&["conjcheck", "phi_example.json", "phi_swap.json", "identity2.json"], 1),
        (&["minpoly", "malformed_phi.json"], 3),
        (&["classify", "does_not_exist.json"], 3),
        (&["classify", "neil.json", "--bogus"], 3),
    ];
    for (args, code) in cases {
        assert_eq!(isopair(args).status.code(), Some(*code), "{args:?}");
    }
}

#[test]
fn malformed_input_points_at_field() {
    let o = isopair(&["minpoly", "malformed_phi.json"]);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["path"], "$.num[1][1].coeffs[0][0][1]");
}

#[test]
fn text_rendering() {
    let o = isopair(&["verify", "phi_example.json", "--identity", "annihilation", "--format", "text"]);
    assert_eq!(text_of(&o), "IDENTITY q(V)=0: exact (rational arithmetic)\n");
    let o = isopair(&["recover", "mu_two_branch.json", "--format", "text"]);
    assert!(text_of(&o).contains("q = w^2 - z^2"), "{}", text_of(&o));
}

#[test]
fn sample_writes_points_on_variety() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("points.csv");
    let o = isopair(&["sample", "neil.json", "--region", "torus", "--n", "64", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["re_z", "im_z", "re_w", "im_w"]);
    let rows: Vec<(f64, f64, f64, f64)> = rdr.deserialize().map(|r| r.unwrap()).collect();
    // two torus roots over each of the 64 circle points
    assert_eq!(rows.len(), 128);
    for (a, b, c, d) in rows {
        let (z, w) = (isopair::C64::new(a, b), isopair::C64::new(c, d));
        assert!((z.powu(3) - w.powu(2)).norm() < 1e-9);
    }
}

#[test]
fn output_is_reproducible_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let p = dir.path().join(name);
        let o = isopair(&["classify", "two_lines.json", "--seed", "7", "--threads", threads, "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(p).unwrap()
    };
    let a = run("a.json", "1");
    assert_eq!(a, run("b.json", "1"));
    assert_eq!(a, run("c.json", "3"));

    let gram = |threads: &str| isopair(&["gram", "mu_two_branch.json", "--maxdeg", "4", "4", "--threads", threads]).stdout;
    assert_eq!(gram("1"), gram("0"));
}
