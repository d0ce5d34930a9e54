use std::path::PathBuf;
use std::process::{Command, Output};

use aiet::Aiet;
use serde_json::Value;

const MAPS: &str = "\
# test corpus
map R = rotation(1/3)
map S = rotation(sqrt(2) - 1)
map H = rotation(1/7)
map A = rrot(0, 1/2, sqrt(2) - 1)
map Bq = rrot(1/2, 1, sqrt(2)/8)
map E = iet(3 1 4 2; 1/5, 1/3, 1/6, 3/10)
map T = conj(compose(A, Bq), E)
map B = bmap(2, 1/3)
map P3 = compose(rrot(0, 1/2, 1/6), rrot(1/2, 1, sqrt(2)/8))
map U = rotation(1/4)
map V = rotation(1/3)
map F =
  0   | 2   | 0
  1/4 | 2/3 | 1/3
end
group G = F
group GA = S, H
";

fn write(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aiet-lab-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn corpus() -> PathBuf {
    write("maps.txt", MAPS)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aiet-lab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn analyze_rotation() {
    let path = corpus();
    let out = run(&["analyze", path.to_str().unwrap(), "R"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    for key in ["command", "inputs", "results", "config", "schema_version", "timing_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["results"]["bp0"], serde_json::json!(["0", "2/3"]));
    assert_eq!(r["results"]["growth"]["class"]["kind"], "bounded");
    // maps in reports re-validate
    let f: Aiet = serde_json::from_value(r["inputs"]["definition"].clone()).unwrap();
    assert_eq!(f, Aiet::rotation(&aiet::Scalar::from_ratio(1, 3)).unwrap());
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let path = corpus();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let a = json(&run(&["normalize", path.to_str().unwrap(), "T"]));
    let b = json(&run(&["normalize", path.to_str().unwrap(), "T"]));
    assert_eq!(strip(a.clone()), strip(b));
    let text = serde_json::to_string(&a).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), a);
}

#[test]
fn errors_have_distinct_exit_codes() {
    let path = corpus();
    let out = run(&["analyze", path.to_str().unwrap(), "Nope"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("R, S, H"));

    let bad = write("bad.txt", "map R = rotation(1/3)\nmap Z = rotation(1/0)\n");
    let out = run(&["analyze", bad.to_str().unwrap(), "R"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let invalid = write("invalid.txt", "map X =\n0 | 1 | 1/2\n1/2 | 1 | 0\nend\n");
    let out = run(&["analyze", invalid.to_str().unwrap(), "X"]);
    assert_eq!(code(&out), 3);

    let unknown = write("unknown.txt", "map Y = compose(Q, Q)\n");
    let out = run(&["analyze", unknown.to_str().unwrap(), "Y"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 17"));

    assert_eq!(code(&run(&["bogus"])), 4);
    assert_eq!(code(&run(&["analyze", path.to_str().unwrap(), "R", "--max-period", "x"])), 4);
}

#[test]
fn inconclusive_exit_code() {
    let path = corpus();
    let out = run(&["analyze", path.to_str().unwrap(), "P3", "--max-period", "4"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["results"]["periodic"]["status"], "inconclusive");
}

#[test]
fn normalize_recovers_components() {
    let path = corpus();
    let out = run(&["normalize", path.to_str().unwrap(), "T"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    let summary = r["results"]["summary"].as_array().unwrap();
    assert_eq!(summary.len(), 2);
    assert!(summary.iter().all(|c| c["kind"] == "rotation" && c["infinite_order"] == true));
}

#[test]
fn certify_cascade() {
    let path = corpus();
    let p = path.to_str().unwrap();
    let r = json(&run(&["certify", p, "F", "G"]));
    let cert = &r["results"]["verdict"]["certificate"];
    assert_eq!(cert["kind"], "semi_hyperbolic");
    assert_eq!(cert["coefficient"], 1.0);

    let r = json(&run(&["certify", p, "R"]));
    assert_eq!(r["results"]["verdict"]["verdict"], "finite_order");
    assert_eq!(r["results"]["verdict"]["order"], 3);

    let r = json(&run(&["certify", p, "B", "--drift-n", "20000"]));
    assert_eq!(r["results"]["verdict"]["certificate"]["kind"], "exponent_drift");

    let r = json(&run(&["certify", p, "S", "GA"]));
    assert_eq!(r["results"]["verdict"], "normal_form_rotations");
}

#[test]
fn group_subcommands() {
    let path = corpus();
    let p = path.to_str().unwrap();
    assert_eq!(json(&run(&["group", p, "bs-check", "S", "H", "1", "1"]))["results"]["relation_holds"], true);
    assert_eq!(json(&run(&["group", p, "bs-check", "S", "H", "1", "2"]))["results"]["relation_holds"], false);
    assert_eq!(json(&run(&["group", p, "bs-check", "S", "H", "-1", "-1"]))["results"]["relation_holds"], true);

    let r = json(&run(&["group", p, "bs-obstruct", "S", "H", "1", "1"]));
    assert_eq!(r["results"]["report"]["contradiction"], false);
    assert_eq!(r["results"]["report"]["s"], 1);

    let r = json(&run(&["group", p, "nilp-check", "U", "V", "2", "3"]));
    assert_eq!(r["results"]["report"]["identity_holds"], true);

    let r = json(&run(&["group", p, "word", "GA", "S H^-1 S^-1"]));
    let w: Aiet = serde_json::from_value(r["results"]["map"].clone()).unwrap();
    let want = Aiet::rotation(&aiet::Scalar::from_ratio(6, 7)).unwrap();
    assert_eq!(w, want);

    let r = json(&run(&["group", p, "ball", "G", "3", "F", "R"]));
    let lengths = r["results"]["lengths"].as_array().unwrap();
    assert_eq!(lengths[0]["length"], 1);
    assert_eq!(lengths[1]["length"], Value::Null);

    assert_eq!(code(&run(&["group", p, "word", "GA", "Q"])), 4);
}

#[test]
fn text_format() {
    let path = corpus();
    let out = run(&["analyze", path.to_str().unwrap(), "R", "--format", "text"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("analyze"));
    assert!(text.contains("bp0:\n    - 0\n    - 2/3"));
}
