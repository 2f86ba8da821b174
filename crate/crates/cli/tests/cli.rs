use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}.problem"))
}

fn artin() -> Command {
    let mut cmd = Command::cargo_bin("artin").unwrap();
    cmd.env_remove("ARTIN_FIELD");
    cmd
}

fn json(cmd: &str, name: &str, extra: &[&str]) -> (Value, String) {
    let out = artin().arg(cmd).arg(fixture(name)).arg("--json").args(extra).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["exit_code"].as_i64(), out.status.code().map(i64::from), "{name}");
    (v, text)
}

const GOLDEN: &[(&str, &str, i32)] = &[
    ("elkik", "elkik_f", 0),
    ("elkik", "elkik_h", 0),
    ("elkik", "elkik_smooth", 0),
    ("colon", "colon", 0),
    ("groebner", "groebner", 0),
    ("prepare", "prepare", 0),
    ("divide", "divide", 0),
    ("refine", "refine", 0),
    ("solve", "solve_square", 0),
    ("solve", "solve_exact", 0),
    ("solve", "solve_gamma", 2),
    ("solve", "solve_cusp", 0),
    ("bounds", "bounds", 0),
    ("probe", "probe", 0),
    ("solve", "bad_equation", 3),
];

#[test]
fn golden_outputs() {
    for &(cmd, name, code) in GOLDEN {
        let want = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.out")))
            .unwrap();
        artin().arg(cmd).arg(fixture(name)).assert().code(code).stdout(want);
    }
}

#[test]
fn elkik_verdicts() {
    let (f, _) = json("elkik", "elkik_f", &[]);
    let (h, _) = json("elkik", "elkik_h", &[]);
    assert_eq!(f["outputs"]["verdicts"]["equal_to_compare"], true);
    assert_eq!(h["outputs"]["verdicts"]["equal_to_compare"], true);
    let z3 = |v: &Value| v["outputs"]["verdicts"]["members"][0]["in_ideal"].clone();
    assert_eq!(z3(&f), true);
    assert_eq!(z3(&h), false);
    assert_eq!(h["outputs"]["verdicts"]["members"][1]["in_radical"], true);
    let (s, _) = json("elkik", "elkik_smooth", &[]);
    assert_eq!(s["outputs"]["generators"], serde_json::json!(["1"]));
}

#[test]
fn solve_reports() {
    let (v, _) = json("solve", "solve_square", &[]);
    assert_eq!(v["status"], "certified");
    let cert = &v["outputs"]["certificate"];
    assert_eq!(cert["refined"][0]["terms"], serde_json::json!([[[1, 0], "1"]]));
    assert!(cert["distance_orders"][0].as_u64().unwrap() >= 3);

    let (v, _) = json("solve", "solve_exact", &[]);
    assert_eq!(v["outputs"]["certificate"]["trace"].as_array().unwrap().len(), 1);

    let (v, _) = json("solve", "solve_gamma", &[]);
    assert_eq!(v["status"], "hypothesis-violated");
    assert!(v["error"]["message"].as_str().unwrap().contains("insufficient residual order"));
    assert_eq!(v["error"]["measured_order"], 5);
}

#[test]
fn flags_override_the_file() {
    let (v, _) = json("solve", "solve_square", &["--enforce-gamma"]);
    assert_eq!(v["exit_code"], 2);
    let (v, _) = json("solve", "solve_square", &["--precision", "16", "--target-order", "2", "--seed", "7"]);
    assert_eq!(v["outputs"]["certificate"]["precision"], 16);
    assert_eq!(v["outputs"]["certificate"]["target_order"], 2);
    assert_eq!(v["inputs"]["seed"], serde_json::json!(["7"]));
    artin().args(["solve", "--strategy", "bisection"]).arg(fixture("solve_square")).assert().code(1).stdout("");
}

#[test]
fn bounds_print_full_decimals() {
    let (v, _) = json("bounds", "bounds", &[]);
    assert_eq!(v["outputs"]["bounds"]["elkik_degree_bound"], "11718750003");
    let (v, _) = json("bounds", "bounds_huge", &[]);
    let p = v["outputs"]["bounds"]["power_exponent"].as_str().unwrap();
    assert!(p.len() > 300 && p.bytes().all(|b| b.is_ascii_digit()), "{p}");
    assert_eq!(v["outputs"]["bounds"]["beta_estimate"], "> 2^67108864");
}

#[test]
fn probe_table_is_monotone() {
    let (v, _) = json("probe", "probe", &[]);
    let rows = v["outputs"]["probe"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    let orders: Vec<u64> = rows.iter().step_by(2).map(|r| r["residual_order"].as_u64().unwrap()).collect();
    assert!(orders.windows(2).all(|w| w[0] < w[1]), "{orders:?}");
    assert!(rows.iter().all(|r| r["success"] == true && r["defect"] == false));
    assert_eq!(v["outputs"]["probe"]["k1"], "1/2");
}

#[test]
fn exit_codes() {
    artin().arg("solve").arg(fixture("solve_square")).assert().code(0);
    artin().arg("solve").arg(fixture("solve_gamma")).assert().code(2);
    artin().arg("solve").arg(fixture("bad_key")).assert().code(3);
    artin().arg("solve").arg(fixture("bad_equation")).assert().code(3);
    artin().arg("elkik").arg(fixture("capacity")).assert().code(4);
    artin().arg("solve").arg(fixture("missing")).assert().code(1);
}

#[test]
fn parse_errors_carry_positions() {
    let (v, _) = json("solve", "bad_key", &[]);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!((v["error"]["line"].clone(), v["error"]["column"].clone()), (3.into(), 1.into()));
}

#[test]
fn reports_round_trip() {
    let all = GOLDEN.iter().copied().chain([("bounds", "bounds_huge", 0), ("elkik", "capacity", 4), ("solve", "bad_key", 3)]);
    for (cmd, name, _) in all {
        let (_, text) = json(cmd, name, &[]);
        artin().args(["check", "-"]).write_stdin(text).assert().code(0).stdout("report valid\n");
    }
}

#[test]
fn tampered_reports_are_rejected() {
    let (mut v, _) = json("solve", "solve_square", &[]);
    v["outputs"]["certificate"]["refined"][0]["terms"] = serde_json::json!([[[1, 0], "1"], [[3, 0], "1"]]);
    artin().args(["check", "-"]).write_stdin(v.to_string()).assert().code(1);

    let (mut v, _) = json("prepare", "prepare", &[]);
    v["outputs"]["unit"]["terms"][1][1] = "2".into();
    artin().args(["check", "-"]).write_stdin(v.to_string()).assert().code(1);

    let (mut v, _) = json("elkik", "elkik_h", &[]);
    v["outputs"]["verdicts"]["members"][0]["in_ideal"] = true.into();
    artin().args(["check", "-"]).write_stdin(v.to_string()).assert().code(1);

    let (mut v, _) = json("bounds", "bounds", &[]);
    v["outputs"]["bounds"]["elkik_degree_bound"] = "11718750004".into();
    artin().args(["check", "-"]).write_stdin(v.to_string()).assert().code(1);
}

#[test]
fn output_is_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string_pretty(&v).unwrap()
    };
    for (cmd, name) in [("elkik", "elkik_h"), ("solve", "solve_cusp"), ("probe", "probe"), ("divide", "divide")] {
        let (a, _) = json(cmd, name, &[]);
        let (b, _) = json(cmd, name, &[]);
        assert_eq!(strip(a), strip(b), "{name}");
    }
}

#[test]
fn field_from_the_environment() {
    let src = "variables: x, y\nideal: 2*x + y, x^2\n";
    let dir = std::env::temp_dir().join(format!("artin-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gf2.problem");
    std::fs::write(&path, src).unwrap();
    artin().env("ARTIN_FIELD", "GF(2)").arg("groebner").arg(&path).assert().code(0).stdout("reduced Groebner basis (2):\n  x^2\n  y\n");
    artin().arg("groebner").arg(&path).assert().code(0).stdout("reduced Groebner basis (2):\n  y^2\n  x + 1/2*y\n");
    artin().env("ARTIN_FIELD", "GF(4)").arg("groebner").arg(&path).assert().code(1);
    std::fs::remove_dir_all(&dir).unwrap();
}
