use std::process::Command;

use ncinv::cli::{render_json, run, Outcome};
use serde_json::Value;

const CORPUS: &[&str] = &[
    "cf sqrt 2",
    "cf sqrt 67",
    "cf sqrt 94",
    "cf surd 1 2 5",
    "cf surd -3 4 13",
    "cf matrix 5,2,2,1",
    "cf matrix 5,1,4,1",
    "cf matrix 2,1,1,1",
    "similar 5,2,2,1 5,1,4,1",
    "similar 2,1,1,1 1,1,1,2",
    "handelman 5,2,2,1",
    "handelman 5,2,2,1 5,1,4,1",
    "handelman 4,3,5,4 4,15,1,4",
    "unit 2",
    "unit 5 --conductor 4",
    "unit 61",
    "muir 2,3 --m 3",
    "muir 3,1,2,1,6",
    "jp expand --dim 2 --theta sqrt(2) --steps 6",
    "jp expand --dim 2 --theta 3/2 --steps 5",
    "jp expand --dim 2 --theta (1+sqrt(5))/2 --steps 12",
    "jp expand --dim 3 --theta 2/5,3/7 --steps 20",
    "jp expand --dim 3 --theta sqrt(2),1/3 --steps 8",
    "jp periodic 2",
    "jp periodic 1",
    "jp periodic 1 2",
    "jp periodic 1,1",
    "ktheory ck 5,1,4,1",
    "ktheory ck 5,2,2,1",
    "ktheory ck 1,3,0,1",
    "ktheory ck 1,1,0;0,1,1;1,0,1",
    "ktheory bundle 5,2,2,1",
    "ktheory bundle 1,4,0,1",
    "complexity 3",
    "complexity 7",
    "complexity 67",
    "qcurve-table --max 100",
    "qcurve-table --max 3",
    "qcurve-table --max 2",
    "pi 2 7",
    "pi 5 4",
    "pi 3 1",
    "ellcount --weierstrass 1,0 -p 3",
    "ellcount --weierstrass 0,1 -p 5",
    "ellcount --legendre 2 -p 5",
    "ellcount --legendre-b 6 -p 7",
    "localize --b 6 --pmax 60",
    "localize --b 10 --pmax 60",
    "legendre-sum --lambda 2 --p 5",
    "legendre-sum --lambda 3 --p 7",
];

fn invoke(cmd: &str, extra: &[&str]) -> Outcome {
    let args: Vec<&str> = std::iter::once("ncinv")
        .chain(extra.iter().copied())
        .chain(cmd.split_whitespace())
        .collect();
    run(args)
}

#[test]
fn corpus_verifies() {
    for cmd in CORPUS {
        let out = invoke(cmd, &["--verify"]);
        assert_eq!(out.code, 0, "{cmd}: {}", out.stderr);
        assert!(!out.stdout.is_empty(), "{cmd}");
    }
}

#[test]
fn json_round_trips() {
    for cmd in CORPUS {
        let out = invoke(cmd, &["--json"]);
        assert_eq!(out.code, 0, "{cmd}: {}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{cmd}: {e}"));
        assert_eq!(v["schema_version"], 1, "{cmd}");
        assert!(
            v["command"].is_string() && v["input"].is_object() && v["notes"].is_array(),
            "{cmd}"
        );
        assert_eq!(render_json(&v), out.stdout, "{cmd}");
    }
}

#[test]
fn reference_outputs() {
    let out = invoke("ktheory ck 5,1,4,1", &[]);
    assert_eq!(out.stdout, "K0 = Z/4\nK1 = 0\n");
    let out = invoke("cf sqrt 7", &[]);
    assert!(
        out.stdout.starts_with("sqrt(7) = [2, ~1,1,1,4]\n"),
        "{}",
        out.stdout
    );
    let out = invoke("qcurve-table --max 3", &["--json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(
        v["result"]["rows"][0],
        serde_json::json!({ "p": 3, "rank": 1, "sqrt_cf": "[1, 1,2]", "complexity": 2 })
    );
    let out = invoke("qcurve-table --max 2", &["--json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["result"]["rows"], serde_json::json!([]));
}

#[test]
fn error_exit_codes() {
    let cases: &[(&str, i32, &str)] = &[
        ("cf sqrt 4", 2, "radicand is a perfect square"),
        ("cf sqrt abc", 2, "not an integer"),
        ("cf matrix 1,2,3", 2, "square"),
        ("cf matrix 1,1,0,1", 3, "precondition"),
        ("handelman 5,-2,2,1", 3, "negative"),
        ("similar 5,2,2,1 3,1,1,2", 3, "determinant"),
        ("unit 8", 3, "squarefree"),
        ("complexity 5", 3, "unsupported"),
        (
            "jp expand --dim 2 --theta -1/2 --steps 3",
            3,
            "not positive",
        ),
        (
            "jp expand --dim 3 --theta sqrt(2),sqrt(3) --steps 3",
            2,
            "mixed radicands",
        ),
        ("jp periodic 0", 3, "not primitive"),
        ("ellcount --weierstrass 0,0 -p 5", 3, "4a^3"),
        ("ellcount --legendre 2 -p 10007", 3, "exceeds"),
        ("legendre-sum --lambda 7 --p 7", 3, "singular"),
        ("localize --b 2 --pmax 10", 3, "at least 3"),
    ];
    for (cmd, code, needle) in cases {
        let out = invoke(cmd, &[]);
        assert_eq!(out.code, *code, "{cmd}: {}", out.stderr);
        assert!(
            out.stderr.to_lowercase().contains(needle),
            "{cmd}: {}",
            out.stderr
        );
        let json = invoke(cmd, &["--json"]);
        let v: Value = serde_json::from_str(&json.stdout).unwrap();
        assert_eq!(v["error"]["exit_code"], *code, "{cmd}");
    }
    assert_eq!(invoke("frobnicate", &[]).code, 2);
    assert_eq!(invoke("ellcount -p 5", &[]).code, 2);
}

#[test]
fn binary_honours_prime_bound_override() {
    let bin = env!("CARGO_BIN_EXE_ncinv");
    let args = ["ellcount", "--legendre", "2", "-p", "10007"];
    let denied = Command::new(bin)
        .args(args)
        .env_remove("NCG_MAX_PRIME")
        .output()
        .unwrap();
    assert_eq!(denied.status.code(), Some(3));
    let allowed = Command::new(bin)
        .args(args)
        .env("NCG_MAX_PRIME", "20000")
        .output()
        .unwrap();
    assert_eq!(
        allowed.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&allowed.stderr)
    );
    let lowered = Command::new(bin)
        .args(["ellcount", "--legendre", "2", "-p", "101"])
        .env("NCG_MAX_PRIME", "100")
        .output()
        .unwrap();
    assert_eq!(lowered.status.code(), Some(3));
    let junk = Command::new(bin)
        .args(args)
        .env("NCG_MAX_PRIME", "lots")
        .output()
        .unwrap();
    assert_eq!(junk.status.code(), Some(2));
}
