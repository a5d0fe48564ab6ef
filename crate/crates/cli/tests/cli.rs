//! End-to-end runs of the `spn` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn spn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spn"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("spawn spn")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "spn failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn pi_parity_example() {
    let v = json(&spn(&[
        "parity",
        "--p",
        "2",
        "--r",
        "1",
        "--m",
        "1",
        "--n",
        "2",
        "--shifts",
        "1",
        "--component",
        "pi",
    ]));
    assert_eq!(v["parity"], "odd");
    assert_eq!(v["rule"], "Lemma 2isp");
}

#[test]
fn parity_oracle_agrees() {
    let v = json(&spn(&[
        "parity",
        "--p",
        "3",
        "--m",
        "2",
        "--n",
        "2",
        "--mix",
        "[[1,1],[0,1]]",
        "--oracle",
    ]));
    for c in v["components"].as_array().unwrap() {
        assert_eq!(c["oracle_agrees"], true, "{c}");
    }
}

#[test]
fn worked_example_orbit() {
    let v = json(&spn(&[
        "invariants",
        "--config",
        "configs/example_gf7.json",
        "--witness",
    ]));
    assert_eq!(v["orbit_size"], 48);
    assert_eq!(v["irreducible"], false);
    assert_eq!(v["gcd_condition"], true);
    let span = v["span_dimension"].as_u64().unwrap();
    assert!(span > 1 && span < 16);
    assert_eq!(v["verdict"]["witness_invariant"], true);
}

#[test]
fn encrypt_decrypt_round_trip() {
    let enc = json(&spn(&[
        "encrypt",
        "--config",
        "configs/example_gf7.json",
        "--random-state",
        "9",
    ]));
    let ct = serde_json::to_string(&enc["output"]).unwrap();
    let dec = json(&spn(&[
        "decrypt",
        "--config",
        "configs/example_gf7.json",
        "--state",
        &ct,
    ]));
    assert_eq!(dec["output"], enc["input"]);
    assert_ne!(enc["output"], enc["input"]);
}

#[test]
fn closure_witness_for_gf3() {
    let v = json(&spn(&[
        "closure",
        "--config",
        "configs/gf3_nonclosure.json",
        "--round",
    ]));
    assert_eq!(v["verdict"]["verdict"], "NOT-A-GROUP");
    assert_eq!(v["witness"]["composition_in_family"], false);
    assert_eq!(v["witness"]["composition_parity"], "even");
}

#[test]
fn group_order_small() {
    let v = json(&spn(&[
        "group", "order", "--p", "3", "--m", "1", "--n", "2", "--keys", "4", "--seed", "1",
    ]));
    assert_eq!(v["degree"], "9");
    assert_eq!(v["order"], "9");
    let v = json(&spn(&[
        "group", "order", "--p", "3", "--m", "1", "--n", "2", "--keys", "4", "--s", "2",
    ]));
    assert_eq!(v["containment_holds"], true);
    assert_eq!(v["normality_failures"], 0);
}

#[test]
fn field_description() {
    let v = json(&spn(&[
        "field",
        "--p",
        "7",
        "--r",
        "2",
        "--modulus",
        "3,1,1",
    ]));
    assert_eq!(v["order"], 49);
    assert_eq!(v["modulus"], serde_json::json!([3, 1, 1]));
}

#[test]
fn exit_codes() {
    // reducible modulus
    assert_eq!(
        spn(&["field", "--p", "2", "--r", "2", "--modulus", "1,0,1"])
            .status
            .code(),
        Some(2)
    );
    // non-prime characteristic
    assert_eq!(spn(&["field", "--p", "4"]).status.code(), Some(2));
    // oracle on 2^128 states
    let out = spn(&[
        "parity",
        "--config",
        "configs/aes_shaped.json",
        "--component",
        "pi",
        "--oracle",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // the default grid sweep passes
    let out = spn(&[
        "verify",
        "--grid",
        "configs/sweep_grid.json",
        "--lemma",
        "2isp",
        "--workers",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn report_is_deterministic() {
    let args = [
        "report",
        "--config",
        "configs/example_gf7.json",
        "--seed",
        "3",
    ];
    let a = spn(&args);
    let b = spn(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["tool"]["name"], "spn");
    assert_eq!(v["reports"]["invariants"]["orbit_size"], 48);
}

fn validator(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schemas").join(name)).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{what}: {errors:?}");
}

#[test]
fn configs_match_schemas() {
    let cfg = validator("cipher_config.schema.json");
    for name in ["example_gf7.json", "gf3_nonclosure.json", "aes_shaped.json"] {
        let text = std::fs::read_to_string(root().join("configs").join(name)).unwrap();
        assert_valid(&cfg, &serde_json::from_str(&text).unwrap(), name);
    }
    let bad = serde_json::json!({ "p": 3, "m": 1, "n": 1, "sbox": { "A": 1, "B": 0 }, "shifts": [0], "mix": [[1]], "extra": 1 });
    assert!(!cfg.is_valid(&bad));

    let grid = validator("grid.schema.json");
    let text = std::fs::read_to_string(root().join("configs/sweep_grid.json")).unwrap();
    assert_valid(
        &grid,
        &serde_json::from_str(&text).unwrap(),
        "sweep_grid.json",
    );

    let parity = validator("parity_report.schema.json");
    let v = json(&spn(&[
        "parity",
        "--p",
        "2",
        "--m",
        "1",
        "--n",
        "2",
        "--component",
        "lambda",
        "--oracle",
    ]));
    assert_valid(&parity, &v, "parity output");
}
