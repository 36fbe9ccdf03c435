//! End-to-end tests of the `baccara` binary: exit codes, golden-file
//! table output, JSON schema stability, and the verify round trip.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn baccara(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baccara"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json stdout")
}

#[test]
fn solve_a1_value_json() {
    let out = baccara(&["solve", "--model", "A1", "--format", "json"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["value"]["num"], "-679568");
    assert_eq!(doc["value"]["den"], "53094899");
    assert_eq!(doc["banker"]["q"]["num"], "859");
    assert_eq!(doc["banker"]["q"]["den"], "2288");
    assert_eq!(doc["certificate"]["player_ok"], true);
    assert_eq!(doc["certificate"]["banker_ok"], true);
}

#[test]
fn solve_b3_d6_value_and_kernel_json() {
    let out = baccara(&[
        "solve", "--model", "B3", "--decks", "6", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["value"]["num"], "-73356216203119");
    assert_eq!(doc["value"]["den"], "5712649844821920");
    assert_eq!(doc["kernel"]["column_decimals"][0], 254_913);
    assert_eq!(doc["kernel"]["column_decimals"][1], 254_945);
    assert_eq!(doc["kernel"]["columns"][0], "111110001111000001");
    assert_eq!(doc["kernel"]["columns"][1], "111110001111100001");
    assert_eq!(doc["kernel"]["rows"][0], 19);
    assert_eq!(doc["kernel"]["rows"][1], 27);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["solve", "--model", "B1", "--decks", "0"][..],
        &["solve", "--model", "B1"][..],
        &["solve", "--model", "A1", "--decks", "3"][..],
        &["solve", "--model", "C9", "--decks", "1"][..],
        &["enumerate", "--model", "B3"][..],
        &["simulate", "--model", "A1", "--mask", "7", "--trials", "10"][..],
    ] {
        let out = baccara(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn deck_cap_is_enforced_and_overridable() {
    let out = baccara(&["classify", "--model", "B1", "--decks", "300"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_baccara"))
        .args(["classify", "--model", "B1", "--decks", "300"])
        .env("BACCARA_MAX_DECKS", "400")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn golden_classify_b3_d6() {
    let out = baccara(&["classify", "--model", "B3", "--decks", "6"]);
    assert!(out.status.success());
    let expected = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden/classify_b3_d6.md"),
    )
    .unwrap();
    assert_eq!(stdout(&out), expected);
}

#[test]
fn golden_solve_b3_d6() {
    let out = baccara(&["solve", "--model", "B3", "--decks", "6"]);
    assert!(out.status.success());
    let expected = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden/solve_b3_d6.md"),
    )
    .unwrap();
    assert_eq!(stdout(&out), expected);
}

#[test]
fn classify_a3_matches_deep_shoe() {
    // The with-replacement grid equals the 11-deck shoe grid.
    let a3 = baccara(&["classify", "--model", "A3", "--format", "csv"]);
    let b3 = baccara(&[
        "classify", "--model", "B3", "--decks", "11", "--format", "csv",
    ]);
    assert!(a3.status.success() && b3.status.success());
    assert_eq!(stdout(&a3), stdout(&b3));
}

#[test]
fn enumerate_counts() {
    let a3 = json(&baccara(&[
        "enumerate", "--model", "A3", "--format", "json",
    ]));
    assert_eq!(a3["count"], 980);
    assert_eq!(a3["player_pairs"].as_array().unwrap().len(), 14);
    assert_eq!(a3["banker_pairs"].as_array().unwrap().len(), 70);
    let a2 = json(&baccara(&[
        "enumerate", "--model", "A2", "--format", "json",
    ]));
    assert_eq!(a2["count"], 70);
}

#[test]
fn verify_round_trip_and_tamper() {
    let solved = baccara(&[
        "solve", "--model", "B1", "--decks", "2", "--format", "json",
    ]);
    assert!(solved.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solution.json");
    std::fs::write(&path, &solved.stdout).unwrap();

    let verify = baccara(&[
        "verify",
        "--model",
        "B1",
        "--decks",
        "2",
        "--format",
        "json",
        path.to_str().unwrap(),
    ]);
    assert!(
        verify.status.success(),
        "{}",
        String::from_utf8_lossy(&verify.stderr)
    );
    let vdoc = json(&verify);
    assert_eq!(vdoc["passed"], true);
    assert_eq!(vdoc["saddle_check"], true);
    // Identical margins to the solve-time certificate.
    let sdoc = json(&solved);
    assert_eq!(
        vdoc["certificate"]["player_worst_margin"],
        sdoc["certificate"]["player_worst_margin"]
    );
    assert_eq!(
        vdoc["certificate"]["banker_worst_margin"],
        sdoc["certificate"]["banker_worst_margin"]
    );

    // Tampering with the value must fail verification with exit 3.
    let mut doc: serde_json::Value = serde_json::from_slice(&solved.stdout).unwrap();
    doc["value"]["num"] = serde_json::Value::String("-1".into());
    doc["value"]["den"] = serde_json::Value::String("100".into());
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_vec(&doc).unwrap()).unwrap();
    let out = baccara(&[
        "verify",
        "--model",
        "B1",
        "--decks",
        "2",
        tampered.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // A mangled file is a usage error, not a verification failure.
    let mangled = dir.path().join("mangled.json");
    let mut f = std::fs::File::create(&mangled).unwrap();
    f.write_all(&solved.stdout[..200]).unwrap();
    drop(f);
    let out = baccara(&[
        "verify",
        "--model",
        "B1",
        "--decks",
        "2",
        mangled.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_builtin_b3_d9() {
    let out = baccara(&["verify", "--model", "B3", "--decks", "9"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("VERIFIED"));
}

#[test]
fn simulate_solved_model() {
    let out = baccara(&[
        "simulate", "--model", "A1", "--trials", "200000", "--seed", "9",
        "--format", "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    assert_eq!(doc["trials"], 200_000);
    assert_eq!(doc["rng"], "chacha8");
    let z = doc["z"].as_f64().unwrap();
    assert!(z.abs() <= 4.0, "z = {z}");
}

#[test]
fn simulate_with_table_file() {
    // A complete hand-level table: draw exactly on totals 0..=3.
    let mut points = Vec::new();
    for a in 0..=9u8 {
        for b in a..=9u8 {
            if (a + b) % 10 > 7 {
                continue;
            }
            for k in 0..=10u8 {
                let third = if k <= 9 {
                    serde_json::json!(k)
                } else {
                    serde_json::json!("stand")
                };
                points.push(serde_json::json!({
                    "hand": [a, b],
                    "third": third,
                    "move": if (a + b) % 10 <= 3 { "D" } else { "S" },
                }));
            }
        }
    }
    let table = serde_json::json!({ "points": points });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    std::fs::write(&path, serde_json::to_vec(&table).unwrap()).unwrap();
    let out = baccara(&[
        "simulate",
        "--model",
        "B3",
        "--decks",
        "1",
        "--mask",
        "19",
        "--table-file",
        path.to_str().unwrap(),
        "--trials",
        "100000",
        "--seed",
        "4",
        "--format",
        "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    let z = doc["z"].as_f64().unwrap();
    assert!(z.abs() <= 4.0, "z = {z}");

    // An incomplete table is rejected as usage error.
    let partial = serde_json::json!({ "points": [
        { "hand": [0, 3], "third": 9, "move": "D" }
    ]});
    let path2 = dir.path().join("partial.json");
    std::fs::write(&path2, serde_json::to_vec(&partial).unwrap()).unwrap();
    let out = baccara(&[
        "simulate",
        "--model",
        "B3",
        "--decks",
        "1",
        "--table-file",
        path2.to_str().unwrap(),
        "--trials",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_outputs_are_lossless() {
    let out = baccara(&[
        "solve", "--model", "B1", "--decks", "1", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("record,a,b,c,d\n"));
    // Exact rationals, not floats.
    assert!(text.contains("value,"));
    assert!(!text.contains("0.0"));
    let classify = baccara(&[
        "classify", "--model", "B1", "--decks", "1", "--format", "csv",
    ]);
    let ctext = stdout(&classify);
    assert!(ctext.starts_with("total,hand,third,mark\n"));
    assert_eq!(ctext.lines().count(), 89); // header + 88 points
}
