use std::path::Path;
use std::process::{Command, Output, Stdio};

use desksnark::CUBIC_SOURCE;

const BIN: &str = env!("CARGO_BIN_EXE_desksnark");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().unwrap()
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    let out = run(dir, args);
    out.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// compile + witness + setup + prove for the cubic at `x`.
fn proved_cubic(dir: &Path, x: i64) {
    std::fs::write(dir.join("cubic.src"), CUBIC_SOURCE).unwrap();
    let input = format!("x={x}");
    for args in [
        &["compile", "cubic.src", "-o", "circuit.json"][..],
        &["witness", "circuit.json", "--input", &input, "-o", "w.json"],
        &["setup", "circuit.json", "--seed", "5", "-o", "pk.json", "vk.json"],
        &["prove", "pk.json", "circuit.json", "w.json", "-o", "proof.json"],
    ] {
        assert_eq!(code(dir, args), 0, "{args:?}");
    }
}

#[test]
fn pipeline_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    proved_cubic(d, 3);
    assert_eq!(code(d, &["verify", "vk.json", "proof.json", "--public", "out=35"]), 0);
    assert_eq!(code(d, &["verify", "vk.json", "proof.json", "--public", "out=36"]), 1);
    // usage errors: missing or unknown public inputs, missing files
    assert_eq!(code(d, &["verify", "vk.json", "proof.json"]), 2);
    assert_eq!(code(d, &["verify", "vk.json", "proof.json", "--public", "y=27"]), 2);
    assert_eq!(code(d, &["verify", "vk.json", "nope.json", "--public", "out=35"]), 2);

    std::fs::write(d.join("bad.src"), "def f(x):\n    return x +\n").unwrap();
    assert_eq!(code(d, &["compile", "bad.src", "-o", "bad.json"]), 2);
    assert_eq!(code(d, &["compile", "missing.src", "-o", "bad.json"]), 2);
    assert_eq!(code(d, &["frobnicate"]), 2);
}

#[test]
fn unsatisfied_witness_is_a_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    proved_cubic(d, 3);
    let text = std::fs::read_to_string(d.join("w.json")).unwrap();
    let mut w: serde_json::Value = serde_json::from_str(&text).unwrap();
    w["t"][4] = "28".into();
    std::fs::write(d.join("bad-w.json"), w.to_string()).unwrap();
    assert_eq!(code(d, &["qap", "circuit.json", "-o", "q.json", "--witness", "w.json"]), 0);
    assert_eq!(code(d, &["qap", "circuit.json", "-o", "q.json", "--witness", "bad-w.json"]), 1);
    assert_eq!(code(d, &["prove", "pk.json", "circuit.json", "bad-w.json", "-o", "p.json"]), 1);
    assert!(!d.join("p.json").exists());
}

#[test]
fn proof_for_another_circuit_is_rejected() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    proved_cubic(a.path(), 3);
    std::fs::write(b.path().join("sq.src"), "def f(x):\n    return x**2\n").unwrap();
    for args in [
        &["compile", "sq.src", "-o", "circuit.json"][..],
        &["setup", "circuit.json", "--seed", "5", "-o", "pk.json", "vk.json"],
    ] {
        assert_eq!(code(b.path(), args), 0);
    }
    let proof = a.path().join("proof.json");
    let args = ["verify", "vk.json", proof.to_str().unwrap(), "--public", "out=35"];
    assert_eq!(code(b.path(), &args), 1);
}

#[test]
fn rational_mode_is_limited_to_inspection() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("cubic.src"), CUBIC_SOURCE).unwrap();
    assert_eq!(code(d, &["compile", "cubic.src", "-o", "c.json", "--rational"]), 0);
    assert_eq!(code(d, &["witness", "c.json", "--input", "x=3", "-o", "w.json"]), 0);
    assert_eq!(code(d, &["qap", "c.json", "-o", "q.json", "--witness", "w.json"]), 0);
    let q: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("q.json")).unwrap()).unwrap();
    assert_eq!(q["z"], serde_json::json!(["24/1", "-50/1", "35/1", "-10/1", "1/1"]));
    assert_eq!(code(d, &["setup", "c.json", "-o", "pk.json", "vk.json"]), 2);
    assert!(!d.join("pk.json").exists());
}

#[test]
fn json_mode_prints_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    proved_cubic(d, 3);
    let out = run(d, &["--json", "verify", "vk.json", "proof.json", "--public", "out=35"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["accepted"], true);

    let out = run(d, &["--json", "witness", "circuit.json", "--input", "x=4", "-o", "w4.json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["out"], "73");
}

#[test]
fn worked_example_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--show-paper-example"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for needle in [
        "sym1 = x * x",
        "out = 5 + sym2",
        "witness at x = 3: [1, 3, 35, 9, 27, 30]",
        "[-3.666, 17.055, -3.444]",
    ] {
        assert!(text.contains(needle), "missing {needle:?}");
    }
}

#[test]
fn ledger_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(d, &["show"]), 2, "no ledger yet");
    assert_eq!(code(d, &["init", "--seed", "3"]), 0);
    assert_eq!(code(d, &["init", "--seed", "3"]), 2, "refuses to overwrite");
    assert_eq!(code(d, &["keygen", "--seed", "1", "-o", "alice.json"]), 0);
    assert_eq!(code(d, &["keygen", "--seed", "2", "-o", "bob.json"]), 0);
    assert_eq!(code(d, &["mint", "--addr", "alice.json", "--value", "-1"]), 2);
    assert_eq!(code(d, &["mint", "--addr", "alice.json", "--value", "99999999999"]), 2);
    assert_eq!(code(d, &["mint", "--addr", "alice.pub.json", "--value", "2"]), 2, "needs secret keys");
    assert_eq!(code(d, &["mint", "--addr", "alice.json", "--value", "2"]), 0);
    assert_eq!(code(d, &["mint", "--addr", "alice.json", "--value", "3"]), 0);

    let pour = |to1: &str, out: &str| {
        code(
            d,
            &[
                "pour", "--old", "coin-0.json", "coin-1.json", "--addr", "alice.json", "--to", to1, "alice.pub.json:1",
                "-o", out,
            ],
        )
    };
    assert_eq!(pour("bob.pub.json:5", "unbalanced.json"), 1);
    assert_eq!(pour("bob.pub.json", "x.json"), 2);
    assert_eq!(pour("bob.pub.json:4", "tx.json"), 0);
    assert_eq!(code(d, &["verify-tx", "tx.json"]), 0);
    assert_eq!(code(d, &["verify-tx", "tx.json"]), 1, "replay");
    assert_eq!(pour("bob.pub.json:4", "again.json"), 1, "inputs already spent");

    let out = run(d, &["--json", "receive", "--addr", "bob.json", "-o", "inbox"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["coins"].as_array().unwrap().len(), 1);
    assert_eq!(v["coins"][0]["value"], "4");
    assert!(d.join("inbox/received-2.json").exists());

    let out = run(d, &["--json", "show"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["leaves"].as_u64(), v["serials"].as_u64(), v["pours"].as_u64()), (Some(4), Some(2), Some(1)));
}

#[test]
fn concurrent_mints_are_serialized() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(d, &["init", "--depth", "3"]), 0);
    assert_eq!(code(d, &["keygen", "--seed", "1", "-o", "a.json"]), 0);
    let children: Vec<_> = (0..4)
        .map(|i| {
            Command::new(BIN)
                .current_dir(d)
                .stdout(Stdio::null())
                .args(["mint", "--addr", "a.json", "--value", &i.to_string(), "-o", &format!("c{i}.json")])
                .spawn()
                .unwrap()
        })
        .collect();
    for mut c in children {
        assert!(c.wait().unwrap().success());
    }
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(d, &["--json", "show"]))).unwrap();
    assert_eq!(v["leaves"], 4, "a mint was lost");
}

#[test]
fn demo_reports_each_phase() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["demo", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for phase in ["[setup]", "[keygen]", "[mint]", "[pour]", "[verify]", "[receive]", "[double-spend]"] {
        assert!(text.contains(phase), "missing phase {phase}");
    }
    assert!(text.contains("double-spend rejected"));
    assert!(!text.contains("FAILED"));
}
