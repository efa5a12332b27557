use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spg(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spg"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPG_BUDGET")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn generate(dir: &Path, args: &[&str]) {
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", "g"]);
    let out = spg(&full, dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generate_asym_has_five_items() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &["ex_asym", "--p", "3", "--q", "2"]);
    let inst: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("g/instance.json")).unwrap()).unwrap();
    assert_eq!(inst["items"].as_array().unwrap().len(), 5);
    assert!(dir.path().join("g/opt.json").exists());
    assert!(dir.path().join("g/bad.json").exists());
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["generate", "random_explicit", "--n", "2", "--items", "4", "--seed", "7"];
    let a = spg(&args, dir.path());
    let b = spg(&args, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.ends_with(b"\n"));
}

#[test]
fn generate_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = spg(&["generate", "ex_asym", "--p", "1", "--q", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = spg(&["generate", "ex_sym", "--p", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &["ex_trivial"]);
    let base = ["verify", "--instance", "g/instance.json", "--profile", "g/bad.json"];

    let nash = spg(&[&base[..], &["--concept", "nash", "--alpha", "1"]].concat(), dir.path());
    assert_eq!(nash.status.code(), Some(0));
    assert_eq!(json(&nash)["verdict"], Value::Bool(true));

    let coll = spg(&[&base[..], &["--concept", "collusion", "--k", "2"]].concat(), dir.path());
    assert_eq!(coll.status.code(), Some(1));
    let doc = json(&coll);
    assert_eq!(doc["verdict"], Value::Bool(false));
    assert!(doc["witness"].is_object());

    let bad_alpha = spg(&[&base[..], &["--concept", "nash", "--alpha", "3/0"]].concat(), dir.path());
    assert_eq!(bad_alpha.status.code(), Some(2));

    let no_order = spg(&[&base[..], &["--concept", "spe"]].concat(), dir.path());
    assert_eq!(no_order.status.code(), Some(2));
    let spe = spg(&[&base[..], &["--concept", "spe", "--order", "1,2"]].concat(), dir.path());
    assert_eq!(spe.status.code(), Some(0));

    let unknown = spg(&[&base[..], &["--concept", "strong"]].concat(), dir.path());
    assert_eq!(unknown.status.code(), Some(2));

    let missing = spg(&["verify", "--instance", "nope.json", "--profile", "g/bad.json", "--concept", "nash"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn poa_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (gen, alpha, expected) in [
        (vec!["ex_trivial"], "1", "2/1"),
        (vec!["ex_asym", "--p", "3", "--q", "2"], "3/2", "5/2"),
        (vec!["ex_sym", "--p", "3", "--q", "2", "--n", "3"], "3/2", "13/6"),
    ] {
        generate(dir.path(), &gen);
        let out = spg(
            &["poa", "--instance", "g/instance.json", "--concept", "nash", "--alpha", alpha],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        let doc = json(&out);
        assert_eq!(doc["ratio"], expected, "{gen:?}");
        assert_eq!(doc["bound_satisfied"], Value::Bool(true));
        assert!(doc["ratio_decimal"].is_number());
    }
}

#[test]
fn poa_greedy_sequential() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &["ex_seq", "--n", "5"]);
    let out = spg(&["poa", "--instance", "g/instance.json", "--concept", "spe-greedy"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["ratio"], "25/18");
    assert_eq!(doc["bound"]["kind"], "interval");
    assert_eq!(doc["bound_satisfied"], Value::Bool(true));

    let bad = spg(
        &["poa", "--instance", "g/instance.json", "--concept", "spe-greedy", "--selector", "random"],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &["ex_sym", "--p", "3", "--q", "2", "--n", "3"]);
    let args = ["poa", "--instance", "g/instance.json", "--concept", "nash", "--alpha", "3/2"];
    let out = spg(&[&args[..], &["--budget", "10"]].concat(), dir.path());
    assert_eq!(out.status.code(), Some(3));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["limit"], 10);

    let env = Command::new(env!("CARGO_BIN_EXE_spg"))
        .args(args)
        .current_dir(dir.path())
        .env("SPG_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));

    let bad_env = Command::new(env!("CARGO_BIN_EXE_spg"))
        .args(args)
        .current_dir(dir.path())
        .env("SPG_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn enumeration_commands() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), &["ex_trivial"]);
    let opt = json(&spg(&["opt", "--instance", "g/instance.json"], dir.path()));
    assert_eq!(opt["welfare"], "2/1");

    let nash = json(&spg(&["nash", "--instance", "g/instance.json"], dir.path()));
    assert_eq!(nash["count"], 2);

    let spe = json(&spg(&["spe", "--instance", "g/instance.json"], dir.path()));
    assert_eq!(spe["orders"].as_array().unwrap().len(), 2);
    let one = json(&spg(&["spe", "--instance", "g/instance.json", "--order", "2,1"], dir.path()));
    assert_eq!(one["orders"][0]["order"], serde_json::json!(["2", "1"]));

    let coll = json(&spg(&["collusion", "--instance", "g/instance.json", "--k", "2"], dir.path()));
    assert_eq!(coll["count"], 1);
    assert_eq!(coll["profiles"][0]["welfare"], "2/1");
}

#[test]
fn unknown_instance_kind_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"items":[{"id":"a","weight":"1"}],"players":[{"id":"1","kind":"matroid"}],"meta":{}}"#,
    )
    .unwrap();
    let out = spg(&["opt", "--instance", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_report_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = spg(&["report", "--suite", "other", "--out", "r"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
