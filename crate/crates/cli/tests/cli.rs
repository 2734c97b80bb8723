use serde_json::Value;
use xorbounds_cli::{run, Exit};

fn call(args: &[&str]) -> (Exit, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("xorbounds").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn lines(s: &str) -> Vec<Value> {
    s.lines().map(|l| serde_json::from_str(l).expect("JSON line")).collect()
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
}

fn assert_schema(records: &[Value]) {
    let v = schema();
    for r in records {
        assert!(v.is_valid(r), "record does not match schema: {r}");
    }
}

#[test]
fn parity_all_measures() {
    let (code, out, _) = call(&["measure", "--fn", "parity:3", "--all"]);
    assert_eq!(code, Exit::Ok);
    let recs = lines(&out);
    assert_schema(&recs);
    let get = |item: &str| recs.iter().find(|r| r["item"] == item).unwrap_or_else(|| panic!("{item} missing"));
    assert_eq!(get("margin")["value"], serde_json::json!({"num": "1", "den": "1"}));
    assert_eq!(get("wt")["value"]["num"], "1");
    assert_eq!(get("sign-degree")["value"]["num"], "3");
}

#[test]
fn sufficient_bound_on_mod3() {
    let (code, out, _) = call(&["measure", "--fn", "mod:3,{0};12", "--bound", "sufficient"]);
    assert_eq!(code, Exit::Ok);
    let recs = lines(&out);
    assert_schema(&recs);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["kind"], "sign-rank");
    assert_eq!(recs[0]["vacuous"], false);
    assert!(recs[0]["exact"].as_str().unwrap().contains('/'));
}

#[test]
fn oddeven_of_alternating_predicate_is_zero() {
    let (code, out, _) = call(&["measure", "--fn", "pred:+-+-+", "--measure", "oddeven"]);
    assert_eq!(code, Exit::Ok);
    let recs = lines(&out);
    assert_eq!(recs[0]["value"]["num"], "0");
}

#[test]
fn small_suites_pass() {
    for suite in ["sandwich", "bruck", "obstruction"] {
        let (code, out, _) = call(&["verify", suite, "--max-n", "2"]);
        assert_eq!(code, Exit::Ok, "{suite}");
        let recs = lines(&out);
        assert_schema(&recs);
        let last = recs.last().unwrap();
        assert_eq!(last["summary"], true);
        assert_eq!(last["pass"], true);
    }
}

#[test]
fn sandwich_at_two_bits_checks_every_function() {
    let (code, out, _) = call(&["verify", "sandwich", "--n", "2"]);
    assert_eq!(code, Exit::Ok);
    let recs = lines(&out);
    assert_eq!(recs.last().unwrap()["checks"], 16);
}

#[test]
fn quiet_keeps_only_summary_when_passing() {
    let (_, out, _) = call(&["verify", "bruck", "--quiet", "--max-n", "6"]);
    assert_eq!(lines(&out).len(), 1);
}

#[test]
fn failing_check_gives_exit_one() {
    // mod:3,{0};11 is the first arity where dropping f^(∅) loses.
    let (code, out, _) = call(&["verify", "forster", "--max-n", "11", "--samples", "0", "--quiet"]);
    assert_eq!(code, Exit::CheckFailed);
    let recs = lines(&out);
    assert!(recs.iter().any(|r| r["pass"] == false && r["inputs"]["fn"] == "mod:3,{0};11"));
}

#[test]
fn odd_modulus_sweep_rows() {
    let (code, out, _) = call(&["sweep", "oddm", "--m", "3,5,7", "--n", "10..20"]);
    assert_eq!(code, Exit::Ok);
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().take(3).collect::<Vec<_>>(), ["m", "n", "value"]);
    assert_eq!(rd.records().count(), 33);
}

#[test]
fn symmetric_sweep_rows() {
    let (code, out, _) = call(&["sweep", "symmetric", "--n", "6", "--measures", "oddeven,margin"]);
    assert_eq!(code, Exit::Ok);
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["fn", "n", "oddeven", "margin"]);
    let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 128);
    assert!(rows.iter().all(|r| !r[3].starts_with("error")));
}

#[test]
fn empty_grid_gives_header_only() {
    let (code, out, _) = call(&["sweep", "oddm", "--m", "", "--n", ""]);
    assert_eq!(code, Exit::Ok);
    assert_eq!(out.trim_end(), "m,n,value,exact,vacuous,slack,error");
}

#[test]
fn sweep_json_rows_match_schema() {
    let (code, out, _) = call(&["--format", "json", "sweep", "oddm", "--m", "3", "--n", "4..6"]);
    assert_eq!(code, Exit::Ok);
    assert_schema(&lines(&out));
}

#[test]
fn random_sweep_is_deterministic() {
    let args = ["--seed", "7", "sweep", "random", "--n", "3,4", "--count", "5", "--measures", "margin,sign-degree"];
    let (_, a, _) = call(&args);
    let (_, b, _) = call(&args);
    assert_eq!(a, b);
    let (_, c, _) = call(&["--seed", "8", "sweep", "random", "--n", "3,4", "--count", "5", "--measures", "margin,sign-degree"]);
    assert_ne!(a, c);
}

#[test]
fn sampled_suite_output_is_deterministic() {
    let args = ["--seed", "3", "verify", "sandwich", "--n", "3", "--samples", "10"];
    assert_eq!(call(&args).1, call(&args).1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["measure", "--fn", "parity:3", "--measure", "bogus"]).0, Exit::Usage);
    assert_eq!(call(&["measure", "--fn", "nonsense", "--all"]).0, Exit::Usage);
    assert_eq!(call(&["verify", "nope"]).0, Exit::Usage);
    assert_eq!(call(&["frobnicate"]).0, Exit::Usage);
    assert_eq!(call(&["--max-n", "0", "verify", "bruck"]).0, Exit::Usage);
    let (code, _, err) = call(&["sweep", "oddm", "--m", "x"]);
    assert_eq!(code, Exit::Usage);
    assert!(err.contains("bad integer"));
}

#[test]
fn capacity_errors_exit_three() {
    let (code, out, _) = call(&["--max-n", "4", "measure", "--fn", "parity:6", "--measure", "margin"]);
    assert_eq!(code, Exit::Capacity);
    let recs = lines(&out);
    assert_schema(&recs);
    assert_eq!(recs[0]["error"]["kind"], "capacity");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, Exit::Ok);
    assert!(out.contains("verify"));
}

#[test]
fn lift_records() {
    for (kind, f) in [("kp", "parity:2"), ("xor", "maj:3"), ("symm", "pred:+-+-+"), ("thr", "ltf:1,2;1/2"), ("embed", "ltf:1,2;1/2")] {
        let (code, out, _) = call(&["lift", kind, "--fn", f]);
        assert_eq!(code, Exit::Ok, "{kind}");
        let recs = lines(&out);
        assert_schema(&recs);
        assert_eq!(recs[0]["kind"], kind);
    }
    let (_, out, _) = call(&["lift", "symm", "--fn", "pred:+-+-+"]);
    assert_eq!(lines(&out)[0]["witness"]["pointwise_checked"], true);
}

#[test]
fn modbound_at_large_arity() {
    let (code, out, _) = call(&[
        "modbound", "--fn", "mod:6,{0,1};1000", "--fn", "cq:200", "--bound", "upp", "--bound", "chain", "--bound", "simple",
    ]);
    assert_eq!(code, Exit::Ok);
    let recs = lines(&out);
    assert_schema(&recs);
    assert_eq!(recs.len(), 6);
    assert_eq!(recs[0]["kind"], "upp");
    assert!(recs[0]["value"].as_f64().unwrap() > 0.0);
    assert!(recs[1]["chain"].is_object());
    assert_eq!(recs[3]["value"], 100.0);
}

#[test]
fn text_and_csv_formats() {
    let (_, out, _) = call(&["--format", "text", "verify", "bruck", "--n", "2"]);
    assert!(out.lines().next().unwrap().contains("suite=bruck"));
    let (_, out, _) = call(&["--format", "csv", "measure", "--fn", "parity:2", "--measure", "margin"]);
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    let row = rd.records().next().unwrap().unwrap();
    assert_eq!(&row[2], "1/1");
}
