use serde_json::Value;
use std::process::Command;
use twostep::classify::CENSUS_EXPECTED;
use twostep::Rule;
use twostep_cli::survey::{load_records, run_survey, survey_record, Scope, SurveyConfig};

fn twostep(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twostep")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = twostep(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn encode_and_decode_round_trip() {
    let v = json(&["encode", "1100/0110/0011/1001"]);
    assert_eq!(v["rule"], "1100.0110.0011.1001");
    let k = v["int"].as_u64().unwrap();
    assert_eq!(k, Rule::spiral().0 as u64);
    let w = json(&["encode", &k.to_string()]);
    assert_eq!(w, v);
    assert_eq!(json(&["decode", "1100011000111001"]), v);
}

#[test]
fn input_errors_exit_3() {
    for args in [
        vec!["decode", "12"],
        vec!["classify", "--rule", "70000"],
        vec!["series", "--rule", "spiral", "--plane", "diagonal"],
        vec!["group", "--rule", "spiral", "--theta", "up"],
        vec!["no-such-command"],
        vec!["guess", "--rule", "spiral", "--terms", "30"],
        vec!["genfun", "--rule", "spiral", "--block", "H"],
        vec!["spiral-asymptotics", "--m-max", "50"],
    ] {
        let (code, _, err) = twostep(&args);
        assert_eq!(code, 3, "{args:?}");
        assert!(!err.is_empty());
    }
    assert_eq!(twostep(&["--help"]).0, 0);
}

#[test]
fn census_verify_json_and_csv() {
    let v = json(&["census", "--verify", "--shards", "4"]);
    assert_eq!(v["verified"], true);
    for (k, n) in CENSUS_EXPECTED {
        assert_eq!(v["counts"][k], n, "{k}");
    }
    let plain = json(&["census", "--orbits"]);
    assert_eq!(plain.as_object().unwrap().len(), 22);
    let (_, csv, _) = twostep(&["census", "--csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "key,count");
    assert_eq!(lines.len(), 23);
    assert!(lines.contains(&"N_G2'(Q&A),6909"));
}

#[test]
fn classify_wielandt_rule() {
    let v = json(&["classify", "--rule", "0100.0010.1001.1000"]);
    assert_eq!(v["primitivity_exponent"], 10);
    assert_eq!(v["aperiodic"], true);
}

#[test]
fn series_csv_columns() {
    let (code, csv, _) = twostep(&["series", "--rule", "spiral", "--plane", "quarter", "--length", "6", "--csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,e,n,w,s,p,px,py,po");
    assert_eq!(lines[4], "4,1,4,2,1,8,2,3,1");
    assert_eq!(lines.len(), 7);
    let v = json(&["series", "--rule", "spiral", "--plane", "full", "--length", "3", "--weights", "1", "1"]);
    assert_eq!(v["rows"][2]["p"], "16");
    assert_eq!(v["rows"][2]["mean_x"], "0");
    let (_, ep, _) = twostep(&["series", "--rule", "spiral", "--plane", "half", "--length", "2", "--by-endpoint", "--csv"]);
    assert!(ep.starts_with("m,a,b,e,n,w,s\n"));
}

#[test]
fn genfun_blocks() {
    let v = json(&["genfun", "--rule", "spiral", "--block", "D", "--series", "3"]);
    assert_eq!(v["value"], "-t^2*x/(t - y)");
    assert_eq!(v["series"], "t^2*x*y^-1 + t^3*x*y^-2 + O(t^4)");
    let h = json(&["genfun", "--rule", "spiral", "--block", "H", "--series", "3"]);
    assert!(h["series"].as_str().unwrap().starts_with("t*x"));
    let eq = json(&["genfun", "--rule", "spiral", "--block", "equation"]);
    assert!(eq["value"].as_str().unwrap().contains("Q_down"));
}

#[test]
fn asymptotics_outputs() {
    let v = json(&["asymptotics", "--rule", "spiral", "--half-plane"]);
    for k in ["mu", "rho", "delta_x", "delta_y", "tau", "kappa", "regime", "prefactor"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["regime"], "zero");
    assert_eq!(v["zero_drift_exact"], true);
    let p = json(&["asymptotics", "--rule", "0101.1000.0100.1010"]);
    assert_eq!(p["periodic"], true);
    assert!((p["mu"].as_f64().unwrap() - 1.55377).abs() < 1e-5);
}

#[test]
fn group_and_orbit_sum() {
    let g = json(&["group", "--rule", "spiral"]);
    assert_eq!(g["order"], 4);
    assert_eq!(g["phi"], "1/(y)");
    assert_eq!(g["elements"].as_array().unwrap().len(), 4);
    let inf = json(&["group", "--rule", "0011.1010.1110.1111", "--cap", "50"]);
    assert_eq!(inf["order"], "infinite(50)");
    let o = json(&["orbit-sum", "--rule", "spiral", "--order", "6"]);
    assert_eq!(o["status"], "solved");
    assert_eq!(o["series"], "t*x + t^2*x^2 + t^3*x^3 + t^4*x^4 + t^5*(x^5 + x) + t^6*(x^6 + 2*x^2 + x*y) + O(t^7)");
    let n = json(&["orbit-sum", "--rule", "spiral", "--theta", "n", "--order", "6", "--known-axis", "t*y/(1-t*y)"]);
    assert_eq!(n["status"], "solved");
    let w = json(&["orbit-sum", "--rule", "spiral", "--theta", "w", "--order", "6"]);
    assert_eq!(w["status"], "non-substitutable-elements");
}

#[test]
fn guess_command() {
    let v = json(&["guess", "--rule", "0110.1001.1111.1111", "--theta", "e", "--terms", "50", "--algebraic", "--bounds", "4", "5"]);
    assert_eq!(v["kind"], "algebraic");
    assert_eq!(v["ansatz"], serde_json::json!([4, 5]));
    assert_eq!(v["terms_heldout"], 20);
    let full = json(&["guess", "--rule", "spiral", "--plane", "full", "--terms", "40", "--bounds", "2", "3"]);
    assert_eq!(full["kind"], "dfinite");
    let m = json(&["guess", "--rule", "1110.0111.1011.1101", "--terms", "300", "--modular"]);
    assert_eq!(m["outcome"], "none-proved");
    assert_eq!(m["tried"], 104);
}

#[test]
fn spiral_asymptotics_verifies() {
    let (code, out, _) = twostep(&["spiral-asymptotics", "--m-max", "300", "--verify"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["within_tolerance"], true);
    assert_eq!(v["origin_zero_for_odd_m"], true);
}

fn schema() -> jsonschema::Validator {
    let s: Value = serde_json::from_str(include_str!("../survey-record.schema.json")).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

#[test]
fn survey_resume_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.jsonl");
    let p = path.to_str().unwrap();
    let (code, out, _) = twostep(&["survey", "--scope", "groups", "--limit", "30", "--out", p, "--threads", "2"]);
    assert_eq!(code, 0);
    let first: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(first["new"], 30);
    let full = std::fs::read_to_string(&path).unwrap();
    // Interrupted run: half the records and a torn line.
    let cut = full.len() / 2;
    std::fs::write(&path, &full[..cut]).unwrap();
    let (_, out, _) = twostep(&["survey", "--scope", "groups", "--limit", "30", "--out", p]);
    let second: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(second["records"], 30);
    assert_eq!(second["group_orders"], first["group_orders"]);
    let mut a: Vec<&str> = full.lines().collect();
    let resumed = std::fs::read_to_string(&path).unwrap();
    let mut b: Vec<&str> = resumed.lines().collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
    let (_, out, _) = twostep(&["survey", "--scope", "groups", "--limit", "30", "--out", p]);
    let third: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(third["new"], 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), resumed);
    let v = schema();
    for line in resumed.lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        assert!(v.is_valid(&rec), "{line}");
    }
    let (code, _, _) = twostep(&["survey", "--scope", "guess", "--limit", "30", "--out", p]);
    assert_eq!(code, 3);
}

#[test]
fn survey_spot_rules() {
    let cfg = SurveyConfig { ode_bounds: (8, 40), alg_bounds: (6, 40), ..SurveyConfig::default() };
    let v = schema();
    for (r, kind) in [("0001.0111.0100.1101", "dfinite"), ("0011.1010.1110.1111", "algebraic")] {
        let rec = survey_record(Rule::decode(r).unwrap(), &cfg);
        assert!(v.is_valid(&rec), "{rec}");
        assert_eq!(rec["group"]["orders"]["e"], "infinite(400)");
        assert_eq!(rec["group"]["theta_agree"], true);
        assert_eq!(rec["guess"]["kind"], kind, "{r}");
    }
}

#[test]
fn survey_records_validate_and_exact_path_agrees() {
    let rules: Vec<Rule> = twostep::classify::qp_representatives().into_iter().step_by(700).collect();
    let cfg = SurveyConfig { terms: 60, ode_bounds: (2, 6), alg_bounds: (2, 6), timings: true, ..SurveyConfig::default() };
    let exact = SurveyConfig { exact: true, timings: false, ..cfg.clone() };
    let v = schema();
    let mut sink = Vec::new();
    let s = run_survey(&rules, &cfg, None, &mut sink).unwrap();
    assert_eq!(s.records, rules.len());
    let lines: Vec<Value> = String::from_utf8(sink).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), rules.len());
    for rec in &lines {
        assert!(v.is_valid(rec), "{rec}");
        assert!(rec["timings"]["group_ms"].is_u64());
        let r = Rule(rec["int"].as_u64().unwrap() as u16);
        let e = survey_record(r, &exact);
        assert!(v.is_valid(&e), "{e}");
        assert_eq!(e["guess"]["kind"], rec["guess"]["kind"], "{r}");
    }
    let bad = SurveyConfig { scope: Scope::Guess, terms: 20, ..SurveyConfig::default() };
    assert!(run_survey(&rules, &bad, None, &mut Vec::new()).is_err());
    let dir = tempfile::tempdir().unwrap();
    assert!(load_records(&dir.path().join("missing.jsonl")).unwrap().is_empty());
}
