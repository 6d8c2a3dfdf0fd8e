use std::process::Command;

use serde_json::Value;

fn crtool(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_crtool")).args(args).env_remove("CRTOOL_SEED").output().expect("runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

#[test]
fn sample_then_levi_from_file() {
    let dir = std::env::temp_dir().join(format!("crtool-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("point.json");
    let p = path.to_str().unwrap();
    let (code, _) = crtool(&["sample", "--kind", "III", "--m", "4", "--radius", "0.5", "--seed", "9", "--out", p]);
    assert_eq!(code, 0);
    let (code, levi) = crtool(&["levi", "--point", p]);
    assert_eq!(code, 0);
    assert_eq!(levi["signature"]["pos"], 3);
    assert_eq!(levi["signature"]["zero"], 6);
    assert_eq!(levi["signature"]["neg"], 0);
    assert_eq!(levi["stable"], true);
}

#[test]
fn nu_closed_form_and_search_agree() {
    let (_, a) = crtool(&["nu", "--kind", "I", "--m", "3", "--n", "4"]);
    let (_, b) = crtool(&["nu", "--kind", "I", "--m", "3", "--n", "4", "--search"]);
    assert_eq!(a["method"], "closed_form");
    assert_eq!(b["method"], "search");
    assert_eq!(a["nu"], 3);
    assert_eq!(b["nu"], 3);
}

#[test]
fn classify_verdicts_and_errors() {
    let (code, v) = crtool(&["classify", "--kind", "I", "--m", "3", "--n", "3", "--nplus", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "RegularityGuaranteed");
    assert!(!v["citation"].as_str().unwrap().is_empty());
    let (code, v) = crtool(&["classify", "--kind", "IV", "--m", "5", "--nplus", "4", "--transversal", "--minimal"]);
    assert_eq!((code, &v["verdict"]), (0, &Value::from("OutsideTheorem")));
    assert_eq!(v["citation"], "");
    let (_, v) = crtool(&["classify", "--kind", "IV", "--m", "5", "--nplus", "2", "--minimal"]);
    assert_eq!(v["verdict"], "DichotomyRegime");
    let (_, v) = crtool(&["classify", "--kind", "IV", "--m", "5", "--nplus", "2", "--transversal", "--minimal"]);
    assert_eq!(v["verdict"], "RegularityGuaranteed");
    let (code, _) = crtool(&["classify", "--kind", "II", "--m", "3", "--nplus", "1"]);
    assert_eq!(code, 2);
    let (code, _) = crtool(&["classify", "--kind", "V", "--m", "3", "--nplus", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_single_check_is_idempotent() {
    let (code, a) = crtool(&["verify", "--suite", "quick", "--check", "5", "--seed", "4"]);
    let (_, b) = crtool(&["verify", "--suite", "quick", "--check", "5", "--seed", "4"]);
    assert_eq!(code, 0);
    assert_eq!(a["passed"], true);
    assert_eq!(a["checks"][0]["values"], b["checks"][0]["values"]);
    let (code, _) = crtool(&["verify", "--check", "11"]);
    assert_eq!(code, 2);
    let (code, _) = crtool(&["verify", "--suite", "bogus"]);
    assert_eq!(code, 2);
    let (code, _) = crtool(&["levi", "--kind", "I"]);
    assert_eq!(code, 2);
}

#[test]
fn seed_from_environment() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_crtool"))
            .args(["sample", "--kind", "IV", "--m", "4", "--radius", "0.3"])
            .env("CRTOOL_SEED", seed)
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}
