use std::process::Command;

fn hydra(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hydra")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn conj_exit_codes() {
    let (code, out) = hydra(&["conj", "--rank", "2", "a2 s", "a2 a1 s"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(hydra(&["conj", "--rank", "3", "a2", "a3"]).0, 1);
    assert_eq!(hydra(&["conj", "--rank", "2", "a3", "a1"]).0, 2);
    assert_eq!(hydra(&["conj", "--rank", "2", "a2 s"]).0, 2);
    assert_eq!(hydra(&["conj", "--rank", "2", "--method", "hnn", "a2 s", "a2 a1 s"]).0, 0);
}

#[test]
fn conj_json_certificate() {
    let (_, out) = hydra(&["conj", "--rank", "2", "--json", "s", "A1 s"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["conjugate"], true);
    assert_eq!(v["verified"], true);
}

#[test]
fn twisted_zero_example() {
    let (code, out) = hydra(&["twisted", "zero", "--rank", "2", "-p", "0", "a2 a1", "a2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((v["found"].clone(), v["r"].clone()), (true.into(), (-1).into()));
}

#[test]
fn nf_and_eq() {
    let (_, out) = hydra(&["nf", "--rank", "2", "--json", "s a2"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["u_tilde"], "a2 a1^-1");
    assert_eq!(v["s_exp"], 1);
    assert_eq!(hydra(&["eq", "--rank", "2", "S a2 s", "a2 a1"]).0, 0);
    assert_eq!(hydra(&["eq", "--rank", "2", "s a2 S", "a2 a1"]).0, 1);
}

#[test]
fn growth_csv_has_zero_diff() {
    let (code, out) = hydra(&["growth", "--rank", "4", "--max-power", "6"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let diff = rdr.headers().unwrap().iter().position(|h| h == "diff").unwrap();
    assert!(rdr.records().all(|r| &r.unwrap()[diff] == "0"));
}
