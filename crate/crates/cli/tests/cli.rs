use std::path::PathBuf;
use std::process::{Command, Output};

fn cohoma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohoma")).args(args).output().unwrap()
}

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn nf_prints_the_normal_form() {
    let o = cohoma(&["nf", "KQK"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "K L - K^2 Q\n");
    assert_eq!(stdout(&cohoma(&["nf", "K^2 L", "--truncate", "2"])), "0\n");
    assert_eq!(cohoma(&["nf", "KXQ"]).status.code(), Some(2));
}

#[test]
fn run_exit_codes() {
    assert_eq!(cohoma(&["run", &corpus("weil_su2.cohoma")]).status.code(), Some(0));
    assert_eq!(cohoma(&["run", &corpus("q_squared_negative.cohoma")]).status.code(), Some(1));
    assert_eq!(cohoma(&["run", "no/such/file.cohoma"]).status.code(), Some(2));
}

#[test]
fn deterministic_json_is_stable() {
    let args = ["run", "--json", "--deterministic"];
    let f = corpus("q_squared_negative.cohoma");
    let a = stdout(&cohoma(&[args[0], &f, args[1], args[2]]));
    let b = stdout(&cohoma(&[args[0], &f, args[1], args[2]]));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["reports"][0]["witnesses"][0]["generator"], "x");
    assert!(!a.contains("elapsed_ms"));
}

#[test]
fn preset_lists_generators() {
    let o = cohoma(&["preset", "weil(su2)", "--list-generators"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("theta[1]  deg (0,1)\n"));
    let o = cohoma(&["preset", "weil(su2)"]);
    assert!(stdout(&o).starts_with("6 generators\n"));
    assert_eq!(cohoma(&["preset", "nonsense"]).status.code(), Some(2));
}
