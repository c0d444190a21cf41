use std::process::{Command, Output};

fn wittcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittcheck")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn witt_law_text() {
    let o = wittcheck(&["gen-witt-law", "--p", "2", "--e", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "H1 = X1 + Y1 ; H2 = X1*Y1 + X2 + Y2\n");
}

#[test]
fn h5_passes_with_value_one() {
    let o = wittcheck(&["verify", "--suite", "h5", "--p", "2", "--e", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[PASS] h5-witness (p=2, e=2): D_1^(3)(X1*X2) = 1\noverall: PASS\n");

    let o = wittcheck(&["verify", "--suite", "h5", "--p", "2", "--e", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["verdict"], "pass");
    assert_eq!(v[0]["witness"]["value"], "1");
}

#[test]
fn counterexample_witness() {
    let o = wittcheck(&["verify", "--suite", "mw-counterexample", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["verdict"], "witness-found");
    assert_eq!(v[0]["witness"]["x"], "X1*X2");
    assert_eq!(v[0]["witness"]["delta"], "X1");
}

#[test]
fn operators_and_pbasis() {
    let o = wittcheck(&["apply", "--op", "D(1,0)^2", "--poly", "X2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "1\n"));

    let o = wittcheck(&["derive-pbasis", "--j", "(1,0)", "--n", "1", "--x", "X1^3"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "X1^2\n"));

    let o = wittcheck(&["decompose", "--n", "1", "--x", "X1^3*X2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["alpha"], serde_json::json!({ "(1,1)": "X1" }));
}

#[test]
fn exit_codes() {
    assert_eq!(wittcheck(&["gen-witt-law", "--p", "4"]).status.code(), Some(2));
    assert_eq!(wittcheck(&["apply", "--op", "D(1", "--poly", "X1"]).status.code(), Some(2));
    assert_eq!(wittcheck(&["derive-pbasis", "--j", "(2,0)", "--n", "1", "--x", "X1"]).status.code(), Some(2));
    assert_eq!(wittcheck(&["no-such-command"]).status.code(), Some(2));
    let o = wittcheck(&["verify", "--suite", "mw-counterexample", "--deg-bound", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("overall: FAIL\n"));
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let args = ["verify", "--suite", "h-schemes", "--p", "3", "--e", "2", "--deg-bound", "4", "--order-bound", "4", "--json"];
    let a = stdout(&wittcheck(&args));
    assert_eq!(a, stdout(&wittcheck(&args)));

    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wittcheck").chain(args).map(std::ffi::OsString::from);
    assert_eq!(wittcheck::cli::run(argv, &mut out, &mut err), 0);
    assert_eq!(String::from_utf8(out).unwrap(), a);
}
