use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn program(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../programs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_classified"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn typecheck_verdicts() {
    let (code, out, _) = cli(&[
        "typecheck",
        "dp",
        &program("boxfun.mml"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "ModalViolation");
    assert_eq!(
        cli(&["typecheck", "dp", &program("dp_conditional.mml")]).0,
        0
    );
    assert_eq!(cli(&["typecheck", "dcc", &program("dcc_raise.mml")]).0, 0);
    let (code, out, _) = cli(&["typecheck", "dcc", &program("dcc_lower.mml")]);
    assert_eq!(code, 1);
    assert!(out.contains("NotProtected"));
    let (code, out, _) = cli(&["typecheck", "sealing", &program("sealing_unseal.mml")]);
    assert_eq!(code, 1);
    assert!(out.contains("UnsealNotPermitted"));
    // Foreign constructs are type errors too.
    assert_eq!(cli(&["typecheck", "moggi", &program("boxfun.mml")]).0, 1);
}

#[test]
fn noninterference_files() {
    for (calc, file) in [
        ("moggi", "moggi_nonint.mml"),
        ("dp", "dp_nonint.mml"),
        ("dcc", "dcc_nonint.mml"),
        ("sealing", "sealing_nonint.mml"),
    ] {
        let (code, out, _) = cli(&["nonint", calc, &program(file), "--format", "json"]);
        assert_eq!(code, 0, "{file}: {out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    }
    let (code, out, _) = cli(&["nonint", "dcc", &program("dcc_side_condition.mml")]);
    assert_eq!(code, 1);
    assert!(out.contains("side condition"));
    // No hole header.
    let (code, _, err) = cli(&["nonint", "moggi", &program("normalize.mml")]);
    assert_eq!(code, 2);
    assert!(err.contains("no hole"));
}

#[test]
fn normalize_denote_and_hom() {
    let (code, out, _) = cli(&["normalize", &program("normalize.mml")]);
    assert_eq!((code, out.as_str()), (0, "tt\n"));
    let (code, out, _) = cli(&[
        "denote",
        "dp",
        &program("dp_conditional.mml"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["table"].as_array().unwrap().len(), 2);
    assert_eq!(v["codomain"]["carrier"].as_array().unwrap().len(), 2);
    let count = |a: &str, b: &str| {
        let (code, out, _) = cli(&["hom", &program(a), &program(b), "--format", "json"]);
        assert_eq!(code, 0);
        serde_json::from_str::<Value>(&out).unwrap()["count"]
            .as_u64()
            .unwrap()
    };
    assert_eq!(count("bool_codiscrete.json", "bool_discrete.json"), 2);
    assert_eq!(count("bool_discrete.json", "bool_discrete.json"), 4);
    assert_eq!(count("bool_discrete.json", "bool_codiscrete.json"), 4);
    let (code, _, _) = cli(&[
        "hom",
        &program("bool_discrete.json"),
        &program("bool_discrete.json"),
        "--cap",
        "3",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn bad_inputs_exit_2() {
    assert_eq!(
        cli(&["hom", &program("lh.json"), &program("bool_discrete.json")]).0,
        2
    );
    assert_eq!(cli(&["typecheck", "dp", &program("lh.json")]).0, 2);
    assert_eq!(
        cli(&["laws", "bcc", "--poset", &program("bool_discrete.json")]).0,
        2
    );
    assert_eq!(cli(&["laws", "bcc", "--seed", "-1"]).0, 2);
    assert_eq!(cli(&[]).0, 2);
}
