use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn detsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detsum"))
        .args(args)
        .env_remove("DETSUM_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

const Z6_FAMILY: &str =
    r#"{"ring":{"kind":"mod","N":6},"n":2,"matrices":[[[3,0],[0,0]],[[0,0],[0,3]],[[4,0],[0,4]]]}"#;

#[test]
fn lemma3_holds_with_exit_zero() {
    let out = detsum(&["verify-lemma3", "--m", "4", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "holds");
    assert_eq!(r["subcommand"], "verify-lemma3");
    assert_eq!(r["elapsed_ms"], Value::Null);
}

#[test]
fn hypothesis_violation_is_a_validation_error() {
    let out = detsum(&["verify-lemma2", "--m", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["status"], "error");
    assert!(String::from_utf8_lossy(&out.stderr).contains("m > n"));
}

#[test]
fn counterexample_file_defeats_search() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(Z6_FAMILY.as_bytes()).unwrap();
    let path = f.path().to_str().unwrap();
    let out = detsum(&["search-subsum", "--input", path, "--bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "none");
    assert_eq!(r["result"]["subset"], Value::Null);
    assert_eq!(r["result"]["guarantee_applies"], false);

    let inline = detsum(&["search-subsum", "--input", Z6_FAMILY, "--bound", "2"]);
    assert_eq!(report(&inline)["inputs_digest"], r["inputs_digest"]);
}

#[test]
fn search_finds_elementary_family() {
    let doc = r#"{"ring":{"kind":"rationals"},"n":2,"matrices":[[[1,0],[0,0]],[[0,0],[0,1]]]}"#;
    let r = report(&detsum(&["search-subsum", "--input", doc, "--bound", "2"]));
    assert_eq!(r["status"], "found");
    assert_eq!(r["result"]["subset"]["indices"], serde_json::json!([0, 1]));
}

#[test]
fn usage_errors_name_the_flag() {
    let out = detsum(&["verify-lemma3", "--m", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));

    let out = detsum(&["verify-lemma3", "--m", "four", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--m"));

    assert_eq!(detsum(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(detsum(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_json_reports_position() {
    let out = detsum(&[
        "alt-sum",
        "--input",
        "{\"ring\": {\"kind\": \"integers\"},\n \"n\": }",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["error"], "malformed_json");
    assert!(r["result"]["message"].as_str().unwrap().contains("line 2"));
}

#[test]
fn schema_errors_exit_one() {
    for doc in [
        r#"{"ring":{"kind":"mod","N":1},"n":1,"matrices":[]}"#,
        r#"{"ring":{"kind":"integers"},"n":2,"matrices":[[[1]]]}"#,
        r#"{"ring":{"kind":"integers"},"n":65,"matrices":[]}"#,
    ] {
        let out = detsum(&["alt-sum", "--input", doc]);
        assert_eq!(out.status.code(), Some(1), "{doc}");
    }
}

#[test]
fn missing_file_is_a_validation_error() {
    let out = detsum(&["ideal-chain", "--input", "/nonexistent/family.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let a = detsum(&["--seed", "11", "fuzz", "--trials", "20"]);
    let b = detsum(&["--seed", "11", "fuzz", "--trials", "20", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = detsum(&["--threads", "1", "verify-lemma3", "--m", "12", "--n", "1"]);
    let b = detsum(&["--threads", "4", "verify-lemma3", "--m", "12", "--n", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_detsum"));
        c.args(args).env_remove("DETSUM_SEED");
        if let Some(s) = env {
            c.env("DETSUM_SEED", s);
        }
        report(&c.output().unwrap())
    };
    let from_env = run(Some("5"), &["simplex", "--n", "2"]);
    let from_flag = run(None, &["--seed", "5", "simplex", "--n", "2"]);
    assert_eq!(from_env, from_flag);
    let flag_wins = run(Some("9"), &["--seed", "5", "simplex", "--n", "2"]);
    assert_eq!(flag_wins, from_flag);
    let other = run(None, &["--seed", "6", "simplex", "--n", "2"]);
    assert_ne!(other["inputs_digest"], from_flag["inputs_digest"]);
}

#[test]
fn every_subcommand_runs() {
    let homogeneous = r#"{"ring":{"kind":"integers"},"poly":{"vars":2,"terms":[[[2,0],1],[[1,1],-3]]},
                          "vectors":[[1,2],[3,-1],[0,5]]}"#;
    let perturb =
        r#"{"ring":{"kind":"integers"},"n":2,"matrices":[[[1,2],[3,4]],[[0,1],[1,0]]],"b":[[2,0],[0,1]]}"#;
    let simplex = r#"{"ring":{"kind":"rationals"},"n":1,"matrices":[[["1/2"]],[[0]]]}"#;
    let semilocal = r#"{"ring":{"kind":"product","components":[{"kind":"prime_field","p":5},{"kind":"prime_field","p":5}]},
                        "elements":[[1,0],[0,1],[1,1]]}"#;
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["verify-lemma2", "--m", "3", "--n", "2"], "holds"),
        (vec!["alt-sum", "--input", Z6_FAMILY], "holds"),
        (vec!["certificate", "--m", "3", "--n", "2"], "holds"),
        (vec!["perturb", "--input", perturb], "holds"),
        (vec!["homogeneous", "--input", homogeneous], "holds"),
        (vec!["simplex", "--input", simplex], "holds"),
        (vec!["simplex", "--n", "3"], "holds"),
        (
            vec![
                "local-counterexample",
                "--modulus",
                "10",
                "--m1",
                "5",
                "--m2",
                "-4",
                "--n",
                "2",
            ],
            "holds",
        ),
        (vec!["ideal-chain", "--input", Z6_FAMILY], "holds"),
        (
            vec!["semilocal-search", "--input", semilocal, "--bound", "2"],
            "found",
        ),
        (vec!["embed", "--input", semilocal], "holds"),
        (vec!["example8"], "holds"),
        (
            vec!["mine-mixed-char", "--fields", "2,3,5", "--m", "4", "--bound", "3"],
            "found",
        ),
        (
            vec!["mine-mixed-char", "--fields", "3,3,3", "--m", "4", "--bound", "3"],
            "none",
        ),
        (vec!["fuzz", "--trials", "10", "--suite", "det,local"], "holds"),
    ];
    for (args, want) in cases {
        let out = detsum(&args);
        let r = report(&out);
        assert_eq!(r["status"], want, "{args:?}: {r}");
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn semilocal_search_result_is_the_third_element() {
    let semilocal = r#"{"ring":{"kind":"product","components":[{"kind":"prime_field","p":5},{"kind":"prime_field","p":5}]},
                        "elements":[[1,0],[0,1],[1,1]]}"#;
    let r = report(&detsum(&[
        "semilocal-search",
        "--input",
        semilocal,
        "--bound",
        "2",
    ]));
    assert_eq!(r["result"]["subset"]["indices"], serde_json::json!([2]));
}

#[test]
fn example8_rejects_embedding_and_bound_three() {
    let insts = report(&detsum(&["example8"]));
    let a = insts["result"]["instances"][0].to_string();
    let out = detsum(&["embed", "--input", &a]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["error"], "mixed_component_fields");
    let r = report(&detsum(&["semilocal-search", "--input", &a, "--bound", "3"]));
    assert_eq!(r["status"], "none");
    assert_eq!(r["result"]["guarantee_applies"], false);
}

#[test]
fn text_output_and_timing() {
    let out = detsum(&["--output", "text", "--timing", "example8"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("subcommand: example8\nstatus: holds\n"));
    assert!(s.contains("elapsed_ms: "));
}

#[test]
fn local_counterexample_rejects_units() {
    let out = detsum(&[
        "local-counterexample",
        "--modulus",
        "6",
        "--m1",
        "2",
        "--m2",
        "5",
        "--n",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["error"], "invalid_parameters");
}

#[test]
fn large_integers_are_strings() {
    let doc = r#"{"ring":{"kind":"integers"},"n":1,"matrices":[[["123456789012345678901234567890"]]]}"#;
    let r = report(&detsum(&["alt-sum", "--input", doc]));
    assert_eq!(r["result"]["residual"], "-123456789012345678901234567890");
}
