use std::path::PathBuf;
use std::process::{Command, Output};

use synbind::sigspec::lambda_beta;
use synbind::term::parse_term;

fn sig_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("signatures").join(name)
}

fn syn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syn"))
        .args(args)
        .env_remove("SYN_SIG")
        .output()
        .expect("run syn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lb() -> String {
    sig_path("lambda-beta.sig.json").display().to_string()
}

#[test]
fn normalize_prints_normal_form() {
    let o = syn(&[
        "normalize",
        "--sig",
        &lb(),
        "--context",
        "y",
        "(app (abs (bind (x) x)) y)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "y\n");
}

#[test]
fn laws_report_all_pass() {
    let o = syn(&[
        "laws",
        "--sig",
        &lb(),
        "--samples",
        "500",
        "--seed",
        "7",
        "--deterministic",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"));
    assert!(out.trim_end().ends_with("0 failing"));
}

#[test]
fn discrete_model_violates_beta() {
    let o = syn(&[
        "satisfies",
        "--sig",
        &lb(),
        "--model",
        "discrete",
        "--ineq",
        "beta",
        "--samples",
        "50",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("beta: violated"));
    assert!(out.contains("lhs") && out.contains("rhs"));

    let o = syn(&[
        "satisfies",
        "--model",
        "discrete",
        "--ineq",
        "beta",
        "--samples",
        "50",
        "--seed",
        "1",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "violated");
    assert_eq!(v["inequation"], "beta");
    assert!(v["witness"]["seed"].is_u64());
}

#[test]
fn chaotic_and_syntactic_satisfy() {
    for model in ["chaotic", "syntactic", "permuted:app=1,0"] {
        let o = syn(&["satisfies", "--model", model, "--samples", "50"]);
        assert_eq!(o.status.code(), Some(0), "{model}");
        assert!(stdout(&o).starts_with("beta: holds"));
    }
}

#[test]
fn starved_syntactic_is_inconclusive_and_strict_exits_three() {
    let o = syn(&["satisfies", "--model", "syntactic", "--fuel", "0", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("beta: inconclusive"));
    let o = syn(&[
        "satisfies",
        "--model",
        "syntactic",
        "--fuel",
        "0",
        "--samples",
        "20",
        "--strict",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn omega_exhausts_fuel_with_trace() {
    let omega = "(app (abs (bind (x) (app x x))) (abs (bind (x) (app x x))))";
    let o = syn(&["normalize", "--fuel", "5", "--trace", omega]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["step"], 0);
    assert!(first["position"].is_null() && first["inequation"].is_null());
    for (i, l) in lines[1..6].iter().enumerate() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["step"], i + 1);
        assert_eq!(v["inequation"], "beta");
        assert_eq!(v["position"], serde_json::json!([]));
        assert_eq!(v["term"], omega);
    }
    assert!(lines[6].starts_with("fuel exhausted after 5 steps"));
}

#[test]
fn step_and_leq() {
    let o = syn(&["step", "--context", "y", "(app (abs (bind (x) x)) y)"]);
    assert_eq!(stdout(&o), "y\n");
    let o = syn(&["step", "--context", "y", "y"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), String::new()));

    let o = syn(&[
        "leq",
        "--context",
        "y",
        "--fuel",
        "1",
        "(app (abs (bind (x) x)) y)",
        "y",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes\n"));

    let o = syn(&["leq", "--context", "y", "--json", "y", "(app (abs (bind (x) x)) y)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["answer"], "unknown");
    assert_eq!(v["visited"], 1);
    assert_eq!(v["exhausted"], true);
    assert_eq!(o.status.code(), Some(0));
    let o = syn(&["leq", "--context", "y", "--strict", "y", "(app (abs (bind (x) x)) y)"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn subst_with_target_context() {
    let o = syn(&[
        "subst",
        "--context",
        "a,b",
        "--target",
        "c",
        "--map",
        "a=(abs (bind (z) (app z c))),b=c",
        "(app a (abs (bind (x) b)))",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(app (abs (bind (x) (app x c))) (abs (bind (x) c)))\n");
    let o = syn(&[
        "subst",
        "--context",
        "a,b",
        "--target",
        "c",
        "--map",
        "a=c",
        "(app a b)",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fold_into_permuted_model() {
    let o = syn(&[
        "fold",
        "--model",
        "permuted:app=1,0",
        "--context",
        "a,b",
        "(app a (abs (bind (x) (app x b))))",
    ]);
    assert_eq!(stdout(&o), "(app (abs (bind (x) (app b x))) a)\n");
    let o = syn(&["fold", "--model", "permuted:abs=0,1", "a"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_and_sig_env() {
    let eta = sig_path("lambda-beta-eta.sig.json");
    let o = syn(&["check", "--sig", eta.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 inequations"));
    let o = Command::new(env!("CARGO_BIN_EXE_syn"))
        .args(["check", "--json"])
        .env("SYN_SIG", &eta)
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["name"], "lambda-beta-eta");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec!["parse", "(app x"],
        vec!["parse", "z"],
        vec!["normalize", "--strategy", "sideways", "y"],
        vec!["check", "--sig", "/nonexistent.sig.json"],
        vec!["satisfies", "--model", "wobbly"],
        vec!["satisfies", "--model", "chaotic", "--ineq", "gamma"],
    ] {
        let o = syn(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn bad_signature_file_is_reported() {
    let dir = std::env::temp_dir().join(format!("syn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sig.json");
    std::fs::write(&bad, r#"{"name":"x","ops":[{"name":"app","arity":[0,0]}],"inequations":[{"name":"q","dom":[0],"pattern_side":"lhs","lhs":"subst","rhs":"(proj 0)"}]}"#).unwrap();
    let o = syn(&["check", "--sig", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_is_deterministic() {
    let args = ["laws", "--samples", "50", "--seed", "3", "--json", "--deterministic"];
    let a = syn(&args);
    let b = syn(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v.get("elapsed_ms").is_none());
    let c = syn(&["satisfies", "--model", "discrete", "--seed", "9"]);
    let d = syn(&["satisfies", "--model", "discrete", "--seed", "9"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn printed_terms_reparse() {
    let s2 = lambda_beta();
    let ctx: Vec<String> = vec!["x".into(), "y".into()];
    let src = "(app (abs (bind (y) (abs (bind (x) (app (app x y) (abs (bind (z) z))))))) (app x y))";
    for cmd in ["parse", "normalize"] {
        let o = syn(&[cmd, "--context", "x,y", src]);
        let printed = stdout(&o);
        let t = parse_term(&s2.sig, &ctx, printed.trim()).unwrap();
        let again = syn(&["parse", "--context", "x,y", printed.trim()]);
        assert_eq!(stdout(&again), printed);
        if cmd == "parse" {
            assert_eq!(t, parse_term(&s2.sig, &ctx, src).unwrap());
        }
    }
}
