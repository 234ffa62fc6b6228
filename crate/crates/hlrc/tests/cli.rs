use std::path::Path;
use std::process::{Command, Output};

use hlrc::exit;

fn hlrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlrc"))
        .args(args)
        .env_remove("HLRC_ENUM_BUDGET")
        .env_remove("HLRC_MAX_P")
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = hlrc::cli::run(
        std::iter::once("hlrc").chain(args.iter().copied()),
        &mut out,
    );
    (code, String::from_utf8(out).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn params_table_golden() {
    let (code, out) = run(&["params", "--p", "3", "--rho1", "2", "--rho2", "2"]);
    assert_eq!(code, exit::OK);
    assert_eq!(
        out,
        "construction ex4 over F_3^2\n\
         level   length  dim<=  dist>=\n\
         full    96      16     7\n\
         middle  15      4      4\n\
         lower   3       2      2\n"
    );
}

#[test]
fn params_json_golden() {
    let (code, out) = run(&[
        "params", "--family", "ex5", "--p", "3", "--rho1", "5", "--rho2", "2", "--json",
    ]);
    assert_eq!(code, exit::OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["code_ref"],
        "ex5 p=3 eta=9 rho1=5 rho2=2 rho3=0 n=51 k=18"
    );
    assert_eq!(
        (v["n1"].as_u64(), v["s1"].as_u64(), v["d1"].as_u64()),
        (Some(27), Some(10), Some(10))
    );
    assert_eq!((v["n2"].as_u64(), v["d2"].as_u64()), (Some(3), Some(2)));
}

#[test]
fn verify_text_golden() {
    let (code, out) = run(&["verify", "--p", "3"]);
    assert_eq!(code, exit::OK);
    assert_eq!(
        out,
        "ex4 p=3: 123 points enumerated, closed form {123}\n\
         PASS fiber points = p * x-support: expected all fibers, observed 9 of 9\n\
         PASS surface point total: expected {123}, observed 123\n\
         PASS x-support of Z_gamma, gamma != 0, in {p, 2p-1}: expected {3, 5}, observed 0 outside\n\
         PASS #{gamma : #Z_gamma >= 2p^2 - p}: expected 4, observed 4\n\
         finding ex4-length: observed 96; statement = 96 holds; proof = 73 fails\n\
         finding ex5-lower-dimension: observed 2; union-basis statement <= 1 fails; generic statement <= 2 holds\n"
    );
}

#[test]
fn json_to_stdout_is_pure_json() {
    for args in [
        &["points", "--p", "3", "--json", "-"][..],
        &["verify", "--family", "ex5", "--p", "5", "--json", "-"][..],
    ] {
        let (code, out) = run(args);
        assert_eq!(code, exit::OK);
        serde_json::from_str::<serde_json::Value>(&out).unwrap();
    }
}

#[test]
fn build_encode_corrupt_recover_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let f = |n: &str| dir.path().join(n);
    let (code_p, word_p, rx_p, out_p, rep_p) = (
        f("code.json"),
        f("word.json"),
        f("rx.json"),
        f("out.json"),
        f("report.json"),
    );

    let (c, out) = run(&[
        "build",
        "--p",
        "3",
        "--rho1",
        "2",
        "--rho2",
        "2",
        "--out",
        p(&code_p),
    ]);
    assert_eq!(
        (c, out.as_str()),
        (0, "ex4 p=3 eta=3 rho1=2 rho2=2 rho3=3 n=96 k=16\n")
    );
    assert_eq!(
        run(&[
            "encode",
            "--code",
            p(&code_p),
            "--seed",
            "5",
            "--out",
            p(&word_p)
        ])
        .0,
        0
    );
    let (c, out) = run(&[
        "corrupt",
        "--code",
        p(&code_p),
        "--input",
        p(&word_p),
        "--kind",
        "targeted_group",
        "--count",
        "4",
        "--seed",
        "9",
        "--out",
        p(&rx_p),
    ]);
    assert_eq!(c, 0);
    assert!(out.starts_with("erased 4 positions"), "{out}");
    let (c, _) = run(&[
        "recover",
        "--code",
        p(&code_p),
        "--input",
        p(&rx_p),
        "--out",
        p(&out_p),
        "--report",
        p(&rep_p),
    ]);
    assert_eq!(c, exit::OK);
    assert_eq!(
        std::fs::read_to_string(&word_p).unwrap(),
        std::fs::read_to_string(&out_p).unwrap()
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rep_p).unwrap()).unwrap();
    assert_eq!(report["totals"]["recovered"], 4);

    // A policy that cannot reach the needed level leaves nulls and exits 5.
    let (c, _) = run(&[
        "recover",
        "--code",
        p(&code_p),
        "--input",
        p(&rx_p),
        "--policy",
        "lower",
        "--out",
        p(&out_p),
    ]);
    assert_eq!(c, exit::RECOVERY);
    assert!(std::fs::read_to_string(&out_p).unwrap().contains("null"));
}

#[test]
fn explicit_erasures_and_stdout_output() {
    let dir = tempfile::tempdir().unwrap();
    let code_p = dir.path().join("code.json");
    let word_p = dir.path().join("word.json");
    run(&[
        "build",
        "--p",
        "3",
        "--rho1",
        "2",
        "--rho2",
        "2",
        "--out",
        p(&code_p),
    ]);
    run(&[
        "encode",
        "--code",
        p(&code_p),
        "--seed",
        "1",
        "--out",
        p(&word_p),
    ]);
    let (c, out) = run(&[
        "corrupt",
        "--code",
        p(&code_p),
        "--input",
        p(&word_p),
        "--erase",
        "0,1,95",
        "--out",
        "-",
    ]);
    assert_eq!(c, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let nulls = v["symbols"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s.is_null())
        .count();
    assert_eq!(nulls, 3);
}

#[test]
fn simulate_is_deterministic_and_appends_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"family":"ex4","p":3,"rho1":2,"rho2":2,"nodes":8,
            "scenario":{"kind":"random_nodes","count":1,"seed":1234567}}"#,
    )
    .unwrap();
    let csv = dir.path().join("sweep.csv");
    let (c1, a) = run(&[
        "simulate",
        "--config",
        p(&cfg),
        "--out",
        "-",
        "--csv",
        p(&csv),
    ]);
    let (c2, b) = run(&[
        "simulate",
        "--config",
        p(&cfg),
        "--out",
        "-",
        "--csv",
        p(&csv),
    ]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["totals"]["unrecoverable"], 0);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 3);

    std::fs::write(
        &cfg,
        r#"{"family":"ex4","p":3,"rho1":2,"rho2":2,"nodes":8,"rng":"mt19937",
        "scenario":{"kind":"random_nodes","count":1,"seed":1}}"#,
    )
    .unwrap();
    assert_eq!(run(&["simulate", "--config", p(&cfg)]).0, exit::SPEC);
}

#[test]
fn mindist_reports_bounds() {
    let (c, out) = run(&[
        "mindist", "--p", "3", "--rho1", "3", "--rho2", "3", "--middle",
    ]);
    assert_eq!(c, exit::OK);
    assert!(
        out.starts_with("d = 51 (n = 96, k = 4); bound d >= 15 holds\n"),
        "{out}"
    );
    assert!(out.contains("bound d1 >= 9 holds"), "{out}");
}

#[test]
fn exit_codes() {
    let usage = hlrc(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(exit::USAGE));
    assert_eq!(
        String::from_utf8_lossy(&usage.stderr)
            .trim_end()
            .lines()
            .count(),
        1
    );

    assert_eq!(
        hlrc(&["params", "--p", "4", "--rho1", "2", "--rho2", "2"])
            .status
            .code(),
        Some(exit::SPEC)
    );
    assert_eq!(
        hlrc(&["params", "--p", "3", "--rho1", "2", "--rho2", "9"])
            .status
            .code(),
        Some(exit::SPEC)
    );
    assert_eq!(
        hlrc(&["mindist", "--p", "3", "--rho1", "2", "--rho2", "2"])
            .status
            .code(),
        Some(exit::BUDGET)
    );
    assert_eq!(
        hlrc(&["verify", "--p", "17"]).status.code(),
        Some(exit::BUDGET)
    );
    assert_eq!(
        hlrc(&[
            "recover",
            "--code",
            "/nonexistent",
            "--input",
            "/nonexistent",
            "--out",
            "-"
        ])
        .status
        .code(),
        Some(exit::IO)
    );
    assert_eq!(hlrc(&["--help"]).status.code(), Some(exit::OK));
}

#[test]
fn environment_overrides() {
    let budget = Command::new(env!("CARGO_BIN_EXE_hlrc"))
        .args(["mindist", "--p", "3", "--rho1", "3", "--rho2", "3"])
        .env("HLRC_ENUM_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(exit::BUDGET));

    let cap = Command::new(env!("CARGO_BIN_EXE_hlrc"))
        .args(["points", "--p", "5"])
        .env("HLRC_MAX_P", "3")
        .output()
        .unwrap();
    assert_eq!(cap.status.code(), Some(exit::BUDGET));
}
